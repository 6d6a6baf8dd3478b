#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "casino/data/geo.hpp"

namespace casino {

using Timestamp = std::int64_t;  // UTC seconds

inline constexpr Timestamp kSecondsPerDay = 86400;
inline constexpr Timestamp kSecondsPerHour = 3600;

struct User {
  std::string id;
  GeoPoint home;
  std::vector<std::string> groups;

  friend bool operator==(const User&, const User&) = default;
};

struct Group {
  std::string id;
  std::string category;
  std::string organizer_id;
  std::vector<std::string> members;

  friend bool operator==(const Group&, const Group&) = default;
};

struct Event {
  std::string id;
  std::string group_id;
  GeoPoint venue;
  Timestamp start_time = 0;
  Timestamp announce_time = 0;
  std::string title;
  std::string description;

  friend bool operator==(const Event&, const Event&) = default;
};

struct Rsvp {
  std::string event_id;
  std::string user_id;
  Timestamp rsvp_time = 0;

  friend bool operator==(const Rsvp&, const Rsvp&) = default;
};

struct TimeWindow {
  Timestamp start = 0;
  Timestamp end = 0;

  friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

/// An immutable, validated, cross-linked EBSN snapshot for one city.
///
/// Entities are stored in the order they were supplied. Secondary indices are
/// positions into those vectors. RSVP lists per event are kept in RSVP order
/// (time, then user id), which is the total order used by the influence DAG.
class Dataset {
 public:
  Dataset() = default;

  /// Validates every invariant and builds the cross-links. Throws
  /// ValidationError listing every offending record.
  static Dataset build(std::vector<User> users, std::vector<Group> groups,
                       std::vector<Event> events, std::vector<Rsvp> rsvps);

  std::span<const User> users() const noexcept { return users_; }
  std::span<const Group> groups() const noexcept { return groups_; }
  std::span<const Event> events() const noexcept { return events_; }
  std::span<const Rsvp> rsvps() const noexcept { return rsvps_; }

  /// Distinct group categories, sorted.
  std::span<const std::string> categories() const noexcept { return categories_; }
  TimeWindow time_window() const noexcept { return window_; }

  std::optional<std::size_t> user_index(std::string_view id) const;
  std::optional<std::size_t> group_index(std::string_view id) const;
  std::optional<std::size_t> event_index(std::string_view id) const;
  std::optional<std::size_t> category_index(std::string_view category) const;

  const User* find_user(std::string_view id) const;
  const Group* find_group(std::string_view id) const;
  const Event* find_event(std::string_view id) const;

  /// Group position of an event.
  std::size_t group_of_event(std::size_t event) const { return event_group_[event]; }
  /// Category position (into categories()) of an event's group.
  std::size_t category_of_event(std::size_t event) const { return group_category_[event_group_[event]]; }
  std::size_t category_of_group(std::size_t group) const { return group_category_[group]; }

  /// RSVP positions of an event, ordered by (rsvp_time, user_id).
  std::span<const std::size_t> event_rsvps(std::size_t event) const { return event_rsvps_[event]; }
  /// RSVP positions of a user, ordered by (rsvp_time, event_id).
  std::span<const std::size_t> user_rsvps(std::size_t user) const { return user_rsvps_[user]; }
  /// Event positions of a group, ordered by (start_time, event_id).
  std::span<const std::size_t> group_events(std::size_t group) const { return group_events_[group]; }
  /// Member user positions of a group, in the group's listed order.
  std::span<const std::size_t> group_members(std::size_t group) const { return group_members_[group]; }
  /// Group positions a user belongs to, in the user's listed order.
  std::span<const std::size_t> user_groups(std::size_t user) const { return user_groups_[user]; }
  /// User and event positions of an RSVP.
  std::size_t rsvp_user(std::size_t rsvp) const { return rsvp_user_[rsvp]; }
  std::size_t rsvp_event(std::size_t rsvp) const { return rsvp_event_[rsvp]; }

  /// N_e: number of RSVPs of the event.
  std::size_t attendee_count(std::size_t event) const { return event_rsvps_[event].size(); }

  bool is_member(std::size_t user, std::size_t group) const;

  friend bool operator==(const Dataset& a, const Dataset& b) {
    return a.users_ == b.users_ && a.groups_ == b.groups_ && a.events_ == b.events_ &&
           a.rsvps_ == b.rsvps_;
  }

 private:
  std::vector<User> users_;
  std::vector<Group> groups_;
  std::vector<Event> events_;
  std::vector<Rsvp> rsvps_;
  std::vector<std::string> categories_;
  TimeWindow window_;

  std::unordered_map<std::string, std::size_t> user_by_id_;
  std::unordered_map<std::string, std::size_t> group_by_id_;
  std::unordered_map<std::string, std::size_t> event_by_id_;

  std::vector<std::size_t> event_group_;
  std::vector<std::size_t> group_category_;
  std::vector<std::size_t> rsvp_user_;
  std::vector<std::size_t> rsvp_event_;
  std::vector<std::vector<std::size_t>> event_rsvps_;
  std::vector<std::vector<std::size_t>> user_rsvps_;
  std::vector<std::vector<std::size_t>> group_events_;
  std::vector<std::vector<std::size_t>> group_members_;
  std::vector<std::vector<std::size_t>> user_groups_;
};

/// Summary counts in the column layout of the usual city statistics table.
struct DatasetCounts {
  std::size_t groups = 0;
  std::size_t users = 0;
  std::size_t events = 0;
  std::size_t rsvps = 0;

  friend bool operator==(const DatasetCounts&, const DatasetCounts&) = default;
};

DatasetCounts counts(const Dataset& d);

}  // namespace casino
