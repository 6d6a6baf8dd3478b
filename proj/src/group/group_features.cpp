#include "casino/group/group_features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

#include "casino/errors.hpp"

namespace casino::group {

namespace {

std::size_t require_group(const Dataset& train, std::string_view group_id) {
  auto gi = train.group_index(group_id);
  if (!gi) throw Error("unknown group " + std::string(group_id));
  return *gi;
}

std::size_t total_attendance(const Dataset& train, std::size_t gi) {
  std::size_t total = 0;
  for (std::size_t ei : train.group_events(gi)) total += train.attendee_count(ei);
  return total;
}

double loyalty_of(const Dataset& train, std::size_t ui, std::size_t category) {
  auto rsvps = train.user_rsvps(ui);
  if (rsvps.empty()) throw Error("user " + train.users()[ui].id + " has no attended training events");
  std::size_t same = 0;
  for (std::size_t ri : rsvps) same += train.category_of_event(train.rsvp_event(ri)) == category;
  return static_cast<double>(same) / static_cast<double>(rsvps.size());
}

}  // namespace

AttendanceDistribution attendance_distribution(const Dataset& train, std::string_view group_id) {
  const std::size_t gi = require_group(train, group_id);
  const std::size_t total = total_attendance(train, gi);
  if (total == 0) throw Error("empty attendance for group " + std::string(group_id));
  std::vector<std::size_t> order;
  std::map<std::size_t, std::size_t> attended;
  for (std::size_t ei : train.group_events(gi)) {
    for (std::size_t ri : train.event_rsvps(ei)) {
      const std::size_t ui = train.rsvp_user(ri);
      if (attended[ui]++ == 0) order.push_back(ui);
    }
  }
  AttendanceDistribution d;
  for (std::size_t ui : order)
    d.probabilities.emplace_back(train.users()[ui].id,
                                 static_cast<double>(attended[ui]) / static_cast<double>(total));
  return d;
}

double group_entropy(const AttendanceDistribution& d) {
  double h = 0.0;
  for (const auto& [user, p] : d.probabilities)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

double literal_group_entropy(const Dataset& train, std::string_view group_id) {
  const std::size_t gi = require_group(train, group_id);
  const std::size_t total = total_attendance(train, gi);
  if (total == 0) throw Error("empty attendance for group " + std::string(group_id));
  std::unordered_set<std::size_t> distinct;
  for (std::size_t ei : train.group_events(gi))
    for (std::size_t ri : train.event_rsvps(ei)) distinct.insert(train.rsvp_user(ri));
  const double p = static_cast<double>(distinct.size()) / static_cast<double>(total);
  const double members = static_cast<double>(train.group_members(gi).size());
  return p > 0.0 ? -members * p * std::log(p) : 0.0;
}

double user_loyalty(const Dataset& train, std::string_view user_id, std::string_view group_id) {
  const std::size_t gi = require_group(train, group_id);
  auto ui = train.user_index(user_id);
  if (!ui) throw Error("unknown user " + std::string(user_id));
  return loyalty_of(train, *ui, train.category_of_group(gi));
}

std::vector<std::size_t> active_members(const Dataset& train, std::size_t group) {
  std::vector<std::size_t> users;
  for (std::size_t ei : train.group_events(group))
    for (std::size_t ri : train.event_rsvps(ei)) users.push_back(train.rsvp_user(ri));
  std::sort(users.begin(), users.end());
  users.erase(std::unique(users.begin(), users.end()), users.end());
  return users;
}

double group_loyalty(const Dataset& train, std::string_view group_id) {
  const std::size_t gi = require_group(train, group_id);
  auto active = active_members(train, gi);
  if (active.empty()) throw Error("group " + std::string(group_id) + " has no active members");
  const std::size_t cat = train.category_of_group(gi);
  double sum = 0.0;
  for (std::size_t ui : active) sum += loyalty_of(train, ui, cat);
  return sum / static_cast<double>(active.size());
}

std::vector<GroupFeatures> compute_group_features(const Dataset& train, EntropyMode mode) {
  std::vector<GroupFeatures> out(train.groups().size());
  for (std::size_t gi = 0; gi < out.size(); ++gi) {
    const std::string& id = train.groups()[gi].id;
    if (total_attendance(train, gi) == 0) {
      out[gi].cold_start = true;
      continue;
    }
    out[gi].entropy =
        mode == EntropyMode::kLiteralScalar ? literal_group_entropy(train, id) : group_entropy(attendance_distribution(train, id));
    out[gi].loyalty = group_loyalty(train, id);
  }
  return out;
}

}  // namespace casino::group
