#include "casino/data/dataset.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>
#include <utility>

#include "casino/errors.hpp"

namespace casino {

namespace {

std::string offender_message(std::size_t total) {
  std::ostringstream os;
  os << "dataset validation failed with " << total << " offending record" << (total == 1 ? "" : "s");
  return os.str();
}

template <class Map>
std::optional<std::size_t> lookup(const Map& map, std::string_view id) {
  auto it = map.find(std::string(id));
  if (it == map.end()) return std::nullopt;
  return it->second;
}

}  // namespace

Dataset Dataset::build(std::vector<User> users, std::vector<Group> groups, std::vector<Event> events,
                       std::vector<Rsvp> rsvps) {
  Dataset d;
  d.users_ = std::move(users);
  d.groups_ = std::move(groups);
  d.events_ = std::move(events);
  d.rsvps_ = std::move(rsvps);

  std::vector<std::string> bad;
  auto complain = [&bad](std::string what) { bad.push_back(std::move(what)); };

  for (std::size_t i = 0; i < d.users_.size(); ++i) {
    const User& u = d.users_[i];
    if (!d.user_by_id_.emplace(u.id, i).second) complain("user " + u.id + ": duplicate user_id");
    if (!is_valid(u.home)) complain("user " + u.id + ": invalid home coordinates");
  }
  for (std::size_t i = 0; i < d.groups_.size(); ++i) {
    const Group& g = d.groups_[i];
    if (!d.group_by_id_.emplace(g.id, i).second) complain("group " + g.id + ": duplicate group_id");
    if (g.category.empty()) complain("group " + g.id + ": empty category");
  }
  for (std::size_t i = 0; i < d.events_.size(); ++i) {
    const Event& e = d.events_[i];
    if (!d.event_by_id_.emplace(e.id, i).second) complain("event " + e.id + ": duplicate event_id");
    if (!is_valid(e.venue)) complain("event " + e.id + ": invalid venue coordinates");
    if (e.announce_time > e.start_time) complain("event " + e.id + ": announce_time after start_time");
  }

  // Categories.
  {
    std::set<std::string> cats;
    for (const Group& g : d.groups_) cats.insert(g.category);
    d.categories_.assign(cats.begin(), cats.end());
  }
  d.group_category_.resize(d.groups_.size());
  for (std::size_t i = 0; i < d.groups_.size(); ++i) {
    auto it = std::lower_bound(d.categories_.begin(), d.categories_.end(), d.groups_[i].category);
    d.group_category_[i] = static_cast<std::size_t>(it - d.categories_.begin());
  }

  // Membership, both directions.
  d.group_members_.assign(d.groups_.size(), {});
  d.user_groups_.assign(d.users_.size(), {});
  std::set<std::pair<std::size_t, std::size_t>> from_groups;
  for (std::size_t gi = 0; gi < d.groups_.size(); ++gi) {
    const Group& g = d.groups_[gi];
    std::unordered_set<std::string> seen;
    for (const std::string& m : g.members) {
      if (!seen.insert(m).second) {
        complain("group " + g.id + ": member " + m + " listed twice");
        continue;
      }
      auto ui = lookup(d.user_by_id_, m);
      if (!ui) {
        complain("group " + g.id + ": unknown member user_id " + m);
        continue;
      }
      d.group_members_[gi].push_back(*ui);
      from_groups.emplace(*ui, gi);
    }
    if (!seen.contains(g.organizer_id)) complain("group " + g.id + ": organizer " + g.organizer_id + " is not a member");
  }
  std::set<std::pair<std::size_t, std::size_t>> from_users;
  for (std::size_t ui = 0; ui < d.users_.size(); ++ui) {
    const User& u = d.users_[ui];
    std::unordered_set<std::string> seen;
    for (const std::string& gid : u.groups) {
      if (!seen.insert(gid).second) {
        complain("user " + u.id + ": group " + gid + " listed twice");
        continue;
      }
      auto gi = lookup(d.group_by_id_, gid);
      if (!gi) {
        complain("user " + u.id + ": unknown group_id " + gid);
        continue;
      }
      d.user_groups_[ui].push_back(*gi);
      from_users.emplace(ui, *gi);
    }
  }
  for (const auto& [ui, gi] : from_groups) {
    if (!from_users.contains({ui, gi}))
      complain("user " + d.users_[ui].id + ": member of group " + d.groups_[gi].id + " but group not in user's list");
  }
  for (const auto& [ui, gi] : from_users) {
    if (!from_groups.contains({ui, gi}))
      complain("user " + d.users_[ui].id + ": lists group " + d.groups_[gi].id + " but is not among its members");
  }

  d.event_group_.assign(d.events_.size(), 0);
  d.group_events_.assign(d.groups_.size(), {});
  for (std::size_t ei = 0; ei < d.events_.size(); ++ei) {
    auto gi = lookup(d.group_by_id_, d.events_[ei].group_id);
    if (!gi) {
      complain("event " + d.events_[ei].id + ": unknown group_id " + d.events_[ei].group_id);
      continue;
    }
    d.event_group_[ei] = *gi;
    d.group_events_[*gi].push_back(ei);
  }

  d.rsvp_user_.assign(d.rsvps_.size(), 0);
  d.rsvp_event_.assign(d.rsvps_.size(), 0);
  d.event_rsvps_.assign(d.events_.size(), {});
  d.user_rsvps_.assign(d.users_.size(), {});
  std::set<std::pair<std::size_t, std::size_t>> seen_pairs;
  for (std::size_t ri = 0; ri < d.rsvps_.size(); ++ri) {
    const Rsvp& r = d.rsvps_[ri];
    auto ei = lookup(d.event_by_id_, r.event_id);
    auto ui = lookup(d.user_by_id_, r.user_id);
    if (!ei) complain("rsvp " + r.event_id + "/" + r.user_id + ": unknown event_id " + r.event_id);
    if (!ui) complain("rsvp " + r.event_id + "/" + r.user_id + ": unknown user_id " + r.user_id);
    if (!ei || !ui) continue;
    if (!seen_pairs.emplace(*ei, *ui).second) {
      complain("rsvp " + r.event_id + "/" + r.user_id + ": duplicate (event_id, user_id)");
      continue;
    }
    const Event& e = d.events_[*ei];
    if (r.rsvp_time < e.announce_time || r.rsvp_time > e.start_time)
      complain("rsvp " + r.event_id + "/" + r.user_id + ": rsvp_time outside [announce_time, start_time]");
    d.rsvp_user_[ri] = *ui;
    d.rsvp_event_[ri] = *ei;
    d.event_rsvps_[*ei].push_back(ri);
    d.user_rsvps_[*ui].push_back(ri);
  }

  if (!bad.empty()) throw ValidationError(offender_message(bad.size()), std::move(bad));

  for (auto& list : d.event_rsvps_) {
    std::sort(list.begin(), list.end(), [&d](std::size_t a, std::size_t b) {
      const Rsvp& ra = d.rsvps_[a];
      const Rsvp& rb = d.rsvps_[b];
      if (ra.rsvp_time != rb.rsvp_time) return ra.rsvp_time < rb.rsvp_time;
      return ra.user_id < rb.user_id;
    });
  }
  for (auto& list : d.user_rsvps_) {
    std::sort(list.begin(), list.end(), [&d](std::size_t a, std::size_t b) {
      const Rsvp& ra = d.rsvps_[a];
      const Rsvp& rb = d.rsvps_[b];
      if (ra.rsvp_time != rb.rsvp_time) return ra.rsvp_time < rb.rsvp_time;
      return ra.event_id < rb.event_id;
    });
  }
  for (auto& list : d.group_events_) {
    std::sort(list.begin(), list.end(), [&d](std::size_t a, std::size_t b) {
      const Event& ea = d.events_[a];
      const Event& eb = d.events_[b];
      if (ea.start_time != eb.start_time) return ea.start_time < eb.start_time;
      return ea.id < eb.id;
    });
  }

  if (!d.events_.empty()) {
    d.window_.start = d.events_.front().announce_time;
    d.window_.end = d.events_.front().start_time;
    for (const Event& e : d.events_) {
      d.window_.start = std::min(d.window_.start, e.announce_time);
      d.window_.end = std::max(d.window_.end, e.start_time);
    }
  }
  return d;
}

std::optional<std::size_t> Dataset::user_index(std::string_view id) const { return lookup(user_by_id_, id); }
std::optional<std::size_t> Dataset::group_index(std::string_view id) const { return lookup(group_by_id_, id); }
std::optional<std::size_t> Dataset::event_index(std::string_view id) const { return lookup(event_by_id_, id); }

std::optional<std::size_t> Dataset::category_index(std::string_view category) const {
  auto it = std::lower_bound(categories_.begin(), categories_.end(), category);
  if (it == categories_.end() || *it != category) return std::nullopt;
  return static_cast<std::size_t>(it - categories_.begin());
}

const User* Dataset::find_user(std::string_view id) const {
  auto i = user_index(id);
  return i ? &users_[*i] : nullptr;
}
const Group* Dataset::find_group(std::string_view id) const {
  auto i = group_index(id);
  return i ? &groups_[*i] : nullptr;
}
const Event* Dataset::find_event(std::string_view id) const {
  auto i = event_index(id);
  return i ? &events_[*i] : nullptr;
}

bool Dataset::is_member(std::size_t user, std::size_t group) const {
  const auto& gs = user_groups_[user];
  return std::find(gs.begin(), gs.end(), group) != gs.end();
}

DatasetCounts counts(const Dataset& d) {
  return {d.groups().size(), d.users().size(), d.events().size(), d.rsvps().size()};
}

}  // namespace casino
