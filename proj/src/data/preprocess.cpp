#include "casino/data/preprocess.hpp"

#include <cmath>
#include <unordered_set>

#include "casino/errors.hpp"

namespace casino {

Dataset subset_events(const Dataset& d, const std::vector<bool>& keep_event, const std::vector<bool>& keep_group) {
  std::unordered_set<std::string> groups_kept;
  std::vector<Group> groups;
  for (std::size_t gi = 0; gi < d.groups().size(); ++gi) {
    if (!keep_group[gi]) continue;
    groups.push_back(d.groups()[gi]);
    groups_kept.insert(d.groups()[gi].id);
  }
  std::vector<User> users;
  users.reserve(d.users().size());
  for (const User& u : d.users()) {
    User copy = u;
    std::erase_if(copy.groups, [&](const std::string& g) { return !groups_kept.contains(g); });
    users.push_back(std::move(copy));
  }
  std::vector<Event> events;
  std::unordered_set<std::string> events_kept;
  for (std::size_t ei = 0; ei < d.events().size(); ++ei) {
    if (!keep_event[ei] || !keep_group[d.group_of_event(ei)]) continue;
    events.push_back(d.events()[ei]);
    events_kept.insert(d.events()[ei].id);
  }
  std::vector<Rsvp> rsvps;
  for (const Rsvp& r : d.rsvps())
    if (events_kept.contains(r.event_id)) rsvps.push_back(r);
  return Dataset::build(std::move(users), std::move(groups), std::move(events), std::move(rsvps));
}

Dataset filter_inactive_groups(const Dataset& d, std::size_t min_events) {
  if (min_events < 1) throw ConfigError("min_events must be at least 1");
  std::vector<bool> keep_group(d.groups().size());
  for (std::size_t gi = 0; gi < keep_group.size(); ++gi) keep_group[gi] = d.group_events(gi).size() >= min_events;
  return subset_events(d, std::vector<bool>(d.events().size(), true), keep_group);
}

void SplitSpec::validate() const {
  if (train_frac < 0 || val_frac < 0 || test_frac < 0) throw ConfigError("split fractions must be nonnegative");
  if (std::abs(train_frac + val_frac + test_frac - 1.0) > 1e-9) throw ConfigError("split fractions must sum to 1");
}

SplitSizes split_sizes(std::size_t n, const SplitSpec& spec) {
  if (n < 3) return {n, 0, 0};
  // The epsilon guards products such as 0.8 * n landing just below an integer.
  auto part = [n](double frac) { return static_cast<std::size_t>(std::floor(frac * static_cast<double>(n) + 1e-9)); };
  SplitSizes s;
  s.train = std::min(part(spec.train_frac), n);
  s.val = std::min(part(spec.val_frac), n - s.train);
  s.test = n - s.train - s.val;
  return s;
}

std::string_view to_string(SplitName s) {
  switch (s) {
    case SplitName::kTrain: return "train";
    case SplitName::kVal: return "val";
    case SplitName::kTest: return "test";
  }
  return "test";
}

SplitName parse_split_name(std::string_view s) {
  if (s == "train") return SplitName::kTrain;
  if (s == "val" || s == "validation") return SplitName::kVal;
  if (s == "test") return SplitName::kTest;
  throw ConfigError("unknown split: " + std::string(s));
}

DatasetSplit split_per_group(const Dataset& d, const SplitSpec& spec) {
  spec.validate();
  const std::size_t n_events = d.events().size();
  std::vector<bool> in_train(n_events), in_val(n_events), in_test(n_events);
  for (std::size_t gi = 0; gi < d.groups().size(); ++gi) {
    auto events = d.group_events(gi);
    SplitSizes s = split_sizes(events.size(), spec);
    for (std::size_t k = 0; k < events.size(); ++k) {
      if (k < s.train) in_train[events[k]] = true;
      else if (k < s.train + s.val) in_val[events[k]] = true;
      else in_test[events[k]] = true;
    }
  }
  std::vector<bool> all_groups(d.groups().size(), true);
  return {subset_events(d, in_train, all_groups), subset_events(d, in_val, all_groups),
          subset_events(d, in_test, all_groups)};
}

const Dataset& pick(const DatasetSplit& s, SplitName name) {
  switch (name) {
    case SplitName::kTrain: return s.train;
    case SplitName::kVal: return s.val;
    case SplitName::kTest: return s.test;
  }
  return s.test;
}

double CategoryStats::average(std::string_view category) const {
  auto it = averages_.find(std::string(category));
  if (it == averages_.end()) throw Error("no training events for category " + std::string(category));
  return it->second;
}

CategoryStats category_averages(const Dataset& train) {
  std::map<std::string, std::pair<double, std::size_t>> sums;
  for (std::size_t ei = 0; ei < train.events().size(); ++ei) {
    auto& [sum, count] = sums[train.categories()[train.category_of_event(ei)]];
    sum += static_cast<double>(train.attendee_count(ei));
    ++count;
  }
  std::map<std::string, double> averages;
  for (const auto& [cat, sc] : sums) {
    double avg = sc.first / static_cast<double>(sc.second);
    if (avg > 0.0) averages.emplace(cat, avg);
  }
  return CategoryStats(std::move(averages));
}

double relative_popularity(std::size_t attendee_count, std::string_view category, const CategoryStats& stats) {
  return static_cast<double>(attendee_count) / stats.average(category);
}

double relative_popularity(const Dataset& d, std::size_t event, const CategoryStats& stats) {
  return relative_popularity(d.attendee_count(event), d.categories()[d.category_of_event(event)], stats);
}

}  // namespace casino
