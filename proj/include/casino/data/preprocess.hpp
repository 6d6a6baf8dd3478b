#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "casino/data/dataset.hpp"

namespace casino {

inline constexpr std::size_t kDefaultMinGroupEvents = 15;

/// Keeps only the listed events (by position) and the groups that own at least
/// one of them, plus RSVPs of kept events. Users are always kept; their group
/// lists and each group's member list are pruned to kept groups.
Dataset subset_events(const Dataset& d, const std::vector<bool>& keep_event, const std::vector<bool>& keep_group);

/// Removes groups with fewer than `min_events` events, with their events and RSVPs.
Dataset filter_inactive_groups(const Dataset& d, std::size_t min_events = kDefaultMinGroupEvents);

struct SplitSpec {
  double train_frac = 0.8;
  double val_frac = 0.1;
  double test_frac = 0.1;

  /// Throws ConfigError unless the fractions are nonnegative and sum to 1.
  void validate() const;
};

/// Event counts assigned to (train, val, test) for a group of `n` events.
struct SplitSizes {
  std::size_t train = 0;
  std::size_t val = 0;
  std::size_t test = 0;

  friend bool operator==(const SplitSizes&, const SplitSizes&) = default;
};

/// Floor-based sizes with the remainder going to test; groups with fewer than
/// three events go wholly to train.
SplitSizes split_sizes(std::size_t n, const SplitSpec& spec);

struct DatasetSplit {
  Dataset train;
  Dataset val;
  Dataset test;
};

enum class SplitName { kTrain, kVal, kTest };

std::string_view to_string(SplitName s);
SplitName parse_split_name(std::string_view s);

/// Per-group chronological split (events ordered by start_time, then event_id).
DatasetSplit split_per_group(const Dataset& d, const SplitSpec& spec);

const Dataset& pick(const DatasetSplit& s, SplitName name);

/// avg_c over the training split, keyed by category.
class CategoryStats {
 public:
  CategoryStats() = default;
  explicit CategoryStats(std::map<std::string, double> averages) : averages_(std::move(averages)) {}

  bool contains(std::string_view category) const { return averages_.contains(std::string(category)); }
  /// Throws Error for a category without training events.
  double average(std::string_view category) const;
  const std::map<std::string, double>& averages() const noexcept { return averages_; }

 private:
  std::map<std::string, double> averages_;
};

/// Mean attendee count per category over the given (training) events.
/// Categories without events, or with zero mean attendance, are excluded.
CategoryStats category_averages(const Dataset& train);

/// P_e = N_e / avg_c.
double relative_popularity(std::size_t attendee_count, std::string_view category, const CategoryStats& stats);
double relative_popularity(const Dataset& d, std::size_t event, const CategoryStats& stats);

}  // namespace casino
