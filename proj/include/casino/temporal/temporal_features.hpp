#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "casino/data/dataset.hpp"

namespace casino::temporal {

inline constexpr std::size_t kHoursPerWeek = 168;
inline constexpr double kDefaultDecayRate = 0.01;

/// Hour-of-week weights; index = day_of_week * 24 + hour with Monday = 0.
using TimeVector = std::array<double, kHoursPerWeek>;

/// Local hour-of-week slot of a UTC timestamp under a fixed UTC offset.
std::size_t hour_of_week(Timestamp utc, Timestamp utc_offset_seconds);

/// One-hot vector at the event's local hour-of-week.
TimeVector event_time_vector(Timestamp start_time, Timestamp utc_offset_seconds);

struct DecayConfig {
  double eta = kDefaultDecayRate;
  Timestamp reference_time = 0;  // end of the training window
};

/// Whole days from `start` to `reference`, never negative.
long days_before(Timestamp start, Timestamp reference);

/// 1 / (1 + eta)^days.
double decay_weight(double eta, long days);

/// (1/|E_u|) * sum over the user's training events of decay * one-hot.
/// All zeros when the user attended nothing (cold start).
TimeVector user_time_profile(const Dataset& train, std::string_view user_id, const DecayConfig& cfg,
                             Timestamp utc_offset_seconds);

/// sum min(a_i, b_i) / sum max(a_i, b_i); 0 when both vectors are all zero.
double weighted_jaccard(std::span<const double> a, std::span<const double> b);

/// Sum of weighted_jaccard(event_vector, profile) over the given profiles.
double temporal_satisfaction(const TimeVector& event_vector, std::span<const TimeVector* const> member_profiles);

/// Profiles for every user of `train` plus each group's active members, built
/// once per trained model.
class TemporalModel {
 public:
  TemporalModel() = default;
  TemporalModel(const Dataset& train, const DecayConfig& cfg, Timestamp utc_offset_seconds);

  const DecayConfig& decay() const noexcept { return cfg_; }
  Timestamp utc_offset() const noexcept { return offset_; }
  const TimeVector& profile(std::size_t user) const { return profiles_[user]; }
  bool cold_start(std::size_t user) const { return cold_[user] != 0; }

  /// Satisfaction of an event of `group` (position in the training dataset)
  /// starting at `start_time`. 0 when the group has no active members.
  double satisfaction(std::size_t group, Timestamp start_time) const;
  std::size_t active_count(std::size_t group) const { return active_[group].size(); }

 private:
  DecayConfig cfg_;
  Timestamp offset_ = 0;
  std::vector<TimeVector> profiles_;
  std::vector<char> cold_;
  std::vector<std::vector<std::size_t>> active_;
};

}  // namespace casino::temporal
