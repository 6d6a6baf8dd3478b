#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include "casino/data/dataset.hpp"
#include "json.hpp"

namespace casino::influence {

inline constexpr double kDefaultTauSeconds = 604800.0;  // 7 days, pairs without co-history
inline constexpr Timestamp kDefaultSeedHorizon = kSecondsPerDay;

/// History of one ordered pair (v, u) over the training events in which v
/// RSVPed before u.
struct PairHistory {
  double tau = kDefaultTauSeconds;
  std::size_t co_events = 0;
  /// Per organizing group: sum of infl(u) / |N(u, e')| * exp(-dt / tau).
  std::map<std::string, double> group_mass;
  double total_mass = 0.0;
};

struct StatsConfig {
  Timestamp seed_horizon = kDefaultSeedHorizon;
  /// Keep pair histories only among users who were ever a seed in training
  /// (organizers, or RSVPed within the seed horizon of an announcement).
  bool restrict_to_seed_population = true;
};

/// tau and infl estimated on a training split, plus the per-group credit
/// masses that make direct credits a linear function of (lambda_g, lambda'_g).
class PropagationStats {
 public:
  PropagationStats() = default;

  /// infl(u); 0 for users without training RSVPs.
  double infl(std::string_view user) const;
  /// tau_{v,u}; kDefaultTauSeconds without co-history.
  double tau(std::string_view v, std::string_view u) const;
  const PairHistory* pair(std::string_view v, std::string_view u) const;
  bool is_training_event(std::string_view event_id) const { return train_events_.contains(std::string(event_id)); }

  const std::map<std::string, double>& infl_values() const noexcept { return infl_; }
  const std::map<std::pair<std::string, std::string>, PairHistory>& pairs() const noexcept { return pairs_; }
  const StatsConfig& config() const noexcept { return cfg_; }

  nlohmann::json to_json() const;
  static PropagationStats from_json(const nlohmann::json& j);

  friend PropagationStats estimate_propagation_stats(const Dataset& train, const StatsConfig& cfg);

 private:
  StatsConfig cfg_;
  std::map<std::string, double> infl_;
  std::map<std::pair<std::string, std::string>, PairHistory> pairs_;
  std::set<std::string> train_events_;
};

PropagationStats estimate_propagation_stats(const Dataset& train, const StatsConfig& cfg = {});

/// exp(-dt / tau).
double propagation_decay(double dt_seconds, double tau_seconds);

}  // namespace casino::influence
