#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "casino/data/dataset.hpp"
#include "casino/influence/dag.hpp"
#include "casino/influence/propagation_stats.hpp"

namespace casino::influence {

struct InfluenceParams {
  double alpha = 0.0;
  double beta = 0.0;
  double lambda_same = 1.0;   // lambda_g
  double lambda_cross = 1.0;  // lambda'_g
  Timestamp seed_horizon = kDefaultSeedHorizon;

  friend bool operator==(const InfluenceParams&, const InfluenceParams&) = default;
};

/// History mass of a pair split by whether it was earned in the event's own group.
struct EdgeMass {
  double same = 0.0;
  double cross = 0.0;
};

EdgeMass pair_mass(const PropagationStats& stats, std::string_view v, std::string_view u, std::string_view group_id);

/// w_{v,u}(e) for an event organized by `group_id`, over all training history.
double direct_credit(const PropagationStats& stats, std::string_view v, std::string_view u, std::string_view group_id,
                     double lambda_same, double lambda_cross);

inline double credit(const EdgeMass& m, double lambda_same, double lambda_cross) {
  return lambda_same * m.same + lambda_cross * m.cross;
}

/// What is observable about an event when its popularity is predicted.
struct EventSeeds {
  std::string event_id;
  std::size_t group = 0;  // position in the context dataset
  Timestamp announce_time = 0;
  std::vector<DagNode> rsvps;  // observed RSVPs, any order
};

/// All RSVPs of a dataset event; build_seed_dag keeps only the early ones.
EventSeeds event_seeds(const Dataset& d, std::size_t event);

/// The seed-restricted DAG of one event with lambda-free edge masses. Seeds
/// are the organizer (at its early RSVP, else at announce_time) plus every
/// RSVP strictly earlier than announce_time + horizon. When the event is a
/// training event its own contribution is removed from the history masses, so
/// training and held-out events see the same kind of feature.
struct SeedDag {
  RsvpDag order;
  std::vector<char> is_member;  // member of the event's group
  std::vector<std::vector<std::pair<std::size_t, EdgeMass>>> in_mass;

  WeightedDag weighted(double lambda_same, double lambda_cross) const;
  /// I(e): sum over seeds v of group_influence_score(v, G(e), e).
  double influence(double lambda_same, double lambda_cross) const;
};

SeedDag build_seed_dag(const Dataset& context, const EventSeeds& e, const PropagationStats& stats, Timestamp horizon);

double event_influence_feature(const Dataset& context, std::size_t event, const PropagationStats& stats,
                               const InfluenceParams& params);

}  // namespace casino::influence
