#include "casino/influence/propagation.hpp"

#include <algorithm>

namespace casino::influence {

EdgeMass pair_mass(const PropagationStats& stats, std::string_view v, std::string_view u, std::string_view group_id) {
  EdgeMass m;
  const PairHistory* h = stats.pair(v, u);
  if (!h) return m;
  auto it = h->group_mass.find(std::string(group_id));
  m.same = it == h->group_mass.end() ? 0.0 : it->second;
  m.cross = 0.0;
  for (const auto& [g, mass] : h->group_mass)
    if (g != group_id) m.cross += mass;
  return m;
}

double direct_credit(const PropagationStats& stats, std::string_view v, std::string_view u, std::string_view group_id,
                     double lambda_same, double lambda_cross) {
  return credit(pair_mass(stats, v, u, group_id), lambda_same, lambda_cross);
}

EventSeeds event_seeds(const Dataset& d, std::size_t event) {
  EventSeeds s;
  const Event& e = d.events()[event];
  s.event_id = e.id;
  s.group = d.group_of_event(event);
  s.announce_time = e.announce_time;
  for (std::size_t ri : d.event_rsvps(event)) s.rsvps.push_back({d.rsvps()[ri].user_id, d.rsvps()[ri].rsvp_time, true});
  return s;
}

SeedDag build_seed_dag(const Dataset& context, const EventSeeds& e, const PropagationStats& stats, Timestamp horizon) {
  const Group& group = context.groups()[e.group];
  std::vector<DagNode> entries;
  const Timestamp cutoff = e.announce_time + horizon;
  bool organizer_seen = false;
  for (const DagNode& r : e.rsvps) {
    if (r.time >= cutoff) continue;
    organizer_seen = organizer_seen || r.user_id == group.organizer_id;
    entries.push_back(r);
  }
  if (!organizer_seen) entries.push_back({group.organizer_id, e.announce_time, false});

  SeedDag dag;
  dag.order = build_rsvp_dag(std::move(entries));
  const std::size_t n = dag.order.size();
  dag.is_member.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    auto ui = context.user_index(dag.order.nodes[i].user_id);
    dag.is_member[i] = ui && context.is_member(*ui, e.group) ? 1 : 0;
  }

  const bool leave_one_out = stats.is_training_event(e.event_id);
  dag.in_mass.assign(n, {});
  std::size_t observed_before = 0;  // RSVPs (not placeholder nodes) ahead of node j
  for (std::size_t j = 0; j < n; ++j) {
    const DagNode& u = dag.order.nodes[j];
    for (std::size_t i = 0; i < j; ++i) {
      const DagNode& v = dag.order.nodes[i];
      EdgeMass m = pair_mass(stats, v.user_id, u.user_id, group.id);
      if (leave_one_out && v.has_rsvp && u.has_rsvp && observed_before > 0 && stats.pair(v.user_id, u.user_id)) {
        const double own = stats.infl(u.user_id) / static_cast<double>(observed_before) *
                           propagation_decay(static_cast<double>(u.time - v.time), stats.tau(v.user_id, u.user_id));
        m.same = std::max(0.0, m.same - own);
      }
      if (m.same > 0.0 || m.cross > 0.0) dag.in_mass[j].emplace_back(i, m);
    }
    if (u.has_rsvp) ++observed_before;
  }
  return dag;
}

WeightedDag SeedDag::weighted(double lambda_same, double lambda_cross) const {
  WeightedDag w;
  w.in_edges.resize(in_mass.size());
  for (std::size_t u = 0; u < in_mass.size(); ++u)
    for (const auto& [z, m] : in_mass[u]) w.in_edges[u].emplace_back(z, credit(m, lambda_same, lambda_cross));
  return w;
}

double SeedDag::influence(double lambda_same, double lambda_cross) const {
  const WeightedDag w = weighted(lambda_same, lambda_cross);
  double total = 0.0;
  for (std::size_t v = 0; v < w.size(); ++v) total += group_influence_score(w, v, is_member);
  return total;
}

double event_influence_feature(const Dataset& context, std::size_t event, const PropagationStats& stats,
                               const InfluenceParams& params) {
  const SeedDag dag = build_seed_dag(context, event_seeds(context, event), stats, params.seed_horizon);
  return dag.influence(params.lambda_same, params.lambda_cross);
}

}  // namespace casino::influence
