#include "casino/influence/dag.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace casino::influence {

RsvpDag build_rsvp_dag(std::vector<DagNode> entries) {
  std::sort(entries.begin(), entries.end(), [](const DagNode& a, const DagNode& b) {
    if (a.time != b.time) return a.time < b.time;
    if (a.user_id != b.user_id) return a.user_id < b.user_id;
    return a.has_rsvp && !b.has_rsvp;
  });
  RsvpDag dag;
  std::unordered_set<std::string> seen;
  for (DagNode& n : entries)
    if (seen.insert(n.user_id).second) dag.nodes.push_back(std::move(n));
  return dag;
}

RsvpDag build_rsvp_dag(const Dataset& d, std::size_t event) {
  std::vector<DagNode> entries;
  for (std::size_t ri : d.event_rsvps(event)) entries.push_back({d.rsvps()[ri].user_id, d.rsvps()[ri].rsvp_time, true});
  return build_rsvp_dag(std::move(entries));
}

std::vector<double> propagate_from(const WeightedDag& dag, std::size_t v) {
  if (v >= dag.size()) throw std::out_of_range("propagate_from: source node out of range");
  std::vector<double> omega(dag.size(), 0.0);
  omega[v] = 1.0;
  for (std::size_t u = v + 1; u < dag.size(); ++u) {
    double sum = 0.0;
    for (const auto& [z, w] : dag.in_edges[u]) sum += omega[z] * w;
    omega[u] = sum;
  }
  return omega;
}

double total_influence(const WeightedDag& dag, std::size_t v, std::size_t u) {
  if (u == v) return 1.0;
  if (u < v) return 0.0;
  return propagate_from(dag, v)[u];
}

double group_influence_score(const WeightedDag& dag, std::size_t v, const std::vector<char>& is_member) {
  const auto omega = propagate_from(dag, v);
  double s = 0.0;
  for (std::size_t u = v + 1; u < dag.size(); ++u)
    if (is_member[u]) s += omega[u];
  return s;
}

}  // namespace casino::influence
