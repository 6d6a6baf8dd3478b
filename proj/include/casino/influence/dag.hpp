#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "casino/data/dataset.hpp"

namespace casino::influence {

struct DagNode {
  std::string user_id;
  Timestamp time = 0;
  bool has_rsvp = true;  // false for an organizer placed without an RSVP

  friend bool operator==(const DagNode&, const DagNode&) = default;
};

/// Total RSVP order of one event: node i has an edge to node j iff i < j, so
/// N(u, e) of the node at position j is the first j nodes.
struct RsvpDag {
  std::vector<DagNode> nodes;

  std::size_t size() const noexcept { return nodes.size(); }
  std::size_t in_degree(std::size_t node) const noexcept { return node; }
};

/// Orders nodes by (time, user_id). A user listed twice keeps the earlier entry.
RsvpDag build_rsvp_dag(std::vector<DagNode> entries);
/// DAG over all RSVPs of one event of `d`.
RsvpDag build_rsvp_dag(const Dataset& d, std::size_t event);

/// Arbitrary DAG whose node positions are a topological order; `in_edges[u]`
/// lists (z, w_zu) with z < u.
struct WeightedDag {
  std::vector<std::vector<std::pair<std::size_t, double>>> in_edges;

  std::size_t size() const noexcept { return in_edges.size(); }
};

/// Omega_{v,.}: one forward pass with Omega_{v,v} = 1 and
/// Omega_{v,u} = sum over in-edges (z, w) of Omega_{v,z} * w.
std::vector<double> propagate_from(const WeightedDag& dag, std::size_t v);
double total_influence(const WeightedDag& dag, std::size_t v, std::size_t u);
/// Sum of Omega_{v,u} over nodes u != v with is_member[u] set.
double group_influence_score(const WeightedDag& dag, std::size_t v, const std::vector<char>& is_member);

}  // namespace casino::influence
