#include "casino/influence/propagation_stats.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "casino/errors.hpp"
#include "casino/influence/dag.hpp"

namespace casino::influence {

namespace {

// Tied timestamps give dt = 0; keep tau strictly positive.
constexpr double kMinTauSeconds = 1.0;

std::unordered_set<std::string> seed_population(const Dataset& train, Timestamp horizon) {
  std::unordered_set<std::string> pop;
  for (const Group& g : train.groups()) pop.insert(g.organizer_id);
  for (std::size_t ei = 0; ei < train.events().size(); ++ei) {
    const Timestamp cutoff = train.events()[ei].announce_time + horizon;
    for (std::size_t ri : train.event_rsvps(ei))
      if (train.rsvps()[ri].rsvp_time < cutoff) pop.insert(train.rsvps()[ri].user_id);
  }
  return pop;
}

}  // namespace

double propagation_decay(double dt_seconds, double tau_seconds) { return std::exp(-dt_seconds / tau_seconds); }

double PropagationStats::infl(std::string_view user) const {
  auto it = infl_.find(std::string(user));
  return it == infl_.end() ? 0.0 : it->second;
}

const PairHistory* PropagationStats::pair(std::string_view v, std::string_view u) const {
  auto it = pairs_.find({std::string(v), std::string(u)});
  return it == pairs_.end() ? nullptr : &it->second;
}

double PropagationStats::tau(std::string_view v, std::string_view u) const {
  const PairHistory* p = pair(v, u);
  return p ? p->tau : kDefaultTauSeconds;
}

PropagationStats estimate_propagation_stats(const Dataset& train, const StatsConfig& cfg) {
  PropagationStats s;
  s.cfg_ = cfg;
  for (const Event& e : train.events()) s.train_events_.insert(e.id);

  std::unordered_set<std::string> population;
  if (cfg.restrict_to_seed_population) population = seed_population(train, cfg.seed_horizon);
  auto eligible = [&](const std::string& user) {
    return !cfg.restrict_to_seed_population || population.contains(user);
  };

  std::vector<RsvpDag> dags;
  dags.reserve(train.events().size());
  for (std::size_t ei = 0; ei < train.events().size(); ++ei) dags.push_back(build_rsvp_dag(train, ei));

  // infl(u): share of u's events with an earlier RSVPer from the event's group.
  std::map<std::string, std::pair<std::size_t, std::size_t>> influenced;  // user -> (influenced, attended)
  for (std::size_t ei = 0; ei < dags.size(); ++ei) {
    const std::size_t g = train.group_of_event(ei);
    bool member_seen = false;
    for (const DagNode& n : dags[ei].nodes) {
      auto& [hit, total] = influenced[n.user_id];
      ++total;
      if (member_seen) ++hit;
      auto ui = train.user_index(n.user_id);
      if (ui && train.is_member(*ui, g)) member_seen = true;
    }
  }
  for (const auto& [user, counts] : influenced)
    s.infl_[user] = static_cast<double>(counts.first) / static_cast<double>(counts.second);

  // tau: mean delay over co-attended events with v first.
  std::map<std::pair<std::string, std::string>, double> delay_sum;
  for (const RsvpDag& dag : dags) {
    for (std::size_t j = 0; j < dag.size(); ++j) {
      const DagNode& u = dag.nodes[j];
      if (!eligible(u.user_id)) continue;
      for (std::size_t i = 0; i < j; ++i) {
        const DagNode& v = dag.nodes[i];
        if (!eligible(v.user_id)) continue;
        auto key = std::make_pair(v.user_id, u.user_id);
        delay_sum[key] += static_cast<double>(u.time - v.time);
        ++s.pairs_[key].co_events;
      }
    }
  }
  for (auto& [key, hist] : s.pairs_)
    hist.tau = std::max(kMinTauSeconds, delay_sum[key] / static_cast<double>(hist.co_events));

  // Credit masses, split by the organizing group of the history event.
  for (std::size_t ei = 0; ei < dags.size(); ++ei) {
    const RsvpDag& dag = dags[ei];
    const std::string& gid = train.groups()[train.group_of_event(ei)].id;
    for (std::size_t j = 1; j < dag.size(); ++j) {
      const DagNode& u = dag.nodes[j];
      if (!eligible(u.user_id)) continue;
      const double share = s.infl(u.user_id) / static_cast<double>(dag.in_degree(j));
      for (std::size_t i = 0; i < j; ++i) {
        const DagNode& v = dag.nodes[i];
        if (!eligible(v.user_id)) continue;
        PairHistory& hist = s.pairs_.at({v.user_id, u.user_id});
        const double m = share * propagation_decay(static_cast<double>(u.time - v.time), hist.tau);
        hist.group_mass[gid] += m;
      }
    }
  }
  // Summed in group order so a reloaded artifact reproduces it bit for bit.
  for (auto& [key, hist] : s.pairs_)
    for (const auto& [g, m] : hist.group_mass) hist.total_mass += m;
  return s;
}

nlohmann::json PropagationStats::to_json() const {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& [key, hist] : pairs_) {
    nlohmann::json masses = nlohmann::json::array();
    for (const auto& [g, m] : hist.group_mass) masses.push_back({g, m});
    pairs.push_back({key.first, key.second, hist.tau, hist.co_events, masses});
  }
  return {
      {"seed_horizon", cfg_.seed_horizon},
      {"restrict_to_seed_population", cfg_.restrict_to_seed_population},
      {"infl", infl_},
      {"pairs", std::move(pairs)},
      {"train_events", train_events_},
  };
}

PropagationStats PropagationStats::from_json(const nlohmann::json& j) {
  try {
    PropagationStats s;
    s.cfg_.seed_horizon = j.at("seed_horizon").get<Timestamp>();
    s.cfg_.restrict_to_seed_population = j.at("restrict_to_seed_population").get<bool>();
    s.infl_ = j.at("infl").get<std::map<std::string, double>>();
    for (const auto& row : j.at("pairs")) {
      PairHistory h;
      h.tau = row.at(2).get<double>();
      h.co_events = row.at(3).get<std::size_t>();
      for (const auto& gm : row.at(4)) h.group_mass[gm.at(0).get<std::string>()] = gm.at(1).get<double>();
      for (const auto& [g, m] : h.group_mass) h.total_mass += m;
      s.pairs_[{row.at(0).get<std::string>(), row.at(1).get<std::string>()}] = std::move(h);
    }
    s.train_events_ = j.at("train_events").get<std::set<std::string>>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ArtifactError(std::string("malformed propagation stats: ") + e.what());
  }
}

}  // namespace casino::influence
