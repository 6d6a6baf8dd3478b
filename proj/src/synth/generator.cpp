#include "casino/synth/generator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <queue>
#include <random>

#include "casino/errors.hpp"

namespace casino::synth {

namespace {

constexpr double kMetersPerDegree = 111194.9;
constexpr Timestamp kWeek = 7 * kSecondsPerDay;

const char* const kCategoryNames[] = {"tech", "outdoors", "music", "food", "books",
                                      "language", "fitness", "art", "games", "career"};
const char* const kTopics[] = {"coding", "hiking", "jazz", "tasting", "reading",
                               "conversation", "running", "sketching", "boardgame", "networking"};
const char* const kNouns[] = {"meetup", "session", "gathering", "workshop", "circle"};
const char* const kPositive[] = {"Amazing", "Fun", "Great", "Awesome", "Wonderful"};

std::string padded(char prefix, std::size_t i, int width) {
  std::string digits = std::to_string(i);
  if (static_cast<int>(digits.size()) < width) digits.insert(0, width - digits.size(), '0');
  return std::string(1, prefix) + digits;
}

std::string category_name(std::size_t k) {
  return k < std::size(kCategoryNames) ? kCategoryNames[k] : "category" + std::to_string(k);
}

std::string topic_name(std::size_t k) {
  return k < std::size(kTopics) ? kTopics[k] : "topic" + std::to_string(k);
}

GeoPoint offset(GeoPoint p, double dx_m, double dy_m) {
  const double lat = p.lat + dy_m / kMetersPerDegree;
  const double lon = p.lon + dx_m / (kMetersPerDegree * std::cos(p.lat * std::numbers::pi / 180.0));
  return {lat, lon};
}

struct CoreRsvp {
  std::size_t user;  // global user position
  Timestamp time;
};

// Reference I(e) straight from the definitions: per-pair history sums over the
// other training events and explicit enumeration of increasing paths.
class InfluenceOracle {
 public:
  InfluenceOracle(const std::vector<std::vector<CoreRsvp>>& core, const std::vector<std::size_t>& event_group,
                  const std::vector<bool>& is_train, const std::vector<std::string>& user_ids,
                  const std::vector<std::vector<bool>>& member)
      : core_(core), group_(event_group), train_(is_train), ids_(user_ids), member_(member) {
    for (std::size_t e = 0; e < core_.size(); ++e) orders_.push_back(sorted(e));
    for (std::size_t e = 0; e < core_.size(); ++e)
      if (train_[e])
        for (const CoreRsvp& r : orders_[e]) train_events_of_[r.user].push_back(e);
    std::map<std::size_t, std::pair<double, double>> influenced;  // user -> (hits, events)
    std::map<std::pair<std::size_t, std::size_t>, std::pair<double, double>> delay;  // (v,u) -> (sum, count)
    for (std::size_t e = 0; e < core_.size(); ++e) {
      if (!train_[e]) continue;
      const auto& order = orders_[e];
      for (std::size_t i = 0; i < order.size(); ++i) {
        bool hit = false;
        for (std::size_t j = 0; j < i; ++j) hit = hit || member_[group_[e]][order[j].user];
        auto& [h, n] = influenced[order[i].user];
        h += hit ? 1.0 : 0.0;
        n += 1.0;
        for (std::size_t j = 0; j < i; ++j) {
          auto& [s, c] = delay[{order[j].user, order[i].user}];
          s += static_cast<double>(order[i].time - order[j].time);
          c += 1.0;
        }
      }
    }
    for (const auto& [u, hn] : influenced) infl_[u] = hn.first / hn.second;
    for (const auto& [vu, sc] : delay) tau_[vu] = std::max(1.0, sc.first / sc.second);
  }

  double influence(std::size_t e, double lambda_same, double lambda_cross) const {
    const auto& seeds = orders_[e];
    const std::size_t n = seeds.size();
    std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) w[a][b] = credit(seeds[a].user, seeds[b].user, e, lambda_same, lambda_cross);
    double total = 0.0;
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t u = v + 1; u < n; ++u)
        if (member_[group_[e]][seeds[u].user]) total += paths(v, u, w);
    return total;
  }

 private:
  std::vector<CoreRsvp> sorted(std::size_t e) const {
    auto order = core_[e];
    std::sort(order.begin(), order.end(), [&](const CoreRsvp& a, const CoreRsvp& b) {
      if (a.time != b.time) return a.time < b.time;
      return ids_[a.user] < ids_[b.user];
    });
    return order;
  }

  double credit(std::size_t z, std::size_t u, std::size_t e, double ls, double lc) const {
    double sum = 0.0;
    const auto it = train_events_of_.find(u);
    if (it == train_events_of_.end()) return 0.0;
    for (std::size_t h : it->second) {
      if (h == e) continue;
      const auto& order = orders_[h];
      std::size_t iz = n_pos, iu = n_pos;
      for (std::size_t i = 0; i < order.size(); ++i) {
        if (order[i].user == z) iz = i;
        if (order[i].user == u) iu = i;
      }
      if (iz == n_pos || iu == n_pos || iz > iu) continue;
      const double dt = static_cast<double>(order[iu].time - order[iz].time);
      const double c = infl_.at(u) / static_cast<double>(iu) * std::exp(-dt / tau_.at({z, u}));
      sum += (group_[h] == group_[e] ? ls : lc) * c;
    }
    return sum;
  }

  // Sum over increasing paths from v to u of the product of edge credits.
  double paths(std::size_t v, std::size_t u, const std::vector<std::vector<double>>& w) const {
    if (v == u) return 1.0;
    double s = 0.0;
    for (std::size_t next = v + 1; next <= u; ++next)
      if (w[v][next] != 0.0) s += w[v][next] * paths(next, u, w);
    return s;
  }

  static constexpr std::size_t n_pos = static_cast<std::size_t>(-1);
  const std::vector<std::vector<CoreRsvp>>& core_;
  const std::vector<std::size_t>& group_;
  const std::vector<bool>& train_;
  const std::vector<std::string>& ids_;
  const std::vector<std::vector<bool>>& member_;
  std::vector<std::vector<CoreRsvp>> orders_;
  std::map<std::size_t, std::vector<std::size_t>> train_events_of_;
  std::map<std::size_t, double> infl_;
  std::map<std::pair<std::size_t, std::size_t>, double> tau_;
};

}  // namespace

void SynthConfig::validate() const {
  auto fail = [](const std::string& m) { throw ConfigError("synth: " + m); };
  if (n_groups == 0 || n_categories == 0 || n_communities == 0) fail("groups, categories and communities must be positive");
  if (n_events < n_groups) fail("need at least one event per group");
  if (n_communities > n_groups) fail("more communities than groups");
  if (core_per_group == 0 || core_per_group > core_pool_size) fail("core_per_group must be in [1, core_pool_size]");
  const std::size_t per_group = (n_events + n_groups - 1) / n_groups;
  if (per_group > n_weeks) fail("more events per group than weeks in the calendar");
  if (announce_lead <= seed_horizon) fail("announce_lead must exceed seed_horizon");
  if (seed_horizon <= 0) fail("seed_horizon must be positive");
  if (join_prob < 0.0 || join_prob > 1.0) fail("join_prob must be in [0, 1]");
  if (!(mean_join_delay_s > 0.0)) fail("mean_join_delay_s must be positive");
  if (!(attendance_scale > 0.0)) fail("attendance_scale must be positive");
  if (noise_sd < 0.0 || group_offset_sd < 0.0) fail("standard deviations must be nonnegative");
  for (double p : {hot_prob, on_slot_prob, positive_prob, home_near_hotspot_prob})
    if (p < 0.0 || p > 1.0) fail("probabilities must be in [0, 1]");
  if (!is_valid(city_center) || !(city_half_extent_m > 0.0)) fail("invalid city box");
  split.validate();
}

nlohmann::json SynthConfig::to_json() const {
  return {{"seed", seed},
          {"n_events", n_events},
          {"n_groups", n_groups},
          {"n_categories", n_categories},
          {"n_communities", n_communities},
          {"core_pool_size", core_pool_size},
          {"core_per_group", core_per_group},
          {"fillers_per_group", fillers_per_group},
          {"join_prob", join_prob},
          {"mean_join_delay_s", mean_join_delay_s},
          {"alpha", alpha},
          {"w_spatial", w_spatial},
          {"w_temporal", w_temporal},
          {"w_semantic", w_semantic},
          {"beta", beta},
          {"lambda_same", lambda_same},
          {"lambda_cross", lambda_cross},
          {"noise_sd", noise_sd},
          {"group_offset_sd", group_offset_sd},
          {"attendance_scale", attendance_scale},
          {"hot_prob", hot_prob},
          {"on_slot_prob", on_slot_prob},
          {"positive_prob", positive_prob},
          {"city_center", {city_center.lat, city_center.lon}},
          {"city_half_extent_m", city_half_extent_m},
          {"home_near_hotspot_prob", home_near_hotspot_prob},
          {"home_spread_m", home_spread_m},
          {"venue_jitter_m", venue_jitter_m},
          {"cold_venue_min_dist_m", cold_venue_min_dist_m},
          {"epoch", epoch},
          {"n_weeks", n_weeks},
          {"announce_lead", announce_lead},
          {"seed_horizon", seed_horizon},
          {"utc_offset", utc_offset},
          {"split", {split.train_frac, split.val_frac, split.test_frac}}};
}

nlohmann::json EventTruth::to_json() const {
  return {{"event_id", event_id},
          {"group_id", group_id},
          {"category", category},
          {"split", casino::to_string(split)},
          {"hot_venue", hot_venue},
          {"on_slot", on_slot},
          {"positive_title", positive_title},
          {"alpha", alpha},
          {"group_offset", group_offset},
          {"contextual", contextual},
          {"influence", influence},
          {"influence_term", influence_term},
          {"noise", noise},
          {"rounding", rounding},
          {"scale", scale},
          {"core_rsvps", core_rsvps},
          {"attendees", attendees},
          {"popularity", popularity}};
}

void GroundTruth::write_jsonl(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  for (const EventTruth& t : events) out << t.to_json().dump() << '\n';
  if (!out) throw ConfigError("failed writing " + path.string());
}

SynthOutput generate(const SynthConfig& cfg) {
  cfg.validate();
  // One stream per entity class so that, e.g., more users leave events alone.
  auto stream = [&](std::uint64_t k) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(k)};
    return std::mt19937_64(seq);
  };
  std::mt19937_64 users_rng = stream(1), groups_rng = stream(2), events_rng = stream(3), cascade_rng = stream(4),
                  popularity_rng = stream(5), filler_rng = stream(6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto bernoulli = [&](std::mt19937_64& r, double p) { return unit(r) < p; };
  auto uniform_index = [](std::mt19937_64& r, std::size_t n) { return static_cast<std::size_t>(r() % n); };

  // Category hotspots on a ring around the center.
  std::vector<GeoPoint> hotspots;
  for (std::size_t k = 0; k < cfg.n_categories; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(cfg.n_categories);
    const double ring = 0.6 * cfg.city_half_extent_m;
    hotspots.push_back(offset(cfg.city_center, ring * std::cos(angle), ring * std::sin(angle)));
  }
  auto uniform_point = [&](std::mt19937_64& r) {
    const double dx = (2.0 * unit(r) - 1.0) * cfg.city_half_extent_m;
    const double dy = (2.0 * unit(r) - 1.0) * cfg.city_half_extent_m;
    return offset(cfg.city_center, dx, dy);
  };
  auto near = [&](std::mt19937_64& r, GeoPoint p, double sd) {
    const double dx = sd * gauss(r);
    const double dy = sd * gauss(r);
    return offset(p, dx, dy);
  };
  auto cold_venue = [&](std::mt19937_64& r) {
    for (int attempt = 0; attempt < 10000; ++attempt) {
      const GeoPoint p = uniform_point(r);
      bool far = true;
      for (const GeoPoint& h : hotspots) far = far && haversine_m(p, h) >= cfg.cold_venue_min_dist_m;
      if (far) return p;
    }
    throw ConfigError("synth: no venue location satisfies cold_venue_min_dist_m");
  };

  // Groups and their core members.
  const std::size_t G = cfg.n_groups;
  std::vector<std::size_t> group_category(G), group_community(G);
  for (std::size_t g = 0; g < G; ++g) {
    group_category[g] = g % cfg.n_categories;
    group_community[g] = g * cfg.n_communities / G;
  }
  const std::size_t n_core = cfg.n_communities * cfg.core_pool_size;
  const std::size_t n_users = n_core + G * cfg.fillers_per_group;
  std::vector<std::string> user_ids(n_users);
  for (std::size_t u = 0; u < n_users; ++u) user_ids[u] = padded('u', u, 5);

  std::vector<std::vector<std::size_t>> core_of(G), fillers_of(G);
  for (std::size_t g = 0; g < G; ++g) {
    std::vector<std::size_t> pool(cfg.core_pool_size);
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = group_community[g] * cfg.core_pool_size + i;
    std::shuffle(pool.begin(), pool.end(), groups_rng);
    core_of[g].assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(cfg.core_per_group));
    for (std::size_t i = 0; i < cfg.fillers_per_group; ++i) fillers_of[g].push_back(n_core + g * cfg.fillers_per_group + i);
  }
  std::vector<std::vector<bool>> member(G, std::vector<bool>(n_users, false));
  std::vector<std::vector<std::size_t>> user_groups(n_users);
  for (std::size_t g = 0; g < G; ++g) {
    for (std::size_t u : core_of[g]) member[g][u] = true;
    for (std::size_t u : fillers_of[g]) member[g][u] = true;
  }
  for (std::size_t u = 0; u < n_users; ++u)
    for (std::size_t g = 0; g < G; ++g)
      if (member[g][u]) user_groups[u].push_back(g);

  std::vector<GeoPoint> homes(n_users);
  for (std::size_t u = 0; u < n_users; ++u) {
    const std::size_t cat = user_groups[u].empty()
                                ? uniform_index(users_rng, cfg.n_categories)
                                : group_category[user_groups[u][uniform_index(users_rng, user_groups[u].size())]];
    homes[u] = bernoulli(users_rng, cfg.home_near_hotspot_prob) ? near(users_rng, hotspots[cat], cfg.home_spread_m)
                                                                : uniform_point(users_rng);
  }

  // Events: one per chosen week, at the group's habitual slot or off it.
  const Timestamp first_week = cfg.epoch + ((cfg.announce_lead + kWeek - 1) / kWeek) * kWeek;
  struct Plan {
    std::size_t group;
    Timestamp start;
    GeoPoint venue;
    bool hot, on_slot, positive;
    std::string title, description;
  };
  std::vector<Plan> plans;
  for (std::size_t g = 0; g < G; ++g) {
    const std::size_t n = cfg.n_events / G + (g < cfg.n_events % G ? 1 : 0);
    const std::size_t day = uniform_index(events_rng, 7);
    const std::size_t hour = day < 5 ? 18 + uniform_index(events_rng, 2) : 10 + uniform_index(events_rng, 5);
    const std::size_t habit = day * 24 + hour;
    std::vector<std::size_t> weeks(cfg.n_weeks);
    for (std::size_t i = 0; i < weeks.size(); ++i) weeks[i] = i;
    std::shuffle(weeks.begin(), weeks.end(), events_rng);
    weeks.resize(n);
    std::sort(weeks.begin(), weeks.end());
    const std::size_t cat = group_category[g];
    for (std::size_t k = 0; k < n; ++k) {
      Plan p;
      p.group = g;
      p.on_slot = bernoulli(events_rng, cfg.on_slot_prob);
      const std::size_t slot = p.on_slot ? habit : uniform_index(events_rng, 7) * 24 + 1 + uniform_index(events_rng, 5);
      p.start = first_week + static_cast<Timestamp>(weeks[k]) * kWeek + static_cast<Timestamp>(slot) * kSecondsPerHour -
                cfg.utc_offset;
      p.hot = bernoulli(events_rng, cfg.hot_prob);
      p.venue = p.hot ? near(events_rng, hotspots[cat], cfg.venue_jitter_m) : cold_venue(events_rng);
      p.positive = bernoulli(events_rng, cfg.positive_prob);
      const std::string topic = topic_name(cat);
      const std::string noun = kNouns[uniform_index(events_rng, std::size(kNouns))];
      const std::string adjective = kPositive[uniform_index(events_rng, std::size(kPositive))];
      p.title = p.positive ? adjective + " " + topic + " " + noun
                           : "Weekly " + topic + " " + noun;
      p.description = "Members of " + padded('g', g, 3) + " meet for " + topic + ".";
      plans.push_back(std::move(p));
    }
  }
  const std::size_t E = plans.size();

  // Core cascades inside the seed horizon. The organizer RSVPs at announce time.
  std::vector<std::vector<CoreRsvp>> core(E);
  std::exponential_distribution<double> delay_dist(1.0 / cfg.mean_join_delay_s);
  for (std::size_t e = 0; e < E; ++e) {
    const Plan& p = plans[e];
    const Timestamp announce = p.start - cfg.announce_lead;
    const auto& members = core_of[p.group];
    using Item = std::pair<Timestamp, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    std::vector<bool> active(members.size(), false);
    queue.push({announce, 0});
    while (!queue.empty()) {
      const auto [t, i] = queue.top();
      queue.pop();
      if (active[i]) continue;
      active[i] = true;
      core[e].push_back({members[i], t});
      for (std::size_t j = 0; j < members.size(); ++j) {
        if (active[j] || !bernoulli(cascade_rng, cfg.join_prob)) continue;
        const double delay = delay_dist(cascade_rng);
        const Timestamp next = t + std::max<Timestamp>(60, static_cast<Timestamp>(std::llround(delay)));
        if (next < announce + cfg.seed_horizon) queue.push({next, j});
      }
    }
  }

  // Chronological per-group split, as the pipeline will see it.
  std::vector<SplitName> split(E, SplitName::kTrain);
  std::vector<bool> is_train(E, false);
  std::vector<std::size_t> event_group(E);
  for (std::size_t e = 0; e < E; ++e) event_group[e] = plans[e].group;
  {
    std::size_t e = 0;
    for (std::size_t g = 0; g < G; ++g) {
      std::size_t n = 0;
      while (e + n < E && plans[e + n].group == g) ++n;
      const SplitSizes sizes = split_sizes(n, cfg.split);
      for (std::size_t k = 0; k < n; ++k)
        split[e + k] = k < sizes.train ? SplitName::kTrain : k < sizes.train + sizes.val ? SplitName::kVal : SplitName::kTest;
      e += n;
    }
  }
  for (std::size_t e = 0; e < E; ++e) is_train[e] = split[e] == SplitName::kTrain;

  const InfluenceOracle oracle(core, event_group, is_train, user_ids, member);
  std::vector<double> group_offset(G);
  for (std::size_t g = 0; g < G; ++g) group_offset[g] = cfg.group_offset_sd * gauss(popularity_rng);

  std::vector<EventTruth> truth(E);
  std::vector<Event> events;
  std::vector<Rsvp> rsvps;
  for (std::size_t e = 0; e < E; ++e) {
    const Plan& p = plans[e];
    EventTruth& t = truth[e];
    t.event_id = padded('e', e, 5);
    t.group_id = padded('g', p.group, 3);
    t.category = category_name(group_category[p.group]);
    t.split = split[e];
    t.hot_venue = p.hot;
    t.on_slot = p.on_slot;
    t.positive_title = p.positive;
    t.alpha = cfg.alpha;
    t.group_offset = group_offset[p.group];
    t.contextual = cfg.w_spatial * p.hot + cfg.w_temporal * p.on_slot + cfg.w_semantic * p.positive;
    t.influence = oracle.influence(e, cfg.lambda_same, cfg.lambda_cross);
    t.influence_term = cfg.beta * t.influence;
    t.noise = cfg.noise_sd * gauss(popularity_rng);
    const double planted = t.planted();
    const long n = std::lround(planted * cfg.attendance_scale);
    t.core_rsvps = core[e].size();
    if (n < static_cast<long>(t.core_rsvps) || n > static_cast<long>(t.core_rsvps + cfg.fillers_per_group))
      throw Error("synth: event " + t.event_id + " needs " + std::to_string(n) + " attendees but has " +
                  std::to_string(t.core_rsvps) + " core and " + std::to_string(cfg.fillers_per_group) +
                  " filler members; adjust alpha, weights or attendance_scale");
    t.attendees = static_cast<std::size_t>(n);
    t.rounding = static_cast<double>(n) / cfg.attendance_scale - planted;

    const Timestamp announce = p.start - cfg.announce_lead;
    events.push_back({t.event_id, t.group_id, p.venue, p.start, announce, p.title, p.description});
    for (const CoreRsvp& r : core[e]) rsvps.push_back({t.event_id, user_ids[r.user], r.time});
    std::vector<std::size_t> fill = fillers_of[p.group];
    const std::size_t extra = t.attendees - t.core_rsvps;
    for (std::size_t k = 0; k < extra; ++k) std::swap(fill[k], fill[k + uniform_index(filler_rng, fill.size() - k)]);
    const Timestamp lo = announce + cfg.seed_horizon;
    const std::size_t span = static_cast<std::size_t>(p.start - lo) + 1;
    for (std::size_t k = 0; k < extra; ++k)
      rsvps.push_back({t.event_id, user_ids[fill[k]], lo + static_cast<Timestamp>(uniform_index(filler_rng, span))});
  }

  // Category averages over training events fix the emitted scale.
  std::vector<double> sum(cfg.n_categories, 0.0), count(cfg.n_categories, 0.0);
  for (std::size_t e = 0; e < E; ++e) {
    if (!is_train[e]) continue;
    sum[group_category[plans[e].group]] += static_cast<double>(truth[e].attendees);
    count[group_category[plans[e].group]] += 1.0;
  }
  for (std::size_t e = 0; e < E; ++e) {
    const std::size_t c = group_category[plans[e].group];
    const double avg = sum[c] / count[c];
    truth[e].scale = cfg.attendance_scale / avg;
    truth[e].popularity = static_cast<double>(truth[e].attendees) / avg;
  }

  std::vector<Group> groups(G);
  for (std::size_t g = 0; g < G; ++g) {
    groups[g].id = padded('g', g, 3);
    groups[g].category = category_name(group_category[g]);
    groups[g].organizer_id = user_ids[core_of[g].front()];
    for (std::size_t u : core_of[g]) groups[g].members.push_back(user_ids[u]);
    for (std::size_t u : fillers_of[g]) groups[g].members.push_back(user_ids[u]);
  }
  std::vector<User> users(n_users);
  for (std::size_t u = 0; u < n_users; ++u) {
    users[u].id = user_ids[u];
    users[u].home = homes[u];
    for (std::size_t g : user_groups[u]) users[u].groups.push_back(groups[g].id);
  }

  SynthOutput out;
  out.dataset = Dataset::build(std::move(users), std::move(groups), std::move(events), std::move(rsvps));
  out.truth.config = cfg;
  out.truth.events = std::move(truth);
  return out;
}

}  // namespace casino::synth
