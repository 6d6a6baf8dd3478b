#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "casino/data/dataset.hpp"
#include "casino/data/preprocess.hpp"

namespace casino::synth {

/// Knobs of the synthetic city. Popularity is planted before rounding as
///   alpha + group_offset + contextual + beta * I(e) + noise
/// and attendance is round(planted * attendance_scale).
struct SynthConfig {
  std::uint64_t seed = 1;
  std::size_t n_events = 2000;
  std::size_t n_groups = 50;
  std::size_t n_categories = 5;

  // Social structure. Groups are dealt round-robin into communities; each
  // group draws its core members from its community's pool.
  std::size_t n_communities = 10;
  std::size_t core_pool_size = 12;
  std::size_t core_per_group = 8;
  std::size_t fillers_per_group = 100;
  double join_prob = 0.15;          // per activated core member and per target
  double mean_join_delay_s = 7200;  // exponential cascade delays

  // Planted popularity.
  double alpha = 0.5;
  double w_spatial = 0.4;
  double w_temporal = 0.3;
  double w_semantic = 0.3;
  double beta = 0.15;
  double lambda_same = 0.15;
  double lambda_cross = 0.05;
  double noise_sd = 0.1;
  double group_offset_sd = 0.0;
  double attendance_scale = 30.0;

  // Driver rates.
  double hot_prob = 0.5;
  double on_slot_prob = 0.5;
  double positive_prob = 0.5;

  // Geography and calendar.
  GeoPoint city_center{40.75, -73.98};
  double city_half_extent_m = 10000.0;
  double home_near_hotspot_prob = 0.8;
  double home_spread_m = 700.0;
  double venue_jitter_m = 150.0;
  double cold_venue_min_dist_m = 4000.0;
  Timestamp epoch = 1704067200;  // 2024-01-01 00:00 UTC, a Monday
  std::size_t n_weeks = 52;
  Timestamp announce_lead = 14 * kSecondsPerDay;
  Timestamp seed_horizon = kSecondsPerDay;
  Timestamp utc_offset = 0;

  SplitSpec split;

  /// Throws ConfigError on inconsistent settings.
  void validate() const;
  nlohmann::json to_json() const;
};

/// Per-event ledger of the planted decomposition. Emitted popularity equals
/// scale * (alpha + group_offset + contextual + influence_term + noise + rounding).
struct EventTruth {
  std::string event_id;
  std::string group_id;
  std::string category;
  SplitName split = SplitName::kTrain;
  bool hot_venue = false;
  bool on_slot = false;
  bool positive_title = false;
  double alpha = 0.0;
  double group_offset = 0.0;
  double contextual = 0.0;
  double influence = 0.0;  // I(e) under the planted lambdas
  double influence_term = 0.0;
  double noise = 0.0;
  double rounding = 0.0;
  double scale = 0.0;
  std::size_t core_rsvps = 0;
  std::size_t attendees = 0;
  double popularity = 0.0;

  /// Planted value before rounding and category scaling.
  double planted() const { return alpha + group_offset + contextual + influence_term + noise; }
  nlohmann::json to_json() const;
};

struct GroundTruth {
  SynthConfig config;
  std::vector<EventTruth> events;  // dataset event order

  void write_jsonl(const std::filesystem::path& path) const;
};

struct SynthOutput {
  Dataset dataset;
  GroundTruth truth;
};

/// Deterministic in the config (including seed). Throws Error when the planted
/// attendance cannot be realized by the core and filler pools.
SynthOutput generate(const SynthConfig& cfg);

}  // namespace casino::synth
