#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "casino/data/dataset.hpp"
#include "casino/data/preprocess.hpp"
#include "casino/influence/propagation.hpp"
#include "casino/predictor/bundle.hpp"
#include "casino/predictor/residual_model.hpp"
#include "json.hpp"

namespace casino::predictor {

struct PipelineConfig {
  SplitSpec split;
  std::size_t min_group_events = kDefaultMinGroupEvents;
  FeatureConfig features;
  CartParams cart;  // used as is when either tuning grid is empty
  // Tree hyperparameters tried on the validation split; the cell with the best
  // validation R^2 of the full model wins, first cell on ties.
  std::vector<std::size_t> cart_depth_grid{2, 3, 4, 6, 8};
  std::vector<std::size_t> cart_leaf_grid{20, 50};
  influence::StatsConfig stats;
  BfgsOptions bfgs;
  unsigned workers = 0;  // 0 = available parallelism
};

/// The filtered dataset, its split, and avg_c over the training part.
struct PreparedData {
  DatasetCounts raw_counts;
  Dataset filtered;
  DatasetSplit split;
  CategoryStats category_stats;
};

PreparedData prepare_data(const Dataset& raw, const SplitSpec& split, std::size_t min_group_events);

enum class Variant { kNaiveMean, kContextual, kCasinoTied, kCasino };

std::string_view to_string(Variant v);
/// Accepts nm, cont, casino-, casino; throws ConfigError otherwise.
Variant parse_variant(std::string_view s);
inline constexpr Variant kAllVariants[] = {Variant::kNaiveMean, Variant::kContextual, Variant::kCasinoTied,
                                           Variant::kCasino};

struct TrainOutput {
  ModelBundle bundle;
  nlohmann::json report;
};

/// Filter, split, features, propagation stats, then CART and both residual
/// fits, with the tree hyperparameters tuned on validation when grids are set.
TrainOutput train_model(const Dataset& raw, const PipelineConfig& cfg, const semantic::SentimentLexicon& lexicon,
                        const semantic::PosTagger& tagger);

/// An event to score: the observable attributes plus early RSVPs, if any.
struct WhatIfStub {
  EventQuery query;
  Timestamp announce_time = 0;
  std::vector<influence::DagNode> rsvps;

  /// {group_id, venue_lat, venue_lon, start_time, title, description,
  ///  announce_time?, event_id?, rsvps?: [{user_id, rsvp_time}]}
  static WhatIfStub from_json(const nlohmann::json& j);
};

struct Prediction {
  std::string event_id;
  std::string group_id;
  FeatureVector features{};
  FeatureDiagnostics diagnostics;
  std::vector<PathStep> tree_path;
  double contextual = 0.0;  // tree output
  double influence = 0.0;   // I(e) under the CASINO weights
  double influence_tied = 0.0;
  BaselinePrediction naive_mean;

  double value(Variant v, const ModelBundle& b) const;
  nlohmann::json to_json(const ModelBundle& b) const;
};

struct EvaluationReport {
  Variant variant = Variant::kCasino;
  SplitName split = SplitName::kTest;
  std::optional<double> r2;  // empty when the actual popularity has zero variance
  std::size_t n_events = 0;
  std::size_t n_skipped = 0;  // events whose category has no training average
  std::map<std::string, std::optional<double>> per_category;
  std::vector<std::pair<std::string, std::pair<double, double>>> per_event;  // id -> (actual, predicted)

  nlohmann::json to_json() const;
};

/// A trained bundle bound to the dataset it was trained on.
class Predictor {
 public:
  /// Re-derives the split and feature context; throws ArtifactError when the
  /// dataset does not match the bundle's fingerprint.
  Predictor(ModelBundle bundle, const Dataset& raw, const semantic::SentimentLexicon& lexicon,
            const semantic::PosTagger& tagger, unsigned workers = 0);

  const ModelBundle& bundle() const noexcept { return bundle_; }
  const PreparedData& data() const noexcept { return *data_; }

  /// Throws Error on an empty split.
  EvaluationReport evaluate(SplitName split, Variant variant, bool per_event = false) const;
  std::vector<EvaluationReport> evaluate_all(SplitName split, bool per_event = false) const;

  /// Predictions for every event of a split, in event order.
  std::vector<Prediction> predict_split(SplitName split) const;
  /// Throws ValidationError for a group unknown to the dataset.
  Prediction predict(const WhatIfStub& stub) const;
  /// One prediction per local hour-of-week slot of the stub's week, with the
  /// announcement and RSVPs shifted along with the start time.
  std::vector<std::pair<std::size_t, Prediction>> sweep_hours(const WhatIfStub& stub) const;

 private:
  Prediction predict_with(const EventQuery& q, const influence::EventSeeds& seeds, const Dataset& context) const;

  ModelBundle bundle_;
  std::unique_ptr<PreparedData> data_;
  std::unique_ptr<FeatureContext> features_;
  unsigned workers_;
};

struct GridCell {
  double radius_m = 0.0;
  double eta = 0.0;
  std::optional<double> val_r2;
};

struct GridResult {
  double best_radius_m = 0.0;
  double best_eta = 0.0;
  std::vector<GridCell> cells;  // radius-major, in grid order

  nlohmann::json to_json() const;
};

inline const std::vector<double> kDefaultRadiusGridMiles = {0.5, 1.0, 1.5, 2.0, 3.0};
inline const std::vector<double> kDefaultEtaGrid = {0.001, 0.01, 0.05, 0.1};

/// Retrains the contextual model for each (R, eta) cell and keeps the best
/// validation R^2; the first cell in grid order wins ties.
GridResult grid_search(const Dataset& raw, const PipelineConfig& cfg, const std::vector<double>& radius_grid_m,
                       const std::vector<double>& eta_grid, const semantic::SentimentLexicon& lexicon,
                       const semantic::PosTagger& tagger);

}  // namespace casino::predictor
