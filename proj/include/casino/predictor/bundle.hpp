#pragma once

#include <filesystem>
#include <string>

#include "casino/data/dataset.hpp"
#include "casino/data/preprocess.hpp"
#include "casino/influence/propagation.hpp"
#include "casino/influence/propagation_stats.hpp"
#include "casino/predictor/baselines.hpp"
#include "casino/predictor/cart.hpp"
#include "casino/predictor/feature_assembly.hpp"
#include "casino/spatial/attractiveness.hpp"
#include "json.hpp"

namespace casino::predictor {

inline constexpr std::string_view kBundleSchema = "casino-model-bundle";
inline constexpr int kBundleSchemaVersion = 1;

/// Everything learned on the training split. Prediction needs only the bundle
/// plus the dataset it was trained on (for group histories and RSVPs).
struct ModelBundle {
  std::string dataset_fingerprint;
  SplitSpec split;
  std::size_t min_group_events = kDefaultMinGroupEvents;
  FeatureConfig features;
  Timestamp reference_time = 0;
  CartParams cart;
  RegressionTree tree;
  influence::InfluenceParams casino;
  influence::InfluenceParams casino_tied;
  influence::PropagationStats stats;
  CategoryStats category_stats;
  spatial::AttractivenessMatrix attractiveness;
  NaiveMeanBaseline naive_mean;

  nlohmann::json to_json() const;
  /// Throws ArtifactError on a schema or feature-schema version mismatch or
  /// on malformed content.
  static ModelBundle from_json(const nlohmann::json& j);

  void save(const std::filesystem::path& path) const;
  static ModelBundle load(const std::filesystem::path& path);
};

/// Stable hash of the events, users and RSVPs of a dataset, hex encoded.
std::string dataset_fingerprint(const Dataset& d);

nlohmann::json to_json(const spatial::AttractivenessMatrix& m);
spatial::AttractivenessMatrix attractiveness_from_json(const nlohmann::json& j);
nlohmann::json to_json(const influence::InfluenceParams& p);
influence::InfluenceParams influence_params_from_json(const nlohmann::json& j);

}  // namespace casino::predictor
