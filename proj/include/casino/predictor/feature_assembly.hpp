#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "casino/data/dataset.hpp"
#include "casino/group/group_features.hpp"
#include "casino/semantic/pos_tagger.hpp"
#include "casino/semantic/sentiment.hpp"
#include "casino/spatial/attractiveness.hpp"
#include "casino/spatial/competitiveness.hpp"
#include "casino/temporal/temporal_features.hpp"

namespace casino::predictor {

inline constexpr int kFeatureSchemaVersion = 1;
inline constexpr std::size_t kFeatureCount = 20;

using FeatureVector = std::array<double, kFeatureCount>;

/// Slot names in schema order.
const std::array<std::string_view, kFeatureCount>& feature_names();

struct FeatureConfig {
  spatial::SpatialConfig spatial;
  double eta = temporal::kDefaultDecayRate;
  Timestamp utc_offset = 0;  // seconds east of UTC for the city
  group::EntropyMode entropy_mode = group::EntropyMode::kAttendanceShare;
};

/// The parts of an event a prediction may look at.
struct EventQuery {
  std::string event_id;  // may be empty for hypothetical events
  std::string group_id;
  GeoPoint venue;
  Timestamp start_time = 0;
  std::string title;
  std::string description;
};

EventQuery query_of(const Dataset& d, std::size_t event);

struct FeatureDiagnostics {
  bool cold_start_group = false;  // no training history: group and temporal slots are 0
  bool quality_flagged = false;
  bool competitiveness_flagged = false;
};

/// Everything the feature modules build from the training split. `train` must
/// outlive the context.
class FeatureContext {
 public:
  FeatureContext(const Dataset& train, spatial::AttractivenessMatrix matrix, const FeatureConfig& cfg,
                 const semantic::SentimentLexicon& lexicon, const semantic::PosTagger& tagger);

  FeatureVector assemble(const EventQuery& q, FeatureDiagnostics* diag = nullptr) const;
  /// assemble() for every event of `d`, in event order.
  std::vector<FeatureVector> assemble_all(const Dataset& d, unsigned workers,
                                          std::vector<FeatureDiagnostics>* diags = nullptr) const;

  const FeatureConfig& config() const noexcept { return cfg_; }
  const spatial::AttractivenessMatrix& matrix() const noexcept { return matrix_; }
  const temporal::DecayConfig& decay() const noexcept { return temporal_.decay(); }

 private:
  const Dataset* train_;
  FeatureConfig cfg_;
  spatial::AttractivenessMatrix matrix_;
  spatial::SpatialIndex event_index_;
  spatial::UserHomeIndex homes_;
  std::vector<group::GroupFeatures> groups_;
  temporal::TemporalModel temporal_;
  const semantic::SentimentLexicon* lexicon_;
  const semantic::PosTagger* tagger_;
};

/// End of the training window: latest training start time.
Timestamp training_reference_time(const Dataset& train);

}  // namespace casino::predictor
