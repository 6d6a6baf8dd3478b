#pragma once

#include <map>
#include <string>
#include <string_view>

#include "casino/data/dataset.hpp"
#include "casino/data/preprocess.hpp"
#include "json.hpp"

namespace casino::predictor {

struct BaselinePrediction {
  double value = 0.0;
  bool fallback = false;  // group had no training events; category mean used
};

/// NM: mean relative popularity of the group's training events.
class NaiveMeanBaseline {
 public:
  NaiveMeanBaseline() = default;
  NaiveMeanBaseline(const Dataset& train, const CategoryStats& stats);

  /// Throws Error when neither the group nor the category has training events.
  BaselinePrediction predict(std::string_view group_id, std::string_view category) const;

  const std::map<std::string, double>& group_means() const noexcept { return group_means_; }
  const std::map<std::string, double>& category_means() const noexcept { return category_means_; }

  nlohmann::json to_json() const;
  static NaiveMeanBaseline from_json(const nlohmann::json& j);

 private:
  std::map<std::string, double> group_means_;
  std::map<std::string, double> category_means_;
};

}  // namespace casino::predictor
