#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"

namespace casino::predictor {

/// Row-major samples; every row must have the same width.
using FeatureMatrix = std::vector<std::vector<double>>;

struct CartParams {
  std::size_t max_depth = 8;
  std::size_t min_samples_leaf = 20;

  friend bool operator==(const CartParams&, const CartParams&) = default;
};

/// Samples with x[feature] <= threshold go left.
struct Split {
  std::size_t feature = 0;
  double threshold = 0.0;
  double sse_reduction = 0.0;
};

/// Best variance-reduction split of `rows` honoring min_samples_leaf on both
/// sides. Ties go to the lower feature index, then the lower threshold.
/// Thresholds are midpoints between consecutive distinct values.
std::optional<Split> best_split(const FeatureMatrix& x, std::span<const double> y, std::span<const std::size_t> rows,
                                std::size_t min_samples_leaf);

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // mean training target of the samples reaching the node
  std::size_t samples = 0;
};

struct PathStep {
  std::size_t node = 0;
  std::size_t feature = 0;
  double threshold = 0.0;
  bool went_left = true;
};

class RegressionTree {
 public:
  RegressionTree() = default;
  explicit RegressionTree(std::vector<TreeNode> nodes);

  double predict(std::span<const double> x) const;
  std::size_t leaf_of(std::span<const double> x) const;
  /// Decisions taken from the root to the leaf of x.
  std::vector<PathStep> path(std::span<const double> x) const;

  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  std::size_t depth() const;
  std::size_t leaf_count() const;

  nlohmann::json to_json() const;
  static RegressionTree from_json(const nlohmann::json& j);

 private:
  std::vector<TreeNode> nodes_;
};

/// Greedy CART regression. Stops at max_depth, when a node cannot be split
/// into two children of min_samples_leaf, or when its targets are constant.
RegressionTree fit_cart(const FeatureMatrix& x, std::span<const double> y, const CartParams& params);

/// y_e - tree prediction, row by row.
std::vector<double> residual_targets(const RegressionTree& tree, const FeatureMatrix& x, std::span<const double> y);

}  // namespace casino::predictor
