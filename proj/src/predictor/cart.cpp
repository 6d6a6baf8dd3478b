#include "casino/predictor/cart.hpp"

#include <algorithm>
#include <numeric>

#include "casino/errors.hpp"

namespace casino::predictor {

namespace {

double mean_of(std::span<const double> y, std::span<const std::size_t> rows) {
  double s = 0.0;
  for (std::size_t r : rows) s += y[r];
  return s / static_cast<double>(rows.size());
}

double sse_of(std::span<const double> y, std::span<const std::size_t> rows, double mean) {
  double s = 0.0;
  for (std::size_t r : rows) s += (y[r] - mean) * (y[r] - mean);
  return s;
}

}  // namespace

std::optional<Split> best_split(const FeatureMatrix& x, std::span<const double> y, std::span<const std::size_t> rows,
                                std::size_t min_samples_leaf) {
  const std::size_t n = rows.size();
  const std::size_t min_leaf = std::max<std::size_t>(1, min_samples_leaf);
  if (n < 2 * min_leaf) return std::nullopt;
  const std::size_t width = x[rows[0]].size();

  double total = 0.0, total_sq = 0.0;
  for (std::size_t r : rows) {
    total += y[r];
    total_sq += y[r] * y[r];
  }
  const double parent_sse = total_sq - total * total / static_cast<double>(n);

  std::optional<Split> best;
  std::vector<std::size_t> order(rows.begin(), rows.end());
  for (std::size_t f = 0; f < width; ++f) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a][f] < x[b][f]; });
    double left = 0.0, left_sq = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double yi = y[order[i]];
      left += yi;
      left_sq += yi * yi;
      const std::size_t nl = i + 1, nr = n - nl;
      if (nl < min_leaf) continue;
      if (nr < min_leaf) break;
      const double a = x[order[i]][f], b = x[order[i + 1]][f];
      if (!(a < b)) continue;
      const double right = total - left, right_sq = total_sq - left_sq;
      const double sse = (left_sq - left * left / static_cast<double>(nl)) +
                         (right_sq - right * right / static_cast<double>(nr));
      const double reduction = parent_sse - sse;
      if (!best || reduction > best->sse_reduction) {
        double t = a + (b - a) / 2.0;
        if (!(t < b)) t = a;  // adjacent doubles
        best = Split{f, t, reduction};
      }
    }
  }
  return best;
}

RegressionTree::RegressionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw ArtifactError("regression tree has no nodes");
  for (const TreeNode& n : nodes_) {
    if (n.feature < 0) continue;
    const auto sz = static_cast<int>(nodes_.size());
    if (n.left <= 0 || n.right <= 0 || n.left >= sz || n.right >= sz)
      throw ArtifactError("regression tree has a dangling child index");
  }
}

std::size_t RegressionTree::leaf_of(std::span<const double> x) const {
  std::size_t i = 0;
  while (nodes_[i].feature >= 0) {
    const TreeNode& n = nodes_[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return i;
}

double RegressionTree::predict(std::span<const double> x) const { return nodes_[leaf_of(x)].value; }

std::vector<PathStep> RegressionTree::path(std::span<const double> x) const {
  std::vector<PathStep> steps;
  std::size_t i = 0;
  while (nodes_[i].feature >= 0) {
    const TreeNode& n = nodes_[i];
    const auto f = static_cast<std::size_t>(n.feature);
    const bool left = x[f] <= n.threshold;
    steps.push_back({i, f, n.threshold, left});
    i = static_cast<std::size_t>(left ? n.left : n.right);
  }
  return steps;
}

std::size_t RegressionTree::depth() const {
  std::vector<std::size_t> d(nodes_.size(), 0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    best = std::max(best, d[i]);
    if (nodes_[i].feature >= 0) {
      d[static_cast<std::size_t>(nodes_[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes_[i].right)] = d[i] + 1;
    }
  }
  return best;
}

std::size_t RegressionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.feature < 0; }));
}

nlohmann::json RegressionTree::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const TreeNode& n : nodes_)
    arr.push_back({{"feature", n.feature}, {"threshold", n.threshold}, {"left", n.left}, {"right", n.right},
                   {"value", n.value}, {"samples", n.samples}});
  return arr;
}

RegressionTree RegressionTree::from_json(const nlohmann::json& j) {
  try {
    std::vector<TreeNode> nodes;
    for (const auto& n : j) {
      nodes.push_back({n.at("feature").get<int>(), n.at("threshold").get<double>(), n.at("left").get<int>(),
                       n.at("right").get<int>(), n.at("value").get<double>(), n.at("samples").get<std::size_t>()});
    }
    return RegressionTree(std::move(nodes));
  } catch (const nlohmann::json::exception& e) {
    throw ArtifactError(std::string("malformed regression tree: ") + e.what());
  }
}

RegressionTree fit_cart(const FeatureMatrix& x, std::span<const double> y, const CartParams& params) {
  if (x.empty() || x.size() != y.size()) throw Error("fit_cart: need a nonempty sample with one target per row");
  if (x.size() < params.min_samples_leaf) throw Error("fit_cart: fewer samples than min_samples_leaf");
  const std::size_t width = x[0].size();
  for (const auto& row : x)
    if (row.size() != width) throw Error("fit_cart: ragged feature matrix");

  std::vector<TreeNode> nodes;
  struct Pending {
    std::size_t node;
    std::vector<std::size_t> rows;
    std::size_t depth;
  };
  std::vector<std::size_t> all(x.size());
  std::iota(all.begin(), all.end(), 0);
  nodes.push_back({});
  // Breadth-first so node numbering is stable and parents precede children.
  std::vector<Pending> queue;
  queue.push_back({0, std::move(all), 0});
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    Pending cur = std::move(queue[qi]);
    TreeNode& node = nodes[cur.node];
    node.samples = cur.rows.size();
    node.value = mean_of(y, cur.rows);
    if (cur.depth >= params.max_depth) continue;
    if (sse_of(y, cur.rows, node.value) <= 0.0) continue;
    auto split = best_split(x, y, cur.rows, params.min_samples_leaf);
    if (!split || !(split->sse_reduction > 0.0)) continue;

    std::vector<std::size_t> left, right;
    for (std::size_t r : cur.rows) (x[r][split->feature] <= split->threshold ? left : right).push_back(r);
    const auto li = static_cast<int>(nodes.size());
    node.feature = static_cast<int>(split->feature);
    node.threshold = split->threshold;
    node.left = li;
    node.right = li + 1;
    nodes.push_back({});
    nodes.push_back({});
    queue.push_back({static_cast<std::size_t>(li), std::move(left), cur.depth + 1});
    queue.push_back({static_cast<std::size_t>(li + 1), std::move(right), cur.depth + 1});
  }
  return RegressionTree(std::move(nodes));
}

std::vector<double> residual_targets(const RegressionTree& tree, const FeatureMatrix& x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("residual_targets: row count mismatch");
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] - tree.predict(x[i]);
  return out;
}

}  // namespace casino::predictor
