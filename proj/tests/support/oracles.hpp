#pragma once

// Brute-force reference implementations shared by the unit tests and the
// acceptance checks. Each one is written for clarity, not speed, and avoids
// the library code it is compared against.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "casino/data/geo.hpp"
#include "casino/influence/dag.hpp"
#include "casino/predictor/cart.hpp"
#include "casino/spatial/index.hpp"

namespace casino::testing {

// Points in one of four regimes: a city, straddling the antimeridian, near a
// pole, and anywhere on the globe.
inline GeoPoint random_point(std::mt19937_64& rng, int regime) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (regime) {
    case 0:
      return {40.7 + 0.05 * u(rng), -74.0 + 0.05 * u(rng)};
    case 1:
      return {-10.0 + 20.0 * u(rng), u(rng) < 0.5 ? 179.5 + 0.5 * u(rng) : -180.0 + 0.5 * u(rng)};
    case 2:
      return {88.5 + 1.5 * u(rng), -180.0 + 360.0 * u(rng)};
    default:
      return {-90.0 + 180.0 * u(rng), -180.0 + 360.0 * u(rng)};
  }
}

// Ids of the points strictly within r of center, by checking every point.
inline std::vector<std::size_t> radius_scan(const std::vector<spatial::IndexedPoint>& pts, GeoPoint center, double r) {
  std::vector<std::size_t> ids;
  for (const auto& p : pts)
    if (haversine_m(center, p.pos) < r) ids.push_back(p.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

inline influence::WeightedDag random_dag(std::mt19937_64& rng, std::size_t n, double density) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  influence::WeightedDag dag;
  dag.in_edges.resize(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < j; ++i)
      if (u(rng) < density) dag.in_edges[j].emplace_back(i, 1.5 * u(rng));
  return dag;
}

// Sum over every directed path from v to u of the product of its edge weights.
inline double path_sum(const influence::WeightedDag& dag, std::size_t v, std::size_t u) {
  std::vector<std::vector<std::pair<std::size_t, double>>> out(dag.size());
  for (std::size_t j = 0; j < dag.size(); ++j)
    for (const auto& [i, w] : dag.in_edges[j]) out[i].emplace_back(j, w);
  double total = 0.0;
  std::function<void(std::size_t, double)> walk = [&](std::size_t node, double prod) {
    if (node == u) {
      total += prod;
      return;
    }
    for (const auto& [next, w] : out[node]) walk(next, prod * w);
  };
  walk(v, 1.0);
  return total;
}

inline double sse_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double s = 0.0;
  for (double d : v) s += (d - m) * (d - m);
  return s;
}

struct ExhaustiveSplit {
  std::size_t feature = 0;
  double threshold = 0.0;
  double sse = std::numeric_limits<double>::infinity();
  bool found = false;
};

// Tries every feature and every midpoint between distinct sorted values and
// evaluates both children directly. Near-equal SSEs count as ties, which go
// to the lower feature and then the lower threshold.
inline ExhaustiveSplit exhaustive_split(const predictor::FeatureMatrix& x, const std::vector<double>& y,
                                        std::size_t min_leaf) {
  ExhaustiveSplit best;
  const std::size_t n = y.size();
  for (std::size_t f = 0; f < x[0].size(); ++f) {
    std::vector<double> vals;
    for (const auto& row : x) vals.push_back(row[f]);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    for (std::size_t k = 0; k + 1 < vals.size(); ++k) {
      double t = vals[k] + (vals[k + 1] - vals[k]) / 2.0;
      if (!(t < vals[k + 1])) t = vals[k];
      std::vector<double> l, r;
      for (std::size_t i = 0; i < n; ++i) (x[i][f] <= t ? l : r).push_back(y[i]);
      if (l.size() < min_leaf || r.size() < min_leaf) continue;
      const double sse = sse_of(l) + sse_of(r);
      if (!best.found || sse < best.sse - 1e-9 * std::max(1.0, best.sse)) best = {f, t, sse, true};
    }
  }
  return best;
}

// A random CART problem of up to 200 rows and 5 columns, mixing continuous
// columns, coarse columns with many ties, and a duplicated column.
inline void random_split_problem(std::mt19937_64& rng, predictor::FeatureMatrix& x, std::vector<double>& y,
                                 std::size_t& min_leaf) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t n = 10 + rng() % 191;
  const std::size_t width = 1 + rng() % 5;
  min_leaf = 1 + rng() % 12;
  x.assign(n, std::vector<double>(width));
  y.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < width; ++f) x[i][f] = f % 2 == 0 ? u(rng) : std::floor(u(rng) * 5.0);
    y[i] = 2.0 * x[i][0] + (width > 1 ? x[i][1] : 0.0) + 0.3 * u(rng);
  }
  if (width > 2)
    for (auto& row : x) row[2] = row[1];
}

// Solves A x = b by Gaussian elimination with partial pivoting.
inline std::vector<double> solve_linear(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double m = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= m * a[c][k];
      b[r] -= m * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

// A random symmetric positive definite quadratic 0.5 x'Ax - b'x of dimension 1..6.
struct SpdQuadratic {
  std::vector<std::vector<double>> a;
  std::vector<double> b;

  double operator()(std::span<const double> x) const {
    double q = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) q += 0.5 * x[i] * a[i][j] * x[j];
      q -= b[i] * x[i];
    }
    return q;
  }
};

inline SpdQuadratic random_spd_quadratic(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const std::size_t n = 1 + rng() % 6;
  std::vector<std::vector<double>> m(n, std::vector<double>(n));
  SpdQuadratic q{std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)), std::vector<double>(n)};
  for (auto& row : m)
    for (auto& v : row) v = g(rng);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) q.a[i][j] += m[i][k] * m[j][k];
      if (i == j) q.a[i][j] += 0.5;
    }
  for (auto& v : q.b) v = 3.0 * g(rng);
  return q;
}

}  // namespace casino::testing
