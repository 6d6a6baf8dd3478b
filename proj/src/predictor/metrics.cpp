#include "casino/predictor/metrics.hpp"

#include <cmath>

#include "casino/errors.hpp"

namespace casino::predictor {

namespace {

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double d : v) s += d;
  return s / static_cast<double>(v.size());
}

}  // namespace

double r_squared(std::span<const double> actual, std::span<const double> predicted) {
  if (actual.size() != predicted.size()) throw Error("r_squared: length mismatch");
  if (actual.size() < 2) throw Error("r_squared: need at least two values");
  const double m = mean_of(actual);
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    ss_res += (actual[i] - predicted[i]) * (actual[i] - predicted[i]);
    ss_tot += (actual[i] - m) * (actual[i] - m);
  }
  if (ss_tot == 0.0) throw Error("r_squared: actual values have zero variance");
  return 1.0 - ss_res / ss_tot;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) throw Error("pearson: need two equal-length samples of size >= 2");
  const double ma = mean_of(a), mb = mean_of(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) throw Error("pearson: zero variance");
  return sab / std::sqrt(saa * sbb);
}

}  // namespace casino::predictor
