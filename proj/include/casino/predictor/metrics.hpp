#pragma once

#include <span>

namespace casino::predictor {

/// 1 - SS_res / SS_tot. Throws Error on length mismatch, fewer than two
/// values, or zero variance in `actual`.
double r_squared(std::span<const double> actual, std::span<const double> predicted);

/// Pearson correlation; throws Error when either side has zero variance.
double pearson(std::span<const double> a, std::span<const double> b);

}  // namespace casino::predictor
