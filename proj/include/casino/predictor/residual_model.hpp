#pragma once

#include <span>
#include <string>
#include <vector>

#include "casino/data/dataset.hpp"
#include "casino/influence/propagation.hpp"
#include "casino/predictor/bfgs.hpp"

namespace casino::predictor {

struct ResidualFitOptions {
  BfgsOptions bfgs;
  /// Shared lambda for same- and cross-group history (the CASINO(-) variant).
  bool tie_lambdas = false;
};

struct ResidualFit {
  influence::InfluenceParams params;
  double mse = 0.0;
  bool identifiable = true;  // false when every I(e) is 0 whatever the lambdas
  int iterations = 0;
  bool converged = false;
  std::vector<std::string> warnings;
};

/// Least squares fit of y_e ~ alpha + beta * I(e; lambda_g, lambda'_g) over
/// (alpha, beta, log lambda_g, log lambda'_g), or with one shared log lambda
/// when tied. The start point is the best closed-form (alpha, beta) over a
/// small tied-lambda grid; the untied fit starts from the tied optimum.
ResidualFit fit_residual_model(std::span<const influence::SeedDag> dags, std::span<const double> residuals,
                               Timestamp seed_horizon, const ResidualFitOptions& opt = {});

/// Convenience overload building the seed DAGs of every event of `train`.
ResidualFit fit_residual_model(const Dataset& train, std::span<const double> residuals,
                               const influence::PropagationStats& stats, Timestamp seed_horizon,
                               const ResidualFitOptions& opt = {});

/// Ordinary least squares of y on a single regressor; slope 0 when x is constant.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace casino::predictor
