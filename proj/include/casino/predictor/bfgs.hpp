#pragma once

#include <functional>
#include <span>
#include <vector>

namespace casino::predictor {

using Objective = std::function<double(std::span<const double>)>;

struct BfgsOptions {
  double tol = 1e-8;  // on the gradient norm
  int max_iter = 200;
  double armijo_c = 1e-4;
  double fd_step = 1e-6;  // relative to max(1, |x_i|)
  int max_backtracks = 60;
};

struct BfgsResult {
  std::vector<double> x;
  double f = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;  // gradient norm fell below tol
};

/// Central-difference gradient.
std::vector<double> numerical_gradient(const Objective& f, std::span<const double> x, double step);

/// Quasi-Newton minimization with the BFGS inverse-Hessian update and an
/// Armijo backtracking line search. Trial points with a non-finite objective
/// are treated as overshoot; NumericalError (carrying the last iterate) is
/// raised when the objective or gradient at an iterate is not finite, or
/// when no finite trial point can be found. Stops early, unconverged, when
/// even a steepest-descent step yields no decrease.
BfgsResult bfgs_minimize(const Objective& f, std::vector<double> x0, const BfgsOptions& opt = {});

}  // namespace casino::predictor
