#include "casino/predictor/residual_model.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "casino/errors.hpp"

namespace casino::predictor {

namespace {

constexpr std::array<double, 5> kLambdaStartGrid = {0.01, 0.1, 1.0, 10.0, 100.0};

double mean_squared(std::span<const influence::SeedDag> dags, std::span<const double> y, double alpha, double beta,
                    double ls, double lc) {
  double s = 0.0;
  for (std::size_t i = 0; i < dags.size(); ++i) {
    const double r = y[i] - alpha - beta * dags[i].influence(ls, lc);
    s += r * r;
  }
  return s / static_cast<double>(dags.size());
}

}  // namespace

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  LineFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  return f;
}

ResidualFit fit_residual_model(std::span<const influence::SeedDag> dags, std::span<const double> residuals,
                               Timestamp seed_horizon, const ResidualFitOptions& opt) {
  if (dags.size() != residuals.size()) throw Error("fit_residual_model: one residual per event required");
  if (dags.empty()) throw Error("fit_residual_model: no training events");

  ResidualFit out;
  out.params.seed_horizon = seed_horizon;

  bool any_edge = false;
  for (const auto& d : dags)
    for (const auto& in : d.in_mass) any_edge = any_edge || !in.empty();
  if (!any_edge) {
    double m = 0.0;
    for (double r : residuals) m += r;
    out.params.alpha = m / static_cast<double>(residuals.size());
    out.params.beta = 0.0;
    out.identifiable = false;
    out.converged = true;
    out.mse = mean_squared(dags, residuals, out.params.alpha, 0.0, 1.0, 1.0);
    out.warnings.push_back("influence feature is zero for every training event; beta is unidentifiable and set to 0");
    return out;
  }

  std::vector<double> x0;
  if (opt.tie_lambdas) {
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> infl(dags.size());
    for (double lambda : kLambdaStartGrid) {
      for (std::size_t i = 0; i < dags.size(); ++i) infl[i] = dags[i].influence(lambda, lambda);
      const LineFit lf = fit_line(infl, residuals);
      const double mse = mean_squared(dags, residuals, lf.intercept, lf.slope, lambda, lambda);
      if (mse < best) {
        best = mse;
        x0 = {lf.intercept, lf.slope, std::log(lambda)};
      }
    }
  } else {
    ResidualFitOptions tied = opt;
    tied.tie_lambdas = true;
    const ResidualFit t = fit_residual_model(dags, residuals, seed_horizon, tied);
    x0 = {t.params.alpha, t.params.beta, std::log(t.params.lambda_same), std::log(t.params.lambda_cross)};
  }

  const bool tie = opt.tie_lambdas;
  Objective f = [&](std::span<const double> x) {
    const double ls = std::exp(x[2]);
    const double lc = tie ? ls : std::exp(x[3]);
    return mean_squared(dags, residuals, x[0], x[1], ls, lc);
  };
  const BfgsResult r = bfgs_minimize(f, x0, opt.bfgs);
  out.params.alpha = r.x[0];
  out.params.beta = r.x[1];
  out.params.lambda_same = std::exp(r.x[2]);
  out.params.lambda_cross = tie ? out.params.lambda_same : std::exp(r.x[3]);
  out.mse = r.f;
  out.iterations = r.iterations;
  out.converged = r.converged;
  if (!r.converged)
    out.warnings.push_back("BFGS stopped before the gradient tolerance was reached (gradient norm " +
                           std::to_string(r.grad_norm) + ")");
  return out;
}

ResidualFit fit_residual_model(const Dataset& train, std::span<const double> residuals,
                               const influence::PropagationStats& stats, Timestamp seed_horizon,
                               const ResidualFitOptions& opt) {
  std::vector<influence::SeedDag> dags;
  dags.reserve(train.events().size());
  for (std::size_t ei = 0; ei < train.events().size(); ++ei)
    dags.push_back(influence::build_seed_dag(train, influence::event_seeds(train, ei), stats, seed_horizon));
  return fit_residual_model(dags, residuals, seed_horizon, opt);
}

}  // namespace casino::predictor
