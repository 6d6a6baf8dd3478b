#include "casino/predictor/bfgs.hpp"

#include <algorithm>
#include <cmath>

#include "casino/errors.hpp"

namespace casino::predictor {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double d) { return std::isfinite(d); });
}

void set_identity(std::vector<double>& h, std::size_t n) {
  std::fill(h.begin(), h.end(), 0.0);
  for (std::size_t i = 0; i < n; ++i) h[i * n + i] = 1.0;
}

}  // namespace

std::vector<double> numerical_gradient(const Objective& f, std::span<const double> x, double step) {
  std::vector<double> g(x.size());
  std::vector<double> probe(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = step * std::max(1.0, std::abs(x[i]));
    probe[i] = x[i] + h;
    const double up = f(probe);
    probe[i] = x[i] - h;
    const double down = f(probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

BfgsResult bfgs_minimize(const Objective& f, std::vector<double> x0, const BfgsOptions& opt) {
  const std::size_t n = x0.size();
  BfgsResult res;
  res.x = std::move(x0);
  res.f = f(res.x);
  if (!std::isfinite(res.f)) throw NumericalError("objective is not finite at the starting point", res.x);
  auto g = numerical_gradient(f, res.x, opt.fd_step);
  if (!all_finite(g)) throw NumericalError("gradient is not finite", res.x);
  res.grad_norm = std::sqrt(dot(g, g));

  std::vector<double> h(n * n);
  set_identity(h, n);
  bool h_is_identity = true;
  std::vector<double> p(n), x_new(n), s(n), yv(n), hy(n);

  while (res.iterations < opt.max_iter) {
    if (res.grad_norm < opt.tol) {
      res.converged = true;
      return res;
    }
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = 0.0;
      for (std::size_t j = 0; j < n; ++j) p[i] -= h[i * n + j] * g[j];
    }
    double slope = dot(g, p);
    if (!(slope < 0.0)) {
      set_identity(h, n);
      h_is_identity = true;
      for (std::size_t i = 0; i < n; ++i) p[i] = -g[i];
      slope = dot(g, p);
    }

    double step = 1.0, f_new = 0.0;
    bool accepted = false, saw_finite = false;
    for (int k = 0; k < opt.max_backtracks; ++k, step *= 0.5) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = res.x[i] + step * p[i];
      f_new = f(x_new);
      if (!std::isfinite(f_new)) continue;
      saw_finite = true;
      if (f_new <= res.f + opt.armijo_c * step * slope) {
        accepted = true;
        break;
      }
    }
    if (!saw_finite) throw NumericalError("objective is not finite anywhere along the search direction", res.x);
    if (!accepted) {
      if (h_is_identity) return res;  // no descent possible at this resolution
      set_identity(h, n);
      h_is_identity = true;
      continue;
    }

    auto g_new = numerical_gradient(f, x_new, opt.fd_step);
    if (!all_finite(g_new)) throw NumericalError("gradient is not finite", x_new);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = x_new[i] - res.x[i];
      yv[i] = g_new[i] - g[i];
    }
    const double sy = dot(s, yv);
    if (sy > 1e-12 * std::sqrt(dot(s, s) * dot(yv, yv))) {
      // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
      const double rho = 1.0 / sy;
      for (std::size_t i = 0; i < n; ++i) {
        hy[i] = 0.0;
        for (std::size_t j = 0; j < n; ++j) hy[i] += h[i * n + j] * yv[j];
      }
      const double yhy = dot(yv, hy);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          h[i * n + j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
      h_is_identity = false;
    }
    res.x = x_new;
    res.f = f_new;
    g = std::move(g_new);
    res.grad_norm = std::sqrt(dot(g, g));
    ++res.iterations;
  }
  res.converged = res.grad_norm < opt.tol;
  return res;
}

}  // namespace casino::predictor
