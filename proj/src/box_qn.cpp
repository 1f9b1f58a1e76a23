#include "sdd/box_qn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sdd {

namespace {

using Vec = std::vector<double>;

void project(Vec& x, std::span<const double> lo, std::span<const double> hi) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
}

// Central differences, one-sided where a bound is closer than the step.
Vec gradient(const Objective& f, const Vec& x, double fx, std::span<const double> lo, std::span<const double> hi,
             double step) {
  Vec g(x.size());
  Vec probe = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = step * std::max(1.0, std::abs(x[i]));
    const bool up = x[i] + h <= hi[i];
    const bool down = x[i] - h >= lo[i];
    if (up && down) {
      probe[i] = x[i] + h;
      const double fp = f(probe);
      probe[i] = x[i] - h;
      const double fm = f(probe);
      g[i] = (fp - fm) / (2.0 * h);
    } else if (up) {
      probe[i] = x[i] + h;
      g[i] = (f(probe) - fx) / h;
    } else if (down) {
      probe[i] = x[i] - h;
      g[i] = (fx - f(probe)) / h;
    } else {
      g[i] = 0.0;
    }
    probe[i] = x[i];
  }
  return g;
}

std::vector<bool> active_set(const Vec& x, const Vec& g, std::span<const double> lo, std::span<const double> hi) {
  std::vector<bool> active(x.size(), false);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double eps = 1e-12 * std::max(1.0, std::abs(x[i]));
    active[i] = (x[i] <= lo[i] + eps && g[i] > 0.0) || (x[i] >= hi[i] - eps && g[i] < 0.0);
  }
  return active;
}

}  // namespace

BoxResult minimize_box(const Objective& f, std::vector<double> start, std::span<const double> lower,
                       std::span<const double> upper, const BoxOptions& options) {
  const std::size_t n = start.size();
  if (lower.size() != n || upper.size() != n) throw std::invalid_argument("minimize_box: dimension mismatch");
  for (std::size_t i = 0; i < n; ++i)
    if (!(lower[i] <= upper[i])) throw std::invalid_argument("minimize_box: empty box");

  Vec x = std::move(start);
  project(x, lower, upper);
  double fx = f(x);
  Vec g = gradient(f, x, fx, lower, upper, options.gradient_step);
  // Dense inverse-Hessian approximation; n is tiny.
  Vec H(n * n, 0.0);
  auto reset = [&] {
    std::fill(H.begin(), H.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) H[i * n + i] = 1.0;
  };
  reset();

  BoxResult result;
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    const auto active = active_set(x, g, lower, upper);
    double pg = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (!active[i]) pg = std::max(pg, std::abs(g[i]));
    if (pg <= options.gradient_tolerance) break;

    Vec d(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (active[i]) continue;
      for (std::size_t k = 0; k < n; ++k)
        if (!active[k]) d[i] -= H[i * n + k] * g[k];
    }
    double slope = 0.0;
    for (std::size_t i = 0; i < n; ++i) slope += g[i] * d[i];
    if (!(slope < 0.0)) {
      reset();
      for (std::size_t i = 0; i < n; ++i) d[i] = active[i] ? 0.0 : -g[i];
    }

    // Backtracking Armijo search along the projected path.
    double alpha = 1.0;
    Vec trial(n);
    double ft = fx;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] + alpha * d[i];
      project(trial, lower, upper);
      ft = f(trial);
      double decrease = 0.0;
      for (std::size_t i = 0; i < n; ++i) decrease += g[i] * (trial[i] - x[i]);
      if (ft <= fx + 1e-4 * decrease) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;

    Vec gt = gradient(f, trial, ft, lower, upper, options.gradient_step);
    Vec s(n), y(n);
    double sy = 0.0, step_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = trial[i] - x[i];
      y[i] = gt[i] - g[i];
      sy += s[i] * y[i];
      step_norm = std::max(step_norm, std::abs(s[i]));
    }
    const double improvement = fx - ft;
    x = trial;
    fx = ft;
    g = std::move(gt);
    if (sy > 1e-12) {
      // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
      const double rho = 1.0 / sy;
      Vec Hy(n, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) Hy[i] += H[i * n + k] * y[k];
      double yHy = 0.0;
      for (std::size_t i = 0; i < n; ++i) yHy += y[i] * Hy[i];
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
          H[i * n + k] += -rho * (Hy[i] * s[k] + s[i] * Hy[k]) + (rho * rho * yHy + rho) * s[i] * s[k];
    }
    if (improvement <= options.function_tolerance * (1.0 + std::abs(fx)) && step_norm < 1e-12) break;
  }
  result.x = std::move(x);
  result.value = fx;
  result.iterations = it;
  return result;
}

}  // namespace sdd
