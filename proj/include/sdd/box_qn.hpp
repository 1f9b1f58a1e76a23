#pragma once

#include <functional>
#include <span>
#include <vector>

namespace sdd {

struct BoxOptions {
  int max_iterations = 200;
  double gradient_tolerance = 1e-9;
  double function_tolerance = 1e-15;
  double gradient_step = 1e-6;
};

struct BoxResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
};

using Objective = std::function<double(std::span<const double>)>;

/// Minimizes `f` over the box [lower, upper] with a projected BFGS method (active-set
/// variant of limited-memory BFGS-B for small dimensions) and finite-difference gradients.
BoxResult minimize_box(const Objective& f, std::vector<double> start, std::span<const double> lower,
                       std::span<const double> upper, const BoxOptions& options = {});

}  // namespace sdd
