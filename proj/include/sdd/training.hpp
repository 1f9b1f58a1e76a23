#pragma once

#include <cstdint>
#include <vector>

#include "sdd/instance.hpp"
#include "sdd/vfa.hpp"

namespace sdd {

struct TrainingOptions {
  int episodes = 1000;
  int batch = 50;
  double ridge = kRidge;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  int running_window = 100;
};

struct TrainingResult {
  ValueModel model;
  std::vector<double> profits;
  std::vector<double> running_average;
};

/// Offline ADP: simulate OPT episodes with the current value model, collect post-decision
/// observations, and refit every period by ridge least squares after each batch over all
/// observations so far. Episodes inside a batch share the model and run in parallel.
TrainingResult train(const InstanceConfig& instance, const TrainingOptions& options);

/// Trailing mean over at most `window` values ending at each index.
std::vector<double> running_average(const std::vector<double>& xs, int window);

/// Least-squares slope of ys against 0..n-1.
double least_squares_slope(const std::vector<double>& ys);

}  // namespace sdd
