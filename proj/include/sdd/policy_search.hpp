#pragma once

#include <cstdint>
#include <vector>

#include "sdd/pricing.hpp"

namespace sdd {

struct GridSpec {
  std::vector<double> alphas{0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0};
  std::vector<double> gammas{0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
};

struct GridEvaluation {
  PolicyParams params;
  double mean_revenue = 0.0;
  double std_revenue = 0.0;
};

struct PolicySearchResult {
  PolicyParams best;
  std::vector<GridEvaluation> grid;
};

/// Grid points searched for a policy kind: alpha for FIX and OPP, alpha x gamma for DIST and
/// OPT+basis, a single point for OPT.
std::vector<PolicyParams> grid_points(PolicyKind kind, const GridSpec& grid);

/// Mean validation revenue of every grid point over `runs` episodes with common random numbers;
/// returns the argmax (first one on ties).
PolicySearchResult policy_search(PolicyKind kind, const InstanceConfig& instance, const GridSpec& grid, int runs,
                                 std::uint64_t seed, const ValueModel* value_model, unsigned threads);

}  // namespace sdd
