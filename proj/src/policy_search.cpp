#include "sdd/policy_search.hpp"

#include <cmath>
#include <stdexcept>

#include "sdd/parallel.hpp"
#include "sdd/seeding.hpp"
#include "sdd/simulator.hpp"

namespace sdd {

std::vector<PolicyParams> grid_points(PolicyKind kind, const GridSpec& grid) {
  std::vector<PolicyParams> points;
  const bool uses_gamma = kind == PolicyKind::DIST || kind == PolicyKind::OPT_BASIS;
  if (kind == PolicyKind::OPT) {
    points.push_back({PolicyKind::OPT, 0.0, 0.0, std::nullopt});
    return points;
  }
  if (grid.alphas.empty() || (uses_gamma && grid.gammas.empty()))
    throw std::invalid_argument("policy_search: empty grid");
  for (double a : grid.alphas) {
    if (!uses_gamma) {
      points.push_back({kind, a, 0.0, std::nullopt});
      continue;
    }
    for (double g : grid.gammas) points.push_back({kind, a, g, std::nullopt});
  }
  return points;
}

PolicySearchResult policy_search(PolicyKind kind, const InstanceConfig& instance, const GridSpec& grid, int runs,
                                 std::uint64_t seed, const ValueModel* value_model, unsigned threads) {
  if (runs < 1) throw std::invalid_argument("policy_search: runs must be >= 1");
  const auto points = grid_points(kind, grid);
  std::vector<double> revenue(points.size() * runs, 0.0);
  parallel_for(revenue.size(), threads, [&](std::size_t item) {
    const std::size_t g = item / runs;
    const std::size_t r = item % runs;
    EpisodeConfig config;
    config.instance = instance;
    config.policy = points[g];
    config.value_model = value_model;
    config.seed = episode_seed(seed, Purpose::validation, r);
    revenue[item] = run_episode(config).metrics.revenue;
  });

  PolicySearchResult out;
  std::size_t best = 0;
  for (std::size_t g = 0; g < points.size(); ++g) {
    GridEvaluation e{points[g]};
    for (int r = 0; r < runs; ++r) e.mean_revenue += revenue[g * runs + r];
    e.mean_revenue /= runs;
    if (runs > 1) {
      double ss = 0.0;
      for (int r = 0; r < runs; ++r) ss += std::pow(revenue[g * runs + r] - e.mean_revenue, 2);
      e.std_revenue = std::sqrt(ss / (runs - 1));
    }
    out.grid.push_back(e);
    if (e.mean_revenue > out.grid[best].mean_revenue) best = g;
  }
  out.best = out.grid[best].params;
  return out;
}

}  // namespace sdd
