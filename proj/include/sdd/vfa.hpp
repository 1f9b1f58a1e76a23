#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "sdd/routing.hpp"
#include "sdd/state.hpp"

namespace sdd {

inline constexpr int kFeatures = 5;

/// Route features scored by the value model.
struct FeatureVector {
  double free_time_budget = 0.0;       // f1, min
  double flexibility = 0.0;            // f2, min
  double all_on_time_prob = 1.0;       // f3
  double worst_case_budget = 0.0;      // f4, min
  double avg_dist_per_customer = 0.0;  // f5, km

  std::array<double, kFeatures> as_array() const {
    return {free_time_budget, flexibility, all_on_time_prob, worst_case_budget, avg_dist_per_customer};
  }
};

/// f1/f4 use the latest expected depot return over the fleet; f5 divides the remaining planned
/// path length of all vehicles by the number of routed customers.
FeatureVector extract_features(const RoutePlan& plan, const PlanningContext& ctx);

/// Per-period linear value function: c_b + sum_i c_i f_i, one row per period.
class ValueModel {
 public:
  using Row = std::array<double, kFeatures + 1>;  // baseline first

  explicit ValueModel(double shift_end_min = 480.0, double period_length_min = kPeriodMinutes);

  int periods() const { return static_cast<int>(rows_.size()); }
  double period_length_min() const { return period_length_; }
  int period_index(double t_min) const;

  const Row& row(int period) const { return rows_.at(period); }
  Row& row(int period) { return rows_.at(period); }

  /// Linear value before clamping.
  double raw_value(double t_min, const FeatureVector& f) const;
  /// Value clamped below at 0.
  double value(double t_min, const FeatureVector& f) const;

  bool all_zero() const;

  // Training metadata.
  std::int64_t episodes = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const ValueModel&, const ValueModel&) = default;

 private:
  double period_length_;
  std::vector<Row> rows_;
};

nlohmann::json to_json(const ValueModel& model);
ValueModel value_model_from_json(const nlohmann::json& j);

/// max(0, V(current) - V(candidate)) per feasible option, both valued at ctx.now_min; 0 for
/// options without a candidate.
OptionArray opportunity_costs(const ValueModel& model, const RoutePlan& current, const FeasibilityMap& candidates,
                              const PlanningContext& ctx);

/// One training sample: post-decision features and the revenue settled after that epoch.
struct Observation {
  int period = 0;
  FeatureVector features;
  double remaining_revenue = 0.0;
};

/// Accumulated normal equations of one period's ridge regression.
class RegressionAccumulator {
 public:
  void add(const FeatureVector& f, double target);
  std::int64_t count() const { return count_; }
  /// Solves (X^T X + ridge I) c = X^T y, followed by kRidgeRefinements iterated-ridge steps
  /// toward the least-squares solution. Returns zeros when no samples were added.
  ValueModel::Row solve(double ridge) const;

 private:
  std::array<double, (kFeatures + 1) * (kFeatures + 1)> xtx_{};
  std::array<double, kFeatures + 1> xty_{};
  std::int64_t count_ = 0;
};

inline constexpr double kRidge = 1e-3;
inline constexpr int kRidgeRefinements = 3;

/// Refits every period of `model` from its accumulator.
void refit(ValueModel& model, const std::vector<RegressionAccumulator>& per_period, double ridge = kRidge);

}  // namespace sdd
