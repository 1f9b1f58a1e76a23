#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "sdd/choice.hpp"
#include "sdd/routing.hpp"
#include "sdd/vfa.hpp"

namespace sdd {

enum class PolicyKind { FIX, DIST, OPP, OPT, OPT_BASIS };

std::string to_string(PolicyKind kind);
PolicyKind parse_policy(const std::string& s);
/// OPP, OPT and OPT+basis price from opportunity costs and need a value model.
bool needs_value_model(PolicyKind kind);

struct PolicyParams {
  PolicyKind kind = PolicyKind::FIX;
  double alpha = 2.0;
  double gamma = 0.0;
  /// OPP basis prices; defaults to fixed_prices(alpha) when unset.
  std::optional<OptionArray> basis;
  double p_max = 20.0;

  void validate() const;
};

nlohmann::json to_json(const PolicyParams& p);
PolicyParams policy_from_json(const nlohmann::json& j);

OptionArray fixed_prices(double alpha);
OptionArray dist_prices(double alpha, double gamma, double d_km, double d_max_km);
OptionArray opp_prices(const OptionArray& basis, const OptionArray& opportunity);

/// Inputs of the expected-revenue pricing problem. Options without `feasible` are pinned to
/// kSentinelPrice.
struct PricingProblem {
  std::array<bool, kOptions> feasible{};
  OptionArray opportunity{};
  OptionArray on_time{};
  double penalty_cmiss = 0.0;
  OptionArray lower{};
  double p_max = 20.0;
  ChoiceParams choice{};
};

/// sum_j P_choice(prices, j) * (p_j * P_on_time,j - c_miss * (1 - P_on_time,j) - O_j);
/// the next-day option contributes nothing.
double pricing_objective(const PricingProblem& problem, const OptionArray& prices);

struct PricingSolution {
  OptionArray prices{};
  double objective = 0.0;
};

/// Maximizes pricing_objective over [lower, p_max] for the feasible options with the bounded
/// quasi-Newton solver, keeping the best of five starts.
PricingSolution optimize_prices(const PricingProblem& problem);

struct PriceQuote {
  OptionArray prices{kSentinelPrice, kSentinelPrice, kSentinelPrice};
  std::array<bool, kOptions> feasible{};
  OptionArray on_time{};
  OptionArray opportunity{};
};

/// Prices the pending customer under `policy`. `value_model` may be null for FIX and DIST; a
/// null model under OPP/OPT means zero opportunity costs.
PriceQuote quote(const PolicyParams& policy, const DecisionState& state, const Customer& customer,
                 const FeasibilityMap& feasibility, const ValueModel* value_model, const InstanceConfig& instance,
                 const PlanningContext& ctx, const ChoiceParams& choice = {});

}  // namespace sdd
