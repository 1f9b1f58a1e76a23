#include "sdd/pricing.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "sdd/box_qn.hpp"

namespace sdd {

using nlohmann::json;

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::FIX: return "FIX";
    case PolicyKind::DIST: return "DIST";
    case PolicyKind::OPP: return "OPP";
    case PolicyKind::OPT: return "OPT";
    case PolicyKind::OPT_BASIS: return "OPT+basis";
  }
  return "?";
}

PolicyKind parse_policy(const std::string& s) {
  if (s == "FIX" || s == "fix") return PolicyKind::FIX;
  if (s == "DIST" || s == "dist") return PolicyKind::DIST;
  if (s == "OPP" || s == "opp") return PolicyKind::OPP;
  if (s == "OPT" || s == "opt") return PolicyKind::OPT;
  if (s == "OPT+basis" || s == "OPT_BASIS" || s == "opt+basis" || s == "opt_basis") return PolicyKind::OPT_BASIS;
  throw std::invalid_argument("unknown policy '" + s + "'");
}

bool needs_value_model(PolicyKind kind) {
  return kind == PolicyKind::OPP || kind == PolicyKind::OPT || kind == PolicyKind::OPT_BASIS;
}

void PolicyParams::validate() const {
  if (!(alpha >= 0.0) || !(gamma >= 0.0)) throw std::invalid_argument("policy: alpha and gamma must be >= 0");
  const OptionArray b = basis.value_or(fixed_prices(alpha));
  for (double x : b) {
    if (!(x >= 0.0)) throw std::invalid_argument("policy: basis prices must be >= 0");
    if (!(p_max > x)) throw std::invalid_argument("policy: p_max must exceed every basis price");
  }
}

json to_json(const PolicyParams& p) {
  json j{{"schema", "sdd_policy/1"}, {"kind", to_string(p.kind)}, {"alpha", p.alpha},
         {"gamma", p.gamma},         {"p_max", p.p_max},          {"sentinel_price", kSentinelPrice}};
  if (p.basis) j["basis"] = *p.basis;
  return j;
}

PolicyParams policy_from_json(const json& j) {
  if (j.value("schema", "") != "sdd_policy/1") throw std::invalid_argument("policy: unsupported schema");
  PolicyParams p;
  p.kind = parse_policy(j.at("kind").get<std::string>());
  p.alpha = j.value("alpha", p.alpha);
  p.gamma = j.value("gamma", p.gamma);
  p.p_max = j.value("p_max", p.p_max);
  if (j.contains("basis")) {
    const auto b = j.at("basis").get<std::vector<double>>();
    if (b.size() != kOptions) throw std::invalid_argument("policy: three basis prices expected");
    p.basis = OptionArray{b[0], b[1], b[2]};
  }
  p.validate();
  return p;
}

OptionArray fixed_prices(double alpha) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("fixed_prices: alpha must be >= 0");
  return {alpha, 0.75 * alpha, 0.5 * alpha};
}

OptionArray dist_prices(double alpha, double gamma, double d_km, double d_max_km) {
  if (!(d_km >= 0.0) || !(d_km <= d_max_km) || !(d_max_km > 0.0))
    throw std::invalid_argument("dist_prices: distance outside [0, d_max]");
  const double surcharge = gamma * d_km / d_max_km;
  auto p = fixed_prices(alpha);
  for (double& x : p) x += surcharge;
  return p;
}

OptionArray opp_prices(const OptionArray& basis, const OptionArray& opportunity) {
  OptionArray p{};
  for (int j = 0; j < kOptions; ++j) p[j] = std::max(basis[j], opportunity[j]);
  return p;
}

double pricing_objective(const PricingProblem& problem, const OptionArray& prices) {
  const auto pc = option_probabilities(prices, problem.choice);
  double total = 0.0;
  for (int j = 0; j < kOptions; ++j) {
    if (!problem.feasible[j]) continue;
    const double q = problem.on_time[j];
    total += pc[j] * (prices[j] * q - problem.penalty_cmiss * (1.0 - q) - problem.opportunity[j]);
  }
  return total;
}

PricingSolution optimize_prices(const PricingProblem& problem) {
  std::vector<int> free;
  for (int j = 0; j < kOptions; ++j)
    if (problem.feasible[j]) free.push_back(j);
  if (free.empty()) throw std::invalid_argument("optimize_prices: no feasible option");

  const std::size_t n = free.size();
  std::vector<double> lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = problem.lower[free[i]];
    hi[i] = problem.p_max;
    if (!(lo[i] <= hi[i])) throw std::invalid_argument("optimize_prices: lower bound above p_max");
  }

  auto expand = [&](std::span<const double> x) {
    OptionArray prices{kSentinelPrice, kSentinelPrice, kSentinelPrice};
    for (std::size_t i = 0; i < n; ++i) prices[free[i]] = x[i];
    return prices;
  };
  const Objective negated = [&](std::span<const double> x) { return -pricing_objective(problem, expand(x)); };

  // Lower corner, upper corner, midpoint, and two interior points near the lower corner where
  // logit demand is still elastic.
  std::vector<std::vector<double>> starts;
  starts.push_back(lo);
  starts.push_back(hi);
  for (double shift : {-1.0, 1.0, 2.0}) {
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = shift < 0.0 ? 0.5 * (lo[i] + hi[i]) : std::min(hi[i], lo[i] + shift);
    starts.push_back(s);
  }

  PricingSolution best;
  bool have = false;
  for (auto& s : starts) {
    const auto r = minimize_box(negated, s, lo, hi);
    if (!have || -r.value > best.objective) {
      best.prices = expand(r.x);
      best.objective = -r.value;
      have = true;
    }
  }
  return best;
}

PriceQuote quote(const PolicyParams& policy, const DecisionState& state, const Customer& customer,
                 const FeasibilityMap& feasibility, const ValueModel* value_model, const InstanceConfig& instance,
                 const PlanningContext& ctx, const ChoiceParams& choice) {
  PriceQuote q;
  for (int j = 0; j < kOptions; ++j) {
    q.feasible[j] = feasibility[j].has_value();
    q.on_time[j] = feasibility[j] ? feasibility[j]->new_customer_on_time : 0.0;
  }
  if (!any_feasible(feasibility)) return q;

  OptionArray raw{};
  const double d = distance(instance.depot, customer.location);
  const double d_max = instance.max_depot_distance_km();
  switch (policy.kind) {
    case PolicyKind::FIX:
      raw = fixed_prices(policy.alpha);
      break;
    case PolicyKind::DIST:
      raw = dist_prices(policy.alpha, policy.gamma, std::min(d, d_max), d_max);
      break;
    case PolicyKind::OPP:
    case PolicyKind::OPT:
    case PolicyKind::OPT_BASIS: {
      if (value_model) q.opportunity = opportunity_costs(*value_model, state.routes, feasibility, ctx);
      if (policy.kind == PolicyKind::OPP) {
        raw = opp_prices(policy.basis.value_or(fixed_prices(policy.alpha)), q.opportunity);
        break;
      }
      PricingProblem problem;
      problem.feasible = q.feasible;
      problem.opportunity = q.opportunity;
      problem.on_time = q.on_time;
      problem.penalty_cmiss = ctx.penalty_cmiss;
      problem.p_max = policy.p_max;
      problem.choice = choice;
      if (policy.kind == PolicyKind::OPT_BASIS)
        problem.lower = dist_prices(policy.alpha, policy.gamma, std::min(d, d_max), d_max);
      raw = optimize_prices(problem).prices;
      break;
    }
  }
  for (int j = 0; j < kOptions; ++j) q.prices[j] = q.feasible[j] ? raw[j] : kSentinelPrice;
  return q;
}

}  // namespace sdd
