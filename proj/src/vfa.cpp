#include "sdd/vfa.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace sdd {

using nlohmann::json;

FeatureVector extract_features(const RoutePlan& plan, const PlanningContext& ctx) {
  FeatureVector f;
  const double t_max = ctx.shift_end_min;
  double latest = ctx.now_min;
  double latest_2std = ctx.now_min;
  double slack_sum = 0.0;
  double path_km = 0.0;
  int routed = 0;
  for (const auto& route : plan.vehicles) {
    const auto ev = evaluate_vehicle(route, ctx);
    latest = std::max(latest, ev.final_arrival_mean);
    latest_2std = std::max(latest_2std, ev.final_arrival_mean + 2.0 * std::sqrt(ev.final_arrival_var));
    Point at = route.origin;
    for (std::size_t i = 0; i < route.stops.size(); ++i) {
      const auto& stop = route.stops[i];
      path_km += distance(at, stop.location);
      at = stop.location;
      if (!stop.is_customer()) continue;
      ++routed;
      slack_sum += stop.deadline_abs_min - ev.arrival_mean[i];
      f.all_on_time_prob *= ev.on_time[i];
    }
  }
  f.free_time_budget = t_max - latest;
  f.worst_case_budget = t_max - latest_2std;
  f.flexibility = routed > 0 ? slack_sum / routed : t_max - ctx.now_min;
  f.avg_dist_per_customer = routed > 0 ? path_km / routed : 0.0;
  return f;
}

ValueModel::ValueModel(double shift_end_min, double period_length_min) : period_length_(period_length_min) {
  if (!(period_length_min > 0.0)) throw std::invalid_argument("ValueModel: period length must be positive");
  const int n = std::max(1, static_cast<int>(std::ceil(shift_end_min / period_length_min)));
  rows_.assign(n, Row{});
}

int ValueModel::period_index(double t_min) const {
  return std::min(period_of(std::max(0.0, t_min), period_length_), periods() - 1);
}

double ValueModel::raw_value(double t_min, const FeatureVector& f) const {
  const Row& c = rows_[period_index(t_min)];
  const auto x = f.as_array();
  double v = c[0];
  for (int i = 0; i < kFeatures; ++i) v += c[i + 1] * x[i];
  return v;
}

double ValueModel::value(double t_min, const FeatureVector& f) const { return std::max(0.0, raw_value(t_min, f)); }

bool ValueModel::all_zero() const {
  return std::all_of(rows_.begin(), rows_.end(),
                     [](const Row& r) { return std::all_of(r.begin(), r.end(), [](double c) { return c == 0.0; }); });
}

json to_json(const ValueModel& model) {
  json rows = json::array();
  for (int p = 0; p < model.periods(); ++p) rows.push_back(model.row(p));
  return {{"schema", "sdd_value_model/1"},
          {"period_length_min", model.period_length_min()},
          {"columns", {"baseline", "free_time_budget", "flexibility", "all_on_time_prob", "worst_case_budget",
                       "avg_dist_per_customer"}},
          {"periods", rows},
          {"episodes", model.episodes},
          {"seed", model.seed}};
}

ValueModel value_model_from_json(const json& j) {
  if (j.value("schema", "") != "sdd_value_model/1") throw std::invalid_argument("value model: unsupported schema");
  const double len = j.at("period_length_min").get<double>();
  const auto& rows = j.at("periods");
  ValueModel model(len * static_cast<double>(rows.size()), len);
  for (int p = 0; p < model.periods(); ++p) {
    const auto r = rows.at(p).get<std::vector<double>>();
    if (r.size() != kFeatures + 1) throw std::invalid_argument("value model: row needs 6 coefficients");
    std::copy(r.begin(), r.end(), model.row(p).begin());
  }
  model.episodes = j.value("episodes", std::int64_t{0});
  model.seed = j.value("seed", std::uint64_t{0});
  return model;
}

OptionArray opportunity_costs(const ValueModel& model, const RoutePlan& current, const FeasibilityMap& candidates,
                              const PlanningContext& ctx) {
  OptionArray out{};
  if (std::none_of(candidates.begin(), candidates.end(), [](const auto& c) { return c.has_value(); })) return out;
  const double v0 = model.value(ctx.now_min, extract_features(current, ctx));
  for (int j = 0; j < kOptions; ++j) {
    if (!candidates[j]) continue;
    const double vj = model.value(ctx.now_min, extract_features(candidates[j]->plan, ctx));
    out[j] = std::max(0.0, v0 - vj);
  }
  return out;
}

void RegressionAccumulator::add(const FeatureVector& f, double target) {
  const auto raw = f.as_array();
  std::array<double, kFeatures + 1> x{1.0};
  std::copy(raw.begin(), raw.end(), x.begin() + 1);
  constexpr int n = kFeatures + 1;
  for (int i = 0; i < n; ++i) {
    xty_[i] += x[i] * target;
    for (int k = 0; k < n; ++k) xtx_[i * n + k] += x[i] * x[k];
  }
  ++count_;
}

ValueModel::Row RegressionAccumulator::solve(double ridge) const {
  ValueModel::Row out{};
  if (count_ == 0) return out;
  constexpr int n = kFeatures + 1;
  Eigen::Matrix<double, n, n> a;
  Eigen::Matrix<double, n, 1> b;
  for (int i = 0; i < n; ++i) {
    b(i) = xty_[i];
    for (int k = 0; k < n; ++k) a(i, k) = xtx_[i * n + k];
    a(i, i) += ridge;
  }
  // Iterated ridge: the first solve is the conditioned estimate, the refinements remove its
  // shrinkage wherever the data determine the coefficients.
  const Eigen::Matrix<double, n, n> plain = a - ridge * Eigen::Matrix<double, n, n>::Identity();
  const auto ldlt = a.ldlt();
  Eigen::Matrix<double, n, 1> c = ldlt.solve(b);
  for (int k = 0; k < kRidgeRefinements; ++k) c += ldlt.solve(b - plain * c);
  for (int i = 0; i < n; ++i) out[i] = std::isfinite(c(i)) ? c(i) : 0.0;
  return out;
}

void refit(ValueModel& model, const std::vector<RegressionAccumulator>& per_period, double ridge) {
  if (static_cast<int>(per_period.size()) != model.periods())
    throw std::invalid_argument("refit: one accumulator per period expected");
  for (int p = 0; p < model.periods(); ++p)
    if (per_period[p].count() > 0) model.row(p) = per_period[p].solve(ridge);
}

}  // namespace sdd
