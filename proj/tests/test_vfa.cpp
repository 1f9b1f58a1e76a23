#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sdd/training.hpp"
#include "sdd/vfa.hpp"

using namespace sdd;

namespace {

const Point kDepot{0, 0};

Stop customer_stop(int id, Point at, double deadline, double price) {
  return {StopKind::customer, id, at, deadline, price};
}

}  // namespace

TEST(Features, TimeBudgets) {
  // Round trip of 2 x 5 km: mean 278 + 10 * 2 + 2 = 300, variance 2 * 25 * 2 = 100.
  const auto m = InverseSpeedModel::gaussian(2.0, std::sqrt(2.0));
  PlanningContext ctx{&m, 250, 2.0, 0.0, 480.0, kDepot};
  RoutePlan plan;
  plan.vehicles.push_back({kDepot, true, 278, {customer_stop(0, {5, 0}, 400, 1), Stop::depot_stop(kDepot)}});
  const auto f = extract_features(plan, ctx);
  EXPECT_NEAR(f.free_time_budget, 180.0, 1e-9);
  EXPECT_NEAR(f.worst_case_budget, 160.0, 1e-9);
  EXPECT_NEAR(f.avg_dist_per_customer, 10.0, 1e-12);
}

TEST(Features, MeanSlackAndProduct) {
  const auto d = InverseSpeedModel::deterministic(2.0);
  PlanningContext ctx{&d, 0, 2.0, 0.0, 480.0, kDepot};
  RoutePlan plan;
  // Arrivals 2 + 6 = 8 and 8 + 2 + 8 = 18.
  plan.vehicles.push_back(
      {kDepot, true, 2, {customer_stop(0, {3, 0}, 38, 1), customer_stop(1, {3, 4}, 68, 1), Stop::depot_stop(kDepot)}});
  const auto f = extract_features(plan, ctx);
  EXPECT_NEAR(f.flexibility, 40.0, 1e-12);
  EXPECT_EQ(f.all_on_time_prob, 1.0);
  EXPECT_NEAR(f.avg_dist_per_customer, 12.0 / 2.0, 1e-12);
}

TEST(Features, EmptyPlan) {
  const auto g = InverseSpeedModel::default_gaussian();
  PlanningContext ctx{&g, 100, 2.0, 0.0, 480.0, kDepot};
  const auto f = extract_features(RoutePlan::idle_fleet(2, kDepot), ctx);
  EXPECT_EQ(f.flexibility, 380.0);
  EXPECT_EQ(f.all_on_time_prob, 1.0);
  EXPECT_EQ(f.avg_dist_per_customer, 0.0);
  EXPECT_EQ(f.free_time_budget, 380.0);
}

TEST(Features, ProductMatchesIndependentProbabilities) {
  const auto m = InverseSpeedModel::default_mixture();
  PlanningContext ctx{&m, 0, 2.0, 0.0, 480.0, kDepot};
  RoutePlan plan;
  plan.vehicles.push_back({kDepot, true, 2,
                           {customer_stop(0, {3, 0}, 15, 1), customer_stop(1, {3, 4}, 30, 1), Stop::depot_stop(kDepot),
                            customer_stop(2, {-4, 0}, 70, 1), Stop::depot_stop(kDepot)}});
  const std::vector<double> l0{3}, l1{3, 4}, l2{3, 4, 5, 4};
  const double want = on_time_probability(m, l0, 15 - 2) * on_time_probability(m, l1, 30 - 2 - 2) *
                      on_time_probability(m, l2, 70 - 2 - 6);
  EXPECT_NEAR(extract_features(plan, ctx).all_on_time_prob, want, 1e-12);
}

TEST(Value, LinearAndClamped) {
  ValueModel v;
  FeatureVector f;
  f.free_time_budget = 100;
  f.all_on_time_prob = 0;
  EXPECT_EQ(v.value(0, f), 0.0);
  EXPECT_TRUE(v.all_zero());
  v.row(v.period_index(30))[0] = 5;
  v.row(v.period_index(30))[1] = 0.1;
  EXPECT_NEAR(v.value(30, f), 15.0, 1e-12);
  v.row(0)[0] = -3;
  EXPECT_EQ(v.raw_value(0, FeatureVector{0, 0, 0, 0, 0}), -3.0);
  EXPECT_EQ(v.value(0, FeatureVector{0, 0, 0, 0, 0}), 0.0);
  // Two-point interpolation before clamping.
  FeatureVector a{10, 20, 0.5, 5, 2}, b{30, 10, 0.9, 1, 4};
  auto r = v.row(v.period_index(30));
  for (int i = 0; i < 6; ++i) r[i] = 0.1 * (i + 1);
  v.row(v.period_index(30)) = r;
  const auto xa = a.as_array(), xb = b.as_array();
  FeatureVector mid{(xa[0] + xb[0]) / 2, (xa[1] + xb[1]) / 2, (xa[2] + xb[2]) / 2, (xa[3] + xb[3]) / 2,
                    (xa[4] + xb[4]) / 2};
  EXPECT_NEAR(v.raw_value(30, mid), 0.5 * v.raw_value(30, a) + 0.5 * v.raw_value(30, b), 1e-12);
  EXPECT_EQ(v.period_index(480), v.periods() - 1);
  EXPECT_EQ(v.periods(), 32);
}

TEST(Value, JsonRoundTrip) {
  ValueModel v;
  for (int p = 0; p < v.periods(); ++p)
    for (int i = 0; i < 6; ++i) v.row(p)[i] = p * 0.5 - i * 1.25 + 1e-7;
  v.episodes = 7;
  v.seed = 99;
  EXPECT_EQ(value_model_from_json(nlohmann::json::parse(to_json(v).dump())), v);
  EXPECT_THROW(value_model_from_json({{"schema", "other"}}), std::invalid_argument);
}

TEST(Opportunity, FloorsAndIdentity) {
  const auto g = InverseSpeedModel::default_gaussian();
  PlanningContext ctx{&g, 0, 2.0, 0.0, 480.0, kDepot};
  ValueModel v;
  v.row(0) = {0, 0.1, 0, 0, 0, 0};
  const auto idle = RoutePlan::idle_fleet(1, kDepot);
  DecisionState s;
  s.routes = idle;
  Customer c{0, 0, {3, 4}};
  FeasibilityMap map;
  map[0] = cheapest_insertion(s, c, 60, 2, ctx);
  ASSERT_TRUE(map[0]);
  // Candidate consumes free time: V0 - Vj equals 0.1 x the added expected duty time.
  const auto o = opportunity_costs(v, idle, map, ctx);
  const double added = extract_features(idle, ctx).free_time_budget - extract_features(map[0]->plan, ctx).free_time_budget;
  EXPECT_NEAR(o[0], 0.1 * added, 1e-9);
  EXPECT_EQ(o[1], 0.0);
  // Identical candidate costs nothing; a candidate valued higher is floored at 0.
  map[0]->plan = idle;
  EXPECT_EQ(opportunity_costs(v, idle, map, ctx)[0], 0.0);
  v.row(0) = {0, -0.1, 0, 0, 0, 0};
  map[0] = cheapest_insertion(s, c, 60, 2, ctx);
  v.row(0)[0] = 100;
  EXPECT_EQ(opportunity_costs(v, idle, map, ctx)[0], 0.0);
}

TEST(Regression, RecoversLinearFunction) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  ValueModel truth;
  std::vector<RegressionAccumulator> acc(truth.periods());
  for (int p = 0; p < truth.periods(); ++p)
    for (int i = 0; i < 6; ++i) truth.row(p)[i] = std::sin(1.0 + p + 7 * i) * (i == 0 ? 20 : 0.5);
  for (int p = 0; p < truth.periods(); ++p) {
    for (int s = 0; s < 400; ++s) {
      FeatureVector f{400 * u(rng), 300 * u(rng), u(rng), 400 * u(rng) - 50, 10 * u(rng)};
      acc[p].add(f, truth.raw_value(p * 15.0, f));
    }
  }
  ValueModel fit;
  refit(fit, acc, kRidge);
  for (int p = 0; p < truth.periods(); ++p)
    for (int i = 0; i < 6; ++i) EXPECT_NEAR(fit.row(p)[i], truth.row(p)[i], 1e-6) << p << "," << i;
}

TEST(Regression, EmptyPeriodKeepsCoefficients) {
  ValueModel m;
  m.row(3) = {1, 2, 3, 4, 5, 6};
  std::vector<RegressionAccumulator> acc(m.periods());
  refit(m, acc);
  EXPECT_EQ(m.row(3), (ValueModel::Row{1, 2, 3, 4, 5, 6}));
}

TEST(Training, NoOrdersGivesZeroModel) {
  InstanceConfig inst;
  inst.expected_orders = 0;
  TrainingOptions opt;
  opt.episodes = 5;
  const auto r = train(inst, opt);
  EXPECT_TRUE(r.model.all_zero());
  for (double p : r.profits) EXPECT_EQ(p, 0.0);
}

TEST(Training, Reproducible) {
  const auto inst = catalog_instance(0, CustomerDistribution::gaussian, Assumption::stochastic);
  TrainingOptions opt;
  opt.episodes = 12;
  opt.batch = 4;
  const auto a = train(inst, opt);
  const auto b = train(inst, opt);
  EXPECT_EQ(a.model, b.model);
  EXPECT_EQ(a.profits, b.profits);
  EXPECT_FALSE(a.model.all_zero());
  opt.threads = 3;
  EXPECT_EQ(train(inst, opt).model, a.model);
}

TEST(Training, CurveHelpers) {
  EXPECT_EQ(running_average({1, 2, 3, 4}, 2), (std::vector<double>{1, 1.5, 2.5, 3.5}));
  EXPECT_NEAR(least_squares_slope({1, 3, 5, 7}), 2.0, 1e-12);
  EXPECT_EQ(least_squares_slope({4}), 0.0);
}
