#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "sdd/routing.hpp"

using namespace sdd;

namespace {

using oracle::customer_stop;
using oracle::kDepot;

PlanningContext context(const InverseSpeedModel& m, double now, double cmiss = 0.0) {
  return {&m, now, 2.0, cmiss, 480.0, kDepot};
}

}  // namespace

TEST(Propagate, SingleCustomerRoundTrip) {
  const auto g = InverseSpeedModel::default_gaussian();
  VehicleRoute r{kDepot, true, 2.0, {customer_stop(0, {10, 0}, 100, 2), Stop::depot_stop(kDepot)}};
  propagate_schedule(r, context(g, 0));
  EXPECT_NEAR(r.stops[0].expected_arrival_min, 24.5, 1e-9);
  EXPECT_NEAR(r.stops[0].arrival_var_min2, 61.7796, 1e-9);
  EXPECT_NEAR(r.stops[1].expected_arrival_min, 49.0, 1e-9);
  EXPECT_NEAR(r.stops[1].arrival_var_min2, 123.5592, 1e-9);
  EXPECT_NEAR(final_depot_arrival(r, context(g, 0)), 49.0, 1e-9);
}

TEST(Propagate, IdleAndDeterministic) {
  const auto g = InverseSpeedModel::default_gaussian();
  VehicleRoute idle{kDepot, true, 0.0, {}};
  EXPECT_EQ(final_depot_arrival(idle, context(g, 123)), 123);
  const auto d = InverseSpeedModel::deterministic(2.25);
  VehicleRoute r{kDepot, true, 2.0,
                 {customer_stop(0, {3, 0}, 100, 2), customer_stop(1, {3, 4}, 100, 2), Stop::depot_stop(kDepot)}};
  propagate_schedule(r, context(d, 0));
  double prev = -1;
  for (const auto& s : r.stops) {
    EXPECT_EQ(s.arrival_var_min2, 0.0);
    EXPECT_GE(s.expected_arrival_min, prev);
    prev = s.expected_arrival_min;
  }
}

TEST(ExpectedRevenue, Examples) {
  const auto d = InverseSpeedModel::deterministic(2.25);
  RoutePlan plan;
  plan.vehicles.push_back({kDepot, true, 2.0, {customer_stop(0, {1, 0}, 100, 2), Stop::depot_stop(kDepot)}});
  EXPECT_NEAR(expected_route_revenue(plan, context(d, 0)), 2.0, 1e-12);
  EXPECT_EQ(expected_route_revenue(RoutePlan::idle_fleet(2, kDepot), context(d, 0)), 0.0);
  // One leg of 10 km under the mixture with 30 min budget: P = 0.75.
  const auto m = InverseSpeedModel::default_mixture();
  RoutePlan q;
  q.vehicles.push_back({kDepot, true, 2.0, {customer_stop(0, {10, 0}, 32, 2), Stop::depot_stop(kDepot)}});
  EXPECT_NEAR(expected_route_revenue(q, context(m, 0, 2.0)), 2 * 0.75 - 2 * 0.25, 1e-9);
}

TEST(Insertion, IdleVehicleSingleCandidate) {
  const auto g = InverseSpeedModel::default_gaussian();
  DecisionState s;
  s.now_min = 10;
  s.routes = RoutePlan::idle_fleet(1, kDepot);
  Customer c{0, 10, {3, 4}};
  const auto ctx = context(g, 10, 1.0);
  const auto best = cheapest_insertion(s, c, 60, 2.0, ctx);
  ASSERT_TRUE(best.has_value());
  const auto& r = best->plan.vehicles[0];
  ASSERT_EQ(r.stops.size(), 2u);
  EXPECT_EQ(r.stops[0].customer, 0);
  EXPECT_EQ(r.stops[1].kind, StopKind::depot);
  EXPECT_EQ(r.depart_min, 12);
  const double p = on_time_probability(g, std::vector<double>{5.0}, 70.0 - 12.0);
  EXPECT_NEAR(best->delta_revenue, 2.0 * p - 1.0 * (1 - p), 1e-9);
  EXPECT_NEAR(best->new_customer_on_time, p, 1e-12);
}

TEST(Insertion, HopelessCustomerWithPenaltyIsInfeasible) {
  const auto d = InverseSpeedModel::deterministic(2.25);
  DecisionState s;
  s.routes = RoutePlan::idle_fleet(1, kDepot);
  Customer c{0, 0, {40, 0}};
  EXPECT_FALSE(cheapest_insertion(s, c, 60, 2.0, context(d, 0, 2.0)).has_value());
}

TEST(Insertion, NeverTouchesCommittedStops) {
  const auto g = InverseSpeedModel::default_gaussian();
  DecisionState s;
  s.now_min = 100;
  VehicleRoute r{{4, 4}, false, 97, {customer_stop(0, {5, 5}, 200, 2), Stop::depot_stop(kDepot),
                                     customer_stop(1, {-2, 3}, 300, 2), Stop::depot_stop(kDepot)}};
  s.routes.vehicles.push_back(r);
  EXPECT_EQ(first_legal_position(r, 100), 2u);
  Customer c{2, 100, {4.5, 4.5}, kNoChoice};
  const auto best = cheapest_insertion(s, c, 240, 1.0, context(g, 100));
  ASSERT_TRUE(best.has_value());
  EXPECT_GE(best->position, 2u);
  const auto& out = best->plan.vehicles[0].stops;
  EXPECT_EQ(out[0].customer, 0);
  EXPECT_EQ(out[1].kind, StopKind::depot);
  EXPECT_EQ(check_plan_structure(best->plan), "");
}

TEST(Insertion, MatchesExhaustiveEnumeration) {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> coord(-9, 9), u(0, 1);
  for (const auto& model : {InverseSpeedModel::default_gaussian(), InverseSpeedModel::default_mixture(),
                            InverseSpeedModel::deterministic(2.25)}) {
    for (int trial = 0; trial < 40; ++trial) {
      auto s = oracle::random_state(rng, 8);
      const double cmiss = u(rng) < 0.5 ? 0.0 : 2.0;
      const double deadline = std::array<double, 3>{60, 120, 240}[trial % 3];
      Customer c{100, s.now_min, {coord(rng), coord(rng)}};
      const auto ctx = context(model, s.now_min, cmiss);
      const auto got = cheapest_insertion(s, c, deadline, 1.5, ctx);
      Stop stop = customer_stop(100, c.location, s.now_min + deadline, 1.5);
      const auto want = oracle::exhaustive_insertion(s, stop, model, cmiss);
      ASSERT_EQ(got.has_value(), want.feasible) << model.name() << " trial " << trial;
      if (!got) continue;
      EXPECT_NEAR(got->delta_revenue, want.delta, 1e-9);
      EXPECT_EQ(got->vehicle, want.vehicle);
      EXPECT_EQ(got->position, want.position);
      EXPECT_GT(got->delta_revenue, 0.0);
      EXPECT_EQ(check_plan_structure(got->plan), "");
    }
  }
}

TEST(Feasibility, ShortDeadlineDropsOut) {
  const auto d = InverseSpeedModel::deterministic(2.25);
  InstanceConfig inst;
  inst.assumed_tt = d;
  DecisionState s;
  s.now_min = 0;
  s.routes.vehicles.push_back({kDepot, true, 30.0, {}});
  Customer c{0, 0, {12, 12}};
  const auto map = feasible_deadlines(s, c, inst, PlanningContext::from(inst, 0));
  EXPECT_FALSE(map[0].has_value());
  EXPECT_TRUE(map[1].has_value());
  EXPECT_TRUE(map[2].has_value());
}

TEST(Feasibility, AllOrNothing) {
  InstanceConfig inst;
  DecisionState s;
  s.now_min = 5;
  s.routes = RoutePlan::idle_fleet(1, kDepot);
  Customer near{0, 5, {1, 1}};
  auto map = feasible_deadlines(s, near, inst, PlanningContext::from(inst, 5));
  for (const auto& m : map) EXPECT_TRUE(m.has_value());
  s.now_min = 470;
  near.arrival_min = 470;
  map = feasible_deadlines(s, near, inst, PlanningContext::from(inst, 470));
  EXPECT_FALSE(any_feasible(map));
}

namespace {

DecisionState two_customer_state() {
  DecisionState s;
  s.customers.resize(2);
  for (int i = 0; i < 2; ++i) {
    s.customers[i].id = i;
    s.customers[i].option = 0;
    s.customers[i].agreed_price = i == 0 ? 1.9 : 1.5;
  }
  s.routes.vehicles.push_back(
      {kDepot, true, 2.0, {customer_stop(0, {3, 0}, 20, 1.9), customer_stop(1, {3, 4}, 25, 1.5), Stop::depot_stop(kDepot)}});
  return s;
}

LegTimer constant_speed(double min_per_km) {
  return [min_per_km](Point, double km, double) { return km * min_per_km; };
}

}  // namespace

TEST(Advance, SettlesOnTimeAndLate) {
  auto s = two_customer_state();
  // Arrivals: 2 + 6 = 8 (on time), 8 + 2 + 8 = 18 (on time).
  auto fast = advance_routes(s, 1000, constant_speed(2.0), 2.0, 0.0);
  ASSERT_EQ(fast.settlements.size(), 2u);
  EXPECT_DOUBLE_EQ(fast.settlements[0].revenue, 1.9);
  EXPECT_TRUE(fast.settlements[1].on_time);
  EXPECT_TRUE(s.routes.vehicles[0].stops.empty());
  EXPECT_EQ(s.customers[0].outcome, Outcome::served);

  auto slow_state = two_customer_state();
  // Arrivals: 2 + 12 = 14 (on time), 14 + 2 + 16 = 32 (late).
  auto slow = advance_routes(slow_state, 1000, constant_speed(4.0), 2.0, 2.0);
  ASSERT_EQ(slow.settlements.size(), 2u);
  EXPECT_DOUBLE_EQ(slow.settlements[0].revenue, 1.9);
  EXPECT_FALSE(slow.settlements[1].on_time);
  EXPECT_DOUBLE_EQ(slow.settlements[1].revenue, -2.0);
  EXPECT_EQ(slow_state.customers[1].outcome, Outcome::missed);

  auto free_state = two_customer_state();
  auto no_penalty = advance_routes(free_state, 1000, constant_speed(4.0), 2.0, 0.0);
  EXPECT_DOUBLE_EQ(no_penalty.settlements[1].revenue, 0.0);
}

TEST(Advance, StopsMidLegAndResumes) {
  auto s = two_customer_state();
  auto part = advance_routes(s, 10, constant_speed(2.0), 2.0, 0.0);
  ASSERT_EQ(part.settlements.size(), 1u);
  EXPECT_EQ(s.now_min, 10);
  const auto& r = s.routes.vehicles[0];
  EXPECT_EQ(r.stops.size(), 2u);
  EXPECT_DOUBLE_EQ(r.depart_min, 10.0);
  EXPECT_EQ(r.origin, (Point{3, 0}));
  EXPECT_TRUE(r.en_route(10));
  auto rest = advance_routes(s, 1000, constant_speed(2.0), 2.0, 0.0);
  EXPECT_EQ(rest.settlements.size(), 1u);
  EXPECT_DOUBLE_EQ(rest.settlements[0].arrival_min, 18.0);
  EXPECT_THROW(advance_routes(s, 5, constant_speed(2.0), 2.0, 0.0), std::invalid_argument);
}

TEST(Advance, Replayable) {
  auto a = two_customer_state();
  auto b = two_customer_state();
  auto timer = [](Point o, double km, double t) { return km * (1.5 + 0.1 * quadrant_of(o) + 0.001 * t); };
  const auto ra = advance_routes(a, 1000, timer, 2.0, 1.0);
  const auto rb = advance_routes(b, 1000, timer, 2.0, 1.0);
  ASSERT_EQ(ra.settlements.size(), rb.settlements.size());
  for (std::size_t i = 0; i < ra.settlements.size(); ++i)
    EXPECT_EQ(ra.settlements[i].arrival_min, rb.settlements[i].arrival_min);
}
