#include "sdd/routing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sdd {

namespace {

const InverseSpeedModel& model_of(const PlanningContext& ctx) {
  if (ctx.model == nullptr) throw std::invalid_argument("planning context without a travel-time model");
  return *ctx.model;
}

}  // namespace

VehicleEvaluation evaluate_vehicle(const VehicleRoute& route, const PlanningContext& ctx) {
  VehicleEvaluation ev;
  ev.on_time.assign(route.stops.size(), 1.0);
  ev.arrival_mean.assign(route.stops.size(), 0.0);
  if (route.stops.empty()) {
    ev.final_arrival_mean = std::max(ctx.now_min, route.depart_min);
    return ev;
  }
  TravelTimeAccumulator travel(model_of(ctx));
  Point at = route.origin;
  for (std::size_t i = 0; i < route.stops.size(); ++i) {
    const Stop& stop = route.stops[i];
    travel.add_leg(distance(at, stop.location));
    at = stop.location;
    const double fixed = route.depart_min + ctx.service_min * static_cast<double>(i);
    ev.arrival_mean[i] = fixed + travel.mean();
    if (stop.is_customer()) {
      const double p = travel.probability_within(stop.deadline_abs_min - fixed);
      ev.on_time[i] = p;
      ev.expected_revenue += stop.price * p - ctx.penalty_cmiss * (1.0 - p);
    }
    ev.final_arrival_mean = fixed + travel.mean();
    ev.final_arrival_var = travel.variance();
  }
  return ev;
}

void propagate_schedule(VehicleRoute& route, const PlanningContext& ctx) {
  const auto& model = model_of(ctx);
  Point at = route.origin;
  double mean = route.depart_min;
  double var = 0.0;
  for (auto& stop : route.stops) {
    const auto leg = leg_time_stats(model, distance(at, stop.location));
    mean += leg.mean_min;
    var += leg.var_min2;
    stop.expected_arrival_min = mean;
    stop.arrival_var_min2 = var;
    mean += ctx.service_min;
    at = stop.location;
  }
}

void propagate_schedule(RoutePlan& plan, const PlanningContext& ctx) {
  for (auto& v : plan.vehicles) propagate_schedule(v, ctx);
}

double final_depot_arrival(const VehicleRoute& route, const PlanningContext& ctx) {
  return evaluate_vehicle(route, ctx).final_arrival_mean;
}

RouteEvaluation evaluate_plan(const RoutePlan& plan, const PlanningContext& ctx) {
  RouteEvaluation out;
  out.vehicles.reserve(plan.vehicles.size());
  for (const auto& v : plan.vehicles) {
    out.vehicles.push_back(evaluate_vehicle(v, ctx));
    out.expected_revenue += out.vehicles.back().expected_revenue;
  }
  return out;
}

double expected_route_revenue(const RoutePlan& plan, const PlanningContext& ctx) {
  return evaluate_plan(plan, ctx).expected_revenue;
}

std::size_t first_legal_position(const VehicleRoute& route, double now_min) {
  if (route.stops.empty()) return 0;
  if (route.origin_is_depot && route.depart_min > now_min) return 0;
  for (std::size_t i = 0; i < route.stops.size(); ++i)
    if (route.stops[i].kind == StopKind::depot) return i + 1;
  return route.stops.size();
}

VehicleRoute with_insertion(const VehicleRoute& route, std::size_t position, const Stop& stop,
                            const PlanningContext& ctx) {
  VehicleRoute out = route;
  const std::size_t n = route.stops.size();
  if (position > n) throw std::out_of_range("with_insertion: position past end");
  if (position < n) {
    out.stops.insert(out.stops.begin() + static_cast<std::ptrdiff_t>(position), stop);
    return out;
  }
  if (out.stops.empty()) {
    // Idle at the depot: load now unless the vehicle is still in its depot service window.
    out.origin = ctx.depot;
    out.origin_is_depot = true;
    if (out.depart_min <= ctx.now_min) out.depart_min = ctx.now_min + ctx.service_min;
  }
  out.stops.push_back(stop);
  out.stops.push_back(Stop::depot_stop(ctx.depot));
  return out;
}

std::optional<InsertionCandidate> cheapest_insertion(const DecisionState& state, const Customer& customer,
                                                     double deadline_min, double avg_price,
                                                     const PlanningContext& ctx) {
  Stop stop{StopKind::customer, customer.id, customer.location, customer.arrival_min + deadline_min, avg_price};

  std::optional<InsertionCandidate> best;
  double best_delta = -std::numeric_limits<double>::infinity();
  const auto& vehicles = state.routes.vehicles;
  for (std::size_t v = 0; v < vehicles.size(); ++v) {
    const auto& route = vehicles[v];
    const double base = evaluate_vehicle(route, ctx).expected_revenue;
    const std::size_t n = route.stops.size();
    for (std::size_t p = first_legal_position(route, ctx.now_min); p <= n; ++p) {
      VehicleRoute candidate = with_insertion(route, p, stop, ctx);
      const auto ev = evaluate_vehicle(candidate, ctx);
      if (ev.final_arrival_mean > ctx.shift_end_min) continue;
      const double delta = ev.expected_revenue - base;
      if (delta > best_delta) {
        best_delta = delta;
        if (!best) best.emplace();
        best->vehicle = static_cast<int>(v);
        best->position = p;
        best->delta_revenue = delta;
        best->new_customer_on_time = ev.on_time[p];
      }
    }
  }
  if (!best || !(best_delta > 0.0)) return std::nullopt;

  best->plan = state.routes;
  auto& chosen = best->plan.vehicles[best->vehicle];
  chosen = with_insertion(chosen, best->position, stop, ctx);
  propagate_schedule(best->plan, ctx);
  return best;
}

FeasibilityMap feasible_deadlines(const DecisionState& state, const Customer& customer,
                                  const InstanceConfig& instance, const PlanningContext& ctx) {
  FeasibilityMap map;
  for (int j = 0; j < kOptions; ++j)
    map[j] = cheapest_insertion(state, customer, instance.deadlines_min[j], instance.avg_prices[j], ctx);
  return map;
}

bool any_feasible(const FeasibilityMap& map) {
  return std::any_of(map.begin(), map.end(), [](const auto& c) { return c.has_value(); });
}

AdvanceResult advance_routes(DecisionState& state, double until_min, const LegTimer& leg_time,
                             double service_min, double penalty_cmiss) {
  if (until_min < state.now_min) throw std::invalid_argument("advance_routes: cannot move backwards in time");
  AdvanceResult out;
  for (std::size_t v = 0; v < state.routes.vehicles.size(); ++v) {
    auto& route = state.routes.vehicles[v];
    std::size_t reached = 0;
    while (reached < route.stops.size() && route.depart_min <= until_min) {
      const Stop& next = route.stops[reached];
      const double arrive = route.depart_min + leg_time(route.origin, distance(route.origin, next.location), route.depart_min);
      if (arrive > until_min) break;
      out.legs.push_back({static_cast<int>(v), route.origin, next.location, route.depart_min, arrive});
      if (next.is_customer()) {
        Settlement s{next.customer, static_cast<int>(v), arrive, next.deadline_abs_min, arrive <= next.deadline_abs_min};
        s.revenue = s.on_time ? next.price : -penalty_cmiss;
        if (next.customer >= 0 && next.customer < static_cast<int>(state.customers.size()))
          state.customers[next.customer].outcome = s.on_time ? Outcome::served : Outcome::missed;
        out.settlements.push_back(s);
      }
      route.origin = next.location;
      route.origin_is_depot = next.kind == StopKind::depot;
      route.depart_min = arrive + service_min;
      ++reached;
    }
    route.stops.erase(route.stops.begin(), route.stops.begin() + static_cast<std::ptrdiff_t>(reached));
  }
  state.now_min = std::isfinite(until_min) ? until_min : state.now_min;
  return out;
}

}  // namespace sdd
