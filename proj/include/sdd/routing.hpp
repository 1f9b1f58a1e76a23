#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "sdd/instance.hpp"
#include "sdd/state.hpp"
#include "sdd/travel_time.hpp"

namespace sdd {

/// Everything the planner needs besides the plan itself. Holds only the assumed model.
struct PlanningContext {
  const InverseSpeedModel* model = nullptr;
  double now_min = 0.0;
  double service_min = 2.0;
  double penalty_cmiss = 0.0;
  double shift_end_min = 480.0;
  Point depot{};

  static PlanningContext from(const InstanceConfig& instance, double now_min) {
    return {&instance.assumed_tt, now_min, instance.service_min, instance.penalty_cmiss,
            instance.shift_end_min, instance.depot};
  }
};

struct VehicleEvaluation {
  double expected_revenue = 0.0;
  /// On-time probability per stop; 1 for depot stops.
  std::vector<double> on_time;
  std::vector<double> arrival_mean;
  double final_arrival_mean = 0.0;
  double final_arrival_var = 0.0;
};

struct RouteEvaluation {
  double expected_revenue = 0.0;
  std::vector<VehicleEvaluation> vehicles;
};

/// Fills expected arrivals and arrival variances along one vehicle's stops.
void propagate_schedule(VehicleRoute& route, const PlanningContext& ctx);
void propagate_schedule(RoutePlan& plan, const PlanningContext& ctx);

/// Expected arrival at the vehicle's last depot stop (now, when idle).
double final_depot_arrival(const VehicleRoute& route, const PlanningContext& ctx);

/// Expected revenue of a vehicle's routed customers:
/// sum of price * P(on time) - c_miss * (1 - P(on time)).
VehicleEvaluation evaluate_vehicle(const VehicleRoute& route, const PlanningContext& ctx);
RouteEvaluation evaluate_plan(const RoutePlan& plan, const PlanningContext& ctx);
double expected_route_revenue(const RoutePlan& plan, const PlanningContext& ctx);

/// First stop index before which a new customer may be inserted: positions after the next
/// depot departure that lies in the future. Equals stops.size() when only a new round trip
/// can be appended.
std::size_t first_legal_position(const VehicleRoute& route, double now_min);

/// `route` with `stop` inserted before stops[position]. position == stops.size() appends a new
/// round trip (the customer followed by a depot stop); an idle vehicle first loads at the depot.
VehicleRoute with_insertion(const VehicleRoute& route, std::size_t position, const Stop& stop,
                            const PlanningContext& ctx);

struct InsertionCandidate {
  int vehicle = -1;
  std::size_t position = 0;
  RoutePlan plan;
  /// Expected revenue change versus the current plan.
  double delta_revenue = 0.0;
  /// On-time probability of the inserted customer under `plan`.
  double new_customer_on_time = 0.0;
};

/// Best insertion of `customer` with relative deadline `deadline_min`, priced at `avg_price`
/// for ranking. Returns nullopt when no legal candidate returns to the depot by shift end with a
/// strictly positive expected revenue change. Ties go to the lowest (vehicle, position).
std::optional<InsertionCandidate> cheapest_insertion(const DecisionState& state, const Customer& customer,
                                                     double deadline_min, double avg_price,
                                                     const PlanningContext& ctx);

/// Feasible same-day options of the pending customer, indexed like deadlines_min.
using FeasibilityMap = std::array<std::optional<InsertionCandidate>, kOptions>;

FeasibilityMap feasible_deadlines(const DecisionState& state, const Customer& customer,
                                  const InstanceConfig& instance, const PlanningContext& ctx);

bool any_feasible(const FeasibilityMap& map);

/// Realized travel time of a leg; the simulator binds this to the realized speed field.
using LegTimer = std::function<double(Point origin, double distance_km, double depart_min)>;

struct Settlement {
  int customer = -1;
  int vehicle = -1;
  double arrival_min = 0.0;
  double deadline_abs_min = 0.0;
  bool on_time = false;
  double revenue = 0.0;
};

struct LegRecord {
  int vehicle = -1;
  Point from{};
  Point to{};
  double depart_min = 0.0;
  double arrive_min = 0.0;
};

struct AdvanceResult {
  std::vector<Settlement> settlements;
  std::vector<LegRecord> legs;
};

/// Moves every vehicle along its plan up to `until_min` with realized leg times and settles each
/// customer reached: agreed price when on time, minus c_miss when late. Vehicles in the middle
/// of a leg keep it as their committed destination.
AdvanceResult advance_routes(DecisionState& state, double until_min, const LegTimer& leg_time,
                             double service_min, double penalty_cmiss);

}  // namespace sdd
