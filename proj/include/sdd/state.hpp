#pragma once

#include <optional>
#include <vector>

#include "sdd/geometry.hpp"
#include "sdd/instance.hpp"

namespace sdd {

inline constexpr int kNextDay = -1;
inline constexpr int kNoChoice = -2;

enum class Outcome { pending, served, missed, declined, rejected };

struct Customer {
  int id = 0;
  double arrival_min = 0.0;
  Point location{};
  int option = kNoChoice;  // kNoChoice, kNextDay or a deadline index
  double agreed_price = 0.0;
  double deadline_abs_min = 0.0;
  Outcome outcome = Outcome::pending;
};

enum class StopKind { depot, customer };

struct Stop {
  StopKind kind = StopKind::depot;
  int customer = -1;
  Point location{};
  double deadline_abs_min = 0.0;
  /// Agreed price, or the average price for a tentative insertion.
  double price = 0.0;
  // Filled by propagate_schedule.
  double expected_arrival_min = 0.0;
  double arrival_var_min2 = 0.0;

  static Stop depot_stop(Point depot) { return {StopKind::depot, -1, depot}; }
  bool is_customer() const { return kind == StopKind::customer; }
};

/// Remaining plan of one vehicle. The vehicle is at (or last left) `origin` and leaves it at
/// `depart_min`. When depart_min <= now and stops are pending, stops[0] is the committed
/// destination of the leg in progress. An empty stop list means idle at the depot, ready at
/// depart_min.
struct VehicleRoute {
  Point origin{};
  bool origin_is_depot = true;
  double depart_min = 0.0;
  std::vector<Stop> stops;

  bool idle() const { return stops.empty(); }
  bool en_route(double now) const { return !stops.empty() && depart_min <= now; }
  /// Number of leading stops that may not be reordered (0 or 1).
  int committed_prefix(double now) const { return en_route(now) ? 1 : 0; }
};

struct RoutePlan {
  std::vector<VehicleRoute> vehicles;

  static RoutePlan idle_fleet(int fleet_size, Point depot, double ready_min = 0.0);
  int routed_customers() const;
};

struct DecisionState {
  double now_min = 0.0;
  RoutePlan routes;
  std::vector<Customer> customers;
  std::optional<Customer> pending;
};

struct RunMetrics {
  double revenue = 0.0;
  int accepted = 0;
  int served = 0;
  int missed = 0;
  int declined = 0;
  int rejected = 0;

  int total() const { return accepted + declined + rejected; }
};

/// Checks the accounting identities of a finished episode against its customer list.
/// Returns an empty string when they hold, else a description of the first violation.
std::string check_accounting(const RunMetrics& m, const std::vector<Customer>& customers,
                             double penalty_cmiss);

/// Structural checks on a plan: every customer appears once, every customer stop sits in a tour
/// that starts at a depot (or at a depot origin), and every nonempty plan ends at the depot.
std::string check_plan_structure(const RoutePlan& plan);

}  // namespace sdd
