#include "sdd/state.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace sdd {

RoutePlan RoutePlan::idle_fleet(int fleet_size, Point depot, double ready_min) {
  RoutePlan plan;
  plan.vehicles.assign(fleet_size, VehicleRoute{depot, true, ready_min, {}});
  return plan;
}

int RoutePlan::routed_customers() const {
  int n = 0;
  for (const auto& v : vehicles)
    for (const auto& s : v.stops) n += s.is_customer() ? 1 : 0;
  return n;
}

std::string check_accounting(const RunMetrics& m, const std::vector<Customer>& customers,
                             double penalty_cmiss) {
  std::ostringstream err;
  if (m.accepted != m.served + m.missed) {
    err << "accepted " << m.accepted << " != served " << m.served << " + missed " << m.missed;
    return err.str();
  }
  if (m.total() != static_cast<int>(customers.size())) {
    err << "accepted + declined + rejected = " << m.total() << " but " << customers.size() << " customers";
    return err.str();
  }
  double revenue = 0.0;
  int served = 0, missed = 0, declined = 0, rejected = 0;
  for (const auto& c : customers) {
    switch (c.outcome) {
      case Outcome::served: revenue += c.agreed_price; ++served; break;
      case Outcome::missed: ++missed; break;
      case Outcome::declined: ++declined; break;
      case Outcome::rejected: ++rejected; break;
      case Outcome::pending: err << "customer " << c.id << " never settled"; return err.str();
    }
    if (c.option < 0 && c.agreed_price != 0.0) {
      err << "customer " << c.id << " has a price without a same-day option";
      return err.str();
    }
  }
  revenue -= penalty_cmiss * missed;
  if (served != m.served || missed != m.missed || declined != m.declined || rejected != m.rejected) {
    err << "outcome counts disagree with customer records";
    return err.str();
  }
  if (std::abs(revenue - m.revenue) > 1e-9 * std::max(1.0, std::abs(revenue))) {
    err << "revenue " << m.revenue << " != sum of settled prices " << revenue;
    return err.str();
  }
  return {};
}

std::string check_plan_structure(const RoutePlan& plan) {
  std::set<int> seen;
  for (std::size_t v = 0; v < plan.vehicles.size(); ++v) {
    const auto& route = plan.vehicles[v];
    if (route.stops.empty()) {
      if (!route.origin_is_depot) return "idle vehicle " + std::to_string(v) + " away from depot";
      continue;
    }
    if (route.stops.back().kind != StopKind::depot)
      return "vehicle " + std::to_string(v) + " does not end at the depot";
    for (std::size_t i = 0; i < route.stops.size(); ++i) {
      const auto& s = route.stops[i];
      if (!s.is_customer()) continue;
      if (!seen.insert(s.customer).second) return "customer " + std::to_string(s.customer) + " routed twice";
    }
  }
  return {};
}

}  // namespace sdd
