#pragma once

#include <array>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sdd/geometry.hpp"
#include "sdd/travel_time.hpp"

namespace sdd {

/// Same-day options, in the order used by every per-option array.
inline constexpr int kOptions = 3;
using OptionArray = std::array<double, kOptions>;

struct SpatialModel {
  enum class Kind { gaussian, uniform, clusters };

  Kind kind = Kind::gaussian;
  double std_km = 2.5;          // gaussian: per coordinate; clusters: around each center
  double half_width_km = 10.0;  // uniform
  std::vector<Point> centers;   // clusters

  static SpatialModel centered_gaussian() { return {Kind::gaussian, 2.5, 10.0, {}}; }
  static SpatialModel uniform_square() { return {Kind::uniform, 2.5, 10.0, {}}; }
  static SpatialModel four_clusters() {
    return {Kind::clusters, 1.0, 10.0, {{5, 5}, {5, -5}, {-5, 5}, {-5, -5}}};
  }
};

enum class Assumption { deterministic, stochastic, misspecified };
enum class CustomerDistribution { gaussian, uniform, cluster };

struct InstanceConfig {
  int id = -1;
  double shift_end_min = 480.0;
  double last_order_min = 420.0;
  double service_min = 2.0;
  OptionArray deadlines_min{60.0, 120.0, 240.0};
  int fleet_size = 1;
  double expected_orders = 40.0;
  double penalty_cmiss = 0.0;
  SpatialModel spatial = SpatialModel::centered_gaussian();
  InverseSpeedModel true_tt = InverseSpeedModel::default_gaussian();
  InverseSpeedModel assumed_tt = InverseSpeedModel::default_gaussian();
  Point depot{};
  double area_half_width_km = 10.0;
  /// Average price credited to a tentative insertion when ranking routes.
  OptionArray avg_prices{2.0, 1.5, 1.0};

  /// Largest possible customer-to-depot distance (corner of the service square).
  double max_depot_distance_km() const;

  /// Throws std::invalid_argument on a broken invariant.
  void validate() const;
};

/// Planning model under a travel-time assumption given the true model.
InverseSpeedModel assumed_model_for(const InverseSpeedModel& true_model, Assumption assumption);

SpatialModel spatial_model_for(CustomerDistribution distribution);

/// Orders / vehicles / penalty rows 0..17 of the standard instance grid.
struct CatalogRow {
  int id;
  int orders;
  int vehicles;
  double penalty;
};
const std::array<CatalogRow, 18>& instance_catalog();

InstanceConfig catalog_instance(int id, CustomerDistribution customers, Assumption assumption,
                                const InverseSpeedModel& true_tt = InverseSpeedModel::default_gaussian());

std::string to_string(Assumption a);
std::string to_string(CustomerDistribution d);
Assumption parse_assumption(const std::string& s);
CustomerDistribution parse_customer_distribution(const std::string& s);

// JSON. Inverse-speed models are written in h/km and converted to min/km on load.
nlohmann::json model_to_json(const InverseSpeedModel& model);
InverseSpeedModel model_from_json(const nlohmann::json& j);
nlohmann::json to_json(const InstanceConfig& config);
InstanceConfig instance_from_json(const nlohmann::json& j);

/// Catalog document: {"schema": "sdd_instances/1", "defaults": {...}, "instances": [...]}.
nlohmann::json catalog_to_json();
std::vector<CatalogRow> catalog_from_json(const nlohmann::json& j);

}  // namespace sdd
