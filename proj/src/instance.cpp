#include "sdd/instance.hpp"

#include <cmath>
#include <stdexcept>

namespace sdd {

using nlohmann::json;

double InstanceConfig::max_depot_distance_km() const {
  return std::hypot(area_half_width_km + std::abs(depot.x), area_half_width_km + std::abs(depot.y));
}

void InstanceConfig::validate() const {
  if (!(last_order_min < shift_end_min)) throw std::invalid_argument("instance: last order must precede shift end");
  if (!(last_order_min >= 0.0)) throw std::invalid_argument("instance: negative last order time");
  for (int j = 1; j < kOptions; ++j)
    if (!(deadlines_min[j] > deadlines_min[j - 1]))
      throw std::invalid_argument("instance: deadlines must be strictly increasing");
  if (!(deadlines_min[0] > 0.0)) throw std::invalid_argument("instance: deadlines must be positive");
  if (fleet_size < 1) throw std::invalid_argument("instance: fleet_size must be >= 1");
  if (!(expected_orders >= 0.0)) throw std::invalid_argument("instance: expected_orders must be >= 0");
  if (!(penalty_cmiss >= 0.0)) throw std::invalid_argument("instance: penalty must be >= 0");
  if (!(service_min >= 0.0)) throw std::invalid_argument("instance: service time must be >= 0");
  if (!(area_half_width_km > 0.0)) throw std::invalid_argument("instance: area half width must be positive");
  for (double w : avg_prices)
    if (!(w >= 0.0)) throw std::invalid_argument("instance: average prices must be >= 0");
  if (spatial.kind == SpatialModel::Kind::clusters && spatial.centers.empty())
    throw std::invalid_argument("instance: cluster model without centers");
  if (spatial.kind != SpatialModel::Kind::uniform && !(spatial.std_km > 0.0))
    throw std::invalid_argument("instance: spatial std must be positive");
}

InverseSpeedModel assumed_model_for(const InverseSpeedModel& true_model, Assumption assumption) {
  switch (assumption) {
    case Assumption::deterministic:
      return InverseSpeedModel::deterministic(true_model.mean());
    case Assumption::stochastic:
      return true_model;
    case Assumption::misspecified:
      if (true_model.kind() == InverseSpeedModel::Kind::mixture) return InverseSpeedModel::default_gaussian();
      return InverseSpeedModel::default_mixture();
  }
  throw std::logic_error("unknown assumption");
}

SpatialModel spatial_model_for(CustomerDistribution distribution) {
  switch (distribution) {
    case CustomerDistribution::gaussian: return SpatialModel::centered_gaussian();
    case CustomerDistribution::uniform: return SpatialModel::uniform_square();
    case CustomerDistribution::cluster: return SpatialModel::four_clusters();
  }
  throw std::logic_error("unknown customer distribution");
}

const std::array<CatalogRow, 18>& instance_catalog() {
  static const std::array<CatalogRow, 18> rows{{
      {0, 40, 1, 0},   {1, 40, 1, 2},   {2, 40, 2, 0},   {3, 40, 2, 2},   {4, 40, 3, 0},   {5, 40, 3, 2},
      {6, 80, 1, 0},   {7, 80, 1, 2},   {8, 80, 2, 0},   {9, 80, 2, 2},   {10, 80, 3, 0},  {11, 80, 3, 2},
      {12, 120, 1, 0}, {13, 120, 1, 2}, {14, 120, 2, 0}, {15, 120, 2, 2}, {16, 120, 3, 0}, {17, 120, 3, 2},
  }};
  return rows;
}

InstanceConfig catalog_instance(int id, CustomerDistribution customers, Assumption assumption,
                                const InverseSpeedModel& true_tt) {
  const auto& rows = instance_catalog();
  if (id < 0 || id >= static_cast<int>(rows.size()))
    throw std::invalid_argument("unknown instance id " + std::to_string(id));
  const auto& row = rows[id];
  InstanceConfig config;
  config.id = row.id;
  config.expected_orders = row.orders;
  config.fleet_size = row.vehicles;
  config.penalty_cmiss = row.penalty;
  config.spatial = spatial_model_for(customers);
  config.true_tt = true_tt;
  config.assumed_tt = assumed_model_for(true_tt, assumption);
  return config;
}

std::string to_string(Assumption a) {
  switch (a) {
    case Assumption::deterministic: return "deterministic";
    case Assumption::stochastic: return "stochastic";
    case Assumption::misspecified: return "misspecified";
  }
  return "?";
}

std::string to_string(CustomerDistribution d) {
  switch (d) {
    case CustomerDistribution::gaussian: return "gaussian";
    case CustomerDistribution::uniform: return "uniform";
    case CustomerDistribution::cluster: return "cluster";
  }
  return "?";
}

Assumption parse_assumption(const std::string& s) {
  if (s == "deterministic") return Assumption::deterministic;
  if (s == "stochastic") return Assumption::stochastic;
  if (s == "misspecified") return Assumption::misspecified;
  throw std::invalid_argument("unknown travel-time assumption '" + s + "'");
}

CustomerDistribution parse_customer_distribution(const std::string& s) {
  if (s == "gaussian") return CustomerDistribution::gaussian;
  if (s == "uniform") return CustomerDistribution::uniform;
  if (s == "cluster" || s == "clusters") return CustomerDistribution::cluster;
  throw std::invalid_argument("unknown customer distribution '" + s + "'");
}

json model_to_json(const InverseSpeedModel& model) {
  constexpr double to_hours = 1.0 / 60.0;
  switch (model.kind()) {
    case InverseSpeedModel::Kind::gaussian:
      return {{"kind", "gaussian"}, {"mean", model.mean() * to_hours}, {"std", model.std() * to_hours}};
    case InverseSpeedModel::Kind::deterministic:
      return {{"kind", "deterministic"}, {"mean", model.mean() * to_hours}};
    case InverseSpeedModel::Kind::mixture: {
      json components = json::array();
      for (const auto& c : model.components())
        components.push_back({{"weight", c.weight}, {"mean", c.mean * to_hours}, {"std", c.std * to_hours}});
      return {{"kind", "mixture"}, {"components", components}};
    }
  }
  throw std::logic_error("unknown model kind");
}

InverseSpeedModel model_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "gaussian")
    return InverseSpeedModel::gaussian(hours_per_km_to_min(j.at("mean").get<double>()),
                                       hours_per_km_to_min(j.at("std").get<double>()));
  if (kind == "deterministic")
    return InverseSpeedModel::deterministic(hours_per_km_to_min(j.at("mean").get<double>()));
  if (kind == "mixture") {
    std::vector<MixtureComponent> components;
    for (const auto& c : j.at("components"))
      components.push_back({c.at("weight").get<double>(), hours_per_km_to_min(c.at("mean").get<double>()),
                            hours_per_km_to_min(c.at("std").get<double>())});
    return InverseSpeedModel::mixture(std::move(components));
  }
  throw std::invalid_argument("unknown inverse speed model kind '" + kind + "'");
}

namespace {

json spatial_to_json(const SpatialModel& s) {
  switch (s.kind) {
    case SpatialModel::Kind::gaussian: return {{"kind", "gaussian"}, {"std_km", s.std_km}};
    case SpatialModel::Kind::uniform: return {{"kind", "uniform"}, {"half_width_km", s.half_width_km}};
    case SpatialModel::Kind::clusters: {
      json centers = json::array();
      for (const auto& c : s.centers) centers.push_back({c.x, c.y});
      return {{"kind", "clusters"}, {"centers", centers}, {"std_km", s.std_km}};
    }
  }
  throw std::logic_error("unknown spatial kind");
}

SpatialModel spatial_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  SpatialModel s;
  if (kind == "gaussian") {
    s.kind = SpatialModel::Kind::gaussian;
    s.std_km = j.at("std_km").get<double>();
  } else if (kind == "uniform") {
    s.kind = SpatialModel::Kind::uniform;
    s.half_width_km = j.at("half_width_km").get<double>();
  } else if (kind == "clusters") {
    s.kind = SpatialModel::Kind::clusters;
    s.std_km = j.at("std_km").get<double>();
    for (const auto& c : j.at("centers")) s.centers.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
  } else {
    throw std::invalid_argument("unknown spatial model kind '" + kind + "'");
  }
  return s;
}

}  // namespace

json to_json(const InstanceConfig& c) {
  return {{"id", c.id},
          {"shift_end_min", c.shift_end_min},
          {"last_order_min", c.last_order_min},
          {"service_min", c.service_min},
          {"deadlines_min", c.deadlines_min},
          {"fleet_size", c.fleet_size},
          {"expected_orders", c.expected_orders},
          {"penalty_cmiss", c.penalty_cmiss},
          {"spatial_model", spatial_to_json(c.spatial)},
          {"true_tt_model", model_to_json(c.true_tt)},
          {"assumed_tt_model", model_to_json(c.assumed_tt)},
          {"depot", {c.depot.x, c.depot.y}},
          {"area_half_width_km", c.area_half_width_km},
          {"avg_prices", c.avg_prices}};
}

InstanceConfig instance_from_json(const json& j) {
  InstanceConfig c;
  c.id = j.value("id", -1);
  c.shift_end_min = j.value("shift_end_min", c.shift_end_min);
  c.last_order_min = j.value("last_order_min", c.last_order_min);
  c.service_min = j.value("service_min", c.service_min);
  if (j.contains("deadlines_min")) {
    const auto d = j.at("deadlines_min").get<std::vector<double>>();
    if (d.size() != kOptions) throw std::invalid_argument("instance: exactly three deadlines expected");
    std::copy(d.begin(), d.end(), c.deadlines_min.begin());
  }
  c.fleet_size = j.at("fleet_size").get<int>();
  c.expected_orders = j.at("expected_orders").get<double>();
  c.penalty_cmiss = j.value("penalty_cmiss", 0.0);
  if (j.contains("spatial_model")) c.spatial = spatial_from_json(j.at("spatial_model"));
  if (j.contains("true_tt_model")) c.true_tt = model_from_json(j.at("true_tt_model"));
  if (j.contains("assumed_tt_model")) c.assumed_tt = model_from_json(j.at("assumed_tt_model"));
  if (j.contains("depot")) c.depot = {j.at("depot").at(0).get<double>(), j.at("depot").at(1).get<double>()};
  c.area_half_width_km = j.value("area_half_width_km", c.area_half_width_km);
  if (j.contains("avg_prices")) {
    const auto w = j.at("avg_prices").get<std::vector<double>>();
    if (w.size() != kOptions) throw std::invalid_argument("instance: exactly three average prices expected");
    std::copy(w.begin(), w.end(), c.avg_prices.begin());
  }
  c.validate();
  return c;
}

json catalog_to_json() {
  InstanceConfig defaults;
  json d = to_json(defaults);
  for (const char* key : {"id", "fleet_size", "expected_orders", "penalty_cmiss", "spatial_model", "assumed_tt_model"})
    d.erase(key);
  json rows = json::array();
  for (const auto& r : instance_catalog())
    rows.push_back({{"id", r.id}, {"expected_orders", r.orders}, {"fleet_size", r.vehicles}, {"penalty_cmiss", r.penalty}});
  return {{"schema", "sdd_instances/1"}, {"defaults", d}, {"instances", rows}};
}

std::vector<CatalogRow> catalog_from_json(const json& j) {
  if (j.value("schema", "") != "sdd_instances/1") throw std::invalid_argument("catalog: unsupported schema");
  std::vector<CatalogRow> rows;
  for (const auto& r : j.at("instances"))
    rows.push_back({r.at("id").get<int>(), r.at("expected_orders").get<int>(), r.at("fleet_size").get<int>(),
                    r.at("penalty_cmiss").get<double>()});
  return rows;
}

}  // namespace sdd
