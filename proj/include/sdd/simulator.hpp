#pragma once

#include <optional>
#include <random>
#include <vector>

#include <nlohmann/json.hpp>

#include "sdd/pricing.hpp"
#include "sdd/routing.hpp"
#include "sdd/seeding.hpp"
#include "sdd/state.hpp"
#include "sdd/vfa.hpp"

namespace sdd {

/// Poisson arrivals on [0, last_order_min] with locations from the spatial model. Gaussian and
/// cluster draws outside the service square are redrawn.
std::vector<Customer> generate_customers(const InstanceConfig& instance, std::mt19937_64& rng);

Point sample_location(const SpatialModel& model, double half_width_km, std::mt19937_64& rng);

struct EpisodeConfig {
  InstanceConfig instance;
  PolicyParams policy;
  /// Required by OPP, OPT and OPT+basis; not owned.
  const ValueModel* value_model = nullptr;
  std::uint64_t seed = 0;
  bool record_events = false;
  bool record_observations = false;
  /// Replaces the generated customer stream when set.
  std::optional<std::vector<Customer>> customers;
  /// Replaces the realized speed field as the source of leg times when set.
  LegTimer realized_leg_time;
};

struct CustomerRecord {
  int id = 0;
  double arrival_min = 0.0;
  Point location{};
  double depot_distance_km = 0.0;
  PriceQuote quote;
  int choice = kNoChoice;
  Outcome outcome = Outcome::pending;
  double agreed_price = 0.0;
};

struct EpisodeResult {
  RunMetrics metrics;
  std::vector<CustomerRecord> customers;
  std::vector<Observation> observations;
  /// JSON-lines event log; empty unless requested.
  std::vector<nlohmann::json> events;
};

EpisodeResult run_episode(const EpisodeConfig& config);

struct MetricSummary {
  double mean = 0.0;
  double se = 0.0;
};

/// Means and standard errors, in table column order.
struct AggregateMetrics {
  int episodes = 0;
  MetricSummary revenue, served, accepted, missed, declined, rejected;
};

AggregateMetrics aggregate(const std::vector<RunMetrics>& results);
AggregateMetrics aggregate(const std::vector<EpisodeResult>& results);

/// Runs `episodes` episodes with seeds episode_seed(master, purpose, i), in parallel.
std::vector<EpisodeResult> run_episodes(const EpisodeConfig& base, std::uint64_t master_seed, Purpose purpose,
                                        int episodes, unsigned threads);

std::string to_string(Outcome outcome);

}  // namespace sdd
