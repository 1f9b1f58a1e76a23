#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sdd/geometry.hpp"

namespace sdd {

/// Inverse-speed truncation interval in min/km (1/120 .. 1/5 h/km).
inline constexpr double kMinInverseSpeed = 0.5;
inline constexpr double kMaxInverseSpeed = 12.0;

/// Converts h/km into min/km.
inline constexpr double hours_per_km_to_min(double h_per_km) { return h_per_km * 60.0; }

struct MixtureComponent {
  double weight = 1.0;
  double mean = 0.0;  // min/km
  double std = 0.0;   // min/km
};

/// Distribution of the inverse speed (min/km) of a single leg.
class InverseSpeedModel {
 public:
  enum class Kind { gaussian, mixture, deterministic };

  static InverseSpeedModel gaussian(double mean, double std);
  static InverseSpeedModel mixture(std::vector<MixtureComponent> components);
  static InverseSpeedModel deterministic(double mean);

  /// Gaussian N(0.0375, 0.0131) h/km.
  static InverseSpeedModel default_gaussian();
  /// Equal-weight mixture of N(1/20, 1/250) and N(1/40, 1/250) h/km.
  static InverseSpeedModel default_mixture();

  Kind kind() const { return kind_; }
  std::span<const MixtureComponent> components() const { return components_; }

  /// Mean and standard deviation of the untruncated distribution.
  double mean() const { return mean_; }
  double std() const { return std_; }
  double variance() const { return std_ * std_; }

  std::string name() const;

  friend bool operator==(const InverseSpeedModel&, const InverseSpeedModel&);

 private:
  InverseSpeedModel(Kind kind, std::vector<MixtureComponent> components);

  Kind kind_;
  std::vector<MixtureComponent> components_;
  double mean_ = 0.0;
  double std_ = 0.0;
};

struct Moments {
  double mean = 0.0;
  double std = 0.0;
};

/// Closed-form mixture moments, ignoring truncation.
Moments model_moments(const InverseSpeedModel& model);

/// One draw, truncated to [kMinInverseSpeed, kMaxInverseSpeed] by rejection.
double sample_inverse_speed(const InverseSpeedModel& model, std::mt19937_64& rng);

/// Realized inverse speeds per (quadrant, period); shared by every leg departing there and then.
class SpeedField {
 public:
  static constexpr int kQuadrants = 4;
  static constexpr int kShiftPeriods = 32;
  static constexpr int kOvertimePeriods = 8;
  static constexpr int kPeriods = kShiftPeriods + kOvertimePeriods;

  SpeedField() : cells_(kQuadrants * kPeriods, 0.0) {}

  /// Period indices past the last column reuse the last column.
  double at(int quadrant, int period) const;
  double& cell(int quadrant, int period) { return cells_[quadrant * kPeriods + period]; }

  /// Realized travel time of a leg departing `origin` at `depart_min`.
  double leg_minutes(Point origin, double distance_km, double depart_min) const;

 private:
  std::vector<double> cells_;
};

SpeedField realize_speed_field(const InverseSpeedModel& model, std::mt19937_64& rng);

struct LegTimeStats {
  double mean_min = 0.0;
  double var_min2 = 0.0;
};

/// Planning moments of a leg: distance times one inverse-speed draw.
LegTimeStats leg_time_stats(const InverseSpeedModel& model, double distance_km);

/// Number of exact mixture enumeration terms allowed before switching to Monte Carlo.
inline constexpr std::size_t kMaxEnumerationTerms = 1024;
inline constexpr int kCrnSamples = 2000;

/// Running distribution of the travel time sum_i d_i X_i along a route, built one leg at a time.
/// Mixture models enumerate component assignments while the term count stays within
/// kMaxEnumerationTerms and fall back to kCrnSamples common-random-number scenarios after that.
class TravelTimeAccumulator {
 public:
  explicit TravelTimeAccumulator(const InverseSpeedModel& model);

  void add_leg(double distance_km);

  /// P(accumulated travel time <= budget_min).
  double probability_within(double budget_min) const;

  double mean() const { return mean_; }
  double variance() const { return var_; }
  std::size_t legs() const { return legs_.size(); }
  bool exact() const { return samples_.empty(); }

 private:
  struct Term {
    double weight;
    double mean;
    double var;
  };

  void switch_to_monte_carlo();

  const InverseSpeedModel* model_;
  std::vector<double> legs_;
  double mean_ = 0.0;
  double var_ = 0.0;
  double distance_ = 0.0;
  std::vector<Term> terms_;
  std::vector<double> samples_;
};

/// P(sum_i legs[i] * X_i <= budget) for i.i.d. untruncated X_i from `model`.
/// The caller has already removed fixed service times from `budget_min`.
double on_time_probability(const InverseSpeedModel& model, std::span<const double> legs_km,
                           double budget_min);

/// 1 iff sum(legs) * mean inverse speed is strictly below the budget.
int deterministic_on_time(std::span<const double> legs_km, double budget_min,
                          const InverseSpeedModel& model);

/// Common-random-number draw of the inverse speed of leg `leg` in Monte Carlo sample `sample`.
/// Identical across calls, so candidate routes are compared on the same scenarios.
double crn_inverse_speed(const InverseSpeedModel& model, int sample, std::size_t leg);

double normal_cdf(double z);

}  // namespace sdd
