#include "sdd/travel_time.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace sdd {

namespace {

void validate(const std::vector<MixtureComponent>& components) {
  if (components.empty()) throw std::invalid_argument("inverse speed model: no components");
  double total = 0.0;
  for (const auto& c : components) {
    if (!(c.weight > 0.0)) throw std::invalid_argument("inverse speed model: weight must be positive");
    if (!(c.mean > 0.0)) throw std::invalid_argument("inverse speed model: mean must be positive");
    if (!(c.std >= 0.0)) throw std::invalid_argument("inverse speed model: negative std");
    if (c.mean < kMinInverseSpeed || c.mean > kMaxInverseSpeed)
      throw std::invalid_argument("inverse speed model: mean outside truncation bounds");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("inverse speed model: weights must sum to 1");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in (0,1) from 53 hashed bits.
double hashed_uniform(std::uint64_t key) {
  return (static_cast<double>(splitmix64(key) >> 11) + 0.5) * 0x1.0p-53;
}

constexpr std::uint64_t kCrnSalt = 0x5dd0c0ffee5eedULL;

}  // namespace

InverseSpeedModel::InverseSpeedModel(Kind kind, std::vector<MixtureComponent> components)
    : kind_(kind), components_(std::move(components)) {
  validate(components_);
  double second = 0.0;
  for (const auto& c : components_) {
    mean_ += c.weight * c.mean;
    second += c.weight * (c.std * c.std + c.mean * c.mean);
  }
  std_ = std::sqrt(std::max(0.0, second - mean_ * mean_));
}

InverseSpeedModel InverseSpeedModel::gaussian(double mean, double std) {
  if (!(std > 0.0)) throw std::invalid_argument("gaussian inverse speed model needs std > 0");
  return {Kind::gaussian, {{1.0, mean, std}}};
}

InverseSpeedModel InverseSpeedModel::mixture(std::vector<MixtureComponent> components) {
  for (const auto& c : components)
    if (!(c.std > 0.0)) throw std::invalid_argument("mixture component needs std > 0");
  return {Kind::mixture, std::move(components)};
}

InverseSpeedModel InverseSpeedModel::deterministic(double mean) {
  return {Kind::deterministic, {{1.0, mean, 0.0}}};
}

InverseSpeedModel InverseSpeedModel::default_gaussian() {
  return gaussian(hours_per_km_to_min(0.0375), hours_per_km_to_min(0.0131));
}

InverseSpeedModel InverseSpeedModel::default_mixture() {
  return mixture({{0.5, hours_per_km_to_min(1.0 / 20.0), hours_per_km_to_min(1.0 / 250.0)},
                  {0.5, hours_per_km_to_min(1.0 / 40.0), hours_per_km_to_min(1.0 / 250.0)}});
}

std::string InverseSpeedModel::name() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::gaussian: out << "gaussian(" << mean_ << "," << std_ << ")"; break;
    case Kind::deterministic: out << "deterministic(" << mean_ << ")"; break;
    case Kind::mixture:
      out << "mixture(";
      for (std::size_t i = 0; i < components_.size(); ++i) {
        const auto& c = components_[i];
        out << (i ? ";" : "") << c.weight << ":" << c.mean << "," << c.std;
      }
      out << ")";
      break;
  }
  return out.str();
}

bool operator==(const InverseSpeedModel& a, const InverseSpeedModel& b) {
  if (a.kind_ != b.kind_ || a.components_.size() != b.components_.size()) return false;
  for (std::size_t i = 0; i < a.components_.size(); ++i) {
    const auto& x = a.components_[i];
    const auto& y = b.components_[i];
    if (x.weight != y.weight || x.mean != y.mean || x.std != y.std) return false;
  }
  return true;
}

Moments model_moments(const InverseSpeedModel& model) { return {model.mean(), model.std()}; }

double sample_inverse_speed(const InverseSpeedModel& model, std::mt19937_64& rng) {
  if (model.kind() == InverseSpeedModel::Kind::deterministic) return model.mean();
  const auto components = model.components();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < 1'000'000; ++attempt) {
    const MixtureComponent* chosen = &components.back();
    if (components.size() > 1) {
      double u = unit(rng);
      for (const auto& c : components) {
        if (u < c.weight) {
          chosen = &c;
          break;
        }
        u -= c.weight;
      }
    }
    std::normal_distribution<double> normal(chosen->mean, chosen->std);
    const double draw = normal(rng);
    if (draw >= kMinInverseSpeed && draw <= kMaxInverseSpeed) return draw;
  }
  throw std::runtime_error("sample_inverse_speed: rejection cap reached for " + model.name());
}

double SpeedField::at(int quadrant, int period) const {
  if (quadrant < 0 || quadrant >= kQuadrants || period < 0)
    throw std::out_of_range("SpeedField: cell index");
  return cells_[quadrant * kPeriods + std::min(period, kPeriods - 1)];
}

double SpeedField::leg_minutes(Point origin, double distance_km, double depart_min) const {
  return distance_km * at(quadrant_of(origin), period_of(depart_min));
}

SpeedField realize_speed_field(const InverseSpeedModel& model, std::mt19937_64& rng) {
  SpeedField field;
  for (int q = 0; q < SpeedField::kQuadrants; ++q)
    for (int p = 0; p < SpeedField::kPeriods; ++p) field.cell(q, p) = sample_inverse_speed(model, rng);
  return field;
}

LegTimeStats leg_time_stats(const InverseSpeedModel& model, double distance_km) {
  if (!(distance_km >= 0.0)) throw std::invalid_argument("leg_time_stats: negative distance");
  return {distance_km * model.mean(), distance_km * distance_km * model.variance()};
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

namespace {

struct CrnDraw {
  double selector;  // uniform, picks the mixture component
  double z;         // standard normal
};

CrnDraw crn_draw(int sample, std::size_t leg) {
  const std::uint64_t key =
      kCrnSalt ^ (static_cast<std::uint64_t>(sample) << 32) ^ (static_cast<std::uint64_t>(leg) * 3);
  const double u1 = hashed_uniform(key + 1);
  const double u2 = hashed_uniform(key + 2);
  return {hashed_uniform(key), std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2)};
}

constexpr std::size_t kCachedLegs = 128;

// Draws of the first kCachedLegs legs, laid out leg-major.
const std::vector<CrnDraw>& crn_table() {
  static const std::vector<CrnDraw> table = [] {
    std::vector<CrnDraw> t(kCachedLegs * kCrnSamples);
    for (std::size_t leg = 0; leg < kCachedLegs; ++leg)
      for (int s = 0; s < kCrnSamples; ++s) t[leg * kCrnSamples + s] = crn_draw(s, leg);
    return t;
  }();
  return table;
}

double apply_draw(std::span<const MixtureComponent> components, const CrnDraw& d) {
  const MixtureComponent* chosen = &components.back();
  if (components.size() > 1) {
    double u = d.selector;
    for (const auto& c : components) {
      if (u < c.weight) {
        chosen = &c;
        break;
      }
      u -= c.weight;
    }
  }
  return chosen->mean + chosen->std * d.z;
}

// samples[s] += km * X(s, leg) for every sample.
void add_crn_leg(const InverseSpeedModel& model, std::size_t leg, double km, std::vector<double>& samples) {
  const auto components = model.components();
  if (leg < kCachedLegs) {
    const CrnDraw* row = crn_table().data() + leg * kCrnSamples;
    for (int s = 0; s < kCrnSamples; ++s) samples[s] += km * apply_draw(components, row[s]);
    return;
  }
  for (int s = 0; s < kCrnSamples; ++s) samples[s] += km * apply_draw(components, crn_draw(s, leg));
}

}  // namespace

double crn_inverse_speed(const InverseSpeedModel& model, int sample, std::size_t leg) {
  if (sample < 0 || sample >= kCrnSamples) return apply_draw(model.components(), crn_draw(sample, leg));
  if (leg < kCachedLegs) return apply_draw(model.components(), crn_table()[leg * kCrnSamples + sample]);
  return apply_draw(model.components(), crn_draw(sample, leg));
}

TravelTimeAccumulator::TravelTimeAccumulator(const InverseSpeedModel& model) : model_(&model) {
  if (model.kind() == InverseSpeedModel::Kind::mixture) terms_.push_back({1.0, 0.0, 0.0});
}

void TravelTimeAccumulator::add_leg(double distance_km) {
  if (!(distance_km >= 0.0)) throw std::invalid_argument("add_leg: negative distance");
  if (distance_km == 0.0) return;
  legs_.push_back(distance_km);
  distance_ += distance_km;
  const auto stats = leg_time_stats(*model_, distance_km);
  mean_ += stats.mean_min;
  var_ += stats.var_min2;
  if (model_->kind() != InverseSpeedModel::Kind::mixture) return;

  if (!samples_.empty()) {
    add_crn_leg(*model_, legs_.size() - 1, distance_km, samples_);
    return;
  }
  const auto components = model_->components();
  if (terms_.size() * components.size() > kMaxEnumerationTerms) {
    switch_to_monte_carlo();
    return;
  }
  std::vector<Term> next;
  next.reserve(terms_.size() * components.size());
  for (const auto& t : terms_)
    for (const auto& c : components)
      next.push_back({t.weight * c.weight, t.mean + distance_km * c.mean,
                      t.var + distance_km * distance_km * c.std * c.std});
  terms_ = std::move(next);
}

void TravelTimeAccumulator::switch_to_monte_carlo() {
  terms_.clear();
  samples_.assign(kCrnSamples, 0.0);
  for (std::size_t leg = 0; leg < legs_.size(); ++leg) add_crn_leg(*model_, leg, legs_[leg], samples_);
}

double TravelTimeAccumulator::probability_within(double budget_min) const {
  if (legs_.empty()) return budget_min >= 0.0 ? 1.0 : 0.0;
  if (budget_min < 0.0) return 0.0;
  switch (model_->kind()) {
    case InverseSpeedModel::Kind::deterministic:
      return distance_ * model_->mean() < budget_min ? 1.0 : 0.0;
    case InverseSpeedModel::Kind::gaussian:
      return normal_cdf((budget_min - mean_) / std::sqrt(var_));
    case InverseSpeedModel::Kind::mixture:
      break;
  }
  if (!samples_.empty()) {
    const auto hits = std::count_if(samples_.begin(), samples_.end(),
                                    [budget_min](double t) { return t <= budget_min; });
    return static_cast<double>(hits) / kCrnSamples;
  }
  double p = 0.0;
  for (const auto& t : terms_) p += t.weight * normal_cdf((budget_min - t.mean) / std::sqrt(t.var));
  return std::clamp(p, 0.0, 1.0);
}

double on_time_probability(const InverseSpeedModel& model, std::span<const double> legs_km,
                           double budget_min) {
  TravelTimeAccumulator acc(model);
  for (double d : legs_km) acc.add_leg(d);
  return acc.probability_within(budget_min);
}

int deterministic_on_time(std::span<const double> legs_km, double budget_min,
                          const InverseSpeedModel& model) {
  double total = 0.0;
  for (double d : legs_km) total += d;
  return total * model.mean() < budget_min ? 1 : 0;
}

}  // namespace sdd
