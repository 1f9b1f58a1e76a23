#include "sdd/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sdd/choice.hpp"
#include "sdd/parallel.hpp"
#include "sdd/seeding.hpp"

namespace sdd {

using nlohmann::json;

namespace {

bool inside(Point p, double half_width) { return std::abs(p.x) <= half_width && std::abs(p.y) <= half_width; }

json point_json(Point p) { return json::array({p.x, p.y}); }

json option_json(int option) {
  if (option == kNextDay) return "next_day";
  if (option < 0) return nullptr;
  return option;
}

}  // namespace

std::string to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::pending: return "pending";
    case Outcome::served: return "served";
    case Outcome::missed: return "missed";
    case Outcome::declined: return "declined";
    case Outcome::rejected: return "rejected";
  }
  return "?";
}

Point sample_location(const SpatialModel& model, double half_width_km, std::mt19937_64& rng) {
  switch (model.kind) {
    case SpatialModel::Kind::uniform: {
      const double w = std::min(model.half_width_km, half_width_km);
      std::uniform_real_distribution<double> u(-w, w);
      const double x = u(rng);
      return {x, u(rng)};
    }
    case SpatialModel::Kind::gaussian:
    case SpatialModel::Kind::clusters:
      break;
  }
  std::uniform_int_distribution<std::size_t> pick(0, model.centers.empty() ? 0 : model.centers.size() - 1);
  for (int attempt = 0; attempt < 1'000'000; ++attempt) {
    const Point center = model.kind == SpatialModel::Kind::clusters ? model.centers[pick(rng)] : Point{};
    std::normal_distribution<double> nx(center.x, model.std_km);
    std::normal_distribution<double> ny(center.y, model.std_km);
    const double x = nx(rng);
    const Point p{x, ny(rng)};
    if (inside(p, half_width_km)) return p;
  }
  throw std::runtime_error("sample_location: spatial model has no mass inside the service area");
}

std::vector<Customer> generate_customers(const InstanceConfig& instance, std::mt19937_64& rng) {
  std::vector<Customer> out;
  if (instance.expected_orders <= 0.0) return out;
  const double rate = instance.expected_orders / instance.last_order_min;
  std::exponential_distribution<double> gap(rate);
  double t = gap(rng);
  while (t <= instance.last_order_min) {
    Customer c;
    c.id = static_cast<int>(out.size());
    c.arrival_min = t;
    c.location = sample_location(instance.spatial, instance.area_half_width_km, rng);
    out.push_back(c);
    t += gap(rng);
  }
  return out;
}

EpisodeResult run_episode(const EpisodeConfig& config) {
  const InstanceConfig& instance = config.instance;
  instance.validate();
  config.policy.validate();
  if (needs_value_model(config.policy.kind) && config.value_model == nullptr)
    throw std::invalid_argument(to_string(config.policy.kind) + " policy needs a value model");

  auto customer_rng = stream_rng(config.seed, Stream::customers);
  auto field_rng = stream_rng(config.seed, Stream::speed_field);
  auto choice_rng = stream_rng(config.seed, Stream::choice);

  std::vector<Customer> arrivals = config.customers ? *config.customers : generate_customers(instance, customer_rng);
  std::sort(arrivals.begin(), arrivals.end(),
            [](const Customer& a, const Customer& b) { return a.arrival_min < b.arrival_min; });
  for (std::size_t i = 0; i < arrivals.size(); ++i) {
    arrivals[i].id = static_cast<int>(i);
    arrivals[i].outcome = Outcome::pending;
    arrivals[i].option = kNoChoice;
    arrivals[i].agreed_price = 0.0;
  }

  const SpeedField field = realize_speed_field(instance.true_tt, field_rng);
  const LegTimer leg_time = config.realized_leg_time
                                ? config.realized_leg_time
                                : LegTimer([&field](Point o, double d, double t) { return field.leg_minutes(o, d, t); });

  EpisodeResult result;
  DecisionState state;
  state.routes = RoutePlan::idle_fleet(instance.fleet_size, instance.depot);
  state.customers = arrivals;

  std::vector<Settlement> settled;
  auto advance = [&](double until) {
    auto step = advance_routes(state, until, leg_time, instance.service_min, instance.penalty_cmiss);
    if (config.record_events) {
      for (const auto& leg : step.legs)
        result.events.push_back({{"type", "departure"}, {"vehicle", leg.vehicle}, {"from", point_json(leg.from)},
                                 {"to", point_json(leg.to)}, {"depart_min", leg.depart_min},
                                 {"arrive_min", leg.arrive_min}});
      for (const auto& s : step.settlements)
        result.events.push_back({{"type", "settlement"}, {"customer", s.customer}, {"vehicle", s.vehicle},
                                 {"t", s.arrival_min}, {"deadline_min", s.deadline_abs_min}, {"on_time", s.on_time},
                                 {"revenue", s.revenue}});
    }
    settled.insert(settled.end(), step.settlements.begin(), step.settlements.end());
  };

  std::vector<double> observation_times;
  for (std::size_t k = 0; k < arrivals.size(); ++k) {
    const Customer customer = arrivals[k];
    advance(customer.arrival_min);
    state.now_min = customer.arrival_min;
    state.pending = customer;
    const auto ctx = PlanningContext::from(instance, state.now_min);
    // Drawn for every request so choice noise lines up across policies.
    const auto noise = draw_gumbel_noise(choice_rng);

    CustomerRecord record;
    record.id = customer.id;
    record.arrival_min = customer.arrival_min;
    record.location = customer.location;
    record.depot_distance_km = distance(instance.depot, customer.location);
    if (config.record_events)
      result.events.push_back({{"type", "request"}, {"customer", customer.id}, {"t", customer.arrival_min},
                               {"location", point_json(customer.location)}, {"depot_distance_km", record.depot_distance_km}});

    auto& tracked = state.customers[k];
    const auto feasibility = feasible_deadlines(state, customer, instance, ctx);
    if (!any_feasible(feasibility)) {
      tracked.option = kNextDay;
      tracked.outcome = Outcome::rejected;
    } else {
      record.quote = quote(config.policy, state, customer, feasibility, config.value_model, instance, ctx);
      const int choice = choose_with_noise(record.quote.prices, noise);
      tracked.option = choice;
      if (choice == kNextDay) {
        tracked.outcome = Outcome::declined;
      } else {
        const double price = record.quote.prices[choice];
        RoutePlan adopted = feasibility[choice]->plan;
        for (auto& stop : adopted.vehicles[feasibility[choice]->vehicle].stops)
          if (stop.is_customer() && stop.customer == customer.id) stop.price = price;
        state.routes = std::move(adopted);
        tracked.agreed_price = price;
        tracked.deadline_abs_min = customer.arrival_min + instance.deadlines_min[choice];
      }
    }
    record.choice = tracked.option;
    record.agreed_price = tracked.agreed_price;
    if (config.record_events) {
      result.events.push_back({{"type", "quote"}, {"customer", customer.id}, {"prices", record.quote.prices},
                               {"feasible", record.quote.feasible}, {"on_time", record.quote.on_time},
                               {"opportunity", record.quote.opportunity}});
      result.events.push_back({{"type", "choice"}, {"customer", customer.id}, {"option", option_json(tracked.option)},
                               {"rejected", tracked.outcome == Outcome::rejected}, {"price", tracked.agreed_price}});
    }
    if (config.record_observations) {
      Observation obs;
      obs.period = period_of(state.now_min);
      obs.features = extract_features(state.routes, ctx);
      result.observations.push_back(obs);
      observation_times.push_back(state.now_min);
    }
    result.customers.push_back(record);
    state.pending.reset();
  }
  advance(std::numeric_limits<double>::infinity());

  RunMetrics& m = result.metrics;
  for (const auto& s : settled) m.revenue += s.revenue;
  for (std::size_t k = 0; k < state.customers.size(); ++k) {
    const auto& c = state.customers[k];
    switch (c.outcome) {
      case Outcome::served: ++m.served; ++m.accepted; break;
      case Outcome::missed: ++m.missed; ++m.accepted; break;
      case Outcome::declined: ++m.declined; break;
      case Outcome::rejected: ++m.rejected; break;
      case Outcome::pending: throw std::logic_error("run_episode: customer left unsettled");
    }
    result.customers[k].outcome = c.outcome;
  }

  if (config.record_observations) {
    std::sort(settled.begin(), settled.end(),
              [](const Settlement& a, const Settlement& b) { return a.arrival_min < b.arrival_min; });
    // Suffix sums of settled revenue by settlement time.
    std::vector<double> suffix(settled.size() + 1, 0.0);
    for (std::size_t i = settled.size(); i-- > 0;) suffix[i] = suffix[i + 1] + settled[i].revenue;
    for (std::size_t i = 0; i < result.observations.size(); ++i) {
      const double t = observation_times[i];
      const auto first_after = std::upper_bound(settled.begin(), settled.end(), t,
                                                [](double v, const Settlement& s) { return v < s.arrival_min; });
      result.observations[i].remaining_revenue = suffix[first_after - settled.begin()];
    }
  }
  return result;
}

namespace {

MetricSummary summarize(const std::vector<double>& xs) {
  MetricSummary s;
  const double n = static_cast<double>(xs.size());
  for (double x : xs) s.mean += x;
  s.mean /= n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.se = std::sqrt(ss / (n - 1.0) / n);
  }
  return s;
}

}  // namespace

AggregateMetrics aggregate(const std::vector<RunMetrics>& results) {
  if (results.empty()) throw std::invalid_argument("aggregate: no results");
  auto column = [&](auto get) {
    std::vector<double> xs;
    xs.reserve(results.size());
    for (const auto& r : results) xs.push_back(static_cast<double>(get(r)));
    return summarize(xs);
  };
  AggregateMetrics a;
  a.episodes = static_cast<int>(results.size());
  a.revenue = column([](const RunMetrics& r) { return r.revenue; });
  a.served = column([](const RunMetrics& r) { return r.served; });
  a.accepted = column([](const RunMetrics& r) { return r.accepted; });
  a.missed = column([](const RunMetrics& r) { return r.missed; });
  a.declined = column([](const RunMetrics& r) { return r.declined; });
  a.rejected = column([](const RunMetrics& r) { return r.rejected; });
  return a;
}

AggregateMetrics aggregate(const std::vector<EpisodeResult>& results) {
  std::vector<RunMetrics> metrics;
  metrics.reserve(results.size());
  for (const auto& r : results) metrics.push_back(r.metrics);
  return aggregate(metrics);
}

std::vector<EpisodeResult> run_episodes(const EpisodeConfig& base, std::uint64_t master_seed, Purpose purpose,
                                        int episodes, unsigned threads) {
  std::vector<EpisodeResult> out(std::max(0, episodes));
  parallel_for(out.size(), threads, [&](std::size_t i) {
    EpisodeConfig config = base;
    config.seed = episode_seed(master_seed, purpose, i);
    out[i] = run_episode(config);
  });
  return out;
}

}  // namespace sdd
