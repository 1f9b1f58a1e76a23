#include "sdd/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "sdd/choice.hpp"
#include "sdd/seeding.hpp"

namespace sdd {

using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  return out;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("malformed number '" + s + "'");
  return v;
}

void ensure_dir(const fs::path& dir) {
  if (!dir.empty()) fs::create_directories(dir);
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

CsvTable read_csv(const fs::path& path, const std::string& schema, const std::vector<std::string>& header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(in, line) || line != "# " + schema)
    throw std::invalid_argument(path.string() + ": expected schema line '# " + schema + "'");
  t.schema = schema;
  if (!std::getline(in, line) || split(line) != header)
    throw std::invalid_argument(path.string() + ": unexpected header for " + schema);
  t.header = header;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != header.size())
      throw std::invalid_argument(path.string() + ": row with " + std::to_string(cells.size()) + " cells");
    t.rows.push_back(std::move(cells));
  }
  return t;
}

void write_csv(const fs::path& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "# " << table.schema << '\n' << join(table.header) << '\n';
  for (const auto& row : table.rows) out << join(row) << '\n';
}

const std::vector<std::string>& results_header() {
  static const std::vector<std::string> h{
      "instance", "customers", "assumption", "policy",   "alpha",       "gamma",    "episodes",
      "revenue",  "revenue_se", "served",    "served_se", "accepted",   "accepted_se", "missed",
      "missed_se", "declined",  "declined_se", "rejected", "rejected_se"};
  return h;
}

void write_results(const fs::path& path, const std::vector<ResultsRow>& rows) {
  CsvTable t{kResultsSchema, results_header(), {}};
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    std::vector<std::string> cells{std::to_string(r.instance), r.customers, r.assumption, r.policy,
                                   format_number(r.alpha), format_number(r.gamma), std::to_string(m.episodes)};
    for (const auto* s : {&m.revenue, &m.served, &m.accepted, &m.missed, &m.declined, &m.rejected}) {
      cells.push_back(format_number(s->mean));
      cells.push_back(format_number(s->se));
    }
    t.rows.push_back(std::move(cells));
  }
  write_csv(path, t);
}

std::vector<ResultsRow> read_results(const fs::path& path) {
  const auto t = read_csv(path, kResultsSchema, results_header());
  std::vector<ResultsRow> rows;
  for (const auto& c : t.rows) {
    ResultsRow r;
    r.instance = std::stoi(c[0]);
    r.customers = c[1];
    r.assumption = c[2];
    r.policy = c[3];
    r.alpha = parse_double(c[4]);
    r.gamma = parse_double(c[5]);
    r.metrics.episodes = std::stoi(c[6]);
    auto* m = &r.metrics;
    MetricSummary* fields[] = {&m->revenue, &m->served, &m->accepted, &m->missed, &m->declined, &m->rejected};
    for (int i = 0; i < 6; ++i) {
      fields[i]->mean = parse_double(c[7 + 2 * i]);
      fields[i]->se = parse_double(c[8 + 2 * i]);
    }
    rows.push_back(r);
  }
  return rows;
}

TrainingResult cmd_train(const TrainCommand& cmd) {
  TrainingOptions options;
  options.episodes = cmd.episodes;
  options.seed = cmd.seed;
  options.threads = cmd.threads;
  auto result = train(cmd.instance, options);
  ensure_dir(cmd.out);
  write_json(cmd.out / "value_model.json", to_json(result.model));
  CsvTable curve{kCurveSchema, {"episode", "profit", "running_avg"}, {}};
  for (std::size_t i = 0; i < result.profits.size(); ++i)
    curve.rows.push_back({std::to_string(i + 1), format_number(result.profits[i]),
                          format_number(result.running_average[i])});
  write_csv(cmd.out / "training_curve.csv", curve);
  return result;
}

PolicySearchResult cmd_policy_search(const PolicySearchCommand& cmd) {
  const ValueModel* vm = cmd.value_model ? &*cmd.value_model : nullptr;
  if (needs_value_model(cmd.policy) && vm == nullptr)
    throw std::invalid_argument(to_string(cmd.policy) + " policy search needs a value model");
  auto result = policy_search(cmd.policy, cmd.instance, cmd.grid, cmd.runs, cmd.seed, vm, cmd.threads);
  ensure_dir(cmd.out);
  write_json(cmd.out / "policy.json", to_json(result.best));
  CsvTable grid{kGridSchema, {"alpha", "gamma", "mean_revenue", "std_revenue"}, {}};
  for (const auto& g : result.grid)
    grid.rows.push_back({format_number(g.params.alpha), format_number(g.params.gamma), format_number(g.mean_revenue),
                         format_number(g.std_revenue)});
  write_csv(cmd.out / "policy_grid.csv", grid);
  return result;
}

namespace {

PolicyParams default_params(PolicyKind kind) {
  PolicyParams p;
  p.kind = kind;
  p.alpha = 2.0;
  p.gamma = (kind == PolicyKind::DIST || kind == PolicyKind::OPT_BASIS) ? 1.0 : 0.0;
  if (kind == PolicyKind::OPT) p.alpha = 0.0;
  return p;
}

}  // namespace

std::vector<ResultsRow> cmd_evaluate(const ExperimentSpec& spec) {
  if (spec.episodes < 1) throw std::invalid_argument("evaluate: episodes must be >= 1");
  ensure_dir(spec.out);
  std::vector<ResultsRow> rows;
  std::ofstream events;
  if (spec.event_episodes > 0) {
    events.open(spec.out / "events.jsonl", std::ios::binary);
    if (!events) throw std::runtime_error("cannot write events.jsonl");
  }

  const std::vector<int> ids = spec.custom_instance ? std::vector<int>{spec.custom_instance->id} : spec.instances;
  for (int id : ids) {
    for (auto customers : spec.customers) {
      for (auto assumption : spec.assumptions) {
        InstanceConfig instance;
        if (spec.custom_instance) {
          instance = *spec.custom_instance;
          instance.spatial = spatial_model_for(customers);
          instance.assumed_tt = assumed_model_for(instance.true_tt, assumption);
        } else {
          instance = catalog_instance(id, customers, assumption, spec.true_tt);
        }

        std::optional<ValueModel> model = spec.value_model;
        const bool any_vfa = std::any_of(spec.policies.begin(), spec.policies.end(), needs_value_model);
        if (any_vfa && !model) {
          TrainingOptions options;
          options.episodes = std::max(1, spec.train_episodes);
          options.seed = spec.seed;
          options.threads = spec.threads;
          model = train(instance, options).model;
        }
        const ValueModel* vm = model ? &*model : nullptr;

        std::optional<PolicyParams> tuned_dist;
        auto tune = [&](PolicyKind kind) -> PolicyParams {
          if (spec.params && spec.params->kind == kind) return *spec.params;
          if (spec.tune_runs <= 0) return default_params(kind);
          if (kind == PolicyKind::OPT) return default_params(kind);
          if (kind == PolicyKind::OPT_BASIS || kind == PolicyKind::DIST) {
            if (!tuned_dist)
              tuned_dist = policy_search(PolicyKind::DIST, instance, spec.grid, spec.tune_runs, spec.seed, nullptr,
                                         spec.threads)
                               .best;
            PolicyParams p = *tuned_dist;
            p.kind = kind;
            return p;
          }
          return policy_search(kind, instance, spec.grid, spec.tune_runs, spec.seed, vm, spec.threads).best;
        };

        for (auto kind : spec.policies) {
          EpisodeConfig config;
          config.instance = instance;
          config.policy = tune(kind);
          config.value_model = vm;
          const auto results = run_episodes(config, spec.seed, Purpose::evaluation, spec.episodes, spec.threads);
          rows.push_back({instance.id, to_string(customers), to_string(assumption), to_string(kind),
                          config.policy.alpha, config.policy.gamma, aggregate(results)});
          for (int e = 0; e < std::min(spec.event_episodes, spec.episodes); ++e) {
            EpisodeConfig logged = config;
            logged.record_events = true;
            logged.seed = episode_seed(spec.seed, Purpose::evaluation, e);
            for (auto& ev : run_episode(logged).events) {
              ev["instance"] = instance.id;
              ev["customers"] = to_string(customers);
              ev["assumption"] = to_string(assumption);
              ev["policy"] = to_string(kind);
              ev["episode"] = e;
              events << ev.dump() << '\n';
            }
          }
        }
      }
    }
  }
  write_results(spec.out / "results.csv", rows);
  return rows;
}

CsvTable cmd_compare(const fs::path& a, const fs::path& b, const fs::path& out) {
  const auto ra = read_results(a);
  const auto rb = read_results(b);
  if (ra.size() != rb.size()) throw std::invalid_argument("compare: result files have different row counts");
  CsvTable t{kCompareSchema,
             {"row", "instance", "customers", "assumption_a", "policy_a", "assumption_b", "policy_b", "revenue_pct",
              "served_pct", "accepted_pct", "missed_pct", "declined_pct", "rejected_pct"},
             {}};
  auto pct = [](double x, double y) {
    if (x == 0.0) return y == 0.0 ? 0.0 : std::nan("");
    return (y - x) / x * 100.0;
  };
  for (std::size_t i = 0; i < ra.size(); ++i) {
    const auto& x = ra[i];
    const auto& y = rb[i];
    if (x.instance != y.instance || x.customers != y.customers)
      throw std::invalid_argument("compare: row " + std::to_string(i) + " refers to different cells");
    t.rows.push_back({std::to_string(i), std::to_string(x.instance), x.customers, x.assumption, x.policy, y.assumption,
                      y.policy, format_number(pct(x.metrics.revenue.mean, y.metrics.revenue.mean)),
                      format_number(pct(x.metrics.served.mean, y.metrics.served.mean)),
                      format_number(pct(x.metrics.accepted.mean, y.metrics.accepted.mean)),
                      format_number(pct(x.metrics.missed.mean, y.metrics.missed.mean)),
                      format_number(pct(x.metrics.declined.mean, y.metrics.declined.mean)),
                      format_number(pct(x.metrics.rejected.mean, y.metrics.rejected.mean))});
  }
  if (!out.empty()) {
    ensure_dir(out.parent_path());
    write_csv(out, t);
  }
  return t;
}

CsvTable choice_curve_table() {
  CsvTable t{kChoiceCurveSchema, {"alpha", "p60", "p120", "p240", "p_next_day"}, {}};
  for (int i = 0; i <= 60; ++i) {
    const double alpha = i / 10.0;
    const auto p = option_probabilities(fixed_prices(alpha));
    t.rows.push_back({format_number(alpha), format_number(p[0]), format_number(p[1]), format_number(p[2]),
                      format_number(p[kNextDayIndex])});
  }
  return t;
}

CsvTable fairness_table(const std::vector<json>& events) {
  struct Request {
    double distance = 0.0;
    OptionArray prices{};
    std::array<bool, kOptions> feasible{};
    bool same_day = false;
  };
  auto key_of = [](const json& e) {
    return e.value("customers", std::string{}) + "|" +
                                               e.value("assumption", std::string{}) + "|" +
                                               e.value("policy", std::string{}) + "|" +
                                               std::to_string(e.value("instance", -1)) + "|" +
                                               std::to_string(e.value("episode", 0)) + "|" +
                                               std::to_string(e.at("customer").get<int>());
  };
  std::map<std::string, Request> requests;
  for (const auto& e : events) {
    const auto type = e.value("type", std::string{});
    if (type == "request") {
      Request r;
      r.distance = e.contains("depot_distance_km")
                       ? e.at("depot_distance_km").get<double>()
                       : std::hypot(e.at("location").at(0).get<double>(), e.at("location").at(1).get<double>());
      requests[key_of(e)] = r;
    } else if (type == "quote") {
      auto& r = requests[key_of(e)];
      for (int j = 0; j < kOptions; ++j) {
        r.prices[j] = e.at("prices").at(j).get<double>();
        r.feasible[j] = e.at("feasible").at(j).get<bool>();
      }
    } else if (type == "choice") {
      const auto& opt = e.at("option");
      requests[key_of(e)].same_day = opt.is_number_integer() && opt.get<int>() >= 0;
    }
  }

  struct Bin {
    int requests = 0;
    int same_day = 0;
    OptionArray price_sum{};
    std::array<int, kOptions> price_count{};
  };
  std::map<int, Bin> bins;
  for (const auto& [key, r] : requests) {
    auto& b = bins[static_cast<int>(std::floor(r.distance))];
    ++b.requests;
    b.same_day += r.same_day ? 1 : 0;
    for (int j = 0; j < kOptions; ++j) {
      if (!r.feasible[j]) continue;
      b.price_sum[j] += r.prices[j];
      ++b.price_count[j];
    }
  }
  CsvTable t{kFairnessSchema,
             {"bin_lo_km", "bin_hi_km", "requests", "mean_price_60", "mean_price_120", "mean_price_240", "sdd_share"},
             {}};
  for (const auto& [lo, b] : bins) {
    std::vector<std::string> row{format_number(lo), format_number(lo + 1), std::to_string(b.requests)};
    for (int j = 0; j < kOptions; ++j)
      row.push_back(format_number(b.price_count[j] ? b.price_sum[j] / b.price_count[j] : std::nan("")));
    row.push_back(format_number(static_cast<double>(b.same_day) / b.requests));
    t.rows.push_back(std::move(row));
  }
  return t;
}

void cmd_emit_plots(const std::vector<fs::path>& event_logs, const fs::path& out) {
  std::vector<json> events;
  for (const auto& path : event_logs) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::string line;
    while (std::getline(in, line))
      if (!line.empty()) events.push_back(json::parse(line));
  }
  ensure_dir(out);
  write_csv(out / "choice_curve.csv", choice_curve_table());
  write_csv(out / "fairness.csv", fairness_table(events));
}

}  // namespace sdd
