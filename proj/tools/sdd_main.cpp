// sdd: training, policy search, evaluation sweeps and plot data for the same-day delivery simulator.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <nlohmann/json.hpp>

#include "sdd/harness.hpp"
#include "sdd/parallel.hpp"

namespace {

using namespace sdd;

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return nlohmann::json::parse(in);
}

struct WorldFlags {
  int instance = 0;
  std::string customers = "gaussian";
  std::string assumption = "stochastic";
  std::string true_tt = "gaussian";
  std::string instance_file;

  void attach(CLI::App* cmd) {
    cmd->add_option("--instance", instance, "catalog instance id 0..17")->check(CLI::Range(0, 17));
    cmd->add_option("--customers", customers, "gaussian | uniform | clusters");
    cmd->add_option("--assumption", assumption, "deterministic | stochastic | misspecified");
    cmd->add_option("--true-tt", true_tt, "true inverse-speed model: gaussian | mixture");
    cmd->add_option("--instance-file", instance_file, "custom instance JSON (overrides --instance)");
  }

  InverseSpeedModel truth() const {
    if (true_tt == "gaussian") return InverseSpeedModel::default_gaussian();
    if (true_tt == "mixture") return InverseSpeedModel::default_mixture();
    throw std::invalid_argument("unknown --true-tt '" + true_tt + "'");
  }

  InstanceConfig build() const {
    if (!instance_file.empty()) {
      auto config = instance_from_json(load_json(instance_file));
      config.validate();
      return config;
    }
    return catalog_instance(instance, parse_customer_distribution(customers), parse_assumption(assumption), truth());
  }
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<int> parse_ids(const std::string& s) {
  if (s == "all") {
    std::vector<int> ids(instance_catalog().size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
    return ids;
  }
  std::vector<int> ids;
  for (const auto& item : split_list(s)) {
    const int id = std::stoi(item);
    if (id < 0 || id >= static_cast<int>(instance_catalog().size()))
      throw std::invalid_argument("instance " + item + " is not in the catalog");
    ids.push_back(id);
  }
  return ids;
}

template <class T, class F>
std::vector<T> parse_all(const std::string& s, F parse) {
  std::vector<T> out;
  for (const auto& item : split_list(s)) out.push_back(parse(item));
  if (out.empty()) throw std::invalid_argument("empty list '" + s + "'");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Same-day delivery pricing simulator"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  unsigned threads = default_threads();
  std::string out = "out";

  // train
  auto* train_cmd = app.add_subcommand("train", "fit the value model with simulated episodes");
  WorldFlags train_world;
  train_world.attach(train_cmd);
  int train_episodes = 1000;
  train_cmd->add_option("--episodes", train_episodes, "training episodes")->check(CLI::PositiveNumber);
  train_cmd->add_option("--seed", seed);
  train_cmd->add_option("--threads", threads);
  train_cmd->add_option("--out", out);

  // policy-search
  auto* search_cmd = app.add_subcommand("policy-search", "grid search of pricing parameters");
  WorldFlags search_world;
  search_world.attach(search_cmd);
  std::string search_policy = "FIX";
  int runs = 50;
  std::vector<double> grid_alpha, grid_gamma;
  std::string search_value_model;
  search_cmd->add_option("--policy", search_policy, "FIX | DIST | OPP | OPT | OPT+basis");
  search_cmd->add_option("--runs", runs, "validation episodes per grid point")->check(CLI::PositiveNumber);
  search_cmd->add_option("--grid-alpha", grid_alpha)->delimiter(',');
  search_cmd->add_option("--grid-gamma", grid_gamma)->delimiter(',');
  search_cmd->add_option("--value-model", search_value_model, "value_model.json from train");
  search_cmd->add_option("--seed", seed);
  search_cmd->add_option("--threads", threads);
  search_cmd->add_option("--out", out);

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "evaluate policies over instance cells");
  std::string eval_instances = "0", eval_policies = "FIX", eval_assumptions = "stochastic", eval_customers = "gaussian";
  std::string eval_true_tt = "gaussian", eval_instance_file, eval_value_model, eval_params;
  ExperimentSpec spec;
  eval_cmd->add_option("--instance", eval_instances, "comma-separated ids or 'all'");
  eval_cmd->add_option("--policy", eval_policies, "comma-separated policies");
  eval_cmd->add_option("--assumption", eval_assumptions, "comma-separated assumptions");
  eval_cmd->add_option("--customers", eval_customers, "comma-separated customer distributions");
  eval_cmd->add_option("--true-tt", eval_true_tt, "gaussian | mixture");
  eval_cmd->add_option("--instance-file", eval_instance_file, "custom instance JSON");
  eval_cmd->add_option("--episodes", spec.episodes)->check(CLI::PositiveNumber);
  eval_cmd->add_option("--tune-runs", spec.tune_runs, "policy-search runs per grid point (0: no search)");
  eval_cmd->add_option("--grid-alpha", grid_alpha)->delimiter(',');
  eval_cmd->add_option("--grid-gamma", grid_gamma)->delimiter(',');
  eval_cmd->add_option("--train-episodes", spec.train_episodes, "value-model training episodes per cell");
  eval_cmd->add_option("--value-model", eval_value_model, "value_model.json shared by all cells");
  eval_cmd->add_option("--params", eval_params, "policy.json applied to its policy kind");
  eval_cmd->add_option("--events", spec.event_episodes, "episodes per cell logged to events.jsonl");
  eval_cmd->add_option("--seed", seed);
  eval_cmd->add_option("--threads", threads);
  eval_cmd->add_option("--out", out);

  // compare
  auto* compare_cmd = app.add_subcommand("compare", "percentage difference between two results files");
  std::string results_a, results_b, compare_out;
  compare_cmd->add_option("a", results_a)->required()->check(CLI::ExistingFile);
  compare_cmd->add_option("b", results_b)->required()->check(CLI::ExistingFile);
  compare_cmd->add_option("--out", compare_out, "output CSV (stdout when omitted)");

  // emit-plots
  auto* plots_cmd = app.add_subcommand("emit-plots", "choice-curve and fairness plot data");
  std::vector<std::string> event_logs;
  plots_cmd->add_option("--events", event_logs, "events.jsonl files");
  plots_cmd->add_option("--out", out);

  CLI11_PARSE(app, argc, argv);

  auto grid_from_flags = [&] {
    GridSpec grid;
    if (!grid_alpha.empty()) grid.alphas = grid_alpha;
    if (!grid_gamma.empty()) grid.gammas = grid_gamma;
    return grid;
  };

  try {
    if (threads == 0) throw std::invalid_argument("--threads must be >= 1");
    if (train_cmd->parsed()) {
      TrainCommand cmd{train_world.build(), train_episodes, seed, threads, out};
      const auto result = cmd_train(cmd);
      std::cout << "trained " << result.profits.size() << " episodes, final running average "
                << (result.running_average.empty() ? 0.0 : result.running_average.back()) << "\n";
    } else if (search_cmd->parsed()) {
      PolicySearchCommand cmd;
      cmd.policy = parse_policy(search_policy);
      cmd.instance = search_world.build();
      cmd.grid = grid_from_flags();
      cmd.runs = runs;
      cmd.seed = seed;
      cmd.threads = threads;
      if (!search_value_model.empty()) cmd.value_model = value_model_from_json(load_json(search_value_model));
      cmd.out = out;
      const auto result = cmd_policy_search(cmd);
      std::cout << "best " << to_json(result.best).dump() << "\n";
    } else if (eval_cmd->parsed()) {
      spec.instances = parse_ids(eval_instances);
      spec.policies = parse_all<PolicyKind>(eval_policies, parse_policy);
      spec.assumptions = parse_all<Assumption>(eval_assumptions, parse_assumption);
      spec.customers = parse_all<CustomerDistribution>(eval_customers, parse_customer_distribution);
      WorldFlags tt;
      tt.true_tt = eval_true_tt;
      spec.true_tt = tt.truth();
      if (!eval_instance_file.empty()) {
        spec.custom_instance = instance_from_json(load_json(eval_instance_file));
        spec.custom_instance->validate();
      }
      if (!eval_value_model.empty()) spec.value_model = value_model_from_json(load_json(eval_value_model));
      if (!eval_params.empty()) spec.params = policy_from_json(load_json(eval_params));
      spec.grid = grid_from_flags();
      spec.seed = seed;
      spec.threads = threads;
      spec.out = out;
      const auto rows = cmd_evaluate(spec);
      std::cout << "wrote " << rows.size() << " rows to " << (fs::path(out) / "results.csv").string() << "\n";
    } else if (compare_cmd->parsed()) {
      const auto table = cmd_compare(results_a, results_b, compare_out);
      if (compare_out.empty()) {
        std::cout << "# " << table.schema << "\n";
        for (std::size_t i = 0; i < table.header.size(); ++i) std::cout << (i ? "," : "") << table.header[i];
        std::cout << "\n";
        for (const auto& row : table.rows) {
          for (std::size_t i = 0; i < row.size(); ++i) std::cout << (i ? "," : "") << row[i];
          std::cout << "\n";
        }
      }
    } else if (plots_cmd->parsed()) {
      std::vector<fs::path> logs(event_logs.begin(), event_logs.end());
      cmd_emit_plots(logs, out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
