#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sdd/instance.hpp"
#include "sdd/policy_search.hpp"
#include "sdd/pricing.hpp"
#include "sdd/simulator.hpp"
#include "sdd/training.hpp"

namespace sdd {

namespace fs = std::filesystem;

// ---- CSV schemas ---------------------------------------------------------------------------
// Every CSV starts with a "# <schema>/<version>" line followed by the header row.

inline constexpr const char* kResultsSchema = "sdd_results/1";
inline constexpr const char* kCompareSchema = "sdd_compare/1";
inline constexpr const char* kCurveSchema = "sdd_training_curve/1";
inline constexpr const char* kGridSchema = "sdd_policy_grid/1";
inline constexpr const char* kChoiceCurveSchema = "sdd_choice_curve/1";
inline constexpr const char* kFairnessSchema = "sdd_fairness/1";

struct CsvTable {
  std::string schema;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Reads a CSV written by this tool; throws if the schema line or header differ from expected.
CsvTable read_csv(const fs::path& path, const std::string& schema, const std::vector<std::string>& header);
void write_csv(const fs::path& path, const CsvTable& table);
std::string format_number(double x);

// ---- Results -------------------------------------------------------------------------------

struct ResultsRow {
  int instance = 0;
  std::string customers;
  std::string assumption;
  std::string policy;
  double alpha = 0.0;
  double gamma = 0.0;
  AggregateMetrics metrics;
};

const std::vector<std::string>& results_header();
void write_results(const fs::path& path, const std::vector<ResultsRow>& rows);
std::vector<ResultsRow> read_results(const fs::path& path);

// ---- Commands ------------------------------------------------------------------------------

struct TrainCommand {
  InstanceConfig instance;
  int episodes = 1000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  fs::path out;
};

/// Writes value_model.json and training_curve.csv into `out`.
TrainingResult cmd_train(const TrainCommand& cmd);

struct PolicySearchCommand {
  PolicyKind policy = PolicyKind::FIX;
  InstanceConfig instance;
  GridSpec grid;
  int runs = 50;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::optional<ValueModel> value_model;
  fs::path out;
};

/// Writes policy.json and policy_grid.csv into `out`.
PolicySearchResult cmd_policy_search(const PolicySearchCommand& cmd);

struct ExperimentSpec {
  std::vector<int> instances{0};
  std::vector<PolicyKind> policies{PolicyKind::FIX};
  std::vector<Assumption> assumptions{Assumption::stochastic};
  std::vector<CustomerDistribution> customers{CustomerDistribution::gaussian};
  InverseSpeedModel true_tt = InverseSpeedModel::default_gaussian();
  /// Replaces the catalog instance (single custom world) when set.
  std::optional<InstanceConfig> custom_instance;
  int episodes = 200;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  /// Policy-search runs per grid point; 0 keeps the given or default parameters.
  int tune_runs = 0;
  GridSpec grid;
  /// Training episodes for the value model of each cell, used by OPP/OPT/OPT+basis.
  int train_episodes = 200;
  std::optional<ValueModel> value_model;
  std::optional<PolicyParams> params;
  /// Episodes per cell whose event log is appended to events.jsonl.
  int event_episodes = 0;
  fs::path out;
};

/// Writes results.csv (and events.jsonl when requested) into `out`; one row per cell.
std::vector<ResultsRow> cmd_evaluate(const ExperimentSpec& spec);

/// Row-by-row percentage difference (b - a) / a * 100 of every metric.
CsvTable cmd_compare(const fs::path& a, const fs::path& b, const fs::path& out);

/// Writes choice_curve.csv and fairness.csv into `out` from JSON-lines event logs.
void cmd_emit_plots(const std::vector<fs::path>& event_logs, const fs::path& out);

/// Choice probabilities under fixed prices [a, 0.75a, 0.5a] for a = 0, 0.1, ..., 6.
CsvTable choice_curve_table();
/// Mean quoted price per option and same-day share per 1-km depot-distance bin.
CsvTable fairness_table(const std::vector<nlohmann::json>& events);

}  // namespace sdd
