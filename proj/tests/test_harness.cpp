#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sdd/harness.hpp"

using namespace sdd;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("sdd_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SDD_CLI) + " " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

ResultsRow row(int instance, double revenue, double missed) {
  ResultsRow r{instance, "gaussian", "stochastic", "DIST", 1, 0, {}};
  r.metrics.episodes = 1;
  r.metrics.revenue.mean = revenue;
  r.metrics.missed.mean = missed;
  r.metrics.served.mean = 10;
  r.metrics.accepted.mean = 10 + missed;
  r.metrics.declined.mean = 3;
  r.metrics.rejected.mean = 1;
  return r;
}

}  // namespace

TEST(Train, WritesModelAndCurve) {
  const auto dir = scratch("train");
  TrainCommand cmd{catalog_instance(0, CustomerDistribution::gaussian, Assumption::stochastic), 3, 5, 1, dir / "a"};
  cmd_train(cmd);
  const auto model = value_model_from_json(nlohmann::json::parse(slurp(dir / "a" / "value_model.json")));
  EXPECT_EQ(model.episodes, 3);
  const auto curve = read_csv(dir / "a" / "training_curve.csv", kCurveSchema, {"episode", "profit", "running_avg"});
  EXPECT_EQ(curve.rows.size(), 3u);
  cmd.out = dir / "b";
  cmd_train(cmd);
  EXPECT_EQ(slurp(dir / "a" / "value_model.json"), slurp(dir / "b" / "value_model.json"));
  EXPECT_EQ(slurp(dir / "a" / "training_curve.csv"), slurp(dir / "b" / "training_curve.csv"));
  cmd.episodes = 1;
  cmd.out = dir / "c";
  EXPECT_NO_THROW(cmd_train(cmd));
}

TEST(PolicySearchCmd, GridFileAndArgmax) {
  const auto dir = scratch("search");
  PolicySearchCommand cmd;
  cmd.policy = PolicyKind::DIST;
  cmd.instance = catalog_instance(0, CustomerDistribution::gaussian, Assumption::stochastic);
  cmd.grid = {{1.0, 2.0}, {0.0, 1.0, 2.0}};
  cmd.runs = 4;
  cmd.out = dir / "a";
  const auto a = cmd_policy_search(cmd);
  const auto grid = read_csv(dir / "a" / "policy_grid.csv", kGridSchema, {"alpha", "gamma", "mean_revenue", "std_revenue"});
  EXPECT_EQ(grid.rows.size(), 6u);
  cmd.out = dir / "b";
  const auto b = cmd_policy_search(cmd);
  EXPECT_EQ(a.best.alpha, b.best.alpha);
  EXPECT_EQ(a.best.gamma, b.best.gamma);
  EXPECT_EQ(slurp(dir / "a" / "policy.json"), slurp(dir / "b" / "policy.json"));
  cmd.grid = {{3.5}, {0.5}};
  cmd.out = dir / "c";
  cmd_policy_search(cmd);
  const auto p = policy_from_json(nlohmann::json::parse(slurp(dir / "c" / "policy.json")));
  EXPECT_EQ(p.alpha, 3.5);
  EXPECT_EQ(p.gamma, 0.5);
}

TEST(Evaluate, OneRowPerCell) {
  const auto dir = scratch("evaluate");
  ExperimentSpec spec;
  spec.episodes = 10;
  spec.out = dir / "one";
  EXPECT_EQ(cmd_evaluate(spec).size(), 1u);
  EXPECT_EQ(read_results(dir / "one" / "results.csv").size(), 1u);

  spec.instances = {0, 1};
  spec.policies = {PolicyKind::FIX, PolicyKind::DIST};
  spec.assumptions = {Assumption::deterministic, Assumption::stochastic, Assumption::misspecified};
  spec.episodes = 2;
  spec.out = dir / "many";
  const auto rows = cmd_evaluate(spec);
  EXPECT_EQ(rows.size(), 12u);
  const auto back = read_results(dir / "many" / "results.csv");
  ASSERT_EQ(back.size(), 12u);
  EXPECT_EQ(back[5].policy, "DIST");
  EXPECT_NEAR(back[5].metrics.revenue.mean, rows[5].metrics.revenue.mean, 1e-6);
}

TEST(Evaluate, ByteIdenticalReruns) {
  const auto dir = scratch("rerun");
  ExperimentSpec spec;
  spec.policies = {PolicyKind::FIX, PolicyKind::OPT};
  spec.episodes = 3;
  spec.train_episodes = 2;
  spec.event_episodes = 1;
  spec.out = dir / "a";
  cmd_evaluate(spec);
  spec.out = dir / "b";
  spec.threads = 2;
  cmd_evaluate(spec);
  EXPECT_EQ(slurp(dir / "a" / "results.csv"), slurp(dir / "b" / "results.csv"));
  EXPECT_EQ(slurp(dir / "a" / "events.jsonl"), slurp(dir / "b" / "events.jsonl"));
  EXPECT_FALSE(slurp(dir / "a" / "events.jsonl").empty());
}

TEST(Compare, PercentDifferences) {
  const auto dir = scratch("compare");
  write_results(dir / "a.csv", {row(6, 63.1, 7.2)});
  write_results(dir / "b.csv", {row(6, 65.5, 4.4)});
  const auto same = cmd_compare(dir / "a.csv", dir / "a.csv", dir / "same.csv");
  for (std::size_t c = 7; c < same.header.size(); ++c) EXPECT_EQ(same.rows[0][c], "0.000000");
  const auto t = cmd_compare(dir / "a.csv", dir / "b.csv", dir / "diff.csv");
  EXPECT_NEAR(std::stod(t.rows[0][7]), 3.80, 0.005);
  EXPECT_NEAR(std::stod(t.rows[0][10]), -38.9, 0.05);
  EXPECT_EQ(read_csv(dir / "diff.csv", kCompareSchema, t.header).rows.size(), 1u);
  write_results(dir / "two.csv", {row(6, 1, 1), row(7, 1, 1)});
  EXPECT_THROW(cmd_compare(dir / "a.csv", dir / "two.csv", {}), std::invalid_argument);
}

TEST(Csv, SchemaValidatedOnRead) {
  const auto dir = scratch("csv");
  write_results(dir / "r.csv", {row(0, 1, 0)});
  EXPECT_THROW(read_csv(dir / "r.csv", kCompareSchema, results_header()), std::invalid_argument);
  std::ofstream(dir / "bad.csv") << "# sdd_results/1\ninstance,revenue\n";
  EXPECT_THROW(read_results(dir / "bad.csv"), std::invalid_argument);
}

TEST(Plots, ChoiceCurveAndFairness) {
  const auto dir = scratch("plots");
  std::ofstream(dir / "empty.jsonl").close();
  cmd_emit_plots({dir / "empty.jsonl"}, dir / "empty");
  const auto curve = read_csv(dir / "empty" / "choice_curve.csv", kChoiceCurveSchema,
                              {"alpha", "p60", "p120", "p240", "p_next_day"});
  EXPECT_EQ(curve.rows.size(), 61u);
  EXPECT_EQ(curve.rows[0][4], "0.133618");
  const auto header = fairness_table({}).header;
  EXPECT_TRUE(read_csv(dir / "empty" / "fairness.csv", kFairnessSchema, header).rows.empty());

  ExperimentSpec spec;
  spec.episodes = 2;
  spec.event_episodes = 2;
  spec.policies = {PolicyKind::DIST};
  spec.out = dir / "run";
  cmd_evaluate(spec);
  cmd_emit_plots({dir / "run" / "events.jsonl"}, dir / "plots");
  const auto fair = read_csv(dir / "plots" / "fairness.csv", kFairnessSchema, header);
  ASSERT_FALSE(fair.rows.empty());
  int requests = 0;
  for (const auto& r : fair.rows) {
    requests += std::stoi(r[2]);
    const double share = std::stod(r[6]);
    EXPECT_GE(share, 0.0);
    EXPECT_LE(share, 1.0);
  }
  const auto results = read_results(dir / "run" / "results.csv");
  EXPECT_NEAR(requests, 2 * (results[0].metrics.accepted.mean + results[0].metrics.declined.mean +
                             results[0].metrics.rejected.mean), 1e-9);
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("cli");
  const auto out = (dir / "ok").string();
  EXPECT_EQ(run_cli("evaluate --instance 0 --policy FIX --episodes 2 --out " + out), 0);
  EXPECT_TRUE(fs::exists(dir / "ok" / "results.csv"));
  EXPECT_NE(run_cli("evaluate --instance 99 --episodes 2 --out " + out), 0);
  EXPECT_NE(run_cli("evaluate --episodes 0 --out " + out), 0);
  EXPECT_NE(run_cli("evaluate --policy CHEAP --out " + out), 0);
  EXPECT_NE(run_cli("train --assumption optimistic --episodes 1 --out " + out), 0);
  EXPECT_NE(run_cli("policy-search --policy OPP --runs 1 --out " + out), 0);
  EXPECT_NE(run_cli("frobnicate"), 0);
  EXPECT_EQ(run_cli("train --instance 0 --episodes 1 --out " + out), 0);
  EXPECT_EQ(run_cli("compare " + out + "/results.csv " + out + "/results.csv --out " + out + "/cmp.csv"), 0);
  EXPECT_EQ(run_cli("emit-plots --out " + out), 0);
}
