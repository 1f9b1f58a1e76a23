#include "sdd/training.hpp"

#include <stdexcept>

#include "sdd/parallel.hpp"
#include "sdd/seeding.hpp"
#include "sdd/simulator.hpp"

namespace sdd {

TrainingResult train(const InstanceConfig& instance, const TrainingOptions& options) {
  if (options.episodes < 1) throw std::invalid_argument("train: episodes must be >= 1");
  if (options.batch < 1) throw std::invalid_argument("train: batch must be >= 1");
  instance.validate();

  TrainingResult out{ValueModel(instance.shift_end_min), {}, {}};
  std::vector<RegressionAccumulator> stats(out.model.periods());

  EpisodeConfig base;
  base.instance = instance;
  base.policy.kind = PolicyKind::OPT;
  base.record_observations = true;

  for (int start = 0; start < options.episodes; start += options.batch) {
    const int count = std::min(options.batch, options.episodes - start);
    std::vector<EpisodeResult> batch(count);
    base.value_model = &out.model;
    parallel_for(batch.size(), options.threads, [&](std::size_t i) {
      EpisodeConfig config = base;
      config.seed = episode_seed(options.seed, Purpose::training, static_cast<std::uint64_t>(start) + i);
      batch[i] = run_episode(config);
    });
    for (auto& r : batch) {
      out.profits.push_back(r.metrics.revenue);
      for (const auto& obs : r.observations)
        stats[std::min(obs.period, out.model.periods() - 1)].add(obs.features, obs.remaining_revenue);
    }
    refit(out.model, stats, options.ridge);
  }
  out.model.episodes = options.episodes;
  out.model.seed = options.seed;
  out.running_average = running_average(out.profits, options.running_window);
  return out;
}

std::vector<double> running_average(const std::vector<double>& xs, int window) {
  if (window < 1) throw std::invalid_argument("running_average: window must be >= 1");
  std::vector<double> out(xs.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sum += xs[i];
    if (i >= static_cast<std::size_t>(window)) sum -= xs[i - window];
    out[i] = sum / static_cast<double>(std::min<std::size_t>(i + 1, window));
  }
  return out;
}

double least_squares_slope(const std::vector<double>& ys) {
  const double n = static_cast<double>(ys.size());
  if (ys.size() < 2) return 0.0;
  const double mx = (n - 1.0) / 2.0;
  double my = 0.0;
  for (double y : ys) my += y;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double dx = static_cast<double>(i) - mx;
    sxy += dx * (ys[i] - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace sdd
