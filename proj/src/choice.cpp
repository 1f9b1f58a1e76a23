#include "sdd/choice.hpp"

#include <algorithm>
#include <cmath>

#include "sdd/state.hpp"

namespace sdd {

ChoiceProbabilities option_probabilities(const OptionArray& prices, const ChoiceParams& params) {
  std::array<double, kOptions + 1> u{};
  for (int j = 0; j < kOptions; ++j) u[j] = params.base_utility[j] - prices[j];
  u[kNextDayIndex] = params.outside_utility;
  const double top = *std::max_element(u.begin(), u.end());
  ChoiceProbabilities p{};
  double total = 0.0;
  for (int i = 0; i <= kOptions; ++i) {
    p[i] = std::exp(u[i] - top);
    total += p[i];
  }
  for (double& x : p) x /= total;
  return p;
}

std::array<double, kOptions + 1> draw_gumbel_noise(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::array<double, kOptions + 1> noise{};
  for (double& e : noise) {
    double u = unit(rng);
    while (u <= 0.0) u = unit(rng);
    e = -std::log(-std::log(u));
  }
  return noise;
}

int choose_with_noise(const OptionArray& prices, const std::array<double, kOptions + 1>& noise,
                      const ChoiceParams& params) {
  int best = kNextDay;
  double best_u = params.outside_utility + noise[kNextDayIndex];
  for (int j = 0; j < kOptions; ++j) {
    const double u = params.base_utility[j] - prices[j] + noise[j];
    if (u > best_u) {
      best_u = u;
      best = j;
    }
  }
  return best;
}

int sample_choice(const OptionArray& prices, std::mt19937_64& rng, const ChoiceParams& params) {
  return choose_with_noise(prices, draw_gumbel_noise(rng), params);
}

}  // namespace sdd
