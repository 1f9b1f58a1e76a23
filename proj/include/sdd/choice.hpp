#pragma once

#include <array>
#include <random>

#include "sdd/instance.hpp"
#include "sdd/state.hpp"

namespace sdd {

/// Price assigned to an option that is not offered.
inline constexpr double kSentinelPrice = 10000.0;

/// Multinomial logit over the three same-day options and next-day delivery (utility 0).
struct ChoiceParams {
  OptionArray base_utility{1.0, 0.75, 0.5};
  double outside_utility = 0.0;
};

/// Index 0..2 = same-day options, index 3 = next day.
using ChoiceProbabilities = std::array<double, kOptions + 1>;
inline constexpr int kNextDayIndex = kOptions;

ChoiceProbabilities option_probabilities(const OptionArray& prices, const ChoiceParams& params = {});

/// Standard Gumbel noise for the four alternatives, drawn in a fixed order.
std::array<double, kOptions + 1> draw_gumbel_noise(std::mt19937_64& rng);

/// Argmax of utility + noise; returns a deadline index or kNextDay.
int choose_with_noise(const OptionArray& prices, const std::array<double, kOptions + 1>& noise,
                      const ChoiceParams& params = {});

int sample_choice(const OptionArray& prices, std::mt19937_64& rng, const ChoiceParams& params = {});

}  // namespace sdd
