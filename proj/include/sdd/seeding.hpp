#pragma once

#include <cstdint>
#include <random>

namespace sdd {

/// What a batch of episodes is used for; each purpose gets disjoint random streams so that
/// tuning, training and evaluation never share scenarios.
enum class Purpose : std::uint64_t { evaluation = 0, training = 1, validation = 2, test = 3 };

/// Independent random streams inside one episode.
enum class Stream : std::uint64_t { customers = 1, speed_field = 2, choice = 3 };

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Episode seed = mix(mix(mix(master) + purpose) + index). Episode `index` sees the same
/// customers, speed field and choice noise under every policy and assumption.
inline std::uint64_t episode_seed(std::uint64_t master, Purpose purpose, std::uint64_t index) {
  return mix64(mix64(mix64(master) + static_cast<std::uint64_t>(purpose)) + index);
}

inline std::mt19937_64 stream_rng(std::uint64_t episode, Stream stream) {
  return std::mt19937_64(mix64(episode ^ (static_cast<std::uint64_t>(stream) * 0xd1b54a32d192ed03ULL)));
}

}  // namespace sdd
