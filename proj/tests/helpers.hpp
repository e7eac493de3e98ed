#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "anoneq/game.hpp"
#include "anoneq/partition.hpp"
#include "anoneq/strategy.hpp"

namespace testutil {

inline double stable_uniform(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

inline anoneq::MixedStrategy random_strategy(std::mt19937_64& rng, int k) {
  anoneq::MixedStrategy s;
  s.probs.resize(k);
  double sum = 0.0;
  for (int j = 0; j < k; ++j) {
    s.probs[j] = -std::log(1.0 - stable_uniform(rng));
    sum += s.probs[j];
  }
  for (int j = 0; j < k; ++j) s.probs[j] /= sum;
  return s;
}

inline anoneq::MixedProfile random_profile(std::mt19937_64& rng, int n, int k) {
  anoneq::MixedProfile profile;
  for (int i = 0; i < n; ++i) profile.push_back(random_strategy(rng, k));
  return profile;
}

// Builds a game from an explicit payoff rule over opponent partitions.
inline anoneq::AnonymousGame make_game(
    int n, int k,
    const std::function<double(int player, int strategy, const anoneq::Partition&)>& rule) {
  auto points = anoneq::enumerate_partitions(n - 1, k);
  std::vector<double> table;
  table.reserve(static_cast<std::size_t>(n) * k * points.size());
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < k; ++a)
      for (const anoneq::Partition& x : points) table.push_back(rule(i, a, x));
  return anoneq::AnonymousGame(n, k, std::move(table));
}

inline anoneq::MixedStrategy pure(int k, int strategy) {
  anoneq::MixedStrategy s;
  s.probs.assign(k, 0.0);
  s.probs[strategy] = 1.0;
  return s;
}

}  // namespace testutil
