#pragma once

#include <optional>
#include <vector>

#include "anoneq/game.hpp"
#include "anoneq/partition.hpp"
#include "anoneq/strategy.hpp"

namespace anoneq {

// The noisy-play distribution: a player who intends `strategy` actually
// plays it with probability 1-delta and spreads delta uniformly over the
// other k-1 strategies.
MixedStrategy perturbed_crv(int strategy, double delta, int k);

// A game whose payoffs are the base game's payoffs averaged over everyone's
// play noise.  `game` has the same shape as `base` and is what the pure
// equilibrium search operates on.
struct PerturbedGame {
  AnonymousGame base;
  double delta = 0.0;
  AnonymousGame game;
};

// Averages every payoff cell of `base` over independent noisy play of all n
// players.  delta = 0 copies the table bit-for-bit.  The per-partition
// outcome distributions are computed once and shared across players and
// strategies; partitions are processed in parallel when threads > 1.
PerturbedGame build_perturbed_game(const AnonymousGame& base, double delta, int threads = 1);

// The smallest smoothness constant of the payoff table: the maximum over
// players, strategies, and opponent partitions one player-move apart of
// half the payoff difference.  Any two partitions are connected by such
// moves, so this bounds the payoff change by the partition distance.
double empirical_lipschitz(const AnonymousGame& game);
double empirical_lipschitz(const PerturbedGame& pg);

// A deterministic strategy per player together with the induced partition.
struct PureProfile {
  std::vector<int> assignment;
  Partition induced_partition;
};

PureProfile pure_profile_from_assignment(const std::vector<int>& assignment, int k);

// Searches partitions of the n players in canonical order; for each, matches
// players to strategy slots (capacity = the partition count) where a slot is
// admissible iff the strategy is within tau of the player's best payoff
// against the rest of the partition.  Returns the first partition admitting
// a complete matching, or nullopt if none does.
std::optional<PureProfile> pure_eq_search(const PerturbedGame& pg, double tau);

struct SmoothOptions {
  double delta = -1.0;  // < 0 picks min(0.5, k^{11/3} / n^{1/3})
  int threads = 1;
};

struct SmoothResult {
  MixedProfile profile;  // mapped-back noisy strategies, one per player
  PureProfile pure;      // exact equilibrium of the smoothed game
  double delta = 0.0;
  double lipschitz = 0.0;        // measured on the smoothed game
  double tau = 0.0;              // 2k * lipschitz, the pure-search slack
  double bound = 0.0;            // delta + tau, the guaranteed regret
  double verified_regret = 0.0;  // independently recomputed on the base game
};

// Full smoothing pipeline: perturb, measure smoothness, find a pure
// equilibrium of the smoothed game, and hand back each player's noisy
// version of their pure strategy.  The result's regret in the original game
// is verified to be at most bound + 1e-9.
SmoothResult solve_smooth(const AnonymousGame& game, const SmoothOptions& options = {});

// Variance of v . X where X is one-hot on the noisy play of `strategy`.
// Requires v to be a unit vector orthogonal to the all-ones vector (within
// 1e-9); the result is then at least delta / (k-1) whenever delta <= 1/2.
double crv_direction_variance(int strategy, double delta, int k, const std::vector<double>& v);

}  // namespace anoneq
