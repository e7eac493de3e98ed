#pragma once

#include <cstdint>
#include <functional>

#include "anoneq/game.hpp"
#include "anoneq/strategy.hpp"

namespace anoneq {

// Turns a profile whose regret is at most eps^2/(4n) into an
// eps-well-supported equilibrium: per player, probability on strategies
// more than eps/2 below the best payoff is moved onto the lowest-index
// exact best response, all players at once.  The input bound is checked
// (precondition error if missed) and the output is re-verified.
MixedProfile ane2wsne(const AnonymousGame& game, const MixedProfile& profile, double eps);

// A game extended with extra "dummy" players appended after the real ones.
// Dummies are paid 1 on strategy 0 and 0 elsewhere; real players read their
// original payoff after `shift` dummies are deducted from strategy 0's
// count (and get 0 on the partitions where that deduction is impossible).
struct PaddedGame {
  AnonymousGame base;
  AnonymousGame game;  // padded to base.n() + shift players
  int original_n = 0;
  int shift = 0;
};

PaddedGame pad_game(const AnonymousGame& game, int n_prime);

// Drops the dummy rows of an eps-well-supported equilibrium of the padded
// game.  Requires eps-well-supportedness (checked) and every dummy pure on
// strategy 0 (automatic for eps < 1; precondition error otherwise); the
// remaining rows are re-verified against the original game.
MixedProfile unpad_profile(const PaddedGame& padded, const MixedProfile& profile, double eps);

// Computes an eps_target-approximate equilibrium of the given game; the
// pipeline supplies eps_target = eps^2 / (4 * players).
using BaseSolver = std::function<MixedProfile(const AnonymousGame&, double eps_target)>;

struct PipelineOptions {
  std::uint64_t n_prime_cap = 10'000;  // refuse padded games larger than this
};

struct PipelineResult {
  MixedProfile profile;
  bool used_padding = false;
  int n_prime = 0;        // players in the game the base solver saw
  double base_eps = 0.0;  // accuracy demanded of the base solver
};

// End-to-end reduction: when n^{-gamma} <= eps the base solver's accuracy
// already suffices, so solve and convert in place; otherwise pad the game
// to n' = ceil((1/eps)^{1/gamma}) players, solve, convert, and unpad.  The
// returned profile is verified eps-well-supported in the original game.
PipelineResult fptas_pipeline(const AnonymousGame& game, double eps, const BaseSolver& base_solver,
                              double gamma, const PipelineOptions& options = {});

}  // namespace anoneq
