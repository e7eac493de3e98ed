#pragma once

#include <optional>
#include <vector>

#include "anoneq/game.hpp"
#include "anoneq/strategy.hpp"

namespace anoneq {

// Expected payoff computed the slow, assumption-free way: enumerate all
// k^(n-1) pure opponent outcomes and weight each by its product probability.
// Deliberately shares no code with the lattice-convolution path so the two
// can check each other.  Guardrail: game.n() <= 12.
double brute_force_payoff(const AnonymousGame& game, int player, int strategy,
                          const std::vector<MixedStrategy>& others);

struct GridSearchOptions {
  // When true, accept a profile only if every supported strategy is within
  // eps of the best response; otherwise accept on max regret <= eps.
  bool well_supported = false;
  // Abort with a resource-limit error beyond this many candidate profiles.
  std::uint64_t max_profiles = 2'000'000;
};

// Enumerates every profile whose probabilities are integer multiples of
// grid_step (grid_step must divide 1) in canonical order -- per-player rows
// ascending lexicographically, last player's row varying fastest -- and
// returns the first profile meeting the acceptance test, or nullopt.
std::optional<MixedProfile> grid_profile_search(const AnonymousGame& game, double grid_step,
                                                double eps, const GridSearchOptions& options = {});

}  // namespace anoneq
