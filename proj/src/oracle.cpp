#include "anoneq/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "anoneq/errors.hpp"

namespace anoneq {

double brute_force_payoff(const AnonymousGame& game, int player, int strategy,
                          const std::vector<MixedStrategy>& others) {
  if (game.n() > 12)
    throw resource_limit_error("brute_force_payoff: n = " + std::to_string(game.n()) +
                               " exceeds the enumeration guardrail (12)");
  if (player < 0 || player >= game.n())
    throw std::invalid_argument("brute_force_payoff: bad player");
  if (strategy < 0 || strategy >= game.k())
    throw std::invalid_argument("brute_force_payoff: bad strategy");
  int m = game.n() - 1;
  if (static_cast<int>(others.size()) != m)
    throw std::invalid_argument("brute_force_payoff: expected " + std::to_string(m) +
                                " opponent rows, got " + std::to_string(others.size()));
  for (const MixedStrategy& s : others) validate_mixed_strategy(s, "brute_force_payoff row");

  const PartitionSpace& space = game.others_space();
  std::vector<int> choice(m, 0);
  double total = 0.0;
  while (true) {
    double prob = 1.0;
    Partition x(game.k(), 0);
    for (int i = 0; i < m; ++i) {
      prob *= others[i].probs[choice[i]];
      ++x[choice[i]];
    }
    if (prob > 0.0) total += prob * game.payoff(player, strategy, space.rank(x));
    int i = 0;
    while (i < m && ++choice[i] == game.k()) {
      choice[i] = 0;
      ++i;
    }
    if (i == m) break;
  }
  return total;
}

namespace {

// All rows with entries j/units summing to 1, ascending lexicographically.
std::vector<MixedStrategy> grid_rows(int k, int units) {
  std::vector<MixedStrategy> rows;
  PartitionSpace space(units, k);
  Partition x = space.first();
  do {
    MixedStrategy row;
    row.probs.resize(k);
    for (int j = 0; j < k; ++j) row.probs[j] = static_cast<double>(x[j]) / units;
    rows.push_back(std::move(row));
  } while (space.next(x));
  return rows;
}

}  // namespace

std::optional<MixedProfile> grid_profile_search(const AnonymousGame& game, double grid_step,
                                                double eps, const GridSearchOptions& options) {
  if (!(grid_step > 0.0) || grid_step > 1.0)
    throw std::invalid_argument("grid_profile_search: grid_step must be in (0, 1]");
  long long units = std::llround(1.0 / grid_step);
  if (units < 1 || std::abs(units * grid_step - 1.0) > 1e-9)
    throw std::invalid_argument("grid_profile_search: grid_step must divide 1 exactly");

  std::vector<MixedStrategy> rows = grid_rows(game.k(), static_cast<int>(units));
  double total = 1.0;
  for (int i = 0; i < game.n(); ++i) {
    total *= static_cast<double>(rows.size());
    if (total > static_cast<double>(options.max_profiles))
      throw resource_limit_error("grid_profile_search: about " + std::to_string(total) +
                                 " candidate profiles exceed the cap of " +
                                 std::to_string(options.max_profiles));
  }

  MixedProfile profile(game.n(), rows[0]);
  std::vector<std::size_t> pick(game.n(), 0);
  while (true) {
    bool accept;
    if (options.well_supported) {
      accept = verify_well_supported(game, profile, eps).ok;
    } else {
      accept = max_regret(game, profile) <= eps + 1e-9;
    }
    if (accept) return profile;
    // Odometer with the last player fastest, matching canonical order.
    int i = game.n() - 1;
    while (i >= 0) {
      if (++pick[i] < rows.size()) {
        profile[i] = rows[pick[i]];
        break;
      }
      pick[i] = 0;
      profile[i] = rows[0];
      --i;
    }
    if (i < 0) break;
  }
  return std::nullopt;
}

}  // namespace anoneq
