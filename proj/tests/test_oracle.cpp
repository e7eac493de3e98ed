#include "doctest.h"

#include <cmath>

#include "anoneq/errors.hpp"
#include "anoneq/oracle.hpp"
#include "helpers.hpp"

using namespace anoneq;
using testutil::make_game;
using testutil::pure;
using testutil::random_strategy;

TEST_CASE("brute force payoff on hand-checkable games") {
  auto constant = make_game(3, 2, [](int, int, const Partition&) { return 0.7; });
  CHECK(brute_force_payoff(constant, 0, 0, {MixedStrategy{{0.3, 0.7}}, MixedStrategy{{0.9, 0.1}}}) ==
        doctest::Approx(0.7).epsilon(1e-15));

  auto indicator =
      make_game(3, 2, [](int, int, const Partition& x) { return x == Partition{1, 1} ? 1.0 : 0.0; });
  CHECK(brute_force_payoff(indicator, 0, 0,
                           {MixedStrategy{{0.3, 0.7}}, MixedStrategy{{0.6, 0.4}}}) ==
        doctest::Approx(0.54).epsilon(1e-12));
}

TEST_CASE("brute force agrees with the lattice path") {
  std::mt19937_64 rng(101);
  for (int n = 2; n <= 5; ++n) {
    for (int k = 2; k <= 3; ++k) {
      auto game = generate_game(n, k, GameKind::UniformRandom, 10 * n + k);
      std::vector<MixedStrategy> others;
      for (int j = 0; j < n - 1; ++j) others.push_back(random_strategy(rng, k));
      for (int a = 0; a < k; ++a) {
        double slow = brute_force_payoff(game, 0, a, others);
        double fast = expected_payoff(game, 0, a, others);
        CHECK(std::abs(slow - fast) <= 1e-10);
      }
    }
  }
}

TEST_CASE("brute force refuses oversized games") {
  auto game = generate_game(13, 2, GameKind::Constant, 0);
  std::vector<MixedStrategy> others(12, MixedStrategy{{0.5, 0.5}});
  CHECK_THROWS_AS(brute_force_payoff(game, 0, 0, others), resource_limit_error);
}

TEST_CASE("grid search finds canonical equilibria") {
  // Dominant game: the only zero-regret profile is everyone on strategy 0.
  auto dominant = generate_game(3, 2, GameKind::Dominant, 0);
  auto found = grid_profile_search(dominant, 0.5, 0.0);
  REQUIRE(found.has_value());
  for (const auto& row : *found) CHECK(row.probs == std::vector<double>{1.0, 0.0});

  // Constant game: everything works, so the first profile in canonical
  // order -- every row (0, 1) -- is returned.
  auto constant = generate_game(3, 2, GameKind::Constant, 0);
  auto first = grid_profile_search(constant, 0.5, 0.0);
  REQUIRE(first.has_value());
  for (const auto& row : *first) CHECK(row.probs == std::vector<double>{0.0, 1.0});
}

TEST_CASE("grid search solves the two-player anti-coordination game") {
  auto anti = make_game(2, 2, [](int, int a, const Partition& x) { return x[a] == 0 ? 1.0 : 0.0; });
  auto found = grid_profile_search(anti, 0.5, 0.0);
  REQUIRE(found.has_value());
  CHECK(max_regret(anti, *found) <= 1e-12);
  // Canonical order reaches the pure anti-coordinated profile ((0,1),(1,0))
  // before the mixed one.
  CHECK((*found)[0].probs == std::vector<double>{0.0, 1.0});
  CHECK((*found)[1].probs == std::vector<double>{1.0, 0.0});
}

TEST_CASE("grid search honors the well-supported acceptance mode") {
  auto dominant = generate_game(2, 2, GameKind::Dominant, 0);
  GridSearchOptions options;
  options.well_supported = true;
  auto found = grid_profile_search(dominant, 0.5, 0.0, options);
  REQUIRE(found.has_value());
  for (const auto& row : *found) CHECK(row.probs == std::vector<double>{1.0, 0.0});
}

TEST_CASE("grid search enforces its enumeration cap") {
  auto game = generate_game(4, 3, GameKind::Constant, 0);
  GridSearchOptions options;
  options.max_profiles = 10;
  CHECK_THROWS_AS(grid_profile_search(game, 0.25, 0.0, options), resource_limit_error);
  CHECK_THROWS_AS(grid_profile_search(game, 0.3, 0.0), std::invalid_argument);
}
