#include "doctest.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "anoneq/errors.hpp"
#include "anoneq/game.hpp"
#include "anoneq/oracle.hpp"
#include "helpers.hpp"

using namespace anoneq;
using testutil::make_game;
using testutil::pure;
using testutil::random_profile;
using testutil::random_strategy;

TEST_CASE("expected payoff: constant, linear, and the two-outcome cross-check") {
  auto constant = make_game(2, 2, [](int, int, const Partition&) { return 0.7; });
  CHECK(expected_payoff(constant, 0, 0, {MixedStrategy{{0.42, 0.58}}}) ==
        doctest::Approx(0.7).epsilon(1e-15));

  auto linear = make_game(2, 2, [](int, int, const Partition& x) { return double(x[0]); });
  CHECK(expected_payoff(linear, 0, 0, {MixedStrategy{{0.5, 0.5}}}) ==
        doctest::Approx(0.5).epsilon(1e-15));

  auto indicator =
      make_game(3, 2, [](int, int, const Partition& x) { return x == Partition{1, 1} ? 1.0 : 0.0; });
  double v = expected_payoff(indicator, 0, 0,
                             {MixedStrategy{{0.3, 0.7}}, MixedStrategy{{0.6, 0.4}}});
  CHECK(v == doctest::Approx(0.54).epsilon(1e-12));
}

TEST_CASE("expected payoff validates the opponent count") {
  auto game = generate_game(3, 2, GameKind::Constant, 0);
  CHECK_THROWS_AS(expected_payoff(game, 0, 0, {MixedStrategy{{1.0, 0.0}}}),
                  std::invalid_argument);
}

TEST_CASE("regret: dominance, indifference, and an enumeration cross-check") {
  auto dominant = generate_game(3, 2, GameKind::Dominant, 0);
  MixedProfile all_first(3, pure(2, 0));
  for (int i = 0; i < 3; ++i) CHECK(regret(dominant, all_first, i) == 0.0);

  auto constant = generate_game(3, 2, GameKind::Constant, 0);
  std::mt19937_64 rng(21);
  MixedProfile any = random_profile(rng, 3, 2);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(regret(constant, any, i)) <= 1e-12);

  auto game = generate_game(3, 2, GameKind::UniformRandom, 99);
  MixedProfile profile = random_profile(rng, 3, 2);
  for (int i = 0; i < 3; ++i) {
    std::vector<MixedStrategy> others;
    for (int j = 0; j < 3; ++j)
      if (j != i) others.push_back(profile[j]);
    double best = -1.0, current = 0.0;
    for (int a = 0; a < 2; ++a) {
      double f = brute_force_payoff(game, i, a, others);
      best = std::max(best, f);
      current += profile[i].probs[a] * f;
    }
    CHECK(regret(game, profile, i) == doctest::Approx(best - current).epsilon(1e-10));
  }
}

TEST_CASE("regret stays within payoff normalization") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto game = generate_game(4, 3, GameKind::UniformRandom, trial);
    MixedProfile profile = random_profile(rng, 4, 3);
    for (int i = 0; i < 4; ++i) {
      double r = regret(game, profile, i);
      CHECK(r >= -1e-12);
      CHECK(r <= 1.0);
    }
  }
}

TEST_CASE("well-supported verification") {
  auto dominant = generate_game(2, 2, GameKind::Dominant, 0);
  MixedProfile exact(2, pure(2, 0));
  CHECK(verify_well_supported(dominant, exact, 0.0).ok);

  // Weight 0.01 on a strategy worse by 1.0 is flagged at eps = 0.1.
  MixedProfile shaky(2, MixedStrategy{{0.99, 0.01}});
  auto report = verify_well_supported(dominant, shaky, 0.1);
  CHECK(!report.ok);
  REQUIRE(!report.violations.empty());
  CHECK(report.violations[0].strategy == 1);
  CHECK(report.violations[0].gap == doctest::Approx(1.0).epsilon(1e-12));

  // Whatever support gap a profile exhibits, it is well-supported at that
  // gap, and that gap also bounds the mixture's regret.
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    auto game = generate_game(4, 3, GameKind::UniformRandom, 1000 + trial);
    MixedProfile profile = random_profile(rng, 4, 3);
    double gap = 0.0;
    for (int i = 0; i < 4; ++i) {
      auto payoffs = strategy_payoffs(game, profile, i);
      double best = *std::max_element(payoffs.begin(), payoffs.end());
      for (int a = 0; a < 3; ++a)
        if (profile[i].probs[a] > 0.0) gap = std::max(gap, best - payoffs[a]);
    }
    CHECK(verify_well_supported(game, profile, gap).ok);
    CHECK(max_regret(game, profile) <= gap + 1e-9);
  }
}

TEST_CASE("payoff shifts are bounded by twice the opponents' TV distance") {
  // If a strategy is a delta-best response against X_{-i}, it is a
  // (delta + 2 tv)-best response against any Y_{-i} within tv of it.
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    auto game = generate_game(4, 2, GameKind::UniformRandom, 2000 + trial);
    MixedProfile x = random_profile(rng, 4, 2);
    MixedProfile y = x;
    for (int j = 1; j < 4; ++j)
      if (testutil::stable_uniform(rng) < 0.7) y[j] = random_strategy(rng, 2);

    std::vector<MixedStrategy> x_others(x.begin() + 1, x.end());
    std::vector<MixedStrategy> y_others(y.begin() + 1, y.end());
    double tv = tv_distance(pmd_pmf(x_others, 2), pmd_pmf(y_others, 2));

    double delta = regret(game, x, 0);
    MixedProfile mixed = y;
    mixed[0] = x[0];
    double shifted = regret(game, mixed, 0);
    CHECK(shifted <= delta + 2.0 * tv + 1e-9);
  }
}

TEST_CASE("generators are deterministic and match their definitions") {
  auto a = generate_game(4, 2, GameKind::UniformRandom, 7);
  auto b = generate_game(4, 2, GameKind::UniformRandom, 7);
  CHECK(a.table() == b.table());
  auto c = generate_game(4, 2, GameKind::UniformRandom, 8);
  CHECK(a.table() != c.table());

  auto congestion = generate_game(3, 2, GameKind::Congestion, 0);
  // Opponent partition (2,0): strategy 0 carries load 3 -> payoff 0.
  PartitionSpace space(2, 2);
  CHECK(congestion.payoff(0, 0, space.rank({2, 0})) == doctest::Approx(0.0));
  CHECK(congestion.payoff(0, 0, space.rank({0, 2})) == doctest::Approx(1.0 - 1.0 / 3));

  CHECK_THROWS_AS(game_kind_from_string("nonsense"), std::invalid_argument);
  CHECK(game_kind_from_string("uniform-random") == GameKind::UniformRandom);
}

TEST_CASE("game files round-trip exactly") {
  auto game = generate_game(4, 3, GameKind::UniformRandom, 12345);
  std::stringstream buffer;
  save_game(game, buffer);
  auto loaded = load_game(buffer);
  CHECK(loaded.n() == game.n());
  CHECK(loaded.k() == game.k());
  CHECK(loaded.table() == game.table());
}

TEST_CASE("game parser rejects malformed input with line numbers") {
  {
    std::stringstream bad("anongame v2\n2 2\n");
    CHECK_THROWS_AS(load_game(bad), parse_error);
  }
  {
    // Payoff outside [0,1].
    std::stringstream bad("anongame v1\n2 2\n1.5 0\n0 0\n0 0\n0 0\n");
    CHECK_THROWS_WITH_AS(load_game(bad), doctest::Contains("line 3"), parse_error);
  }
  {
    // Wrong number of cells on a line.
    std::stringstream bad("anongame v1\n2 2\n0.5 0.5 0.5\n0 0\n0 0\n0 0\n");
    CHECK_THROWS_AS(load_game(bad), parse_error);
  }
  {
    // Truncated file.
    std::stringstream bad("anongame v1\n2 2\n0.5 0.5\n0 0\n0 0\n");
    try {
      load_game(bad);
      CHECK(false);
    } catch (const parse_error& e) {
      CHECK(std::string(e.what()).find("end of file") != std::string::npos);
    }
  }
}

TEST_CASE("profile files round-trip and validate") {
  std::mt19937_64 rng(77);
  MixedProfile profile = random_profile(rng, 3, 3);
  std::stringstream buffer;
  save_profile(profile, buffer);
  auto loaded = load_profile(buffer);
  REQUIRE(loaded.size() == profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i) CHECK(loaded[i].probs == profile[i].probs);

  std::stringstream bad("profile v1\n1 2\n0.9 0.2\n");
  CHECK_THROWS_AS(load_profile(bad), parse_error);
}
