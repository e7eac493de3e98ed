#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "anoneq/partition.hpp"
#include "anoneq/pmd.hpp"
#include "anoneq/strategy.hpp"

namespace anoneq {

// An anonymous game: each player's payoff for playing a strategy depends
// only on how the other n-1 players split across the k strategies.  Payoffs
// are dense: one value in [0,1] per (player, strategy, opponent partition).
class AnonymousGame {
 public:
  // `table[(i*k + a) * P + r]` is the payoff of player i for strategy a when
  // the opponents' partition has rank r in PartitionSpace(n-1, k).
  AnonymousGame(int n, int k, std::vector<double> table);

  int n() const { return n_; }
  int k() const { return k_; }
  const PartitionSpace& others_space() const { return others_; }
  std::uint64_t cells_per_strategy() const { return others_.size(); }

  double payoff(int player, int strategy, std::uint64_t others_rank) const {
    return table_[(static_cast<std::size_t>(player) * k_ + strategy) * others_.size() +
                  others_rank];
  }
  const double* payoff_row(int player, int strategy) const {
    return table_.data() + (static_cast<std::size_t>(player) * k_ + strategy) * others_.size();
  }
  const std::vector<double>& table() const { return table_; }

 private:
  int n_;
  int k_;
  PartitionSpace others_;
  std::vector<double> table_;
};

enum class GameKind { UniformRandom, Congestion, Dominant, Constant };

GameKind game_kind_from_string(const std::string& name);
std::string to_string(GameKind kind);

// Deterministic generator: the same (n, k, kind, seed) always yields the
// same table, independent of platform.
AnonymousGame generate_game(int n, int k, GameKind kind, std::uint64_t seed);

// Expected payoff of `player` for pure strategy `strategy` when the other
// players randomize independently as `others` (n-1 rows).
double expected_payoff(const AnonymousGame& game, int player, int strategy,
                       const std::vector<MixedStrategy>& others);

// Payoffs of every strategy of `player` against the profile's other rows;
// shares one opponent-distribution computation across strategies.
std::vector<double> strategy_payoffs(const AnonymousGame& game, const MixedProfile& profile,
                                     int player);

// max_a E[u_a] - E[u_sigma_i]: how much the player could gain by deviating.
double regret(const AnonymousGame& game, const MixedProfile& profile, int player);

// Largest regret across players; `threads` > 1 splits players across threads.
double max_regret(const AnonymousGame& game, const MixedProfile& profile, int threads = 1);

struct SupportViolation {
  int player;
  int strategy;
  double gap;  // best payoff minus this strategy's payoff
};

struct WellSupportedReport {
  bool ok = true;
  std::vector<SupportViolation> violations;
};

// Checks that every strategy played with positive probability is within
// eps of the player's best response (absolute comparison tolerance 1e-9).
WellSupportedReport verify_well_supported(const AnonymousGame& game, const MixedProfile& profile,
                                          double eps);

// True when every player's regret is at most eps (+1e-9 tolerance).
bool is_approx_equilibrium(const AnonymousGame& game, const MixedProfile& profile, double eps);

// Plain-text formats; writers emit full-precision decimals so that a
// save/load round trip reproduces the exact table.
void save_game(const AnonymousGame& game, std::ostream& out);
void save_game(const AnonymousGame& game, const std::string& path);
AnonymousGame load_game(std::istream& in);
AnonymousGame load_game(const std::string& path);

void save_profile(const MixedProfile& profile, std::ostream& out);
void save_profile(const MixedProfile& profile, const std::string& path);
MixedProfile load_profile(std::istream& in);
MixedProfile load_profile(const std::string& path);

}  // namespace anoneq
