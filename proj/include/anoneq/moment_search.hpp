#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "anoneq/game.hpp"
#include "anoneq/pmd.hpp"
#include "anoneq/strategy.hpp"

namespace anoneq {

// A finite strategy grid: probabilities are integer multiples of 1/units
// with every coordinate at least min_units/units.  The step is rounded so
// that it divides 1 exactly, keeping grid rows representable and sums exact.
struct GridSpec {
  int n = 0;
  int k = 0;
  double eps = 0.0;
  long long units = 0;
  long long min_units = 0;

  double step() const { return 1.0 / static_cast<double>(units); }
  double floor_prob() const { return static_cast<double>(min_units) / units; }

  // Number of grid rows, computed in floating point (guardrails only).
  double grid_size() const;

  // Canonical parameters: step <= coarsen * eps / (20*k*n) and floor the
  // smallest step multiple >= eps / (10*k).
  static GridSpec make(int n, int k, double eps, double coarsen = 1.0);

  // Direct construction for tests and experiments; validates feasibility.
  static GridSpec from_quanta(int n, int k, double eps, long long units, long long min_units);
};

// All grid rows in ascending lexicographic order of their count vectors.
std::vector<MixedStrategy> strategy_grid(const GridSpec& spec);

// Ladder of reachable quantized-moment summaries: level L holds every
// distinct data vector achievable by summing one summary from each of the
// first L allowed sets, with one witness (choice per player) per value.
class CoverTable {
 public:
  using Key = std::vector<long long>;

  struct KeyHash {
    std::size_t operator()(const Key& key) const;
  };

  int levels() const { return static_cast<int>(level_nodes_.size()) - 1; }
  std::size_t size(int level) const { return level_nodes_.at(level).size(); }
  std::size_t total_nodes() const;

  // Index of `key` in insertion order at `level`, if present.
  std::optional<std::size_t> find(int level, const Key& key) const;
  const Key& key(int level, std::size_t idx) const { return level_nodes_[level][idx].key; }

  // The recorded witness: one strategy per player 1..level.
  std::vector<MixedStrategy> witness(int level, std::size_t idx) const;

 private:
  friend CoverTable generate_data(const std::vector<std::vector<MixedStrategy>>& allowed,
                                  const MomentBasis& basis, double unit, std::uint64_t max_nodes);

  struct Node {
    Key key;
    std::int64_t parent = -1;  // index into the previous level
    std::int32_t via = -1;     // index into that level's allowed set
  };

  std::vector<std::vector<Node>> level_nodes_;
  std::vector<std::unordered_map<Key, std::size_t, KeyHash>> level_index_;
  std::vector<std::vector<MixedStrategy>> allowed_;
};

// Builds the ladder bottom-up; level L is derived from level L-1 and
// allowed[L-1] only.  Throws a resource-limit error if the ladder would
// exceed max_nodes entries in total.
CoverTable generate_data(const std::vector<std::vector<MixedStrategy>>& allowed,
                         const MomentBasis& basis, double unit,
                         std::uint64_t max_nodes = 5'000'000);

// Convenience wrapper with the standard quantization unit n^(-c)/n and the
// default degree for c when degree < 0.
CoverTable generate_data(const std::vector<std::vector<MixedStrategy>>& allowed, int n, double c,
                         int degree = -1);

struct MomentSearchOptions {
  double coarsen = 1.0;           // multiplies the grid step; > 1 shrinks the grid
  int degree = -1;                // moment degree; default derived from c
  double cover_accuracy_frac = 0.2;  // covers are built at this fraction of eps
  double br_slack_frac = 0.6;        // admission slack as a fraction of eps
  std::uint64_t max_grid = 1'000'000;
  std::uint64_t max_cover_nodes = 5'000'000;
  int threads = 1;
};

struct MomentSearchResult {
  MixedProfile profile;
  double eps = 0.0;             // the n^(-c) target
  double verified_regret = 0.0;
  GridSpec grid;
  std::uint64_t grid_rows = 0;
  std::size_t cover_top = 0;     // data values at the full ladder's top level
  std::size_t cover_below = 0;   // ... and one level below
  std::size_t scanned = 0;       // top-level data values examined
};

// Finds an eps = n^(-c) approximate equilibrium by scanning candidate
// moment summaries: a summary is accepted when it can be rebuilt from
// per-player strategy sets that are near-best responses to the summary's
// own reconstruction, and the resulting profile verifies.
MomentSearchResult moment_search(const AnonymousGame& game, double c,
                                 const MomentSearchOptions& options = {});

// Rounds coordinates 1..k-1 of each row down to grid multiples, the last
// coordinate absorbing the residual.  Requires every input probability to
// be at least the grid floor; per-row TV change is below (k-1) * step.
MixedProfile round_profile_to_grid(const MixedProfile& profile, const GridSpec& spec);

}  // namespace anoneq
