#include "anoneq/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "anoneq/errors.hpp"
#include "anoneq/parallel.hpp"
#include "anoneq/pmd.hpp"

namespace anoneq {

MixedStrategy perturbed_crv(int strategy, double delta, int k) {
  if (k < 1) throw std::invalid_argument("perturbed_crv: need k >= 1");
  if (strategy < 0 || strategy >= k)
    throw std::invalid_argument("perturbed_crv: strategy out of range");
  if (delta < 0.0 || delta > 1.0)
    throw std::invalid_argument("perturbed_crv: delta must lie in [0, 1]");
  if (k == 1) {
    if (delta > 0.0)
      throw std::invalid_argument("perturbed_crv: one strategy leaves nowhere to spread noise");
    return MixedStrategy{{1.0}};
  }
  std::vector<double> probs(k, delta / (k - 1));
  probs[strategy] = 1.0 - delta;
  return MixedStrategy{std::move(probs)};
}

PerturbedGame build_perturbed_game(const AnonymousGame& base, double delta, int threads) {
  if (delta < 0.0 || delta >= 1.0)
    throw std::invalid_argument("build_perturbed_game: delta must lie in [0, 1)");
  if (delta == 0.0) return PerturbedGame{base, 0.0, base};

  const int n = base.n();
  const int k = base.k();
  std::vector<MixedStrategy> noisy(k);
  for (int j = 0; j < k; ++j) noisy[j] = perturbed_crv(j, delta, k);

  const PartitionSpace& space = base.others_space();
  const std::uint64_t cells = space.size();
  const double off_weight = delta / (k - 1);
  std::vector<double> table(base.table().size());

  parallel_for(cells, resolve_threads(threads), [&](std::size_t r) {
    Partition x = space.unrank(r);
    std::vector<MixedStrategy> crvs;
    crvs.reserve(static_cast<std::size_t>(n > 0 ? n - 1 : 0));
    for (int j = 0; j < k; ++j)
      for (int c = 0; c < x[j]; ++c) crvs.push_back(noisy[j]);
    LatticeDistribution outcome = pmd_pmf(crvs, k);

    std::vector<double> mean(k, 0.0);
    for (int i = 0; i < n; ++i) {
      double total = 0.0;
      for (int a = 0; a < k; ++a) {
        const double* row = base.payoff_row(i, a);
        double s = 0.0;
        for (std::uint64_t r2 = 0; r2 < cells; ++r2) s += outcome.mass[r2] * row[r2];
        mean[a] = s;
        total += s;
      }
      for (int a = 0; a < k; ++a) {
        double v = (1.0 - delta) * mean[a] + off_weight * (total - mean[a]);
        table[(static_cast<std::size_t>(i) * k + a) * cells + r] = std::clamp(v, 0.0, 1.0);
      }
    }
  });
  return PerturbedGame{base, delta, AnonymousGame(n, k, std::move(table))};
}

double empirical_lipschitz(const AnonymousGame& game) {
  const PartitionSpace& space = game.others_space();
  const int n = game.n();
  const int k = game.k();
  double sharpest = 0.0;
  for (std::uint64_t r = 0; r < space.size(); ++r) {
    Partition x = space.unrank(r);
    for (int b = 0; b < k; ++b) {
      if (x[b] == 0) continue;
      for (int c = 0; c < k; ++c) {
        if (c == b) continue;
        Partition y = x;
        --y[b];
        ++y[c];
        std::uint64_t r2 = space.rank(y);
        for (int i = 0; i < n; ++i)
          for (int a = 0; a < k; ++a) {
            double d = std::abs(game.payoff(i, a, r) - game.payoff(i, a, r2)) * 0.5;
            sharpest = std::max(sharpest, d);
          }
      }
    }
  }
  return sharpest;
}

double empirical_lipschitz(const PerturbedGame& pg) { return empirical_lipschitz(pg.game); }

PureProfile pure_profile_from_assignment(const std::vector<int>& assignment, int k) {
  Partition counts(k, 0);
  for (int a : assignment) {
    if (a < 0 || a >= k)
      throw std::invalid_argument("pure_profile_from_assignment: strategy out of range");
    ++counts[a];
  }
  return PureProfile{assignment, std::move(counts)};
}

namespace {

// One step of augmenting-path matching: try to give `player` a slot, evicting
// and re-seating earlier players along the way.
bool try_augment(int player, const std::vector<std::vector<int>>& adj, std::vector<char>& visited,
                 std::vector<int>& slot_owner) {
  for (int slot : adj[player]) {
    if (visited[slot]) continue;
    visited[slot] = 1;
    if (slot_owner[slot] < 0 || try_augment(slot_owner[slot], adj, visited, slot_owner)) {
      slot_owner[slot] = player;
      return true;
    }
  }
  return false;
}

}  // namespace

std::optional<PureProfile> pure_eq_search(const PerturbedGame& pg, double tau) {
  if (!(tau >= 0.0)) throw std::invalid_argument("pure_eq_search: tau must be >= 0");
  const AnonymousGame& g = pg.game;
  const int n = g.n();
  const int k = g.k();
  PartitionSpace full(n, k);
  const PartitionSpace& others = g.others_space();

  for (std::uint64_t pr = 0; pr < full.size(); ++pr) {
    Partition x = full.unrank(pr);

    // Rank of each occupied strategy's residual partition x - e_a.
    std::vector<std::uint64_t> residual(k, 0);
    std::vector<char> occupied(k, 0);
    std::vector<int> slot_strategy;
    std::vector<int> slot_base(k, 0);
    for (int a = 0; a < k; ++a) {
      slot_base[a] = static_cast<int>(slot_strategy.size());
      if (x[a] == 0) continue;
      Partition rest = x;
      --rest[a];
      residual[a] = others.rank(rest);
      occupied[a] = 1;
      for (int c = 0; c < x[a]; ++c) slot_strategy.push_back(a);
    }

    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < n; ++i) {
      for (int a = 0; a < k; ++a) {
        if (!occupied[a]) continue;
        double best = 0.0;
        for (int b = 0; b < k; ++b) best = std::max(best, g.payoff(i, b, residual[a]));
        if (g.payoff(i, a, residual[a]) >= best - tau - 1e-9)
          for (int c = 0; c < x[a]; ++c) adj[i].push_back(slot_base[a] + c);
      }
    }

    std::vector<int> slot_owner(slot_strategy.size(), -1);
    int matched = 0;
    for (int i = 0; i < n; ++i) {
      std::vector<char> visited(slot_strategy.size(), 0);
      if (!try_augment(i, adj, visited, slot_owner)) break;
      ++matched;
    }
    if (matched < n) continue;

    std::vector<int> assignment(n, -1);
    for (std::size_t s = 0; s < slot_owner.size(); ++s)
      assignment[slot_owner[s]] = slot_strategy[s];
    for (int i = 0; i < n; ++i) {
      int a = assignment[i];
      double best = 0.0;
      for (int b = 0; b < k; ++b) best = std::max(best, g.payoff(i, b, residual[a]));
      if (g.payoff(i, a, residual[a]) < best - tau - 1e-9)
        throw internal_consistency_error("pure_eq_search: matched strategy misses the slack");
    }
    return PureProfile{std::move(assignment), std::move(x)};
  }
  return std::nullopt;
}

SmoothResult solve_smooth(const AnonymousGame& game, const SmoothOptions& options) {
  const int n = game.n();
  const int k = game.k();
  double delta = options.delta;
  if (delta < 0.0)
    delta = (k == 1) ? 0.0
                     : std::min(0.5, std::pow(static_cast<double>(k), 11.0 / 3.0) *
                                         std::pow(static_cast<double>(n), -1.0 / 3.0));
  if (delta >= 1.0) throw std::invalid_argument("solve_smooth: delta must lie in [0, 1)");

  SmoothResult result;
  PerturbedGame pg = build_perturbed_game(game, delta, options.threads);
  result.delta = delta;
  result.lipschitz = empirical_lipschitz(pg);
  result.tau = 2.0 * k * result.lipschitz;
  result.bound = delta + result.tau;

  auto pure = pure_eq_search(pg, result.tau);
  if (!pure)
    throw internal_consistency_error(
        "solve_smooth: no pure equilibrium of the smoothed game at slack 2k * lipschitz");
  result.pure = std::move(*pure);

  result.profile.reserve(n);
  for (int i = 0; i < n; ++i)
    result.profile.push_back(perturbed_crv(result.pure.assignment[i], delta, k));
  result.verified_regret = max_regret(game, result.profile, options.threads);
  if (result.verified_regret > result.bound + 1e-9)
    throw internal_consistency_error("solve_smooth: verified regret exceeds the smoothing bound");
  return result;
}

double crv_direction_variance(int strategy, double delta, int k, const std::vector<double>& v) {
  if (static_cast<int>(v.size()) != k)
    throw std::invalid_argument("crv_direction_variance: direction has wrong length");
  double sum = 0.0;
  double norm2 = 0.0;
  for (double c : v) {
    sum += c;
    norm2 += c * c;
  }
  if (std::abs(sum) > 1e-9)
    throw std::invalid_argument(
        "crv_direction_variance: direction must be orthogonal to the all-ones vector");
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-9)
    throw std::invalid_argument("crv_direction_variance: direction must have unit length");

  MixedStrategy q = perturbed_crv(strategy, delta, k);
  double mean = 0.0;
  double second = 0.0;
  for (int a = 0; a < k; ++a) {
    mean += q.probs[a] * v[a];
    second += q.probs[a] * v[a] * v[a];
  }
  return second - mean * mean;
}

}  // namespace anoneq
