// Acceptance gate: one check per shipped guarantee, each printed as a single
// PASS/FAIL line with its measured extremes.  Every profile a solver emits is
// re-verified through the independent regret computation, never through the
// solver's own bookkeeping.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "anoneq/game.hpp"
#include "anoneq/moment_search.hpp"
#include "anoneq/oracle.hpp"
#include "anoneq/pmd.hpp"
#include "anoneq/reductions.hpp"
#include "anoneq/smoothing.hpp"

namespace {

using namespace anoneq;

double stable_uniform(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

MixedStrategy random_strategy(std::mt19937_64& rng, int k) {
  MixedStrategy s;
  s.probs.resize(k);
  double sum = 0.0;
  for (int j = 0; j < k; ++j) {
    s.probs[j] = -std::log(1.0 - stable_uniform(rng));
    sum += s.probs[j];
  }
  for (int j = 0; j < k; ++j) s.probs[j] /= sum;
  return s;
}

MixedProfile random_profile(std::mt19937_64& rng, int n, int k) {
  MixedProfile profile;
  for (int i = 0; i < n; ++i) profile.push_back(random_strategy(rng, k));
  return profile;
}

// Random row with every probability at least `floor` (requires k*floor <= 1).
MixedStrategy floored_strategy(std::mt19937_64& rng, int k, double floor) {
  MixedStrategy s = random_strategy(rng, k);
  double excess = 1.0 - k * floor;
  for (double& p : s.probs) p = floor + excess * p;
  return s;
}

std::string fmt(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.3g", value);
  return buffer;
}

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool condition, const std::string& message) {
    if (!condition && ok) {
      ok = false;
      detail = message;
    }
  }
};

// ---------------------------------------------------------------------------
// 1. Exact pmf agrees with exhaustive outcome enumeration.
// ---------------------------------------------------------------------------
Outcome check_pmf_exactness() {
  Outcome out;
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    int n = 1 + static_cast<int>(stable_uniform(rng) * 6);
    int k = 1 + static_cast<int>(stable_uniform(rng) * 3);
    std::vector<MixedStrategy> rows;
    for (int i = 0; i < n; ++i) rows.push_back(random_strategy(rng, k));

    LatticeDistribution pmf = pmd_pmf(rows, k);
    PartitionSpace space = pmf.space();
    std::vector<double> enumerated(space.size(), 0.0);
    std::vector<int> pick(n, 0);
    while (true) {
      double prob = 1.0;
      Partition counts(k, 0);
      for (int i = 0; i < n; ++i) {
        prob *= rows[i].probs[pick[i]];
        ++counts[pick[i]];
      }
      enumerated[space.rank(counts)] += prob;
      int pos = n - 1;
      while (pos >= 0 && pick[pos] == k - 1) pick[pos--] = 0;
      if (pos < 0) break;
      ++pick[pos];
    }
    for (std::size_t r = 0; r < enumerated.size(); ++r) {
      worst = std::max(worst, std::abs(enumerated[r] - pmf.mass[r]));
    }
  }
  out.require(worst <= 1e-12, "pointwise gap " + fmt(worst) + " above 1e-12");
  if (out.ok) out.detail = "max pointwise gap " + fmt(worst) + " over 50 collections";
  return out;
}

// ---------------------------------------------------------------------------
// 2. Lattice-convolution payoffs agree with assumption-free enumeration.
// ---------------------------------------------------------------------------
Outcome check_payoff_oracle_agreement() {
  Outcome out;
  std::mt19937_64 rng(202);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + static_cast<int>(stable_uniform(rng) * 5);
    int k = 2 + static_cast<int>(stable_uniform(rng) * 2);
    AnonymousGame game = generate_game(n, k, GameKind::UniformRandom, 1000 + trial);
    int player = static_cast<int>(stable_uniform(rng) * n);
    int strategy = static_cast<int>(stable_uniform(rng) * k);
    std::vector<MixedStrategy> others;
    for (int i = 0; i + 1 < n; ++i) others.push_back(random_strategy(rng, k));
    double fast = expected_payoff(game, player, strategy, others);
    double slow = brute_force_payoff(game, player, strategy, others);
    worst = std::max(worst, std::abs(fast - slow));
  }
  out.require(worst <= 1e-10, "payoff gap " + fmt(worst) + " above 1e-10");
  if (out.ok) out.detail = "max gap " + fmt(worst) + " over 200 tuples";
  return out;
}

// ---------------------------------------------------------------------------
// 3. Moment-summary search meets its n^(-1/2) regret target.
// ---------------------------------------------------------------------------
Outcome check_moment_search_targets() {
  Outcome out;
  struct Config {
    int n, k;
    double coarsen;
  };
  const std::vector<Config> configs = {{3, 2, 1.0}, {4, 2, 1.0}, {5, 2, 12.0}, {3, 3, 26.0}};
  double worst_margin = -1e300;
  for (const Config& config : configs) {
    double target = std::pow(static_cast<double>(config.n), -0.5);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      AnonymousGame game = generate_game(config.n, config.k, GameKind::UniformRandom, seed);
      MomentSearchOptions options;
      options.coarsen = config.coarsen;
      MomentSearchResult result = moment_search(game, 0.5, options);
      double regret = max_regret(game, result.profile);
      worst_margin = std::max(worst_margin, regret - target);
      out.require(regret <= target + 1e-9,
                  "n=" + std::to_string(config.n) + " k=" + std::to_string(config.k) + " seed=" +
                      std::to_string(seed) + " regret " + fmt(regret) + " above " + fmt(target));
    }
  }
  if (out.ok) out.detail = "worst regret margin " + fmt(worst_margin) + " over 80 runs";
  return out;
}

// ---------------------------------------------------------------------------
// 4. Grid rounding moves each row by less than eps*(k-1)/(20n) in TV.
// ---------------------------------------------------------------------------
Outcome check_grid_rounding_budget() {
  Outcome out;
  std::mt19937_64 rng(404);
  double worst_ratio = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    int n = 2 + static_cast<int>(stable_uniform(rng) * 7);
    int k = 2 + static_cast<int>(stable_uniform(rng) * 2);
    double eps = 0.05 + 0.45 * stable_uniform(rng);
    GridSpec spec = GridSpec::make(n, k, eps);
    double budget = eps * (k - 1) / (20.0 * n);
    MixedProfile profile;
    for (int i = 0; i < n; ++i) profile.push_back(floored_strategy(rng, k, spec.floor_prob()));
    MixedProfile rounded = round_profile_to_grid(profile, spec);
    for (int i = 0; i < n; ++i) {
      double tv = tv_mixed(profile[i], rounded[i]);
      worst_ratio = std::max(worst_ratio, tv / budget);
      out.require(tv <= budget, "row TV " + fmt(tv) + " above budget " + fmt(budget));
    }
  }
  if (out.ok) out.detail = "worst TV at " + fmt(100.0 * worst_ratio) + "% of budget";
  return out;
}

// ---------------------------------------------------------------------------
// 5. Covariance eigenvalue floor under a probability floor.
// ---------------------------------------------------------------------------
Outcome check_eigenvalue_floor() {
  Outcome out;
  std::mt19937_64 rng(505);
  double min_margin = 1e300;
  for (int n : {10, 50}) {
    for (int k : {2, 3}) {
      for (double eps : {0.05, 0.2}) {
        double floor = eps / (k - 1);
        for (int seed = 0; seed < 100; ++seed) {
          std::vector<MixedStrategy> rows;
          for (int i = 0; i < n; ++i) rows.push_back(floored_strategy(rng, k, floor));
          double lambda = min_orthogonal_eigenvalue(covariance(rows, k));
          double margin = lambda - n * eps / (k - 1);
          min_margin = std::min(min_margin, margin);
          out.require(margin >= -1e-9, "eigenvalue short of floor by " + fmt(-margin));
        }
      }
    }
  }
  if (out.ok) out.detail = "min margin above floor " + fmt(min_margin) + " over 800 samples";
  return out;
}

// ---------------------------------------------------------------------------
// 6. Smoothing solver: pure search always succeeds and the bound holds.
// ---------------------------------------------------------------------------
Outcome check_smoothing_accounting() {
  Outcome out;
  double worst_slack = 1e300;
  for (int n : {10, 20, 30}) {
    for (int k : {2, 3}) {
      for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        AnonymousGame game = generate_game(n, k, GameKind::UniformRandom, seed);
        SmoothResult result;
        try {
          result = solve_smooth(game);
        } catch (const std::exception& e) {
          out.require(false, "n=" + std::to_string(n) + " k=" + std::to_string(k) + " seed=" +
                                 std::to_string(seed) + ": " + e.what());
          continue;
        }
        double bound = result.delta + 2.0 * k * result.lipschitz;
        double regret = max_regret(game, result.profile);
        worst_slack = std::min(worst_slack, bound - regret);
        out.require(regret <= bound + 1e-9, "regret " + fmt(regret) + " above bound " +
                                                fmt(bound) + " at n=" + std::to_string(n) +
                                                " k=" + std::to_string(k));
      }
    }
  }
  if (out.ok) out.detail = "min bound slack " + fmt(worst_slack) + " over 60 runs";
  return out;
}

// ---------------------------------------------------------------------------
// 7. Per-direction variance floor of the noisy execution.
// ---------------------------------------------------------------------------
Outcome check_variance_floor() {
  Outcome out;
  std::mt19937_64 rng(707);
  double min_margin = 1e300;
  for (int trial = 0; trial < 1000; ++trial) {
    int k = 2 + static_cast<int>(stable_uniform(rng) * 4);
    int j = static_cast<int>(stable_uniform(rng) * k);
    double delta = 0.5 * stable_uniform(rng);
    std::vector<double> v(k);
    double mean = 0.0;
    for (double& x : v) {
      x = 2.0 * stable_uniform(rng) - 1.0;
      mean += x;
    }
    mean /= k;
    double norm = 0.0;
    for (double& x : v) {
      x -= mean;
      norm += x * x;
    }
    norm = std::sqrt(norm);
    if (norm < 1e-9) {
      v.assign(k, 0.0);
      v[0] = 1.0 / std::sqrt(2.0);
      v[1] = -1.0 / std::sqrt(2.0);
    } else {
      for (double& x : v) x /= norm;
    }
    double margin = crv_direction_variance(j, delta, k, v) - delta / (k - 1);
    min_margin = std::min(min_margin, margin);
    out.require(margin >= -1e-12, "variance short of floor by " + fmt(-margin));
  }
  if (out.ok) out.detail = "min margin " + fmt(min_margin) + " over 1000 samples";
  return out;
}

// ---------------------------------------------------------------------------
// 8. Well-supported conversion on valid inputs; padding round trip.
// ---------------------------------------------------------------------------
Outcome check_conversion_and_padding() {
  Outcome out;
  std::mt19937_64 rng(808);

  // Configuration A: dominant games with a small leak toward the weak
  // strategy, sized to keep the input regret inside the eps^2/(4n) budget.
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    int n = 3 + static_cast<int>(seed % 3);
    double eps = 0.4;
    AnonymousGame game = generate_game(n, 2, GameKind::Dominant, seed);
    double leak = 0.9 * eps * eps / (4.0 * n);
    MixedProfile profile(n, MixedStrategy{{1.0 - leak, leak}});
    out.require(max_regret(game, profile) <= eps * eps / (4.0 * n),
                "config A input regret left the budget");
    MixedProfile converted = ane2wsne(game, profile, eps);
    out.require(verify_well_supported(game, converted, eps).ok,
                "config A output not well-supported at seed " + std::to_string(seed));
  }

  // Configuration B: constant games, arbitrary profiles (regret is zero).
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    int n = 3 + static_cast<int>(stable_uniform(rng) * 4);
    int k = 2 + static_cast<int>(stable_uniform(rng) * 2);
    AnonymousGame game = generate_game(n, k, GameKind::Constant, seed);
    MixedProfile profile = random_profile(rng, n, k);
    MixedProfile converted = ane2wsne(game, profile, 0.5);
    out.require(verify_well_supported(game, converted, 0.5).ok,
                "config B output not well-supported at seed " + std::to_string(seed));
  }

  // Configuration C: padded dominant games with everyone pinned to the
  // dominant strategy (an exact equilibrium of the padded game).
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    AnonymousGame base = generate_game(3, 2, GameKind::Dominant, seed);
    PaddedGame padded = pad_game(base, 5);
    MixedProfile profile(5, MixedStrategy{{1.0, 0.0}});
    out.require(max_regret(padded.game, profile) == 0.0, "config C input regret not zero");
    MixedProfile converted = ane2wsne(padded.game, profile, 0.3);
    out.require(verify_well_supported(padded.game, converted, 0.3).ok,
                "config C output not well-supported at seed " + std::to_string(seed));
  }

  // Round trip: pad, solve the padded game well-supportedly on a coarse
  // grid, restrict back to the real players, verify.
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    AnonymousGame base = generate_game(2, 2, GameKind::UniformRandom, seed);
    PaddedGame padded = pad_game(base, 4);
    GridSearchOptions options;
    options.well_supported = true;
    options.max_profiles = 10'000'000;
    std::optional<MixedProfile> found = grid_profile_search(padded.game, 0.25, 0.5, options);
    out.require(found.has_value(),
                "round trip found no well-supported profile at seed " + std::to_string(seed));
    if (!found) continue;
    MixedProfile unpadded = unpad_profile(padded, *found, 0.5);
    out.require(verify_well_supported(base, unpadded, 0.5).ok,
                "round trip output not well-supported at seed " + std::to_string(seed));
  }

  if (out.ok) out.detail = "60 conversions + 10 padding round trips verified";
  return out;
}

// ---------------------------------------------------------------------------
// 9. Regret transfers to a perturbed profile within twice the TV budget.
// ---------------------------------------------------------------------------
Outcome check_regret_transfer() {
  Outcome out;
  std::mt19937_64 rng(909);
  double worst_slack = 1e300;
  for (int trial = 0; trial < 50; ++trial) {
    int n = 3 + static_cast<int>(stable_uniform(rng) * 5);
    int k = 2 + static_cast<int>(stable_uniform(rng) * 2);
    AnonymousGame game = generate_game(n, k, GameKind::UniformRandom, 2000 + trial);
    MixedProfile x = random_profile(rng, n, k);
    double delta = max_regret(game, x);

    MixedProfile y = x;
    for (int i = 0; i < n; ++i) {
      double w = 0.1 * stable_uniform(rng);
      MixedStrategy z = random_strategy(rng, k);
      for (int j = 0; j < k; ++j) y[i].probs[j] = (1.0 - w) * x[i].probs[j] + w * z.probs[j];
    }

    // Smallest eps making the premise true, with opponent distances exact.
    double eps = 0.0;
    for (int i = 0; i < n; ++i) {
      std::vector<MixedStrategy> others_x, others_y;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        others_x.push_back(x[j]);
        others_y.push_back(y[j]);
      }
      double tv_opponents = tv_distance(pmd_pmf(others_x, k), pmd_pmf(others_y, k));
      eps = std::max(eps, tv_mixed(x[i], y[i]) + tv_opponents);
    }

    double regret_y = max_regret(game, y);
    worst_slack = std::min(worst_slack, delta + 2.0 * eps - regret_y);
    out.require(regret_y <= delta + 2.0 * eps + 1e-9,
                "perturbed regret " + fmt(regret_y) + " above " + fmt(delta + 2.0 * eps));
  }
  if (out.ok) out.detail = "min transfer slack " + fmt(worst_slack) + " over 50 pairs";
  return out;
}

// ---------------------------------------------------------------------------
// 10. Characteristic function identities against the exact pmf.
// ---------------------------------------------------------------------------
Outcome check_fourier_identities() {
  Outcome out;
  std::mt19937_64 rng(1010);
  double zero_gap = 0.0, abs_excess = 0.0, dft_err = 0.0;
  const std::complex<double> minus_two_pi_i(0.0, -2.0 * std::acos(-1.0));
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + static_cast<int>(stable_uniform(rng) * 6);
    int k = 2 + static_cast<int>(stable_uniform(rng) * 2);
    std::vector<MixedStrategy> rows;
    for (int i = 0; i < n; ++i) rows.push_back(random_strategy(rng, k));
    LatticeDistribution pmf = pmd_pmf(rows, k);
    PartitionSpace space = pmf.space();
    zero_gap = std::max(zero_gap,
                        std::abs(fourier_at(rows, k, std::vector<double>(k, 0.0)) - 1.0));
    for (int q = 0; q < 100; ++q) {
      std::vector<double> xi(k);
      for (double& v : xi) v = stable_uniform(rng);
      std::complex<double> direct = fourier_at(rows, k, xi);
      abs_excess = std::max(abs_excess, std::abs(direct) - 1.0);
      std::complex<double> from_pmf(0.0, 0.0);
      Partition point = space.first();
      std::uint64_t rank = 0;
      do {
        double phase = 0.0;
        for (int j = 0; j < k; ++j) phase += xi[j] * point[j];
        from_pmf += pmf.mass[rank] * std::exp(minus_two_pi_i * phase);
        ++rank;
      } while (space.next(point));
      dft_err = std::max(dft_err, std::abs(direct - from_pmf));
    }
  }
  out.require(zero_gap <= 1e-12, "value at zero off by " + fmt(zero_gap));
  out.require(abs_excess <= 1e-12, "magnitude exceeds 1 by " + fmt(abs_excess));
  out.require(dft_err <= 1e-10, "direct vs pmf transform gap " + fmt(dft_err));
  if (out.ok) {
    out.detail = "max transform gap " + fmt(dft_err) + " over 2000 frequencies";
  }
  return out;
}

// ---------------------------------------------------------------------------
// 11. Diagnostic: equal quantized summaries vs exact TV (TV reported only).
// ---------------------------------------------------------------------------
Outcome check_equal_summary_diagnostic() {
  Outcome out;
  std::mt19937_64 rng(1111);
  const double c = 0.5;
  std::string reported;
  for (int n : {50, 100, 200}) {
    const double eps = std::pow(static_cast<double>(n), -c);
    const GridSpec spec = GridSpec::make(n, 2, eps);
    const long long units = spec.units;
    const long long lo = std::max(spec.min_units, static_cast<long long>(0.10 * units));
    const long long hi = static_cast<long long>(0.45 * units);
    const double unit = eps / n;
    const MomentBasis basis(2, default_moment_degree(c));

    double max_tv = 0.0;
    double max_gap = 0.0;
    for (int pair = 0; pair < 20; ++pair) {
      MixedProfile x, y;
      for (int i = 0; i < n; ++i) {
        long long u = lo + static_cast<long long>(stable_uniform(rng) * (hi - lo + 1));
        MixedStrategy row_x{
            {static_cast<double>(u) / units, 1.0 - static_cast<double>(u) / units}};
        DataVector dx = data_vector(row_x, basis, unit);
        MixedStrategy row_y = row_x;
        for (int attempt = 0; attempt < 200; ++attempt) {
          long long shift = static_cast<long long>(stable_uniform(rng) * 33) - 16;
          long long v = u + shift;
          if (shift == 0 || v < lo || v > hi) continue;
          MixedStrategy candidate{
              {static_cast<double>(v) / units, 1.0 - static_cast<double>(v) / units}};
          if (data_vector(candidate, basis, unit) == dx) {
            row_y = candidate;
            break;
          }
        }
        x.push_back(row_x);
        y.push_back(row_y);
      }

      DataVector sum_x = data_vector(x[0], basis, unit);
      DataVector sum_y = data_vector(y[0], basis, unit);
      for (int i = 1; i < n; ++i) {
        sum_x = data_vector_sum(sum_x, data_vector(x[i], basis, unit));
        sum_y = data_vector_sum(sum_y, data_vector(y[i], basis, unit));
      }
      out.require(sum_x == sum_y, "constructed pair has unequal summaries");

      auto bucket_x = component_decomposition(x, 2);
      auto bucket_y = component_decomposition(y, 2);
      for (std::size_t idx = 0; idx < basis.size(); ++idx) {
        int t = basis.bucket(idx);
        double gap = std::abs(parameter_moment(bucket_x[t], basis.moment(idx)) -
                              parameter_moment(bucket_y[t], basis.moment(idx)));
        max_gap = std::max(max_gap, gap);
        out.require(gap <= eps, "moment gap " + fmt(gap) + " above " + fmt(eps));
      }

      max_tv = std::max(max_tv, tv_distance(pmd_pmf(x, 2), pmd_pmf(y, 2)));
    }
    if (!reported.empty()) reported += "; ";
    reported += "n=" + std::to_string(n) + " maxTV=" + fmt(max_tv) + " (eps=" + fmt(eps) +
                ", max moment gap " + fmt(max_gap) + ")";
  }
  if (out.ok) out.detail = reported;
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"exact-pmf-vs-enumeration", check_pmf_exactness},
      {"payoff-oracle-agreement", check_payoff_oracle_agreement},
      {"moment-search-regret-targets", check_moment_search_targets},
      {"grid-rounding-tv-budget", check_grid_rounding_budget},
      {"covariance-eigenvalue-floor", check_eigenvalue_floor},
      {"smoothing-bound-accounting", check_smoothing_accounting},
      {"noise-variance-floor", check_variance_floor},
      {"well-supported-conversion-round-trip", check_conversion_and_padding},
      {"perturbed-profile-regret-transfer", check_regret_transfer},
      {"characteristic-function-identities", check_fourier_identities},
      {"equal-summary-tv-diagnostic", check_equal_summary_diagnostic},
  };

  int failed = 0;
  auto suite_start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].run();
    } catch (const std::exception& e) {
      outcome.ok = false;
      outcome.detail = std::string("unexpected exception: ") + e.what();
    }
    auto end = std::chrono::steady_clock::now();
    double seconds = std::chrono::duration<double>(end - start).count();
    std::printf("%s %2zu %-40s (%.1fs) %s\n", outcome.ok ? "PASS" : "FAIL", i + 1,
                criteria[i].name, seconds, outcome.detail.c_str());
    std::fflush(stdout);
    if (!outcome.ok) ++failed;
  }
  double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - suite_start)
                     .count();
  std::printf("%d/%zu criteria passed in %.1fs\n", static_cast<int>(criteria.size()) - failed,
              criteria.size(), total);
  return failed == 0 ? 0 : 1;
}
