// anoneq command line tool: generate, solve, verify, convert, benchmark and
// diagnose anonymous games.  Reports are line-oriented key=value text and are
// byte-stable for identical inputs and seeds; timing keys appear only when
// explicitly requested.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "anoneq/errors.hpp"
#include "anoneq/game.hpp"
#include "anoneq/moment_search.hpp"
#include "anoneq/oracle.hpp"
#include "anoneq/parallel.hpp"
#include "anoneq/pmd.hpp"
#include "anoneq/reductions.hpp"
#include "anoneq/report.hpp"
#include "anoneq/smoothing.hpp"

namespace {

using namespace anoneq;

// 53-bit uniform in [0, 1); bit-identical across platforms, unlike the
// standard distributions.
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

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  long long elapsed_ms() const {
    auto now = std::chrono::steady_clock::now();
    return std::chrono::duration_cast<std::chrono::milliseconds>(now - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string join_counts(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

void emit_profile(const MixedProfile& profile, const std::string& out_path, RunReport& report) {
  if (!out_path.empty()) {
    save_profile(profile, out_path);
    report.add("profile_path", out_path);
    std::cout << report;
  } else {
    std::cout << report;
    std::cout << "---\n";
    save_profile(profile, std::cout);
  }
}

// Comma separated integer list from "name=v1,v2,..."; throws on mismatch.
std::vector<int> parse_sweep_list(const std::string& arg, const std::string& name) {
  const std::string prefix = name + "=";
  if (arg.rfind(prefix, 0) != 0) {
    throw std::invalid_argument("sweep argument '" + arg + "' must start with '" + prefix + "'");
  }
  std::vector<int> values;
  std::stringstream body(arg.substr(prefix.size()));
  std::string token;
  while (std::getline(body, token, ',')) {
    std::size_t used = 0;
    int value = std::stoi(token, &used);
    if (used != token.size() || value <= 0) {
      throw std::invalid_argument("sweep list entry '" + token + "' is not a positive integer");
    }
    values.push_back(value);
  }
  if (values.empty()) throw std::invalid_argument("sweep list for '" + name + "' is empty");
  return values;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

int cmd_gen(int n, int k, const std::string& kind_name, std::uint64_t seed,
            const std::string& out_path) {
  GameKind kind = game_kind_from_string(kind_name);
  AnonymousGame game = generate_game(n, k, kind, seed);
  save_game(game, out_path);
  RunReport report;
  report.add("command", "gen");
  report.add("n", n);
  report.add("k", k);
  report.add("kind", to_string(kind));
  report.add("seed", seed);
  report.add("game_path", out_path);
  std::cout << report;
  return 0;
}

struct SolveMomentArgs {
  double c = 0.5;
  double coarsen = 1.0;
  int degree = -1;
  double cover_accuracy_frac = 0.2;
  double br_slack_frac = 0.6;
  std::uint64_t max_grid = 1'000'000;
  std::uint64_t max_cover_nodes = 5'000'000;
};

int cmd_solve_moment(const std::string& game_path, const SolveMomentArgs& args,
                     const std::string& out_path, int threads, bool timings) {
  AnonymousGame game = load_game(game_path);
  MomentSearchOptions options;
  options.coarsen = args.coarsen;
  options.degree = args.degree;
  options.cover_accuracy_frac = args.cover_accuracy_frac;
  options.br_slack_frac = args.br_slack_frac;
  options.max_grid = args.max_grid;
  options.max_cover_nodes = args.max_cover_nodes;
  options.threads = resolve_threads(threads);

  Stopwatch watch;
  MomentSearchResult result = moment_search(game, args.c, options);
  long long solve_ms = watch.elapsed_ms();

  double regret = max_regret(game, result.profile, options.threads);
  bool verified = regret <= result.eps + 1e-9;

  RunReport report;
  report.add("command", "solve");
  report.add("algorithm", "moment-search");
  report.add("n", game.n());
  report.add("k", game.k());
  report.add("c", args.c);
  report.add("eps", result.eps);
  report.add("moment_degree",
             args.degree >= 0 ? args.degree : default_moment_degree(args.c));
  report.add("grid_units", result.grid.units);
  report.add("grid_step", result.grid.step());
  report.add("grid_floor", result.grid.floor_prob());
  report.add("grid_rows", result.grid_rows);
  report.add("cover_top", static_cast<std::uint64_t>(result.cover_top));
  report.add("cover_below", static_cast<std::uint64_t>(result.cover_below));
  report.add("scanned", static_cast<std::uint64_t>(result.scanned));
  report.add("regret", regret);
  report.add("verified", verified);
  if (timings) report.add("solve_ms", solve_ms);
  emit_profile(result.profile, out_path, report);
  if (!verified) {
    std::cerr << "error: solver output regret " << format_double(regret)
              << " exceeds target " << format_double(result.eps) << "\n";
    return 2;
  }
  return 0;
}

int cmd_solve_smooth(const std::string& game_path, double delta, const std::string& out_path,
                     int threads, bool timings) {
  AnonymousGame game = load_game(game_path);
  SmoothOptions options;
  options.delta = delta;
  options.threads = resolve_threads(threads);

  Stopwatch watch;
  SmoothResult result = solve_smooth(game, options);
  long long solve_ms = watch.elapsed_ms();

  double regret = max_regret(game, result.profile, options.threads);
  bool verified = regret <= result.bound + 1e-9;

  RunReport report;
  report.add("command", "solve");
  report.add("algorithm", "smooth");
  report.add("n", game.n());
  report.add("k", game.k());
  report.add("delta", result.delta);
  report.add("lipschitz", result.lipschitz);
  report.add("tau", result.tau);
  report.add("bound", result.bound);
  report.add("pure_assignment", join_counts(result.pure.assignment));
  report.add("pure_partition", join_counts(result.pure.induced_partition));
  report.add("regret", regret);
  report.add("verified", verified);
  if (timings) report.add("solve_ms", solve_ms);
  emit_profile(result.profile, out_path, report);
  if (!verified) {
    std::cerr << "error: solver output regret " << format_double(regret)
              << " exceeds bound " << format_double(result.bound) << "\n";
    return 2;
  }
  return 0;
}

int cmd_verify(const std::string& game_path, const std::string& profile_path, double eps,
               bool well_supported, int threads) {
  AnonymousGame game = load_game(game_path);
  MixedProfile profile = load_profile(profile_path);
  validate_profile(profile, game.k(), "profile");
  if (static_cast<int>(profile.size()) != game.n()) {
    throw std::invalid_argument("profile has " + std::to_string(profile.size()) +
                                " rows but the game has " + std::to_string(game.n()) +
                                " players");
  }
  int resolved = resolve_threads(threads);
  double regret = max_regret(game, profile, resolved);
  bool ok = regret <= eps + 1e-9;

  RunReport report;
  report.add("command", "verify");
  report.add("n", game.n());
  report.add("k", game.k());
  report.add("eps", eps);
  report.add("regret", regret);
  if (well_supported) {
    WellSupportedReport ws = verify_well_supported(game, profile, eps);
    report.add("well_supported", ws.ok);
    report.add("violations", static_cast<std::uint64_t>(ws.violations.size()));
    ok = ok && ws.ok;
  }
  report.add("verified", ok);
  std::cout << report;
  if (!ok) {
    std::cerr << "error: profile fails verification at eps " << format_double(eps) << "\n";
    return 2;
  }
  return 0;
}

int cmd_convert_ws(const std::string& game_path, const std::string& profile_path, double eps,
                   const std::string& out_path, int threads) {
  AnonymousGame game = load_game(game_path);
  MixedProfile profile = load_profile(profile_path);
  int resolved = resolve_threads(threads);
  double input_regret = max_regret(game, profile, resolved);

  MixedProfile converted = ane2wsne(game, profile, eps);
  WellSupportedReport ws = verify_well_supported(game, converted, eps);

  RunReport report;
  report.add("command", "convert-ws");
  report.add("n", game.n());
  report.add("k", game.k());
  report.add("eps", eps);
  report.add("budget", eps * eps / (4.0 * game.n()));
  report.add("input_regret", input_regret);
  report.add("well_supported", ws.ok);
  report.add("verified", ws.ok);
  emit_profile(converted, out_path, report);
  return ws.ok ? 0 : 2;
}

int cmd_convert_pad(const std::string& game_path, int n_prime, const std::string& out_path) {
  AnonymousGame game = load_game(game_path);
  PaddedGame padded = pad_game(game, n_prime);
  save_game(padded.game, out_path);
  RunReport report;
  report.add("command", "convert-pad");
  report.add("original_n", padded.original_n);
  report.add("k", game.k());
  report.add("n_prime", padded.game.n());
  report.add("shift", padded.shift);
  report.add("game_path", out_path);
  std::cout << report;
  return 0;
}

struct PipelineArgs {
  double eps = 0.0;
  double gamma = 0.0;
  std::string base = "oracle";
  double base_step = 1.0;
  double base_c = 0.9;
  double base_coarsen = 1.0;
  int base_degree = -1;
  std::uint64_t base_max_profiles = 2'000'000;
  int n_prime_cap = 10'000;
};

int cmd_pipeline(const std::string& game_path, const PipelineArgs& args,
                 const std::string& out_path, int threads, bool timings) {
  AnonymousGame game = load_game(game_path);
  int resolved = resolve_threads(threads);

  BaseSolver solver;
  if (args.base == "oracle") {
    double step = args.base_step;
    std::uint64_t max_profiles = args.base_max_profiles;
    solver = [step, max_profiles](const AnonymousGame& g, double eps_target) {
      GridSearchOptions options;
      options.max_profiles = max_profiles;
      std::optional<MixedProfile> found = grid_profile_search(g, step, eps_target, options);
      if (!found) {
        throw precondition_error("pipeline base oracle found no " +
                                 format_double(eps_target) + "-equilibrium at grid step " +
                                 format_double(step));
      }
      return *found;
    };
  } else {  // moment-search
    double c = args.base_c;
    double coarsen = args.base_coarsen;
    int degree = args.base_degree;
    solver = [c, coarsen, degree, resolved](const AnonymousGame& g, double) {
      MomentSearchOptions options;
      options.coarsen = coarsen;
      options.degree = degree;
      options.threads = resolved;
      return moment_search(g, c, options).profile;
    };
  }

  PipelineOptions options;
  options.n_prime_cap = args.n_prime_cap;

  Stopwatch watch;
  PipelineResult result = fptas_pipeline(game, args.eps, solver, args.gamma, options);
  long long solve_ms = watch.elapsed_ms();

  double regret = max_regret(game, result.profile, resolved);
  bool verified = regret <= args.eps + 1e-9;

  RunReport report;
  report.add("command", "pipeline");
  report.add("n", game.n());
  report.add("k", game.k());
  report.add("eps", args.eps);
  report.add("gamma", args.gamma);
  report.add("base", args.base);
  report.add("used_padding", result.used_padding);
  report.add("n_prime", result.n_prime);
  report.add("base_eps", result.base_eps);
  report.add("regret", regret);
  report.add("verified", verified);
  if (timings) report.add("solve_ms", solve_ms);
  emit_profile(result.profile, out_path, report);
  if (!verified) {
    std::cerr << "error: pipeline output regret " << format_double(regret)
              << " exceeds eps " << format_double(args.eps) << "\n";
    return 2;
  }
  return 0;
}

int cmd_oracle_search(const std::string& game_path, double step, double eps, bool well_supported,
                      std::uint64_t max_profiles, const std::string& out_path, int threads) {
  AnonymousGame game = load_game(game_path);
  GridSearchOptions options;
  options.well_supported = well_supported;
  options.max_profiles = max_profiles;
  std::optional<MixedProfile> found = grid_profile_search(game, step, eps, options);

  RunReport report;
  report.add("command", "oracle-search");
  report.add("n", game.n());
  report.add("k", game.k());
  report.add("step", step);
  report.add("eps", eps);
  report.add("well_supported_mode", well_supported);
  report.add("found", found.has_value());
  if (found) {
    double regret = max_regret(game, *found, resolve_threads(threads));
    report.add("regret", regret);
    emit_profile(*found, out_path, report);
    return 0;
  }
  std::cout << report;
  std::cerr << "error: no profile on the step-" << format_double(step)
            << " grid verifies at eps " << format_double(eps) << "\n";
  return 2;
}

int cmd_bench(const std::vector<std::string>& sweep, const std::string& kind_name,
              std::uint64_t seed, int threads) {
  std::vector<int> ns = parse_sweep_list(sweep.at(0), "n");
  std::vector<int> ks = parse_sweep_list(sweep.at(1), "k");
  GameKind kind = game_kind_from_string(kind_name);
  int resolved = resolve_threads(threads);

  std::cout << "n k seed delta lipschitz regret time_ms\n";
  for (int n : ns) {
    for (int k : ks) {
      AnonymousGame game = generate_game(n, k, kind, seed);
      SmoothOptions options;
      options.threads = resolved;
      Stopwatch watch;
      SmoothResult result = solve_smooth(game, options);
      long long ms = watch.elapsed_ms();
      double regret = max_regret(game, result.profile, resolved);
      std::cout << n << ' ' << k << ' ' << seed << ' ' << format_double(result.delta) << ' '
                << format_double(result.lipschitz) << ' ' << format_double(regret) << ' ' << ms
                << "\n";
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

// A pair of same-size collections of grid rows whose quantized moment
// summaries agree exactly, built row by row: each row of Y is a small grid
// shift of the matching row of X, kept only when the shifted row rounds to
// the same summary.  Equal summaries force the true moments within one
// quantization unit per row, while the distributions themselves stay
// genuinely different.
struct EqualDataPair {
  MixedProfile x;
  MixedProfile y;
  double tv = 0.0;
  double max_moment_gap = 0.0;
  bool data_equal = false;
};

EqualDataPair make_equal_data_pair(int n, double c, std::mt19937_64& rng) {
  const double eps = std::pow(static_cast<double>(n), -c);
  const GridSpec spec = GridSpec::make(n, 2, eps);
  const long long units = spec.units;
  const long long lo = std::max(spec.min_units, static_cast<long long>(0.10 * units));
  const long long hi = static_cast<long long>(0.45 * units);
  const double unit = eps / n;
  const MomentBasis basis(2, default_moment_degree(c));

  EqualDataPair out;
  for (int i = 0; i < n; ++i) {
    long long u = lo + static_cast<long long>(stable_uniform(rng) * (hi - lo + 1));
    MixedStrategy row_x{{static_cast<double>(u) / units, 1.0 - static_cast<double>(u) / units}};
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
    out.x.push_back(row_x);
    out.y.push_back(row_y);
  }

  DataVector sum_x = data_vector(out.x[0], basis, unit);
  DataVector sum_y = data_vector(out.y[0], basis, unit);
  for (int i = 1; i < n; ++i) {
    sum_x = data_vector_sum(sum_x, data_vector(out.x[i], basis, unit));
    sum_y = data_vector_sum(sum_y, data_vector(out.y[i], basis, unit));
  }
  out.data_equal = sum_x == sum_y;

  auto bucket_x = component_decomposition(out.x, 2);
  auto bucket_y = component_decomposition(out.y, 2);
  for (std::size_t idx = 0; idx < basis.size(); ++idx) {
    int t = basis.bucket(idx);
    double mx = parameter_moment(bucket_x[t], basis.moment(idx));
    double my = parameter_moment(bucket_y[t], basis.moment(idx));
    out.max_moment_gap = std::max(out.max_moment_gap, std::abs(mx - my));
  }

  out.tv = tv_distance(pmd_pmf(out.x, 2), pmd_pmf(out.y, 2));
  return out;
}

int cmd_diag_pmf(const std::string& profile_path) {
  MixedProfile profile = load_profile(profile_path);
  if (profile.empty()) throw std::invalid_argument("profile file has no rows");
  int k = profile[0].k();
  validate_profile(profile, k, "profile");
  LatticeDistribution pmf = pmd_pmf(profile, k);
  PartitionSpace space = pmf.space();
  std::cout << "m=" << pmf.m << " k=" << pmf.k << " points=" << space.size() << "\n";
  Partition x = space.first();
  std::uint64_t rank = 0;
  do {
    std::cout << rank << ' ' << join_counts(x) << ' ' << format_double(pmf.mass[rank]) << "\n";
    ++rank;
  } while (space.next(x));
  return 0;
}

int cmd_diag(std::uint64_t seed, int threads) {
  std::mt19937_64 rng(seed);
  int resolved = resolve_threads(threads);
  (void)resolved;
  RunReport report;
  report.add("command", "diag");
  report.add("seed", seed);
  bool all_ok = true;

  {  // Equal moment summaries vs. exact total variation, at a representative size.
    const int n = 50;
    const double c = 0.5;
    const int pairs = 5;
    double max_tv = 0.0;
    double max_gap = 0.0;
    bool data_ok = true;
    for (int t = 0; t < pairs; ++t) {
      EqualDataPair pair = make_equal_data_pair(n, c, rng);
      max_tv = std::max(max_tv, pair.tv);
      max_gap = std::max(max_gap, pair.max_moment_gap);
      data_ok = data_ok && pair.data_equal;
    }
    double bound = std::pow(static_cast<double>(n), -c);
    bool ok = data_ok && max_gap <= bound;
    report.add("representative_n", n);
    report.add("representative_pairs", pairs);
    report.add("representative_eps", bound);
    report.add("representative_max_tv", max_tv);
    report.add("representative_max_moment_gap", max_gap);
    report.add("representative_ok", ok);
    all_ok = all_ok && ok;
  }

  {  // Smallest covariance eigenvalue orthogonal to the degenerate direction.
    double min_margin = 1e300;
    int samples = 0;
    for (int n : {10, 50}) {
      for (int k : {2, 3}) {
        for (double eps : {0.05, 0.2}) {
          for (int rep = 0; rep < 20; ++rep) {
            std::vector<MixedStrategy> crvs;
            for (int i = 0; i < n; ++i) {
              MixedStrategy row = random_strategy(rng, k);
              double floor = eps / (k - 1);
              double excess = 1.0 - k * floor;
              for (double& p : row.probs) p = floor + excess * p;
              crvs.push_back(row);
            }
            double lambda = min_orthogonal_eigenvalue(covariance(crvs, k));
            min_margin = std::min(min_margin, lambda - n * eps / (k - 1));
            ++samples;
          }
        }
      }
    }
    bool ok = min_margin >= -1e-9;
    report.add("eigen_samples", samples);
    report.add("eigen_min_margin", min_margin);
    report.add("eigen_ok", ok);
    all_ok = all_ok && ok;
  }

  {  // Per-direction variance of the noisy strategy execution.
    double min_margin = 1e300;
    const int samples = 200;
    for (int t = 0; t < samples; ++t) {
      int k = 2 + static_cast<int>(stable_uniform(rng) * 4);
      int j = static_cast<int>(stable_uniform(rng) * k);
      double delta = 0.5 * stable_uniform(rng);
      std::vector<double> v(k);
      for (double& x : v) x = 2.0 * stable_uniform(rng) - 1.0;
      double mean = 0.0;
      for (double x : v) mean += x;
      mean /= k;
      for (double& x : v) x -= mean;  // the bound concerns directions orthogonal to all-ones
      double norm = 0.0;
      for (double x : v) norm += x * x;
      norm = std::sqrt(norm);
      if (norm < 1e-9) {
        v.assign(k, 0.0);
        v[0] = 1.0 / std::sqrt(2.0);
        v[1] = -1.0 / std::sqrt(2.0);
      } else {
        for (double& x : v) x /= norm;
      }
      double variance = crv_direction_variance(j, delta, k, v);
      min_margin = std::min(min_margin, variance - delta / (k - 1));
    }
    bool ok = min_margin >= -1e-12;
    report.add("variance_samples", samples);
    report.add("variance_min_margin", min_margin);
    report.add("variance_ok", ok);
    all_ok = all_ok && ok;
  }

  {  // Characteristic function identities against the exact pmf.
    double zero_gap = 0.0;
    double abs_excess = 0.0;
    double dft_err = 0.0;
    const std::complex<double> minus_two_pi_i(0.0, -2.0 * std::acos(-1.0));
    for (int t = 0; t < 20; ++t) {
      int n = 2 + static_cast<int>(stable_uniform(rng) * 5);
      int k = 2 + static_cast<int>(stable_uniform(rng) * 2);
      std::vector<MixedStrategy> crvs;
      for (int i = 0; i < n; ++i) crvs.push_back(random_strategy(rng, k));
      LatticeDistribution pmf = pmd_pmf(crvs, k);
      PartitionSpace space = pmf.space();
      zero_gap = std::max(zero_gap,
                          std::abs(fourier_at(crvs, k, std::vector<double>(k, 0.0)) - 1.0));
      for (int q = 0; q < 5; ++q) {
        std::vector<double> xi(k);
        for (double& x : xi) x = stable_uniform(rng);
        std::complex<double> direct = fourier_at(crvs, k, xi);
        abs_excess = std::max(abs_excess, std::abs(direct) - 1.0);
        std::complex<double> from_pmf(0.0, 0.0);
        Partition x = space.first();
        std::uint64_t rank = 0;
        do {
          double phase = 0.0;
          for (int j = 0; j < k; ++j) phase += xi[j] * x[j];
          from_pmf += pmf.mass[rank] * std::exp(minus_two_pi_i * phase);
          ++rank;
        } while (space.next(x));
        dft_err = std::max(dft_err, std::abs(direct - from_pmf));
      }
    }
    bool ok = zero_gap <= 1e-12 && abs_excess <= 1e-12 && dft_err <= 1e-10;
    report.add("fourier_zero_gap", zero_gap);
    report.add("fourier_abs_excess", abs_excess);
    report.add("fourier_dft_max_err", dft_err);
    report.add("fourier_ok", ok);
    all_ok = all_ok && ok;
  }

  report.add("verified", all_ok);
  std::cout << report;
  if (!all_ok) {
    std::cerr << "error: one or more diagnostic checks failed\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anoneq: approximate equilibria of anonymous games"};
  app.require_subcommand(1);
  std::function<int()> action;

  // ---- gen
  {
    auto* gen = app.add_subcommand("gen", "Generate a seeded game file");
    auto n = std::make_shared<int>(0);
    auto k = std::make_shared<int>(0);
    auto kind = std::make_shared<std::string>();
    auto seed = std::make_shared<std::uint64_t>(0);
    auto out = std::make_shared<std::string>();
    gen->add_option("--n", *n, "Number of players")->required();
    gen->add_option("--k", *k, "Number of strategies")->required();
    gen->add_option("--kind", *kind,
                    "Game family: uniform-random, congestion, dominant or constant")
        ->required();
    gen->add_option("--seed", *seed, "Generator seed")->required();
    gen->add_option("-o,--out", *out, "Output game file")->required();
    gen->callback([=, &action] {
      action = [=] { return cmd_gen(*n, *k, *kind, *seed, *out); };
    });
  }

  // ---- solve
  {
    auto* solve = app.add_subcommand("solve", "Solve a game file and report the result");
    auto game_path = std::make_shared<std::string>();
    auto algo = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto threads = std::make_shared<int>(0);
    auto timings = std::make_shared<bool>(false);
    auto margs = std::make_shared<SolveMomentArgs>();
    auto delta = std::make_shared<double>(-1.0);
    solve->add_option("game", *game_path, "Game file")->required();
    solve->add_option("--algo", *algo, "Algorithm: moment-search or smooth")
        ->required()
        ->check(CLI::IsMember({"moment-search", "smooth"}));
    solve->add_option("-o,--out", *out, "Profile output file (stdout when omitted)");
    solve->add_option("--threads", *threads, "Worker threads (ANONY_THREADS fallback)");
    solve->add_flag("--timings", *timings, "Include wall-clock keys in the report");
    solve->add_option("--c", margs->c, "Accuracy exponent: target eps = n^-c")->capture_default_str();
    solve->add_option("--grid-coarsen", margs->coarsen, "Grid step multiplier (>= 1)")->capture_default_str();
    solve->add_option("--moment-degree", margs->degree, "Moment degree (-1 = default for c)")->capture_default_str();
    solve->add_option("--cover-accuracy-frac", margs->cover_accuracy_frac,
                      "Cover accuracy as a fraction of eps")->capture_default_str();
    solve->add_option("--br-slack-frac", margs->br_slack_frac,
                      "Admission slack as a fraction of eps")->capture_default_str();
    solve->add_option("--max-grid", margs->max_grid, "Grid size guardrail")->capture_default_str();
    solve->add_option("--max-cover-nodes", margs->max_cover_nodes, "Cover ladder guardrail")->capture_default_str();
    solve->add_option("--delta", *delta, "Smoothing noise (-1 = formula value)")->capture_default_str();
    solve->callback([=, &action] {
      action = [=] {
        if (*algo == "moment-search") {
          return cmd_solve_moment(*game_path, *margs, *out, *threads, *timings);
        }
        return cmd_solve_smooth(*game_path, *delta, *out, *threads, *timings);
      };
    });
  }

  // ---- verify
  {
    auto* verify = app.add_subcommand("verify", "Check a profile against a game");
    auto game_path = std::make_shared<std::string>();
    auto profile_path = std::make_shared<std::string>();
    auto eps = std::make_shared<double>(0.0);
    auto ws = std::make_shared<bool>(false);
    auto threads = std::make_shared<int>(0);
    verify->add_option("game", *game_path, "Game file")->required();
    verify->add_option("profile", *profile_path, "Profile file")->required();
    verify->add_option("--eps", *eps, "Tolerance")->required();
    verify->add_flag("--well-supported", *ws, "Also require well-supported responses");
    verify->add_option("--threads", *threads, "Worker threads");
    verify->callback([=, &action] {
      action = [=] { return cmd_verify(*game_path, *profile_path, *eps, *ws, *threads); };
    });
  }

  // ---- convert
  {
    auto* convert = app.add_subcommand("convert", "Equilibrium and game conversions");
    convert->require_subcommand(1);
    {
      auto* ws = convert->add_subcommand(
          "ws", "Approximate equilibrium to well-supported equilibrium");
      auto game_path = std::make_shared<std::string>();
      auto profile_path = std::make_shared<std::string>();
      auto eps = std::make_shared<double>(0.0);
      auto out = std::make_shared<std::string>();
      auto threads = std::make_shared<int>(0);
      ws->add_option("game", *game_path, "Game file")->required();
      ws->add_option("profile", *profile_path, "Profile file")->required();
      ws->add_option("--eps", *eps, "Target well-supported tolerance")->required();
      ws->add_option("-o,--out", *out, "Profile output file (stdout when omitted)");
      ws->add_option("--threads", *threads, "Worker threads");
      ws->callback([=, &action] {
        action = [=] {
          return cmd_convert_ws(*game_path, *profile_path, *eps, *out, *threads);
        };
      });
    }
    {
      auto* pad = convert->add_subcommand("pad", "Pad a game with dummy players");
      auto game_path = std::make_shared<std::string>();
      auto n_prime = std::make_shared<int>(0);
      auto out = std::make_shared<std::string>();
      pad->add_option("game", *game_path, "Game file")->required();
      pad->add_option("--n-prime", *n_prime, "Player count after padding")->required();
      pad->add_option("-o,--out", *out, "Padded game output file")->required();
      pad->callback([=, &action] {
        action = [=] { return cmd_convert_pad(*game_path, *n_prime, *out); };
      });
    }
  }

  // ---- pipeline
  {
    auto* pipeline =
        app.add_subcommand("pipeline", "Pad, solve at boosted accuracy, convert back");
    auto game_path = std::make_shared<std::string>();
    auto args = std::make_shared<PipelineArgs>();
    auto out = std::make_shared<std::string>();
    auto threads = std::make_shared<int>(0);
    auto timings = std::make_shared<bool>(false);
    pipeline->add_option("game", *game_path, "Game file")->required();
    pipeline->add_option("--eps", args->eps, "Target accuracy")->required();
    pipeline->add_option("--gamma", args->gamma, "Accuracy exponent of the base solver")
        ->required();
    pipeline->add_option("--base", args->base, "Base solver: oracle or moment-search")->capture_default_str()
        ->check(CLI::IsMember({"oracle", "moment-search"}));
    pipeline->add_option("--base-step", args->base_step, "Oracle base: grid step")->capture_default_str();
    pipeline->add_option("--base-c", args->base_c, "Moment-search base: accuracy exponent")->capture_default_str();
    pipeline->add_option("--base-coarsen", args->base_coarsen,
                         "Moment-search base: grid step multiplier")->capture_default_str();
    pipeline->add_option("--base-degree", args->base_degree,
                         "Moment-search base: moment degree")->capture_default_str();
    pipeline->add_option("--max-profiles", args->base_max_profiles,
                         "Oracle base: profile enumeration guardrail")->capture_default_str();
    pipeline->add_option("--n-prime-cap", args->n_prime_cap, "Padding size guardrail")->capture_default_str();
    pipeline->add_option("-o,--out", *out, "Profile output file (stdout when omitted)");
    pipeline->add_option("--threads", *threads, "Worker threads");
    pipeline->add_flag("--timings", *timings, "Include wall-clock keys in the report");
    pipeline->callback([=, &action] {
      action = [=] { return cmd_pipeline(*game_path, *args, *out, *threads, *timings); };
    });
  }

  // ---- oracle
  {
    auto* oracle = app.add_subcommand("oracle", "Exhaustive reference solvers");
    oracle->require_subcommand(1);
    auto* search = oracle->add_subcommand("search", "Grid enumeration equilibrium search");
    auto game_path = std::make_shared<std::string>();
    auto step = std::make_shared<double>(0.0);
    auto eps = std::make_shared<double>(0.0);
    auto ws = std::make_shared<bool>(false);
    auto max_profiles = std::make_shared<std::uint64_t>(2'000'000);
    auto out = std::make_shared<std::string>();
    auto threads = std::make_shared<int>(0);
    search->add_option("game", *game_path, "Game file")->required();
    search->add_option("--step", *step, "Probability grid step")->required();
    search->add_option("--eps", *eps, "Tolerance")->required();
    search->add_flag("--well-supported", *ws, "Search for well-supported equilibria");
    search->add_option("--max-profiles", *max_profiles, "Enumeration guardrail")->capture_default_str();
    search->add_option("-o,--out", *out, "Profile output file (stdout when omitted)");
    search->add_option("--threads", *threads, "Worker threads");
    search->callback([=, &action] {
      action = [=] {
        return cmd_oracle_search(*game_path, *step, *eps, *ws, *max_profiles, *out, *threads);
      };
    });
  }

  // ---- bench
  {
    auto* bench = app.add_subcommand("bench", "Smoothing solver sweep table");
    auto sweep = std::make_shared<std::vector<std::string>>();
    auto kind = std::make_shared<std::string>();
    auto seed = std::make_shared<std::uint64_t>(0);
    auto threads = std::make_shared<int>(0);
    bench->add_option("--sweep", *sweep, "Two lists: n=<list> k=<list>")
        ->required()
        ->expected(2);
    bench->add_option("--kind", *kind, "Game family for every cell")->required();
    bench->add_option("--seed", *seed, "Generator seed for every cell")->required();
    bench->add_option("--threads", *threads, "Worker threads");
    bench->callback([=, &action] {
      action = [=] { return cmd_bench(*sweep, *kind, *seed, *threads); };
    });
  }

  // ---- diag
  {
    auto* diag = app.add_subcommand("diag", "Diagnostic suite and pmf dumps");
    auto seed = std::make_shared<std::uint64_t>(0);
    auto pmf_path = std::make_shared<std::string>();
    auto threads = std::make_shared<int>(0);
    auto* seed_opt = diag->add_option("--seed", *seed, "Suite seed");
    diag->add_option("--pmf", *pmf_path, "Dump the exact pmf of a profile file instead");
    diag->add_option("--threads", *threads, "Worker threads");
    diag->callback([=, &action] {
      bool seed_given = seed_opt->count() > 0;
      action = [=] {
        if (!pmf_path->empty()) return cmd_diag_pmf(*pmf_path);
        if (!seed_given) {
          throw std::invalid_argument("diag suite requires --seed (seeds are mandatory)");
        }
        return cmd_diag(*seed, *threads);
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    return action();
  } catch (const resource_limit_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const precondition_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const internal_consistency_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
