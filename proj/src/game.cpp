#include "anoneq/game.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "anoneq/errors.hpp"
#include "anoneq/parallel.hpp"

namespace anoneq {

namespace {

// Platform-stable uniform double in [0, 1): top 53 bits of the generator.
double next_uniform(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

void write_double(std::ostream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out << buf;
}

}  // namespace

AnonymousGame::AnonymousGame(int n, int k, std::vector<double> table)
    : n_(n), k_(k), others_(n >= 1 ? n - 1 : 0, k >= 1 ? k : 1), table_(std::move(table)) {
  if (n < 1) throw std::invalid_argument("AnonymousGame: need n >= 1");
  if (k < 1) throw std::invalid_argument("AnonymousGame: need k >= 1");
  std::size_t expected = static_cast<std::size_t>(n_) * k_ * others_.size();
  if (table_.size() != expected)
    throw std::invalid_argument("AnonymousGame: table has " + std::to_string(table_.size()) +
                                " cells, expected " + std::to_string(expected));
  for (double v : table_)
    if (!(v >= 0.0) || !(v <= 1.0))
      throw std::invalid_argument("AnonymousGame: payoff " + std::to_string(v) +
                                  " outside [0,1]");
}

GameKind game_kind_from_string(const std::string& name) {
  if (name == "uniform-random") return GameKind::UniformRandom;
  if (name == "congestion") return GameKind::Congestion;
  if (name == "dominant") return GameKind::Dominant;
  if (name == "constant") return GameKind::Constant;
  throw std::invalid_argument("unknown game kind '" + name +
                              "' (expected uniform-random, congestion, dominant or constant)");
}

std::string to_string(GameKind kind) {
  switch (kind) {
    case GameKind::UniformRandom: return "uniform-random";
    case GameKind::Congestion: return "congestion";
    case GameKind::Dominant: return "dominant";
    case GameKind::Constant: return "constant";
  }
  throw std::invalid_argument("bad game kind");
}

AnonymousGame generate_game(int n, int k, GameKind kind, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("generate_game: need n >= 1");
  if (k < 1) throw std::invalid_argument("generate_game: need k >= 1");
  PartitionSpace others(n - 1, k);
  std::size_t cells = static_cast<std::size_t>(n) * k * others.size();
  std::vector<double> table(cells, 0.0);

  switch (kind) {
    case GameKind::UniformRandom: {
      std::mt19937_64 rng(seed);
      for (double& v : table) v = next_uniform(rng);
      break;
    }
    case GameKind::Congestion: {
      // Payoff falls with the load on the chosen strategy (self included).
      std::vector<Partition> points = enumerate_partitions(n - 1, k);
      std::size_t p = others.size();
      for (int i = 0; i < n; ++i)
        for (int a = 0; a < k; ++a)
          for (std::size_t r = 0; r < p; ++r)
            table[(static_cast<std::size_t>(i) * k + a) * p + r] =
                1.0 - static_cast<double>(points[r][a] + 1) / n;
      break;
    }
    case GameKind::Dominant: {
      std::size_t p = others.size();
      for (int i = 0; i < n; ++i)
        for (std::size_t r = 0; r < p; ++r)
          table[(static_cast<std::size_t>(i) * k + 0) * p + r] = 1.0;
      break;
    }
    case GameKind::Constant: {
      std::fill(table.begin(), table.end(), 0.5);
      break;
    }
  }
  return AnonymousGame(n, k, std::move(table));
}

double expected_payoff(const AnonymousGame& game, int player, int strategy,
                       const std::vector<MixedStrategy>& others) {
  if (player < 0 || player >= game.n()) throw std::invalid_argument("expected_payoff: bad player");
  if (strategy < 0 || strategy >= game.k())
    throw std::invalid_argument("expected_payoff: bad strategy");
  if (static_cast<int>(others.size()) != game.n() - 1)
    throw std::invalid_argument("expected_payoff: expected " + std::to_string(game.n() - 1) +
                                " opponent rows, got " + std::to_string(others.size()));
  LatticeDistribution dist = pmd_pmf(others, game.k());
  const double* row = game.payoff_row(player, strategy);
  double total = 0.0;
  for (std::size_t r = 0; r < dist.mass.size(); ++r) total += dist.mass[r] * row[r];
  return total;
}

std::vector<double> strategy_payoffs(const AnonymousGame& game, const MixedProfile& profile,
                                     int player) {
  if (static_cast<int>(profile.size()) != game.n())
    throw std::invalid_argument("strategy_payoffs: profile has " +
                                std::to_string(profile.size()) + " rows, expected " +
                                std::to_string(game.n()));
  if (player < 0 || player >= game.n())
    throw std::invalid_argument("strategy_payoffs: bad player");
  std::vector<MixedStrategy> others;
  others.reserve(game.n() - 1);
  for (int j = 0; j < game.n(); ++j)
    if (j != player) others.push_back(profile[j]);
  LatticeDistribution dist = pmd_pmf(others, game.k());
  std::vector<double> out(game.k(), 0.0);
  for (int a = 0; a < game.k(); ++a) {
    const double* row = game.payoff_row(player, a);
    double total = 0.0;
    for (std::size_t r = 0; r < dist.mass.size(); ++r) total += dist.mass[r] * row[r];
    out[a] = total;
  }
  return out;
}

double regret(const AnonymousGame& game, const MixedProfile& profile, int player) {
  validate_profile(profile, game.k(), "regret profile");
  std::vector<double> payoffs = strategy_payoffs(game, profile, player);
  double best = *std::max_element(payoffs.begin(), payoffs.end());
  double current = 0.0;
  for (int a = 0; a < game.k(); ++a) current += profile[player].probs[a] * payoffs[a];
  return best - current;
}

double max_regret(const AnonymousGame& game, const MixedProfile& profile, int threads) {
  validate_profile(profile, game.k(), "max_regret profile");
  if (static_cast<int>(profile.size()) != game.n())
    throw std::invalid_argument("max_regret: profile row count mismatch");
  std::vector<double> per_player(game.n(), 0.0);
  parallel_for(game.n(), resolve_threads(threads), [&](std::size_t i) {
    std::vector<double> payoffs = strategy_payoffs(game, profile, static_cast<int>(i));
    double best = *std::max_element(payoffs.begin(), payoffs.end());
    double current = 0.0;
    for (int a = 0; a < game.k(); ++a) current += profile[i].probs[a] * payoffs[a];
    per_player[i] = best - current;
  });
  return *std::max_element(per_player.begin(), per_player.end());
}

WellSupportedReport verify_well_supported(const AnonymousGame& game, const MixedProfile& profile,
                                          double eps) {
  validate_profile(profile, game.k(), "verify_well_supported profile");
  if (static_cast<int>(profile.size()) != game.n())
    throw std::invalid_argument("verify_well_supported: profile row count mismatch");
  WellSupportedReport report;
  for (int i = 0; i < game.n(); ++i) {
    std::vector<double> payoffs = strategy_payoffs(game, profile, i);
    double best = *std::max_element(payoffs.begin(), payoffs.end());
    for (int a = 0; a < game.k(); ++a) {
      if (profile[i].probs[a] <= 0.0) continue;
      double gap = best - payoffs[a];
      if (gap > eps + 1e-9) {
        report.ok = false;
        report.violations.push_back({i, a, gap});
      }
    }
  }
  return report;
}

bool is_approx_equilibrium(const AnonymousGame& game, const MixedProfile& profile, double eps) {
  return max_regret(game, profile) <= eps + 1e-9;
}

void save_game(const AnonymousGame& game, std::ostream& out) {
  out << "anongame v1\n" << game.n() << " " << game.k() << "\n";
  std::size_t p = game.cells_per_strategy();
  for (int i = 0; i < game.n(); ++i) {
    for (int a = 0; a < game.k(); ++a) {
      const double* row = game.payoff_row(i, a);
      for (std::size_t r = 0; r < p; ++r) {
        if (r) out << ' ';
        write_double(out, row[r]);
      }
      out << '\n';
    }
  }
}

void save_game(const AnonymousGame& game, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  save_game(game, out);
}

namespace {

std::string read_line_or_throw(std::istream& in, int& line_no, const char* what) {
  std::string line;
  if (!std::getline(in, line)) throw parse_error(std::string(what) + ": unexpected end of file", line_no);
  ++line_no;
  return line;
}

std::vector<double> parse_row(const std::string& line, std::size_t expected, int line_no,
                              const char* what) {
  std::istringstream ss(line);
  std::vector<double> values;
  double v;
  while (ss >> v) values.push_back(v);
  std::string trailing;
  if (ss.fail() && !ss.eof() && ss >> trailing)
    throw parse_error(std::string(what) + ": non-numeric token '" + trailing + "'", line_no);
  if (values.size() != expected)
    throw parse_error(std::string(what) + ": expected " + std::to_string(expected) +
                          " values, found " + std::to_string(values.size()),
                      line_no);
  return values;
}

}  // namespace

AnonymousGame load_game(std::istream& in) {
  int line_no = 0;
  std::string header = read_line_or_throw(in, line_no, "game file");
  if (header != "anongame v1")
    throw parse_error("game file: bad header '" + header + "', expected 'anongame v1'", line_no);
  std::string dims = read_line_or_throw(in, line_no, "game file");
  std::istringstream ss(dims);
  int n = 0, k = 0;
  std::string extra;
  if (!(ss >> n >> k) || (ss >> extra))
    throw parse_error("game file: expected '<n> <k>', got '" + dims + "'", line_no);
  if (n < 1 || k < 1)
    throw parse_error("game file: need n >= 1 and k >= 1", line_no);
  PartitionSpace others(n - 1, k);
  std::size_t p = others.size();
  std::vector<double> table;
  table.reserve(static_cast<std::size_t>(n) * k * p);
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < k; ++a) {
      std::string line = read_line_or_throw(in, line_no, "game file");
      std::vector<double> row = parse_row(line, p, line_no, "game file");
      for (double v : row) {
        if (!(v >= 0.0) || !(v <= 1.0))
          throw parse_error("game file: payoff " + std::to_string(v) + " outside [0,1]", line_no);
        table.push_back(v);
      }
    }
  }
  return AnonymousGame(n, k, std::move(table));
}

AnonymousGame load_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return load_game(in);
}

void save_profile(const MixedProfile& profile, std::ostream& out) {
  if (profile.empty()) throw std::invalid_argument("save_profile: empty profile");
  out << "profile v1\n" << profile.size() << " " << profile[0].k() << "\n";
  for (const MixedStrategy& row : profile) {
    for (int j = 0; j < row.k(); ++j) {
      if (j) out << ' ';
      write_double(out, row.probs[j]);
    }
    out << '\n';
  }
}

void save_profile(const MixedProfile& profile, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  save_profile(profile, out);
}

MixedProfile load_profile(std::istream& in) {
  int line_no = 0;
  std::string header = read_line_or_throw(in, line_no, "profile file");
  if (header != "profile v1")
    throw parse_error("profile file: bad header '" + header + "', expected 'profile v1'", line_no);
  std::string dims = read_line_or_throw(in, line_no, "profile file");
  std::istringstream ss(dims);
  int n = 0, k = 0;
  std::string extra;
  if (!(ss >> n >> k) || (ss >> extra))
    throw parse_error("profile file: expected '<n> <k>', got '" + dims + "'", line_no);
  if (n < 1 || k < 1) throw parse_error("profile file: need n >= 1 and k >= 1", line_no);
  MixedProfile profile;
  profile.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::string line = read_line_or_throw(in, line_no, "profile file");
    MixedStrategy row{parse_row(line, k, line_no, "profile file")};
    try {
      validate_mixed_strategy(row, "profile row");
    } catch (const std::invalid_argument& e) {
      throw parse_error(std::string("profile file: ") + e.what(), line_no);
    }
    profile.push_back(std::move(row));
  }
  return profile;
}

MixedProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return load_profile(in);
}

}  // namespace anoneq
