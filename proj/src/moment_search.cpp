#include "anoneq/moment_search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "anoneq/errors.hpp"

namespace anoneq {

double GridSpec::grid_size() const {
  // C(units - k*min_units + k - 1, k - 1) evaluated multiplicatively.
  long long free_units = units - static_cast<long long>(k) * min_units;
  double result = 1.0;
  for (int j = 1; j <= k - 1; ++j) result *= static_cast<double>(free_units + j) / j;
  return result;
}

GridSpec GridSpec::make(int n, int k, double eps, double coarsen) {
  if (n < 1) throw std::invalid_argument("GridSpec: need n >= 1");
  if (k < 1) throw std::invalid_argument("GridSpec: need k >= 1");
  if (!(eps > 0.0)) throw std::invalid_argument("GridSpec: need eps > 0");
  if (!(coarsen > 0.0)) throw std::invalid_argument("GridSpec: need coarsen > 0");
  double raw_step = coarsen * eps / (20.0 * k * n);
  long long units = static_cast<long long>(std::ceil(1.0 / raw_step - 1e-12));
  units = std::max<long long>(units, k);
  double raw_floor = eps / (10.0 * k);
  long long min_units = static_cast<long long>(std::ceil(raw_floor * units - 1e-9));
  min_units = std::max<long long>(min_units, 1);
  return from_quanta(n, k, eps, units, min_units);
}

GridSpec GridSpec::from_quanta(int n, int k, double eps, long long units, long long min_units) {
  if (units < 1) throw std::invalid_argument("GridSpec: need at least one unit");
  if (min_units < 1) throw std::invalid_argument("GridSpec: floor below one step");
  if (static_cast<long long>(k) * min_units > units)
    throw infeasible_grid_error("GridSpec: floor " + std::to_string(double(min_units) / units) +
                                " x " + std::to_string(k) + " strategies exceeds total mass 1");
  GridSpec spec;
  spec.n = n;
  spec.k = k;
  spec.eps = eps;
  spec.units = units;
  spec.min_units = min_units;
  return spec;
}

std::vector<MixedStrategy> strategy_grid(const GridSpec& spec) {
  // Rows correspond to partitions of the free units, shifted by the floor.
  long long free_units = spec.units - static_cast<long long>(spec.k) * spec.min_units;
  PartitionSpace space(static_cast<int>(free_units), spec.k);
  std::vector<MixedStrategy> rows;
  rows.reserve(space.size());
  Partition x = space.first();
  do {
    MixedStrategy row;
    row.probs.resize(spec.k);
    for (int j = 0; j < spec.k; ++j)
      row.probs[j] = static_cast<double>(x[j] + spec.min_units) / spec.units;
    rows.push_back(std::move(row));
  } while (space.next(x));
  return rows;
}

std::size_t CoverTable::KeyHash::operator()(const Key& key) const {
  // FNV-1a over the integer entries.
  std::size_t h = 1469598103934665603ull;
  for (long long v : key) {
    std::size_t x = static_cast<std::size_t>(v);
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (x >> (8 * byte)) & 0xff;
      h *= 1099511628211ull;
    }
  }
  return h;
}

std::size_t CoverTable::total_nodes() const {
  std::size_t total = 0;
  for (const auto& level : level_nodes_) total += level.size();
  return total;
}

std::optional<std::size_t> CoverTable::find(int level, const Key& key) const {
  const auto& index = level_index_.at(level);
  auto it = index.find(key);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

std::vector<MixedStrategy> CoverTable::witness(int level, std::size_t idx) const {
  std::vector<MixedStrategy> out(level);
  std::int64_t node = static_cast<std::int64_t>(idx);
  for (int l = level; l >= 1; --l) {
    const Node& entry = level_nodes_[l][node];
    out[l - 1] = allowed_[l - 1][entry.via];
    node = entry.parent;
  }
  return out;
}

CoverTable generate_data(const std::vector<std::vector<MixedStrategy>>& allowed,
                         const MomentBasis& basis, double unit, std::uint64_t max_nodes) {
  if (!(unit > 0.0)) throw std::invalid_argument("generate_data: quantization unit must be > 0");
  int n = static_cast<int>(allowed.size());
  CoverTable table;
  table.allowed_ = allowed;
  table.level_nodes_.resize(n + 1);
  table.level_index_.resize(n + 1);

  CoverTable::Key zero(basis.size(), 0);
  table.level_nodes_[0].push_back({zero, -1, -1});
  table.level_index_[0].emplace(zero, 0);

  std::uint64_t nodes = 1;
  for (int level = 1; level <= n; ++level) {
    const auto& choices = allowed[level - 1];
    if (choices.empty())
      throw std::invalid_argument("generate_data: player " + std::to_string(level) +
                                  " has an empty allowed set");
    std::vector<DataVector> summaries;
    summaries.reserve(choices.size());
    for (const MixedStrategy& w : choices) summaries.push_back(data_vector(w, basis, unit));

    auto& nodes_here = table.level_nodes_[level];
    auto& index_here = table.level_index_[level];
    const auto& nodes_prev = table.level_nodes_[level - 1];
    for (std::size_t p = 0; p < nodes_prev.size(); ++p) {
      for (std::size_t w = 0; w < choices.size(); ++w) {
        CoverTable::Key key = nodes_prev[p].key;
        const auto& add = summaries[w].entries;
        for (std::size_t e = 0; e < key.size(); ++e) key[e] += add[e];
        auto [it, inserted] = index_here.try_emplace(key, nodes_here.size());
        if (inserted) {
          nodes_here.push_back({std::move(key), static_cast<std::int64_t>(p),
                                static_cast<std::int32_t>(w)});
          if (++nodes > max_nodes)
            throw resource_limit_error("generate_data: ladder exceeds " +
                                       std::to_string(max_nodes) + " nodes");
        }
      }
    }
  }
  return table;
}

CoverTable generate_data(const std::vector<std::vector<MixedStrategy>>& allowed, int n, double c,
                         int degree) {
  if (n < 1) throw std::invalid_argument("generate_data: need n >= 1");
  if (allowed.empty()) throw std::invalid_argument("generate_data: no allowed sets");
  int k = allowed.front().empty() ? 0 : allowed.front().front().k();
  for (const auto& set : allowed)
    for (const MixedStrategy& w : set)
      if (w.k() != k) throw std::invalid_argument("generate_data: inconsistent dimensions");
  if (k < 1) throw std::invalid_argument("generate_data: empty first allowed set");
  if (degree < 0) degree = default_moment_degree(c);
  MomentBasis basis(k, degree);
  double unit = std::pow(static_cast<double>(n), -c) / static_cast<double>(n);
  return generate_data(allowed, basis, unit);
}

namespace {

// Everything moment_search caches about one reconstruction target: its pmf
// and every player's payoff for every strategy against it.
struct ResponseCache {
  std::vector<std::vector<double>> payoffs;  // [player][strategy]
};

}  // namespace

MomentSearchResult moment_search(const AnonymousGame& game, double c,
                                 const MomentSearchOptions& options) {
  if (!(c > 0.0) || !(c < 1.0))
    throw std::invalid_argument("moment_search: need 0 < c < 1, got " + std::to_string(c));
  int n = game.n();
  int k = game.k();
  double eps = std::pow(static_cast<double>(n), -c);

  GridSpec grid = GridSpec::make(n, k, eps, options.coarsen);
  double predicted = grid.grid_size();
  if (predicted > static_cast<double>(options.max_grid))
    throw resource_limit_error(
        "moment_search: grid holds about " + std::to_string(predicted) +
        " rows, above the cap of " + std::to_string(options.max_grid) +
        "; rerun with a larger grid coarsening factor");

  std::vector<MixedStrategy> rows = strategy_grid(grid);
  int degree = options.degree >= 0 ? options.degree : default_moment_degree(c);
  MomentBasis basis(k, degree);
  double unit = options.cover_accuracy_frac * eps / n;
  double br_slack = options.br_slack_frac * eps;

  // Full ladder over identical per-player sets; level n-1 doubles as the
  // reconstruction table and lower levels as reachability filters.
  std::vector<std::vector<MixedStrategy>> all_rows(n, rows);
  CoverTable full = generate_data(all_rows, basis, unit, options.max_cover_nodes);

  std::vector<DataVector> summaries;
  summaries.reserve(rows.size());
  for (const MixedStrategy& w : rows) summaries.push_back(data_vector(w, basis, unit));

  std::unordered_map<CoverTable::Key, ResponseCache, CoverTable::KeyHash> response_cache;
  auto respond = [&](const CoverTable::Key& key, std::size_t idx) -> const ResponseCache& {
    auto it = response_cache.find(key);
    if (it != response_cache.end()) return it->second;
    std::vector<MixedStrategy> witness = full.witness(n - 1, idx);
    LatticeDistribution dist = pmd_pmf(witness, k);
    ResponseCache cache;
    cache.payoffs.assign(n, std::vector<double>(k, 0.0));
    for (int i = 0; i < n; ++i) {
      for (int a = 0; a < k; ++a) {
        const double* row = game.payoff_row(i, a);
        double total = 0.0;
        for (std::size_t r = 0; r < dist.mass.size(); ++r) total += dist.mass[r] * row[r];
        cache.payoffs[i][a] = total;
      }
    }
    return response_cache.emplace(key, std::move(cache)).first->second;
  };

  MomentSearchResult result;
  result.eps = eps;
  result.grid = grid;
  result.grid_rows = rows.size();
  result.cover_top = full.size(n);
  result.cover_below = full.size(n - 1);

  CoverTable::Key key_minus(basis.size(), 0);
  std::vector<std::vector<std::int32_t>> admitted(n);
  for (std::size_t target = 0; target < full.size(n); ++target) {
    ++result.scanned;
    const CoverTable::Key& goal = full.key(n, target);
    for (auto& set : admitted) set.clear();

    // Admission: a grid row enters player i's set when the remainder data
    // can be reconstructed one level down and the row is a near-best
    // response to that reconstruction.
    for (std::size_t w = 0; w < rows.size(); ++w) {
      const auto& entries = summaries[w].entries;
      for (std::size_t e = 0; e < key_minus.size(); ++e) key_minus[e] = goal[e] - entries[e];
      auto found = full.find(n - 1, key_minus);
      if (!found) continue;
      const ResponseCache& cache = respond(key_minus, *found);
      for (int i = 0; i < n; ++i) {
        const std::vector<double>& payoff = cache.payoffs[i];
        double best = *std::max_element(payoff.begin(), payoff.end());
        double mine = 0.0;
        for (int a = 0; a < k; ++a) mine += rows[w].probs[a] * payoff[a];
        if (mine >= best - br_slack - 1e-12) admitted[i].push_back(static_cast<std::int32_t>(w));
      }
    }
    bool viable = true;
    for (const auto& set : admitted)
      if (set.empty()) {
        viable = false;
        break;
      }
    if (!viable) continue;

    // Rebuild the cover restricted to the admitted sets, pruning partial
    // sums that cannot complete to the target (their remainder is missing
    // from the corresponding full-ladder level).
    struct Partial {
      CoverTable::Key key;
      std::int64_t parent;
      std::int32_t via;
    };
    std::vector<std::vector<Partial>> restricted(n + 1);
    std::unordered_map<CoverTable::Key, std::size_t, CoverTable::KeyHash> seen;
    restricted[0].push_back({CoverTable::Key(basis.size(), 0), -1, -1});
    bool reached = true;
    for (int level = 1; level <= n && reached; ++level) {
      seen.clear();
      const auto& prev = restricted[level - 1];
      auto& here = restricted[level];
      for (std::size_t p = 0; p < prev.size(); ++p) {
        for (std::int32_t w : admitted[level - 1]) {
          CoverTable::Key key = prev[p].key;
          const auto& add = summaries[w].entries;
          for (std::size_t e = 0; e < key.size(); ++e) key[e] += add[e];
          if (seen.contains(key)) continue;
          for (std::size_t e = 0; e < key.size(); ++e) key_minus[e] = goal[e] - key[e];
          if (!full.find(n - level, key_minus)) continue;
          seen.emplace(key, here.size());
          here.push_back({std::move(key), static_cast<std::int64_t>(p), w});
        }
      }
      reached = !here.empty();
    }
    if (!reached || restricted[n].empty()) continue;

    // The pruning forces the sole top-level entry to equal the target.
    MixedProfile profile(n);
    std::int64_t node = 0;
    for (int level = n; level >= 1; --level) {
      const Partial& entry = restricted[level][node];
      profile[level - 1] = rows[entry.via];
      node = entry.parent;
    }
    double worst = max_regret(game, profile, options.threads);
    if (worst > eps + 1e-9)
      throw internal_consistency_error(
          "moment_search: reconstructed profile has regret " + std::to_string(worst) +
          " above the target " + std::to_string(eps) +
          (options.coarsen > 1.0 ? " (grid was coarsened; retry with a finer grid)" : ""));
    result.profile = std::move(profile);
    result.verified_regret = worst;
    return result;
  }
  throw internal_consistency_error(
      "moment_search: scanned all " + std::to_string(result.scanned) +
      " candidate summaries without a reconstructable equilibrium" +
      (options.coarsen > 1.0 ? " (grid was coarsened; retry with a finer grid)" : ""));
}

MixedProfile round_profile_to_grid(const MixedProfile& profile, const GridSpec& spec) {
  MixedProfile out;
  out.reserve(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const MixedStrategy& row = profile[i];
    if (row.k() != spec.k)
      throw std::invalid_argument("round_profile_to_grid: row " + std::to_string(i) +
                                  " has wrong dimension");
    validate_mixed_strategy(row, "round_profile_to_grid row");
    for (int j = 0; j < spec.k; ++j)
      if (row.probs[j] < spec.floor_prob() - 1e-12)
        throw precondition_error("round_profile_to_grid: row " + std::to_string(i) +
                                 " probability " + std::to_string(row.probs[j]) +
                                 " below the grid floor " + std::to_string(spec.floor_prob()));
    MixedStrategy rounded;
    rounded.probs.resize(spec.k);
    long long used = 0;
    for (int j = 0; j < spec.k - 1; ++j) {
      long long q = static_cast<long long>(std::floor(row.probs[j] * spec.units + 1e-9));
      rounded.probs[j] = static_cast<double>(q) / spec.units;
      used += q;
    }
    rounded.probs[spec.k - 1] = static_cast<double>(spec.units - used) / spec.units;
    if (tv_mixed(row, rounded) > (spec.k - 1) * spec.step() + 1e-12)
      throw internal_consistency_error("round_profile_to_grid: rounding moved a row further than "
                                       "one step per coordinate");
    out.push_back(std::move(rounded));
  }
  return out;
}

}  // namespace anoneq
