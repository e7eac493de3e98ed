// Python bindings for the anonymous-game equilibrium toolkit.  Mixed
// strategies cross the boundary as plain lists of per-strategy probability
// rows; solver results come back as small result classes mirroring the C++
// structs.

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "anoneq/errors.hpp"
#include "anoneq/game.hpp"
#include "anoneq/moment_search.hpp"
#include "anoneq/oracle.hpp"
#include "anoneq/pmd.hpp"
#include "anoneq/reductions.hpp"
#include "anoneq/smoothing.hpp"

namespace py = pybind11;
using namespace anoneq;

namespace {

using Rows = std::vector<std::vector<double>>;

MixedProfile to_profile(const Rows& rows) {
  MixedProfile profile;
  profile.reserve(rows.size());
  for (const auto& row : rows) profile.push_back(MixedStrategy{row});
  return profile;
}

Rows from_profile(const MixedProfile& profile) {
  Rows rows;
  rows.reserve(profile.size());
  for (const auto& row : profile) rows.push_back(row.probs);
  return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Approximate Nash equilibria of anonymous games";

  py::register_exception<resource_limit_error>(m, "ResourceLimitError", PyExc_RuntimeError);
  py::register_exception<precondition_error>(m, "PreconditionError", PyExc_RuntimeError);
  py::register_exception<internal_consistency_error>(m, "InternalConsistencyError",
                                                     PyExc_RuntimeError);
  py::register_exception<parse_error>(m, "FileFormatError", PyExc_ValueError);

  // ---- games
  py::class_<AnonymousGame>(m, "AnonymousGame")
      .def(py::init<int, int, std::vector<double>>(), py::arg("n"), py::arg("k"),
           py::arg("table"))
      .def_property_readonly("n", &AnonymousGame::n)
      .def_property_readonly("k", &AnonymousGame::k)
      .def_property_readonly("cells_per_strategy", &AnonymousGame::cells_per_strategy)
      .def("payoff", &AnonymousGame::payoff, py::arg("player"), py::arg("strategy"),
           py::arg("others_rank"))
      .def_property_readonly("table", &AnonymousGame::table)
      .def("__repr__", [](const AnonymousGame& g) {
        return "AnonymousGame(n=" + std::to_string(g.n()) + ", k=" + std::to_string(g.k()) + ")";
      });

  m.def(
      "generate_game",
      [](int n, int k, const std::string& kind, std::uint64_t seed) {
        return generate_game(n, k, game_kind_from_string(kind), seed);
      },
      py::arg("n"), py::arg("k"), py::arg("kind"), py::arg("seed"),
      "Deterministic seeded game; kind is uniform-random, congestion, dominant or constant.");
  m.def("load_game", py::overload_cast<const std::string&>(&load_game), py::arg("path"));
  m.def(
      "save_game",
      [](const AnonymousGame& game, const std::string& path) { save_game(game, path); },
      py::arg("game"), py::arg("path"));
  m.def(
      "load_profile",
      [](const std::string& path) { return from_profile(load_profile(path)); },
      py::arg("path"));
  m.def(
      "save_profile",
      [](const Rows& rows, const std::string& path) { save_profile(to_profile(rows), path); },
      py::arg("profile"), py::arg("path"));

  // ---- verification
  m.def(
      "max_regret",
      [](const AnonymousGame& game, const Rows& rows, int threads) {
        return max_regret(game, to_profile(rows), threads);
      },
      py::arg("game"), py::arg("profile"), py::arg("threads") = 1,
      "Largest unilateral improvement any player can achieve; the independent verifier.");
  m.def(
      "is_approx_equilibrium",
      [](const AnonymousGame& game, const Rows& rows, double eps) {
        return is_approx_equilibrium(game, to_profile(rows), eps);
      },
      py::arg("game"), py::arg("profile"), py::arg("eps"));
  m.def(
      "verify_well_supported",
      [](const AnonymousGame& game, const Rows& rows, double eps) {
        WellSupportedReport report = verify_well_supported(game, to_profile(rows), eps);
        std::vector<std::tuple<int, int, double>> violations;
        for (const auto& v : report.violations) {
          violations.emplace_back(v.player, v.strategy, v.gap);
        }
        return py::make_tuple(report.ok, violations);
      },
      py::arg("game"), py::arg("profile"), py::arg("eps"),
      "Returns (ok, [(player, strategy, gap), ...]).");
  m.def(
      "strategy_payoffs",
      [](const AnonymousGame& game, const Rows& rows, int player) {
        return strategy_payoffs(game, to_profile(rows), player);
      },
      py::arg("game"), py::arg("profile"), py::arg("player"));

  // ---- exact distribution machinery
  py::class_<LatticeDistribution>(m, "LatticeDistribution")
      .def_readonly("m", &LatticeDistribution::m)
      .def_readonly("k", &LatticeDistribution::k)
      .def_readonly("mass", &LatticeDistribution::mass)
      .def("partitions",
           [](const LatticeDistribution& d) {
             std::vector<std::vector<int>> out;
             PartitionSpace space = d.space();
             Partition x = space.first();
             do {
               out.push_back(x);
             } while (space.next(x));
             return out;
           })
      .def("__len__", [](const LatticeDistribution& d) { return d.mass.size(); });

  m.def(
      "pmd_pmf", [](const Rows& rows, int k) { return pmd_pmf(to_profile(rows), k); },
      py::arg("rows"), py::arg("k"),
      "Exact pmf of the sum of independent categorical rows on the partition lattice.");
  m.def("tv_distance", &tv_distance, py::arg("p"), py::arg("q"));
  m.def(
      "parameter_moment",
      [](const Rows& rows, const std::vector<int>& moment) {
        return parameter_moment(to_profile(rows), moment);
      },
      py::arg("rows"), py::arg("moment"));
  m.def(
      "data_vector",
      [](const Rows& rows, int n, double c, int degree) {
        if (rows.empty()) throw std::invalid_argument("data_vector: rows must be nonempty");
        DataVector sum = data_vector(MixedStrategy{rows[0]}, n, c, degree);
        for (std::size_t i = 1; i < rows.size(); ++i) {
          sum = data_vector_sum(sum, data_vector(MixedStrategy{rows[i]}, n, c, degree));
        }
        return py::make_tuple(sum.unit, sum.entries);
      },
      py::arg("rows"), py::arg("n"), py::arg("c"), py::arg("degree") = -1,
      "Quantized moment summary of the collection; returns (unit, integer entries).");
  m.def(
      "min_orthogonal_eigenvalue",
      [](const Rows& rows, int k) {
        return min_orthogonal_eigenvalue(covariance(to_profile(rows), k));
      },
      py::arg("rows"), py::arg("k"));
  m.def(
      "fourier_at",
      [](const Rows& rows, int k, const std::vector<double>& xi) {
        return fourier_at(to_profile(rows), k, xi);
      },
      py::arg("rows"), py::arg("k"), py::arg("xi"));

  // ---- moment search
  py::class_<MomentSearchResult>(m, "MomentSearchResult")
      .def_property_readonly("profile",
                             [](const MomentSearchResult& r) { return from_profile(r.profile); })
      .def_readonly("eps", &MomentSearchResult::eps)
      .def_readonly("verified_regret", &MomentSearchResult::verified_regret)
      .def_readonly("grid_rows", &MomentSearchResult::grid_rows)
      .def_readonly("cover_top", &MomentSearchResult::cover_top)
      .def_readonly("cover_below", &MomentSearchResult::cover_below)
      .def_readonly("scanned", &MomentSearchResult::scanned)
      .def_property_readonly("grid_step",
                             [](const MomentSearchResult& r) { return r.grid.step(); })
      .def_property_readonly("grid_floor",
                             [](const MomentSearchResult& r) { return r.grid.floor_prob(); });

  m.def(
      "moment_search",
      [](const AnonymousGame& game, double c, double coarsen, int degree,
         double cover_accuracy_frac, double br_slack_frac, std::uint64_t max_grid,
         std::uint64_t max_cover_nodes, int threads) {
        MomentSearchOptions options;
        options.coarsen = coarsen;
        options.degree = degree;
        options.cover_accuracy_frac = cover_accuracy_frac;
        options.br_slack_frac = br_slack_frac;
        options.max_grid = max_grid;
        options.max_cover_nodes = max_cover_nodes;
        options.threads = threads;
        return moment_search(game, c, options);
      },
      py::arg("game"), py::arg("c"), py::arg("coarsen") = 1.0, py::arg("degree") = -1,
      py::arg("cover_accuracy_frac") = 0.2, py::arg("br_slack_frac") = 0.6,
      py::arg("max_grid") = 1'000'000, py::arg("max_cover_nodes") = 5'000'000,
      py::arg("threads") = 1,
      "Search quantized moment summaries for an n^(-c) approximate equilibrium.");

  // ---- smoothing
  py::class_<SmoothResult>(m, "SmoothResult")
      .def_property_readonly("profile",
                             [](const SmoothResult& r) { return from_profile(r.profile); })
      .def_property_readonly("pure_assignment",
                             [](const SmoothResult& r) { return r.pure.assignment; })
      .def_property_readonly("pure_partition",
                             [](const SmoothResult& r) { return r.pure.induced_partition; })
      .def_readonly("delta", &SmoothResult::delta)
      .def_readonly("lipschitz", &SmoothResult::lipschitz)
      .def_readonly("tau", &SmoothResult::tau)
      .def_readonly("bound", &SmoothResult::bound)
      .def_readonly("verified_regret", &SmoothResult::verified_regret);

  m.def(
      "solve_smooth",
      [](const AnonymousGame& game, double delta, int threads) {
        SmoothOptions options;
        options.delta = delta;
        options.threads = threads;
        return solve_smooth(game, options);
      },
      py::arg("game"), py::arg("delta") = -1.0, py::arg("threads") = 1,
      "Noise-smoothing solver: perturb, find a pure equilibrium, map back.");
  m.def("crv_direction_variance", &crv_direction_variance, py::arg("strategy"), py::arg("delta"),
        py::arg("k"), py::arg("direction"));
  m.def(
      "empirical_lipschitz",
      [](const AnonymousGame& game) { return empirical_lipschitz(game); }, py::arg("game"),
      "Largest per-unit payoff change across adjacent opponent partitions.");

  // ---- conversions and the accuracy-boosting pipeline
  m.def(
      "ane2wsne",
      [](const AnonymousGame& game, const Rows& rows, double eps) {
        return from_profile(ane2wsne(game, to_profile(rows), eps));
      },
      py::arg("game"), py::arg("profile"), py::arg("eps"),
      "Approximate equilibrium with regret <= eps^2/(4n) to an eps well-supported one.");

  py::class_<PaddedGame>(m, "PaddedGame")
      .def_readonly("game", &PaddedGame::game)
      .def_readonly("original_n", &PaddedGame::original_n)
      .def_readonly("shift", &PaddedGame::shift);

  m.def("pad_game", &pad_game, py::arg("game"), py::arg("n_prime"),
        "Embed a game among n_prime players; dummies pin strategy 0.");
  m.def(
      "unpad_profile",
      [](const PaddedGame& padded, const Rows& rows, double eps) {
        return from_profile(unpad_profile(padded, to_profile(rows), eps));
      },
      py::arg("padded"), py::arg("profile"), py::arg("eps"),
      "Restrict an eps well-supported profile of the padded game to the real players.");

  py::class_<PipelineResult>(m, "PipelineResult")
      .def_property_readonly("profile",
                             [](const PipelineResult& r) { return from_profile(r.profile); })
      .def_readonly("used_padding", &PipelineResult::used_padding)
      .def_readonly("n_prime", &PipelineResult::n_prime)
      .def_readonly("base_eps", &PipelineResult::base_eps);

  m.def(
      "fptas_pipeline",
      [](const AnonymousGame& game, double eps,
         const std::function<Rows(const AnonymousGame&, double)>& base_solver, double gamma,
         int n_prime_cap) {
        PipelineOptions options;
        options.n_prime_cap = n_prime_cap;
        BaseSolver solver = [&base_solver](const AnonymousGame& g, double eps_target) {
          return to_profile(base_solver(g, eps_target));
        };
        return fptas_pipeline(game, eps, solver, gamma, options);
      },
      py::arg("game"), py::arg("eps"), py::arg("base_solver"), py::arg("gamma"),
      py::arg("n_prime_cap") = 10'000,
      "Pad to n' players, run the base solver at boosted accuracy, convert back.");

  // ---- exhaustive reference search
  m.def(
      "grid_profile_search",
      [](const AnonymousGame& game, double grid_step, double eps, bool well_supported,
         std::uint64_t max_profiles) -> std::optional<Rows> {
        GridSearchOptions options;
        options.well_supported = well_supported;
        options.max_profiles = max_profiles;
        std::optional<MixedProfile> found = grid_profile_search(game, grid_step, eps, options);
        if (!found) return std::nullopt;
        return from_profile(*found);
      },
      py::arg("game"), py::arg("grid_step"), py::arg("eps"), py::arg("well_supported") = false,
      py::arg("max_profiles") = 2'000'000,
      "Enumerate grid profiles; returns the first verifying profile or None.");
}
