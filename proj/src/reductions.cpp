#include "anoneq/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "anoneq/errors.hpp"

namespace anoneq {

namespace {

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(12);
  out << v;
  return out.str();
}

}  // namespace

MixedProfile ane2wsne(const AnonymousGame& game, const MixedProfile& profile, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("ane2wsne: eps must be positive");
  validate_profile(profile, game.k(), "ane2wsne profile");
  if (static_cast<int>(profile.size()) != game.n())
    throw std::invalid_argument("ane2wsne: profile has " + std::to_string(profile.size()) +
                                " rows for a " + std::to_string(game.n()) + "-player game");

  const int n = game.n();
  const int k = game.k();
  const double budget = eps * eps / (4.0 * n);
  double regret_in = max_regret(game, profile);
  if (regret_in > budget + 1e-9)
    throw precondition_error("ane2wsne: input regret " + fmt(regret_in) +
                             " exceeds eps^2/(4n) = " + fmt(budget));

  // All moves are decided against the *input* profile, then applied at once.
  MixedProfile out = profile;
  for (int i = 0; i < n; ++i) {
    std::vector<double> payoffs = strategy_payoffs(game, profile, i);
    double best = *std::max_element(payoffs.begin(), payoffs.end());
    int best_index = 0;
    while (payoffs[best_index] != best) ++best_index;

    double moved = 0.0;
    for (int a = 0; a < k; ++a) {
      if (payoffs[a] >= best - eps / 2.0) continue;  // good: an eps/2-best response
      moved += out[i].probs[a];
      out[i].probs[a] = 0.0;
    }
    if (moved > eps / (2.0 * n) + 1e-9)
      throw internal_consistency_error("ane2wsne: player " + std::to_string(i) +
                                       " carries more low-payoff probability than the input "
                                       "regret bound allows");
    if (moved > 0.0) out[i].probs[best_index] += moved;
  }

  if (!verify_well_supported(game, out, eps).ok)
    throw internal_consistency_error("ane2wsne: converted profile failed verification");
  return out;
}

PaddedGame pad_game(const AnonymousGame& game, int n_prime) {
  const int n = game.n();
  const int k = game.k();
  if (n_prime < n) throw std::invalid_argument("pad_game: n_prime must be at least n");
  if (n_prime == n) return PaddedGame{game, game, n, 0};

  const int shift = n_prime - n;
  PartitionSpace padded_others(n_prime - 1, k);
  const PartitionSpace& orig_others = game.others_space();
  const std::uint64_t cells = padded_others.size();
  std::vector<double> table(static_cast<std::size_t>(n_prime) * k * cells);

  for (std::uint64_t r = 0; r < cells; ++r) {
    Partition x = padded_others.unrank(r);
    bool reachable = x[0] >= shift;
    std::uint64_t orig_rank = 0;
    if (reachable) {
      Partition y = x;
      y[0] -= shift;
      orig_rank = orig_others.rank(y);
    }
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < k; ++a)
        table[(static_cast<std::size_t>(i) * k + a) * cells + r] =
            reachable ? game.payoff(i, a, orig_rank) : 0.0;
    for (int i = n; i < n_prime; ++i)
      for (int a = 0; a < k; ++a)
        table[(static_cast<std::size_t>(i) * k + a) * cells + r] = a == 0 ? 1.0 : 0.0;
  }
  return PaddedGame{game, AnonymousGame(n_prime, k, std::move(table)), n, shift};
}

MixedProfile unpad_profile(const PaddedGame& padded, const MixedProfile& profile, double eps) {
  validate_profile(profile, padded.game.k(), "unpad_profile input");
  if (static_cast<int>(profile.size()) != padded.game.n())
    throw std::invalid_argument("unpad_profile: profile has " + std::to_string(profile.size()) +
                                " rows for an expanded " + std::to_string(padded.game.n()) +
                                "-player game");
  if (!verify_well_supported(padded.game, profile, eps).ok)
    throw precondition_error(
        "unpad_profile: input is not an eps-well-supported equilibrium of the padded game");
  for (int i = padded.original_n; i < padded.game.n(); ++i)
    if (!(profile[i].probs[0] >= 1.0 - 1e-12))
      throw precondition_error("unpad_profile: dummy player " + std::to_string(i) +
                               " mixes off its dominant strategy; the input can only be an "
                               "approximate (not well-supported) equilibrium");

  MixedProfile out(profile.begin(), profile.begin() + padded.original_n);
  if (!verify_well_supported(padded.base, out, eps).ok)
    throw internal_consistency_error("unpad_profile: dropped profile failed verification");
  return out;
}

PipelineResult fptas_pipeline(const AnonymousGame& game, double eps, const BaseSolver& base_solver,
                              double gamma, const PipelineOptions& options) {
  if (!(eps > 0.0)) throw std::invalid_argument("fptas_pipeline: eps must be positive");
  if (!(gamma > 0.0)) throw std::invalid_argument("fptas_pipeline: gamma must be positive");
  if (!base_solver) throw std::invalid_argument("fptas_pipeline: base solver is empty");

  PipelineResult result;
  if (std::pow(static_cast<double>(game.n()), -gamma) <= eps) {
    result.used_padding = false;
    result.n_prime = game.n();
    result.base_eps = eps * eps / (4.0 * game.n());
    MixedProfile base = base_solver(game, result.base_eps);
    result.profile = ane2wsne(game, base, eps);
  } else {
    double target = std::ceil(std::pow(1.0 / eps, 1.0 / gamma));
    if (!(target <= static_cast<double>(options.n_prime_cap)))
      throw resource_limit_error("fptas_pipeline: padding would need " + fmt(target) +
                                 " players, above the cap of " +
                                 std::to_string(options.n_prime_cap));
    int n_prime = std::max(game.n(), static_cast<int>(target));
    result.used_padding = true;
    result.n_prime = n_prime;
    result.base_eps = eps * eps / (4.0 * n_prime);

    PaddedGame padded = pad_game(game, n_prime);
    MixedProfile base = base_solver(padded.game, result.base_eps);
    MixedProfile well_supported = ane2wsne(padded.game, base, eps);
    result.profile = unpad_profile(padded, well_supported, eps);
  }

  if (!verify_well_supported(game, result.profile, eps).ok)
    throw internal_consistency_error("fptas_pipeline: output failed final verification");
  return result;
}

}  // namespace anoneq
