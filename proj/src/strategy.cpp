#include "anoneq/strategy.hpp"

#include <cmath>
#include <stdexcept>

namespace anoneq {

namespace {
constexpr double kSumTolerance = 1e-12;
}

void validate_mixed_strategy(const MixedStrategy& s, const std::string& what) {
  if (s.probs.empty()) throw std::invalid_argument(what + ": empty probability vector");
  double sum = 0.0;
  for (double p : s.probs) {
    if (!(p >= -kSumTolerance) || !(p <= 1.0 + kSumTolerance))
      throw std::invalid_argument(what + ": probability " + std::to_string(p) + " out of [0,1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTolerance)
    throw std::invalid_argument(what + ": probabilities sum to " + std::to_string(sum) +
                                ", expected 1");
}

void validate_profile(const MixedProfile& profile, int expected_k, const std::string& what) {
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const MixedStrategy& s = profile[i];
    if (s.k() != expected_k)
      throw std::invalid_argument(what + ": row " + std::to_string(i) + " has " +
                                  std::to_string(s.k()) + " entries, expected " +
                                  std::to_string(expected_k));
    validate_mixed_strategy(s, what + " row " + std::to_string(i));
  }
}

double tv_mixed(const MixedStrategy& a, const MixedStrategy& b) {
  if (a.k() != b.k()) throw std::invalid_argument("tv_mixed: dimension mismatch");
  double l1 = 0.0;
  for (int j = 0; j < a.k(); ++j) l1 += std::abs(a.probs[j] - b.probs[j]);
  return 0.5 * l1;
}

}  // namespace anoneq
