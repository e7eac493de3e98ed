#pragma once

#include <string>
#include <vector>

namespace anoneq {

// A distribution over k strategies.  Doubles as a categorical random
// vector: "play j" is the j-th standard basis vector, so a collection of
// these summed over players induces a distribution on the partition lattice.
struct MixedStrategy {
  std::vector<double> probs;

  int k() const { return static_cast<int>(probs.size()); }

  bool operator==(const MixedStrategy& other) const = default;
};

// One mixed strategy per player.
using MixedProfile = std::vector<MixedStrategy>;

// Throws std::invalid_argument unless probs are >= -1e-12, <= 1 + 1e-12 and
// sum to 1 within 1e-12.  `what` names the offending object in messages.
void validate_mixed_strategy(const MixedStrategy& s, const std::string& what = "mixed strategy");

// Validates every row and that all rows share the same k.
void validate_profile(const MixedProfile& profile, int expected_k,
                      const std::string& what = "profile");

// Half L1 distance between two distributions over the same k strategies.
double tv_mixed(const MixedStrategy& a, const MixedStrategy& b);

}  // namespace anoneq
