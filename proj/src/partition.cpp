#include "anoneq/partition.hpp"

#include <stdexcept>
#include <string>

#include "anoneq/errors.hpp"

namespace anoneq {

PartitionSpace::PartitionSpace(int m, int k) : m_(m), k_(k) {
  if (m < 0) throw std::invalid_argument("PartitionSpace: negative total " + std::to_string(m));
  if (k < 1) throw std::invalid_argument("PartitionSpace: need at least one part, got " + std::to_string(k));
  int rows = m_ + k_ + 1;
  int cols = k_ + 1;
  binom_.assign(rows, std::vector<std::uint64_t>(cols, 0));
  for (int a = 0; a < rows; ++a) {
    binom_[a][0] = 1;
    int top = a < cols - 1 ? a : cols - 1;
    for (int b = 1; b <= top; ++b) {
      std::uint64_t without = binom_[a - 1][b - 1];
      std::uint64_t with = (b <= a - 1) ? binom_[a - 1][b] : 0;
      binom_[a][b] = without + with;
    }
  }
  size_ = binom(m_ + k_ - 1, k_ - 1);
}

std::uint64_t PartitionSpace::binom(int a, int b) const {
  if (b < 0 || b > a) return 0;
  return binom_[a][b];
}

std::uint64_t PartitionSpace::rank(const Partition& x) const {
  if (static_cast<int>(x.size()) != k_)
    throw std::invalid_argument("PartitionSpace::rank: expected " + std::to_string(k_) +
                                " parts, got " + std::to_string(x.size()));
  std::uint64_t r = 0;
  int remaining = m_;
  for (int j = 0; j < k_ - 1; ++j) {
    if (x[j] < 0 || x[j] > remaining)
      throw std::invalid_argument("PartitionSpace::rank: counts do not sum to " + std::to_string(m_));
    // Partitions sharing the prefix before j whose j-th count is < x[j]:
    // sum_{v<x[j]} C(remaining - v + t - 1, t - 1) with t = k - j - 1 parts
    // left, telescoped to a difference of two binomials.
    int t = k_ - j - 1;
    r += binom(remaining + t, t) - binom(remaining - x[j] + t, t);
    remaining -= x[j];
  }
  if (x[k_ - 1] != remaining)
    throw std::invalid_argument("PartitionSpace::rank: counts do not sum to " + std::to_string(m_));
  return r;
}

Partition PartitionSpace::unrank(std::uint64_t r) const {
  if (r >= size_)
    throw std::invalid_argument("PartitionSpace::unrank: rank " + std::to_string(r) +
                                " out of range (size " + std::to_string(size_) + ")");
  Partition x(k_, 0);
  int remaining = m_;
  for (int j = 0; j < k_ - 1; ++j) {
    int t = k_ - j - 1;
    int v = 0;
    while (true) {
      std::uint64_t block = binom(remaining - v + t - 1, t - 1);
      if (r < block) break;
      r -= block;
      ++v;
    }
    x[j] = v;
    remaining -= v;
  }
  x[k_ - 1] = remaining;
  return x;
}

Partition PartitionSpace::first() const {
  Partition x(k_, 0);
  x[k_ - 1] = m_;
  return x;
}

bool PartitionSpace::next(Partition& x) const {
  // Successor in ascending lex order: find the rightmost position before the
  // last that can absorb one unit from the suffix, then minimize the suffix.
  for (int j = k_ - 2; j >= 0; --j) {
    int suffix = 0;
    for (int u = j + 1; u < k_; ++u) suffix += x[u];
    if (suffix > 0) {
      x[j] += 1;
      for (int u = j + 1; u < k_ - 1; ++u) x[u] = 0;
      x[k_ - 1] = suffix - 1;
      return true;
    }
  }
  return false;
}

std::vector<Partition> enumerate_partitions(int m, int k) {
  PartitionSpace space(m, k);
  std::vector<Partition> out;
  out.reserve(space.size());
  Partition x = space.first();
  do {
    out.push_back(x);
  } while (space.next(x));
  return out;
}

}  // namespace anoneq
