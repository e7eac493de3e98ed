#pragma once

#include <cstdint>
#include <vector>

namespace anoneq {

// A point of the partition lattice: k nonnegative counts summing to m.
// Encodes "how many of m anonymous players chose each of the k strategies".
using Partition = std::vector<int>;

// Indexing helper for the lattice of k-part partitions of m.  Points are
// ordered by ascending lexicographic order of the count vector; rank() and
// unrank() convert between a partition and its position in that order.
class PartitionSpace {
 public:
  PartitionSpace(int m, int k);

  int m() const { return m_; }
  int k() const { return k_; }
  std::uint64_t size() const { return size_; }

  std::uint64_t rank(const Partition& x) const;
  Partition unrank(std::uint64_t r) const;

  // First point in canonical order: (0, ..., 0, m).
  Partition first() const;

  // Advances x to its successor in canonical order in place.
  // Returns false (leaving x at the last point) when no successor exists.
  bool next(Partition& x) const;

  // binom(a, b) for 0 <= b <= k, a <= m + k.  Exposed because callers that
  // size tables around the lattice need the same coefficients.
  std::uint64_t binom(int a, int b) const;

 private:
  int m_;
  int k_;
  std::uint64_t size_;
  // binom_[a][b] = C(a, b) for b <= min(a, k_); rows 0..m_+k_.
  std::vector<std::vector<std::uint64_t>> binom_;
};

// All k-part partitions of m in canonical (ascending lexicographic) order.
std::vector<Partition> enumerate_partitions(int m, int k);

}  // namespace anoneq
