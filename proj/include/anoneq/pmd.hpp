#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "anoneq/partition.hpp"
#include "anoneq/strategy.hpp"

namespace anoneq {

// Exact distribution of the sum of m independent categorical random vectors
// over k strategies; support is the partition lattice of m into k parts and
// `mass` is indexed by PartitionSpace(m, k) rank.
struct LatticeDistribution {
  int m = 0;
  int k = 0;
  std::vector<double> mass;

  PartitionSpace space() const { return PartitionSpace(m, k); }
};

// Exact pmf of the sum of the given categorical vectors via iterated
// convolution over the lattice.  `k` must be supplied explicitly so that the
// empty collection (point mass on the empty partition) is well defined; all
// rows must share that dimension.
LatticeDistribution pmd_pmf(const std::vector<MixedStrategy>& crvs, int k);

// Half L1 distance.  Inputs must live on the same lattice (same m and k).
double tv_distance(const LatticeDistribution& p, const LatticeDistribution& q);

// Exponent vector of a monomial moment, one entry per strategy.
using MomentIndex = std::vector<int>;

// sum_i prod_j p[i][j]^{moment[j]}: the parameter moment of the collection.
// Additive over disjoint unions of collections by construction.
double parameter_moment(const std::vector<MixedStrategy>& crvs, const MomentIndex& moment);

// Index of the largest probability, smallest index winning ties.
int maximal_index(const MixedStrategy& crv);

// Buckets the collection by maximal_index, preserving input order inside
// each bucket.  Always returns k buckets; empty ones stay empty.
std::vector<std::vector<MixedStrategy>> component_decomposition(
    const std::vector<MixedStrategy>& crvs, int k);

// The canonical index set of quantized-moment summaries: all pairs (t, m)
// with m[t] == 0 and 1 <= |m|_1 <= degree, ordered by t ascending then m
// ascending lexicographically.
class MomentBasis {
 public:
  MomentBasis(int k, int degree);

  int k() const { return k_; }
  int degree() const { return degree_; }
  std::size_t size() const { return moments_.size(); }
  int bucket(std::size_t idx) const { return buckets_[idx]; }
  const MomentIndex& moment(std::size_t idx) const { return moments_[idx]; }

  // Half-open range [begin, end) of positions whose bucket equals t.
  std::pair<std::size_t, std::size_t> bucket_range(int t) const;

 private:
  int k_;
  int degree_;
  std::vector<int> buckets_;
  std::vector<MomentIndex> moments_;
  std::vector<std::size_t> bucket_begin_;  // size k_+1
};

// Default summary degree for accuracy exponent c in (0, 1).
int default_moment_degree(double c);

// Integer-quantized moment summary of a collection of categorical vectors.
// Entries are parameter moments divided by `unit` and rounded half-up, kept
// as exact integers so sums, differences and table lookups are exact.
struct DataVector {
  double unit = 0.0;
  std::vector<long long> entries;

  bool operator==(const DataVector& other) const = default;
};

// Summary of a single categorical vector: only the bucket of its maximal
// index is populated, every other entry is zero.
DataVector data_vector(const MixedStrategy& crv, const MomentBasis& basis, double unit);

// Convenience wrapper using the default quantization unit n^(-c)/n and,
// when degree < 0, the default degree for c.
DataVector data_vector(const MixedStrategy& crv, int n, double c, int degree = -1);

// Entrywise integer sum; shapes and units must match.
DataVector data_vector_sum(const DataVector& a, const DataVector& b);

// Covariance matrix sum_i (diag(p_i) - p_i p_i^T) of the collection's sum,
// with its full eigendecomposition (eigenvalues ascending, eigenvectors[j]
// the unit eigenvector for eigenvalues[j]).
struct CovarianceSummary {
  int k = 0;
  std::vector<std::vector<double>> sigma;
  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> eigenvectors;
};

CovarianceSummary covariance(const std::vector<MixedStrategy>& crvs, int k);

// Smallest eigenvalue after discarding the one whose eigenvector is most
// aligned with the all-ones direction (the lattice's degenerate direction).
// Requires k >= 2.
double min_orthogonal_eigenvalue(const CovarianceSummary& summary);

// Cyclic Jacobi eigendecomposition of a symmetric matrix.  Returns
// (eigenvalues ascending, matching unit eigenvectors).  Intended for the
// small strategy-space dimensions used here.
std::pair<std::vector<double>, std::vector<std::vector<double>>> jacobi_symmetric_eigen(
    const std::vector<std::vector<double>>& a, double tol = 1e-12);

// Characteristic function at frequency xi (one coordinate per strategy):
// prod_i sum_j exp(-2*pi*i*xi[j]) * p[i][j].
std::complex<double> fourier_at(const std::vector<MixedStrategy>& crvs, int k,
                                const std::vector<double>& xi);

// Gaussian integrated over unit cubes centred on the integer points of an
// axis-aligned box; tracks the mass falling outside the box.
struct DiscretizedGaussian {
  std::vector<int> lo;
  std::vector<int> hi;
  std::vector<double> mass;  // row-major over the box
  double truncated_mass = 0.0;

  std::size_t index(const std::vector<int>& z) const;
};

DiscretizedGaussian discretized_gaussian_pmf(const std::vector<double>& mu,
                                             const std::vector<std::vector<double>>& sigma,
                                             const std::vector<int>& lo,
                                             const std::vector<int>& hi);

}  // namespace anoneq
