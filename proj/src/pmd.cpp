#include "anoneq/pmd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "anoneq/errors.hpp"

namespace anoneq {

namespace {

void check_rows(const std::vector<MixedStrategy>& crvs, int k, const char* who) {
  if (k < 1) throw std::invalid_argument(std::string(who) + ": need k >= 1");
  for (std::size_t i = 0; i < crvs.size(); ++i) {
    if (crvs[i].k() != k)
      throw std::invalid_argument(std::string(who) + ": row " + std::to_string(i) + " has " +
                                  std::to_string(crvs[i].k()) + " entries, expected " +
                                  std::to_string(k));
    validate_mixed_strategy(crvs[i], std::string(who) + " row " + std::to_string(i));
  }
}

}  // namespace

LatticeDistribution pmd_pmf(const std::vector<MixedStrategy>& crvs, int k) {
  check_rows(crvs, k, "pmd_pmf");
  int m = static_cast<int>(crvs.size());

  std::vector<double> mass{1.0};  // level 0: point mass on the empty partition
  for (int level = 0; level < m; ++level) {
    const std::vector<double>& p = crvs[level].probs;
    PartitionSpace prev(level, k);
    PartitionSpace cur(level + 1, k);
    std::vector<double> next(cur.size(), 0.0);
    Partition x = cur.first();
    std::uint64_t r = 0;
    do {
      double acc = 0.0;
      for (int j = 0; j < k; ++j) {
        if (x[j] == 0) continue;
        --x[j];
        acc += p[j] * mass[prev.rank(x)];
        ++x[j];
      }
      next[r] = acc;
      ++r;
    } while (cur.next(x));
    mass.swap(next);
  }

  double total = 0.0;
  for (double& v : mass) {
    if (v < 0.0) v = 0.0;  // convolution of nonnegative terms; clip rounding dust
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw internal_consistency_error("pmd_pmf: masses sum to " + std::to_string(total));
  return LatticeDistribution{m, k, std::move(mass)};
}

double tv_distance(const LatticeDistribution& p, const LatticeDistribution& q) {
  if (p.m != q.m || p.k != q.k)
    throw std::invalid_argument("tv_distance: lattice shape mismatch (" + std::to_string(p.m) +
                                "," + std::to_string(p.k) + ") vs (" + std::to_string(q.m) + "," +
                                std::to_string(q.k) + ")");
  double l1 = 0.0;
  for (std::size_t i = 0; i < p.mass.size(); ++i) l1 += std::abs(p.mass[i] - q.mass[i]);
  return 0.5 * l1;
}

double parameter_moment(const std::vector<MixedStrategy>& crvs, const MomentIndex& moment) {
  double total = 0.0;
  for (const MixedStrategy& crv : crvs) {
    if (moment.size() != crv.probs.size())
      throw std::invalid_argument("parameter_moment: exponent size " +
                                  std::to_string(moment.size()) + " vs k " +
                                  std::to_string(crv.probs.size()));
    double term = 1.0;
    for (std::size_t j = 0; j < moment.size(); ++j) {
      if (moment[j] < 0) throw std::invalid_argument("parameter_moment: negative exponent");
      for (int e = 0; e < moment[j]; ++e) term *= crv.probs[j];
    }
    total += term;
  }
  return total;
}

int maximal_index(const MixedStrategy& crv) {
  if (crv.probs.empty()) throw std::invalid_argument("maximal_index: empty vector");
  int best = 0;
  for (int j = 1; j < crv.k(); ++j)
    if (crv.probs[j] > crv.probs[best]) best = j;
  return best;
}

std::vector<std::vector<MixedStrategy>> component_decomposition(
    const std::vector<MixedStrategy>& crvs, int k) {
  check_rows(crvs, k, "component_decomposition");
  std::vector<std::vector<MixedStrategy>> buckets(k);
  for (const MixedStrategy& crv : crvs) buckets[maximal_index(crv)].push_back(crv);
  return buckets;
}

MomentBasis::MomentBasis(int k, int degree) : k_(k), degree_(degree) {
  if (k < 1) throw std::invalid_argument("MomentBasis: need k >= 1");
  if (degree < 1) throw std::invalid_argument("MomentBasis: need degree >= 1");
  bucket_begin_.assign(k_ + 1, 0);
  MomentIndex m(k_, 0);
  for (int t = 0; t < k_; ++t) {
    bucket_begin_[t] = moments_.size();
    // Ascending lex enumeration of m with m[t] == 0 and 1 <= |m|_1 <= degree.
    auto emit = [&](auto&& self, int coord, int used) -> void {
      if (coord == k_) {
        if (used >= 1) {
          buckets_.push_back(t);
          moments_.push_back(m);
        }
        return;
      }
      if (coord == t) {
        self(self, coord + 1, used);
        return;
      }
      for (int v = 0; v + used <= degree_; ++v) {
        m[coord] = v;
        self(self, coord + 1, used + v);
      }
      m[coord] = 0;
    };
    emit(emit, 0, 0);
  }
  bucket_begin_[k_] = moments_.size();
}

std::pair<std::size_t, std::size_t> MomentBasis::bucket_range(int t) const {
  if (t < 0 || t >= k_) throw std::invalid_argument("MomentBasis::bucket_range: bad bucket");
  return {bucket_begin_[t], bucket_begin_[t + 1]};
}

int default_moment_degree(double c) {
  if (!(c > 0.0) || !(c < 1.0))
    throw std::invalid_argument("default_moment_degree: need 0 < c < 1, got " + std::to_string(c));
  return static_cast<int>(std::floor((2.0 + 2.0 * c) / (1.0 - c)));
}

DataVector data_vector(const MixedStrategy& crv, const MomentBasis& basis, double unit) {
  if (crv.k() != basis.k())
    throw std::invalid_argument("data_vector: vector has " + std::to_string(crv.k()) +
                                " entries, basis expects " + std::to_string(basis.k()));
  if (!(unit > 0.0)) throw std::invalid_argument("data_vector: quantization unit must be > 0");
  validate_mixed_strategy(crv, "data_vector input");
  DataVector out;
  out.unit = unit;
  out.entries.assign(basis.size(), 0);
  int t = maximal_index(crv);
  auto [begin, end] = basis.bucket_range(t);
  for (std::size_t idx = begin; idx < end; ++idx) {
    double moment = parameter_moment({crv}, basis.moment(idx));
    out.entries[idx] = std::llround(moment / unit);  // half rounds up for nonnegative input
  }
  return out;
}

DataVector data_vector(const MixedStrategy& crv, int n, double c, int degree) {
  if (n < 1) throw std::invalid_argument("data_vector: need n >= 1");
  if (degree < 0) degree = default_moment_degree(c);
  MomentBasis basis(crv.k(), degree);
  double unit = std::pow(static_cast<double>(n), -c) / static_cast<double>(n);
  return data_vector(crv, basis, unit);
}

DataVector data_vector_sum(const DataVector& a, const DataVector& b) {
  if (a.entries.size() != b.entries.size() || a.unit != b.unit)
    throw std::invalid_argument("data_vector_sum: shape or unit mismatch");
  DataVector out = a;
  for (std::size_t i = 0; i < out.entries.size(); ++i) out.entries[i] += b.entries[i];
  return out;
}

CovarianceSummary covariance(const std::vector<MixedStrategy>& crvs, int k) {
  check_rows(crvs, k, "covariance");
  CovarianceSummary out;
  out.k = k;
  out.sigma.assign(k, std::vector<double>(k, 0.0));
  for (const MixedStrategy& crv : crvs) {
    for (int a = 0; a < k; ++a) {
      out.sigma[a][a] += crv.probs[a];
      for (int b = 0; b < k; ++b) out.sigma[a][b] -= crv.probs[a] * crv.probs[b];
    }
  }
  auto [values, vectors] = jacobi_symmetric_eigen(out.sigma);
  out.eigenvalues = std::move(values);
  out.eigenvectors = std::move(vectors);
  return out;
}

double min_orthogonal_eigenvalue(const CovarianceSummary& summary) {
  if (summary.k < 2)
    throw std::invalid_argument("min_orthogonal_eigenvalue: need k >= 2, got " +
                                std::to_string(summary.k));
  // The all-ones direction is always in the kernel; drop the eigenvector
  // most aligned with it and take the smallest eigenvalue that remains.
  int drop = 0;
  double best_align = -1.0;
  for (int j = 0; j < summary.k; ++j) {
    double dot = 0.0;
    double norm2 = 0.0;
    for (int a = 0; a < summary.k; ++a) {
      dot += summary.eigenvectors[j][a];
      norm2 += summary.eigenvectors[j][a] * summary.eigenvectors[j][a];
    }
    double align = std::abs(dot) / std::sqrt(norm2 * summary.k);
    if (align > best_align) {
      best_align = align;
      drop = j;
    }
  }
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < summary.k; ++j)
    if (j != drop) best = std::min(best, summary.eigenvalues[j]);
  return best;
}

std::pair<std::vector<double>, std::vector<std::vector<double>>> jacobi_symmetric_eigen(
    const std::vector<std::vector<double>>& input, double tol) {
  int n = static_cast<int>(input.size());
  if (n < 1) throw std::invalid_argument("jacobi_symmetric_eigen: empty matrix");
  for (const auto& row : input)
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("jacobi_symmetric_eigen: matrix not square");

  std::vector<std::vector<double>> a = input;
  std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) v[i][i] = 1.0;

  const int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += std::abs(a[p][q]);
    if (off < tol) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < tol * 1e-3) continue;
        double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        double app = a[p][p], aqq = a[q][q], apq = a[p][q];
        a[p][p] = c * c * app - 2.0 * s * c * apq + s * s * aqq;
        a[q][q] = s * s * app + 2.0 * s * c * apq + c * c * aqq;
        a[p][q] = a[q][p] = 0.0;
        for (int r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          double arp = a[r][p], arq = a[r][q];
          a[r][p] = a[p][r] = c * arp - s * arq;
          a[r][q] = a[q][r] = s * arp + c * arq;
        }
        for (int r = 0; r < n; ++r) {
          double vrp = v[r][p], vrq = v[r][q];
          v[r][p] = c * vrp - s * vrq;
          v[r][q] = s * vrp + c * vrq;
        }
      }
    }
  }

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int x, int y) { return a[x][x] < a[y][y]; });
  std::vector<double> values(n);
  std::vector<std::vector<double>> vectors(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i) {
    values[i] = a[order[i]][order[i]];
    for (int r = 0; r < n; ++r) vectors[i][r] = v[r][order[i]];
  }
  return {values, vectors};
}

std::complex<double> fourier_at(const std::vector<MixedStrategy>& crvs, int k,
                                const std::vector<double>& xi) {
  check_rows(crvs, k, "fourier_at");
  if (static_cast<int>(xi.size()) != k)
    throw std::invalid_argument("fourier_at: frequency has " + std::to_string(xi.size()) +
                                " entries, expected " + std::to_string(k));
  // e(x) = exp(-2*pi*i*x)
  std::vector<std::complex<double>> phase(k);
  for (int j = 0; j < k; ++j) {
    double angle = -2.0 * std::numbers::pi * xi[j];
    phase[j] = std::complex<double>(std::cos(angle), std::sin(angle));
  }
  std::complex<double> out(1.0, 0.0);
  for (const MixedStrategy& crv : crvs) {
    std::complex<double> factor(0.0, 0.0);
    for (int j = 0; j < k; ++j) factor += phase[j] * crv.probs[j];
    out *= factor;
  }
  return out;
}

std::size_t DiscretizedGaussian::index(const std::vector<int>& z) const {
  std::size_t idx = 0;
  for (std::size_t d = 0; d < lo.size(); ++d) {
    if (z[d] < lo[d] || z[d] > hi[d])
      throw std::invalid_argument("DiscretizedGaussian::index: point outside box");
    idx = idx * static_cast<std::size_t>(hi[d] - lo[d] + 1) + static_cast<std::size_t>(z[d] - lo[d]);
  }
  return idx;
}

DiscretizedGaussian discretized_gaussian_pmf(const std::vector<double>& mu,
                                             const std::vector<std::vector<double>>& sigma,
                                             const std::vector<int>& lo,
                                             const std::vector<int>& hi) {
  std::size_t dim = mu.size();
  if (dim == 0) throw std::invalid_argument("discretized_gaussian_pmf: empty mean");
  if (sigma.size() != dim || lo.size() != dim || hi.size() != dim)
    throw std::invalid_argument("discretized_gaussian_pmf: dimension mismatch");
  for (const auto& row : sigma)
    if (row.size() != dim) throw std::invalid_argument("discretized_gaussian_pmf: sigma not square");

  // Cholesky factorization; failure means sigma is not positive definite.
  std::vector<std::vector<double>> chol(dim, std::vector<double>(dim, 0.0));
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double acc = sigma[i][j];
      for (std::size_t t = 0; t < j; ++t) acc -= chol[i][t] * chol[j][t];
      if (i == j) {
        if (acc <= 0.0)
          throw std::invalid_argument("discretized_gaussian_pmf: covariance not positive definite");
        chol[i][i] = std::sqrt(acc);
      } else {
        chol[i][j] = acc / chol[j][j];
      }
    }
  }
  double det_sqrt = 1.0;
  for (std::size_t i = 0; i < dim; ++i) det_sqrt *= chol[i][i];
  double norm = 1.0 / (std::pow(2.0 * std::numbers::pi, dim / 2.0) * det_sqrt);

  auto density = [&](const std::vector<double>& x) {
    // Solve L y = x - mu forward, then density from |y|^2.
    std::vector<double> y(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      double acc = x[i] - mu[i];
      for (std::size_t t = 0; t < i; ++t) acc -= chol[i][t] * y[t];
      y[i] = acc / chol[i][i];
    }
    double q = 0.0;
    for (double v : y) q += v * v;
    return norm * std::exp(-0.5 * q);
  };

  // 8-point Gauss-Legendre rule per axis on [-1/2, 1/2].
  static const double kNode[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                  -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                  0.7966664774136267,  0.9602898564975363};
  static const double kWeight[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                    0.2223810344533745, 0.1012285362903763};

  std::size_t cells = 1;
  for (std::size_t d = 0; d < dim; ++d) {
    if (hi[d] < lo[d]) throw std::invalid_argument("discretized_gaussian_pmf: empty box");
    cells *= static_cast<std::size_t>(hi[d] - lo[d] + 1);
    if (cells > 10'000'000)
      throw resource_limit_error("discretized_gaussian_pmf: box exceeds 1e7 cells");
  }

  DiscretizedGaussian out;
  out.lo = lo;
  out.hi = hi;
  out.mass.assign(cells, 0.0);

  std::vector<int> z(lo);
  std::vector<double> x(dim);
  std::vector<int> g(dim, 0);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    // Tensor quadrature over the unit cube centred at z.
    double total = 0.0;
    std::fill(g.begin(), g.end(), 0);
    while (true) {
      double w = 1.0;
      for (std::size_t d = 0; d < dim; ++d) {
        x[d] = z[d] + 0.5 * kNode[g[d]];
        w *= 0.5 * kWeight[g[d]];
      }
      total += w * density(x);
      std::size_t d = 0;
      while (d < dim && ++g[d] == 8) {
        g[d] = 0;
        ++d;
      }
      if (d == dim) break;
    }
    out.mass[cell] = total;
    // Advance z through the box, last coordinate fastest (row-major).
    for (std::size_t d = dim; d-- > 0;) {
      if (++z[d] <= hi[d]) break;
      z[d] = lo[d];
    }
  }
  double covered = 0.0;
  for (double v : out.mass) covered += v;
  out.truncated_mass = 1.0 - covered;
  return out;
}

}  // namespace anoneq
