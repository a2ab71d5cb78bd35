#pragma once

// Combinatorial and linear-algebraic structure behind the scaling theory:
// permutation support certificates via bipartite matching, exact nullspaces,
// kernel/image orthogonality sampling, and the diagonal-equivalence proof
// objects recoverable from a row-then-column scaling trace.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rng.hpp"
#include "scaling.hpp"

namespace dstoch {

/// Certificate that some permutation avoids every zero entry, i.e. the
/// positivity pattern of a square matrix admits a perfect matching.
struct SupportWitness {
  bool has_nonzero_diagonal;
  // sigma[i] is the 0-based column matched to row i; lexicographically
  // smallest such permutation, so witnesses are reproducible.
  std::optional<std::vector<std::size_t>> sigma;
};

namespace detail {

// One augmenting-path pass of Kuhn's algorithm over an adjacency list,
// skipping columns in `banned`.
inline bool kuhn_augment(const std::vector<std::vector<std::size_t>>& adj, std::size_t u,
                         const std::vector<char>& banned, std::vector<char>& visited,
                         std::vector<long>& match_col) {
  for (std::size_t j : adj[u]) {
    if (banned[j] || visited[j]) continue;
    visited[j] = 1;
    if (match_col[j] < 0 ||
        kuhn_augment(adj, static_cast<std::size_t>(match_col[j]), banned, visited, match_col)) {
      match_col[j] = static_cast<long>(u);
      return true;
    }
  }
  return false;
}

// Can rows [from, n) be matched into columns outside `banned`?
inline bool rows_matchable(const std::vector<std::vector<std::size_t>>& adj, std::size_t from,
                           std::size_t n, const std::vector<char>& banned) {
  std::vector<long> match_col(n, -1);
  std::vector<char> visited(n, 0);
  for (std::size_t u = from; u < n; ++u) {
    visited.assign(n, 0);
    if (!kuhn_augment(adj, u, banned, visited, match_col)) return false;
  }
  return true;
}

} // namespace detail

template <ScalarType S>
SupportWitness support_witness(const Matrix<S>& a) {
  if (a.rows() != a.cols())
    fail(errc::non_square, "support certification is defined for square matrices only (got " +
                               std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + ")");
  const std::size_t n = a.rows();
  const S zero = scalar_traits<S>::zero();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (a(i, j) > zero) adj[i].push_back(j);

  // Fix rows in order, choosing the smallest column that still leaves the
  // remaining rows matchable; this yields the lexicographically smallest
  // permutation, and fails at row 0 exactly when no perfect matching exists.
  std::vector<std::size_t> sigma(n);
  std::vector<char> used(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    bool fixed = false;
    for (std::size_t j : adj[i]) {
      if (used[j]) continue;
      used[j] = 1;
      if (detail::rows_matchable(adj, i + 1, n, used)) {
        sigma[i] = j;
        fixed = true;
        break;
      }
      used[j] = 0;
    }
    if (!fixed) return SupportWitness{false, std::nullopt};
  }
  return SupportWitness{true, std::move(sigma)};
}

/// Exact basis of {v : A v = 0} via Gauss-Jordan elimination over the
/// rationals. Each basis vector carries a 1 in its own free coordinate and 0
/// in the others, so the set is independent by construction. An empty result
/// means the kernel is trivial.
template <ScalarType S>
std::vector<std::vector<S>> nullspace_basis(const Matrix<S>& a) {
  static_assert(scalar_traits<S>::is_exact,
                "nullspace computation is restricted to the exact backend");
  const std::size_t m = a.rows(), n = a.cols();
  const S zero = scalar_traits<S>::zero();
  std::vector<std::vector<S>> w(m, std::vector<S>(n, zero));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) w[i][j] = a(i, j);

  std::vector<std::size_t> pivot_rows, pivot_cols;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < m; ++col) {
    std::size_t p = rank;
    while (p < m && w[p][col] == zero) ++p;
    if (p == m) continue;
    std::swap(w[p], w[rank]);
    const S inv = scalar_traits<S>::one() / w[rank][col];
    for (std::size_t j = col; j < n; ++j) w[rank][j] *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == rank || w[i][col] == zero) continue;
      const S f = w[i][col];
      for (std::size_t j = col; j < n; ++j) w[i][j] -= f * w[rank][j];
    }
    pivot_rows.push_back(rank);
    pivot_cols.push_back(col);
    ++rank;
  }

  std::vector<char> is_pivot(n, 0);
  for (std::size_t c : pivot_cols) is_pivot[c] = 1;
  std::vector<std::vector<S>> basis;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    std::vector<S> v(n, zero);
    v[f] = scalar_traits<S>::one();
    for (std::size_t k = 0; k < pivot_cols.size(); ++k)
      v[pivot_cols[k]] = -w[pivot_rows[k]][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

namespace detail {

// Kernel candidates for the floating-point backend: elimination with a
// relative pivot threshold. Rank decisions here are heuristic, which is why
// the exact harness never uses this path.
inline std::vector<std::vector<double>> approx_nullspace(const Matrix<double>& a,
                                                         double pivot_rel_tol) {
  const std::size_t m = a.rows(), n = a.cols();
  double scale = 0.0;
  for (double e : a.entries()) scale = std::max(scale, std::fabs(e));
  const double threshold = scale > 0.0 ? scale * pivot_rel_tol : 0.0;

  std::vector<std::vector<double>> w(m, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) w[i][j] = a(i, j);

  std::vector<std::size_t> pivot_rows, pivot_cols;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < m; ++col) {
    std::size_t best = rank;
    for (std::size_t i = rank + 1; i < m; ++i)
      if (std::fabs(w[i][col]) > std::fabs(w[best][col])) best = i;
    if (std::fabs(w[best][col]) <= threshold) continue;
    std::swap(w[best], w[rank]);
    const double inv = 1.0 / w[rank][col];
    for (std::size_t j = col; j < n; ++j) w[rank][j] *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == rank) continue;
      const double f = w[i][col];
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) w[i][j] -= f * w[rank][j];
    }
    pivot_rows.push_back(rank);
    pivot_cols.push_back(col);
    ++rank;
  }

  std::vector<char> is_pivot(n, 0);
  for (std::size_t c : pivot_cols) is_pivot[c] = 1;
  std::vector<std::vector<double>> basis;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    std::vector<double> v(n, 0.0);
    v[f] = 1.0;
    for (std::size_t k = 0; k < pivot_cols.size(); ++k)
      v[pivot_cols[k]] = -w[pivot_rows[k]][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

} // namespace detail

template <ScalarType S>
struct OrthogonalityReport {
  std::size_t trials;
  std::size_t kernel_dim;
  S max_violation;
  bool ok; // max_violation within the requested tolerance
};

/// Samples y = A^t w and measures |<x, y>| against every kernel basis vector
/// x of A. The kernel of A is orthogonal to the image of A^t, so the exact
/// backend must report zero violation; the approximate backend is bounded by
/// the tolerance. Trial t draws from seed + t, so trials are independent and
/// may be distributed.
template <ScalarType S>
OrthogonalityReport<S> orthogonality_check(const Matrix<S>& a, std::size_t trials, const S& tol,
                                           std::uint64_t seed) {
  if (tol < scalar_traits<S>::zero())
    fail(errc::invalid_argument, "tolerance must be nonnegative");
  std::vector<std::vector<S>> basis;
  if constexpr (scalar_traits<S>::is_exact) {
    basis = nullspace_basis(a);
  } else {
    basis = detail::approx_nullspace(a, 1e-10);
  }
  const std::size_t m = a.rows(), n = a.cols();
  S worst = scalar_traits<S>::zero();
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(seed + t);
    std::vector<S> w(m, scalar_traits<S>::zero());
    for (std::size_t i = 0; i < m; ++i) {
      if constexpr (scalar_traits<S>::is_exact) {
        w[i] = scalar_traits<S>::from_long(rng.range(-10, 10));
      } else {
        w[i] = 2.0 * rng.unit() - 1.0;
      }
    }
    std::vector<S> y(n, scalar_traits<S>::zero());
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) y[j] += a(i, j) * w[i];
    for (const std::vector<S>& x : basis) {
      S dot = scalar_traits<S>::zero();
      for (std::size_t j = 0; j < n; ++j) dot += x[j] * y[j];
      S v = abs_value(dot);
      if (v > worst) worst = v;
    }
  }
  return OrthogonalityReport<S>{trials, basis.size(), worst, !(worst > tol)};
}

/// Proof objects recovered from a row scaling followed by a column scaling
/// (A1 -> A2 -> A3): the diagonals D1, D2 with A1 = D1 A3 D2, the kernel
/// candidate z = D2*1 - 1, and the two weighted sums the finite-termination
/// argument plays against each other.
template <ScalarType S>
struct ProofCertificate {
  std::vector<S> z;       // z_j = colsum_j(A2)/c_j - 1; z_j + 1 > 0 always
  DiagonalScaling<S> d1;  // factors rowsum_i(A1)/r_i
  DiagonalScaling<S> d2;  // factors colsum_j(A2)/c_j
  S s1;                   // sum_j c_j z_j
  S s2;                   // sum_j c_j z_j / (z_j + 1)
  bool reconstruction_ok; // A1 == D1 A3 D2, checked exactly
};

template <ScalarType S>
ProofCertificate<S> extract_certificate(const ScalingTrace<S>& trace) {
  static_assert(scalar_traits<S>::is_exact,
                "certificate extraction is restricted to the exact backend");
  if (!trace.marginals.balanced())
    fail(errc::unbalanced_marginals, "certificate extraction requires balanced marginals");

  // First adjacent row-then-column pair in the trace.
  std::size_t k = trace.steps.size();
  for (std::size_t i = 0; i + 1 < trace.steps.size(); ++i) {
    if (trace.steps[i].side == Side::row && trace.steps[i + 1].side == Side::column) {
      k = i;
      break;
    }
  }
  if (k == trace.steps.size()) {
    if (trace.steps.size() < 2)
      fail(errc::bad_trace, "trace too short: need a row scaling followed by a column scaling");
    fail(errc::bad_trace, "trace has no row scaling followed by a column scaling");
  }

  const Matrix<S>& a1 = k == 0 ? trace.initial : trace.steps[k - 1].result;
  const Matrix<S>& a2 = trace.steps[k].result;
  const Matrix<S>& a3 = trace.steps[k + 1].result;
  const std::vector<S>& r = trace.marginals.r;
  const std::vector<S>& c = trace.marginals.c;

  std::vector<S> r1 = row_sums(a1);
  std::vector<S> d1f;
  d1f.reserve(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) d1f.push_back(r1[i] / r[i]);

  std::vector<S> c2 = col_sums(a2);
  std::vector<S> d2f, z;
  d2f.reserve(c.size());
  z.reserve(c.size());
  const S one = scalar_traits<S>::one();
  for (std::size_t j = 0; j < c.size(); ++j) {
    d2f.push_back(c2[j] / c[j]);
    z.push_back(d2f.back() - one);
  }

  S s1 = scalar_traits<S>::zero();
  S s2 = scalar_traits<S>::zero();
  for (std::size_t j = 0; j < c.size(); ++j) {
    s1 += c[j] * z[j];
    s2 += c[j] * z[j] / (z[j] + one); // z_j + 1 = c2_j/c_j > 0
  }

  bool recon = true;
  for (std::size_t i = 0; i < a1.rows() && recon; ++i)
    for (std::size_t j = 0; j < a1.cols() && recon; ++j)
      recon = a1(i, j) == d1f[i] * a3(i, j) * d2f[j];

  // z in kernel(A3) together with s1 = 0 forces s2 < 0 for nonzero z; a
  // violation here would falsify the underlying inequality, so fail loudly.
  bool z_nonzero = false;
  for (const S& v : z) z_nonzero = z_nonzero || !(v == scalar_traits<S>::zero());
  if (z_nonzero && s1 == scalar_traits<S>::zero()) {
    bool in_kernel = true;
    for (std::size_t i = 0; i < a3.rows() && in_kernel; ++i) {
      S dot = scalar_traits<S>::zero();
      for (std::size_t j = 0; j < a3.cols(); ++j) dot += a3(i, j) * z[j];
      in_kernel = dot == scalar_traits<S>::zero();
    }
    if (in_kernel && !(s2 < scalar_traits<S>::zero()))
      throw std::logic_error("certificate invariant violated: nonzero kernel z with "
                             "sum(c z) = 0 but sum(c z/(z+1)) >= 0");
  }

  return ProofCertificate<S>{std::move(z),
                             DiagonalScaling<S>(Side::row, std::move(d1f)),
                             DiagonalScaling<S>(Side::column, std::move(d2f)),
                             std::move(s1),
                             std::move(s2),
                             recon};
}

} // namespace dstoch
