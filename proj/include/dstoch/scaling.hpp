#pragma once

// Row/column scaling operators and the alternating balancing iteration.
//
// column_scale(A, c) right-multiplies by the unique positive diagonal that
// makes the column sums equal c; row_scale(A, r) left-multiplies likewise for
// row sums. The iteration alternates the two sides and stops as soon as the
// current iterate meets both targets within the tolerance.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "matrix.hpp"

namespace dstoch {

template <ScalarType S>
struct ScalingStep {
  Side side;
  DiagonalScaling<S> applied;
  Matrix<S> result;
  bool was_fixed_point; // applied.is_identity(), i.e. result equals the input
};

/// Ordered record of an alternating scaling run. Steps strictly alternate
/// sides, starting with first_side.
template <ScalarType S>
struct ScalingTrace {
  Matrix<S> initial;
  Marginals<S> marginals;
  Side first_side;
  std::vector<ScalingStep<S>> steps;
};

template <ScalarType S>
DiagonalScaling<S> column_diag(const Matrix<S>& a, const std::vector<S>& c) {
  if (c.size() != a.cols())
    fail(errc::dimension_mismatch, "column targets have length " + std::to_string(c.size()) +
                                       ", matrix has " + std::to_string(a.cols()) + " columns");
  const S zero = scalar_traits<S>::zero();
  for (std::size_t j = 0; j < c.size(); ++j)
    if (!(c[j] > zero))
      fail(errc::nonpositive_marginal,
           "column target c[" + std::to_string(j + 1) + "] must be positive");
  std::vector<S> sums = col_sums(a);
  std::vector<S> factors;
  factors.reserve(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (!(sums[j] > zero))
      fail(errc::zero_column_sum,
           "column " + std::to_string(j + 1) + " has zero sum; column scaling is undefined");
    factors.push_back(c[j] / sums[j]);
  }
  return DiagonalScaling<S>(Side::column, std::move(factors));
}

template <ScalarType S>
DiagonalScaling<S> row_diag(const Matrix<S>& a, const std::vector<S>& r) {
  if (r.size() != a.rows())
    fail(errc::dimension_mismatch, "row targets have length " + std::to_string(r.size()) +
                                       ", matrix has " + std::to_string(a.rows()) + " rows");
  const S zero = scalar_traits<S>::zero();
  for (std::size_t i = 0; i < r.size(); ++i)
    if (!(r[i] > zero))
      fail(errc::nonpositive_marginal,
           "row target r[" + std::to_string(i + 1) + "] must be positive");
  std::vector<S> sums = row_sums(a);
  std::vector<S> factors;
  factors.reserve(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(sums[i] > zero))
      fail(errc::zero_row_sum,
           "row " + std::to_string(i + 1) + " has zero sum; row scaling is undefined");
    factors.push_back(r[i] / sums[i]);
  }
  return DiagonalScaling<S>(Side::row, std::move(factors));
}

/// Multiplies rows or columns by the scaling factors. Zero entries stay zero,
/// positive entries stay positive.
template <ScalarType S>
Matrix<S> apply_scaling(const Matrix<S>& a, const DiagonalScaling<S>& d) {
  const std::size_t expected = d.side == Side::row ? a.rows() : a.cols();
  if (d.factors.size() != expected)
    fail(errc::dimension_mismatch, "scaling length does not match matrix shape");
  std::vector<S> flat;
  flat.reserve(a.rows() * a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      flat.push_back(a(i, j) * d.factors[d.side == Side::row ? i : j]);
  return Matrix<S>(a.rows(), a.cols(), std::move(flat));
}

template <ScalarType S>
ScalingStep<S> column_scale(const Matrix<S>& a, const std::vector<S>& c) {
  DiagonalScaling<S> d = column_diag(a, c);
  const bool fixed = d.is_identity();
  Matrix<S> result = fixed ? a : apply_scaling(a, d);
  return ScalingStep<S>{Side::column, std::move(d), std::move(result), fixed};
}

template <ScalarType S>
ScalingStep<S> row_scale(const Matrix<S>& a, const std::vector<S>& r) {
  DiagonalScaling<S> d = row_diag(a, r);
  const bool fixed = d.is_identity();
  Matrix<S> result = fixed ? a : apply_scaling(a, d);
  return ScalingStep<S>{Side::row, std::move(d), std::move(result), fixed};
}

struct SinkhornOptions {
  std::size_t max_steps = 10000; // scalings applied, fixed points included
  bool record_steps = true;
  // Exact backend only: abort once any entry's numerator or denominator
  // exceeds this many bits (iterates can grow without bound). 0 disables.
  std::size_t max_scalar_bits = 1u << 14;
};

template <ScalarType S>
struct SinkhornResult {
  ScalingTrace<S> trace;
  std::optional<Matrix<S>> limit; // present iff converged within tolerance
  std::size_t effective_steps;    // scalings that changed the matrix
  std::size_t total_steps;        // scalings applied, fixed points included
  S final_residual;
};

namespace detail {

template <ScalarType S>
void check_positive_sums(const Matrix<S>& a) {
  if (!a.positive_row_sums()) {
    const std::vector<S> rs = row_sums(a);
    for (std::size_t i = 0; i < rs.size(); ++i)
      if (!(rs[i] > scalar_traits<S>::zero()))
        fail(errc::zero_row_sum, "row " + std::to_string(i + 1) + " has zero sum");
  }
  if (!a.positive_col_sums()) {
    const std::vector<S> cs = col_sums(a);
    for (std::size_t j = 0; j < cs.size(); ++j)
      if (!(cs[j] > scalar_traits<S>::zero()))
        fail(errc::zero_column_sum, "column " + std::to_string(j + 1) + " has zero sum");
  }
}

template <ScalarType S>
void check_bit_guard(const Matrix<S>& a, std::size_t limit, std::size_t step) {
  if constexpr (scalar_traits<S>::is_exact) {
    if (limit == 0) return;
    for (const S& e : a.entries())
      if (e.bit_size() > limit)
        fail(errc::bit_guard_exceeded,
             "entry size " + std::to_string(e.bit_size()) + " bits exceeds the " +
                 std::to_string(limit) + "-bit guard after step " + std::to_string(step));
  }
}

} // namespace detail

template <ScalarType S>
SinkhornResult<S> sinkhorn_iterate(const Matrix<S>& a, const Marginals<S>& marg,
                                   Side first_side, const SinkhornOptions& opt,
                                   const S& tol = scalar_traits<S>::default_tolerance()) {
  detail::check_shape(a, marg);
  detail::check_tolerance(tol);
  detail::check_positive_sums(a);
  if (opt.max_steps < 1) fail(errc::invalid_argument, "max_steps must be at least 1");
  if constexpr (scalar_traits<S>::is_exact) {
    if (!marg.balanced())
      fail(errc::unbalanced_marginals, "sum of row targets differs from sum of column targets");
  } else {
    if (!marg.balanced_within(tol))
      fail(errc::unbalanced_marginals,
           "sum of row targets differs from sum of column targets beyond tolerance");
  }

  SinkhornResult<S> res{ScalingTrace<S>{a, marg, first_side, {}},
                        std::nullopt,
                        0,
                        0,
                        scalar_traits<S>::zero()};
  Matrix<S> cur = a;
  Side side = first_side;
  for (std::size_t step = 1; step <= opt.max_steps; ++step) {
    ScalingStep<S> st =
        side == Side::row ? row_scale(cur, marg.r) : column_scale(cur, marg.c);
    cur = st.result;
    res.total_steps = step;
    if (!st.was_fixed_point) ++res.effective_steps;
    if (opt.record_steps) res.trace.steps.push_back(std::move(st));
    res.final_residual = max_marginal_residual(cur, marg);
    if (res.final_residual <= tol) {
      res.limit = cur;
      return res;
    }
    detail::check_bit_guard(cur, opt.max_scalar_bits, step);
    side = other_side(side);
  }
  return res; // unconverged; trace and residual describe the final iterate
}

template <ScalarType S>
SinkhornResult<S> sinkhorn_iterate(const Matrix<S>& a, const Marginals<S>& marg,
                                   Side first_side, std::size_t max_steps,
                                   const S& tol = scalar_traits<S>::default_tolerance()) {
  SinkhornOptions opt;
  opt.max_steps = max_steps;
  return sinkhorn_iterate(a, marg, first_side, opt, tol);
}

} // namespace dstoch
