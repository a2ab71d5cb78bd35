#pragma once

// Dense nonnegative matrices, target marginals and diagonal scalings.
// Matrices are immutable values: all operations return fresh objects and are
// safe to run concurrently on shared inputs.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "scalar.hpp"

namespace dstoch {

enum class Side { row, column };

inline Side other_side(Side s) { return s == Side::row ? Side::column : Side::row; }
inline const char* side_name(Side s) { return s == Side::row ? "row" : "column"; }

template <ScalarType S>
class Matrix {
public:
  Matrix(std::size_t rows, std::size_t cols, std::vector<S> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows_ == 0 || cols_ == 0)
      fail(errc::invalid_argument, "matrix must have at least one row and one column");
    if (data_.size() != rows_ * cols_)
      fail(errc::invalid_argument, "entry count does not match matrix shape");
    validate_entries();
    scan_positivity();
  }

  static Matrix from_rows(const std::vector<std::vector<S>>& rows) {
    if (rows.empty()) fail(errc::invalid_argument, "matrix must have at least one row");
    const std::size_t n = rows.front().size();
    std::vector<S> flat;
    flat.reserve(rows.size() * n);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != n)
        fail(errc::ragged_rows, "row " + std::to_string(i + 1) + " has " +
                                    std::to_string(rows[i].size()) + " entries, expected " +
                                    std::to_string(n));
      flat.insert(flat.end(), rows[i].begin(), rows[i].end());
    }
    return Matrix(rows.size(), n, std::move(flat));
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  const S& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<S>& entries() const { return data_; }

  /// True iff every row contains a positive entry (row sums positive).
  bool positive_row_sums() const { return pos_rows_; }
  /// True iff every column contains a positive entry (column sums positive).
  bool positive_col_sums() const { return pos_cols_; }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

private:
  void validate_entries() const {
    const S zero = scalar_traits<S>::zero();
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        const S& e = data_[i * cols_ + j];
        if (!scalar_traits<S>::is_finite(e))
          fail(errc::nonfinite_entry, "entry (" + std::to_string(i + 1) + "," +
                                          std::to_string(j + 1) + ") is not finite");
        if (e < zero)
          fail(errc::negative_entry, "entry (" + std::to_string(i + 1) + "," +
                                         std::to_string(j + 1) + ") is negative: " +
                                         scalar_traits<S>::to_text(e));
      }
  }

  // Entries are nonnegative, so a sum is positive iff some term is.
  void scan_positivity() {
    const S zero = scalar_traits<S>::zero();
    pos_rows_ = true;
    for (std::size_t i = 0; i < rows_ && pos_rows_; ++i) {
      bool any = false;
      for (std::size_t j = 0; j < cols_ && !any; ++j) any = data_[i * cols_ + j] > zero;
      pos_rows_ = any;
    }
    pos_cols_ = true;
    for (std::size_t j = 0; j < cols_ && pos_cols_; ++j) {
      bool any = false;
      for (std::size_t i = 0; i < rows_ && !any; ++i) any = data_[i * cols_ + j] > zero;
      pos_cols_ = any;
    }
  }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<S> data_;
  bool pos_rows_ = false;
  bool pos_cols_ = false;
};

template <ScalarType S>
std::vector<S> row_sums(const Matrix<S>& a) {
  std::vector<S> out(a.rows(), scalar_traits<S>::zero());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out[i] += a(i, j);
  return out;
}

template <ScalarType S>
std::vector<S> col_sums(const Matrix<S>& a) {
  std::vector<S> out(a.cols(), scalar_traits<S>::zero());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out[j] += a(i, j);
  return out;
}

template <ScalarType S>
S total_sum(const Matrix<S>& a) {
  S t = scalar_traits<S>::zero();
  for (const S& e : a.entries()) t += e;
  return t;
}

template <ScalarType S>
Matrix<S> transpose(const Matrix<S>& a) {
  std::vector<S> flat;
  flat.reserve(a.rows() * a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) flat.push_back(a(i, j));
  return Matrix<S>(a.cols(), a.rows(), std::move(flat));
}

/// Positive row targets r (length m) and column targets c (length n).
/// A doubly stochastic target exists iff sum(r) == sum(c).
template <ScalarType S>
struct Marginals {
  std::vector<S> r;
  std::vector<S> c;

  Marginals(std::vector<S> row_targets, std::vector<S> col_targets)
      : r(std::move(row_targets)), c(std::move(col_targets)) {
    if (r.empty() || c.empty())
      fail(errc::invalid_argument, "marginals must be nonempty");
    const S zero = scalar_traits<S>::zero();
    for (std::size_t i = 0; i < r.size(); ++i)
      if (!(r[i] > zero))
        fail(errc::nonpositive_marginal,
             "row target r[" + std::to_string(i + 1) + "] must be positive");
    for (std::size_t j = 0; j < c.size(); ++j)
      if (!(c[j] > zero))
        fail(errc::nonpositive_marginal,
             "column target c[" + std::to_string(j + 1) + "] must be positive");
  }

  static Marginals ones(std::size_t m, std::size_t n) {
    return Marginals(std::vector<S>(m, scalar_traits<S>::one()),
                     std::vector<S>(n, scalar_traits<S>::one()));
  }

  S row_total() const {
    S t = scalar_traits<S>::zero();
    for (const S& v : r) t += v;
    return t;
  }

  S col_total() const {
    S t = scalar_traits<S>::zero();
    for (const S& v : c) t += v;
    return t;
  }

  /// Exact balance; the existence condition for an (r,c)-doubly stochastic matrix.
  bool balanced() const { return row_total() == col_total(); }

  bool balanced_within(const S& tol) const {
    return abs_value(row_total() - col_total()) <= tol;
  }

  friend bool operator==(const Marginals& a, const Marginals& b) {
    return a.r == b.r && a.c == b.c;
  }
};

/// Positive diagonal applied on the left (rows) or right (columns).
template <ScalarType S>
struct DiagonalScaling {
  Side side;
  std::vector<S> factors;

  DiagonalScaling(Side s, std::vector<S> f) : side(s), factors(std::move(f)) {
    if (factors.empty()) fail(errc::invalid_argument, "diagonal scaling must be nonempty");
    const S zero = scalar_traits<S>::zero();
    for (std::size_t k = 0; k < factors.size(); ++k)
      if (!(factors[k] > zero))
        fail(errc::invalid_argument, "scaling factor " + std::to_string(k + 1) +
                                         " must be positive");
  }

  /// The fixed-point test: applying this scaling changes nothing.
  bool is_identity() const {
    const S one = scalar_traits<S>::one();
    for (const S& f : factors)
      if (f != one) return false;
    return true;
  }

  friend bool operator==(const DiagonalScaling& a, const DiagonalScaling& b) {
    return a.side == b.side && a.factors == b.factors;
  }
};

namespace detail {

template <ScalarType S>
void check_shape(const Matrix<S>& a, const Marginals<S>& marg) {
  if (marg.r.size() != a.rows() || marg.c.size() != a.cols())
    fail(errc::dimension_mismatch,
         "marginals (" + std::to_string(marg.r.size()) + "," + std::to_string(marg.c.size()) +
             ") do not match matrix shape " + std::to_string(a.rows()) + "x" +
             std::to_string(a.cols()));
}

template <ScalarType S>
void check_tolerance(const S& tol) {
  if (tol < scalar_traits<S>::zero())
    fail(errc::invalid_argument, "tolerance must be nonnegative");
  if constexpr (scalar_traits<S>::is_exact) {
    if (!(tol == scalar_traits<S>::zero()))
      fail(errc::invalid_argument, "exact backend requires tolerance 0");
  }
}

} // namespace detail

template <ScalarType S>
bool is_row_stochastic(const Matrix<S>& a, const Marginals<S>& marg,
                       const S& tol = scalar_traits<S>::default_tolerance()) {
  detail::check_shape(a, marg);
  detail::check_tolerance(tol);
  const std::vector<S> sums = row_sums(a);
  for (std::size_t i = 0; i < sums.size(); ++i)
    if (abs_value(sums[i] - marg.r[i]) > tol) return false;
  return true;
}

template <ScalarType S>
bool is_col_stochastic(const Matrix<S>& a, const Marginals<S>& marg,
                       const S& tol = scalar_traits<S>::default_tolerance()) {
  detail::check_shape(a, marg);
  detail::check_tolerance(tol);
  const std::vector<S> sums = col_sums(a);
  for (std::size_t j = 0; j < sums.size(); ++j)
    if (abs_value(sums[j] - marg.c[j]) > tol) return false;
  return true;
}

template <ScalarType S>
bool is_doubly_stochastic(const Matrix<S>& a, const Marginals<S>& marg,
                          const S& tol = scalar_traits<S>::default_tolerance()) {
  return is_row_stochastic(a, marg, tol) && is_col_stochastic(a, marg, tol);
}

/// Largest deviation of any row or column sum from its target.
template <ScalarType S>
S max_marginal_residual(const Matrix<S>& a, const Marginals<S>& marg) {
  detail::check_shape(a, marg);
  S worst = scalar_traits<S>::zero();
  const std::vector<S> rs = row_sums(a);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    S d = abs_value(rs[i] - marg.r[i]);
    if (d > worst) worst = d;
  }
  const std::vector<S> cs = col_sums(a);
  for (std::size_t j = 0; j < cs.size(); ++j) {
    S d = abs_value(cs[j] - marg.c[j]);
    if (d > worst) worst = d;
  }
  return worst;
}

} // namespace dstoch
