#pragma once

#include <stdexcept>
#include <string>

namespace dstoch {

enum class errc {
  parse_error,
  zero_denominator,
  division_by_zero,
  negative_entry,
  nonfinite_entry,
  ragged_rows,
  dimension_mismatch,
  nonpositive_marginal,
  unbalanced_marginals,
  zero_row_sum,
  zero_column_sum,
  non_square,
  bad_trace,
  bit_guard_exceeded,
  invalid_argument,
  io_error,
};

/// Library-wide exception carrying a machine-checkable error code.
class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw Error(code, msg); }

} // namespace dstoch
