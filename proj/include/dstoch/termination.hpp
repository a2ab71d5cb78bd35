#pragma once

// Finite-termination analysis of alternating scaling, exact backend only.
//
// classify() decides whether a matrix is already at target (L0), reaches it
// after one scaling (L1), after two (L2), or never reaches it exactly
// (NotFinite). Soundness of the NotFinite verdict rests on the finite-
// termination bound: a matrix that becomes doubly stochastic after exactly L
// scalings has L <= 2, so checking A, R(A), C(A), C(R(A)) and R(C(A)) covers
// every finite case. terminates_at() does not assume that bound and simply
// walks the alternating sequence, which makes it an independent oracle;
// falsify_search() hammers both against random matrices looking for a
// depth-3+ termination that the bound says cannot exist.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "structure.hpp"

namespace dstoch {

enum class Verdict { L0, L1, L2, NotFinite };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::L0: return "L0";
    case Verdict::L1: return "L1";
    case Verdict::L2: return "L2";
    default: return "NotFinite";
  }
}

enum class WitnessOrder { row_first, column_first, either, none };

inline const char* witness_order_name(WitnessOrder w) {
  switch (w) {
    case WitnessOrder::row_first: return "row_first";
    case WitnessOrder::column_first: return "column_first";
    case WitnessOrder::either: return "either";
    default: return "none";
  }
}

template <ScalarType S>
struct TerminationClass {
  Verdict verdict;
  WitnessOrder witness_order;
  std::optional<ScalingTrace<S>> witness_trace;
};

namespace detail {

template <ScalarType S>
void check_exact_classifiable(const Matrix<S>& a, const Marginals<S>& marg) {
  static_assert(scalar_traits<S>::is_exact,
                "termination classification is restricted to the exact backend");
  check_shape(a, marg);
  check_positive_sums(a);
  if (!marg.balanced())
    fail(errc::unbalanced_marginals, "sum of row targets differs from sum of column targets");
}

} // namespace detail

template <ScalarType S>
TerminationClass<S> classify(const Matrix<S>& a, const Marginals<S>& marg) {
  detail::check_exact_classifiable(a, marg);
  const S zero = scalar_traits<S>::zero();

  auto ds = [&](const Matrix<S>& x) { return is_doubly_stochastic(x, marg, zero); };
  auto trace_of = [&](Side first, std::vector<ScalingStep<S>> steps) {
    return ScalingTrace<S>{a, marg, first, std::move(steps)};
  };

  if (ds(a))
    return TerminationClass<S>{Verdict::L0, WitnessOrder::either, trace_of(Side::row, {})};

  ScalingStep<S> r_step = row_scale(a, marg.r);
  ScalingStep<S> c_step = column_scale(a, marg.c);
  const bool row_l1 = ds(r_step.result);
  const bool col_l1 = ds(c_step.result);
  if (row_l1 || col_l1) {
    WitnessOrder order = row_l1 && col_l1 ? WitnessOrder::either
                         : row_l1         ? WitnessOrder::row_first
                                          : WitnessOrder::column_first;
    // When both single scalings work, keep the row-first trace.
    ScalingTrace<S> tr = row_l1 ? trace_of(Side::row, {std::move(r_step)})
                                : trace_of(Side::column, {std::move(c_step)});
    return TerminationClass<S>{Verdict::L1, order, std::move(tr)};
  }

  ScalingStep<S> rc_step = column_scale(r_step.result, marg.c);
  ScalingStep<S> cr_step = row_scale(c_step.result, marg.r);
  const bool row_l2 = ds(rc_step.result);
  const bool col_l2 = ds(cr_step.result);
  if (row_l2 || col_l2) {
    WitnessOrder order = row_l2 && col_l2 ? WitnessOrder::either
                         : row_l2         ? WitnessOrder::row_first
                                          : WitnessOrder::column_first;
    ScalingTrace<S> tr =
        row_l2 ? trace_of(Side::row, {std::move(r_step), std::move(rc_step)})
               : trace_of(Side::column, {std::move(c_step), std::move(cr_step)});
    return TerminationClass<S>{Verdict::L2, order, std::move(tr)};
  }

  return TerminationClass<S>{Verdict::NotFinite, WitnessOrder::none, std::nullopt};
}

/// Walks the alternating scaling sequence for up to `depth` scalings and
/// returns the effective step count (fixed points are free) of the first
/// iterate that meets both targets exactly, or nullopt. Makes no use of the
/// L <= 2 bound, so it independently cross-checks classify().
template <ScalarType S>
std::optional<std::size_t> terminates_at(const Matrix<S>& a, const Marginals<S>& marg,
                                         Side first_side, std::size_t depth = 6) {
  detail::check_exact_classifiable(a, marg);
  const S zero = scalar_traits<S>::zero();
  if (is_doubly_stochastic(a, marg, zero)) return 0;
  Matrix<S> cur = a;
  Side side = first_side;
  std::size_t effective = 0;
  for (std::size_t step = 1; step <= depth; ++step) {
    ScalingStep<S> st = side == Side::row ? row_scale(cur, marg.r) : column_scale(cur, marg.c);
    cur = std::move(st.result);
    if (!st.was_fixed_point) ++effective;
    if (is_doubly_stochastic(cur, marg, zero)) return effective;
    side = other_side(side);
  }
  return std::nullopt;
}

struct FalsifyConfig {
  std::vector<std::size_t> sizes{2, 3, 4};
  double density = 0.9;     // probability that an entry is sampled, not forced to 0
  std::size_t trials = 10000;
  std::uint64_t seed = 42;
  std::size_t depth = 6;    // scalings per order; anything >= 3 probes the bound
  long max_numerator = 20;  // entries k/d with k in 0..max_numerator
  long max_denominator = 10; // d per matrix in 1..max_denominator
  unsigned jobs = 1;
};

struct Counterexample {
  std::size_t trial;
  Side first_side;
  std::size_t steps;
  Matrix<Rational> matrix;
};

struct OracleMismatch {
  std::size_t trial;
  Verdict classified;
  std::optional<std::size_t> row_first_steps;
  std::optional<std::size_t> column_first_steps;
  Matrix<Rational> matrix;
};

struct FalsifierReport {
  FalsifyConfig config;
  std::size_t trials_run = 0;
  std::size_t l3_hits = 0; // terminations at effective depth >= 3 (expected 0)
  std::map<Verdict, std::size_t> histogram;
  std::size_t deepest_checked = 0;
  std::size_t unsupported = 0; // accepted without a permutation support witness
  std::size_t classify_mismatches = 0;
  std::vector<Counterexample> counterexamples;
  std::vector<OracleMismatch> mismatches;
  double wall_ms = 0.0;
};

namespace detail {

/// Random nonnegative rational matrix with positive row and column sums,
/// fully determined by the rng state.
inline Matrix<Rational> sample_falsify_matrix(Rng& rng, std::size_t n, double density,
                                              long max_num, long max_den) {
  for (;;) {
    const long den = rng.range(1, max_den);
    std::vector<Rational> flat;
    flat.reserve(n * n);
    for (std::size_t k = 0; k < n * n; ++k) {
      if (rng.unit() < density) {
        flat.emplace_back(rng.range(0, max_num), den);
      } else {
        flat.emplace_back(0);
      }
    }
    Matrix<Rational> a(n, n, std::move(flat));
    if (a.positive_row_sums() && a.positive_col_sums()) return a;
  }
}

inline Verdict verdict_from_steps(std::optional<std::size_t> k_row,
                                  std::optional<std::size_t> k_col) {
  std::size_t best = static_cast<std::size_t>(-1);
  if (k_row) best = std::min(best, *k_row);
  if (k_col) best = std::min(best, *k_col);
  if (best == static_cast<std::size_t>(-1)) return Verdict::NotFinite;
  if (best == 0) return Verdict::L0;
  if (best == 1) return Verdict::L1;
  if (best == 2) return Verdict::L2;
  return Verdict::NotFinite; // a depth-3+ hit; recorded separately as l3
}

inline void run_falsify_range(const FalsifyConfig& cfg, std::size_t begin, std::size_t end,
                              FalsifierReport& out) {
  for (std::size_t trial = begin; trial < end; ++trial) {
    Rng rng(cfg.seed + trial); // sub-seed per trial: order- and jobs-independent
    const std::size_t n = cfg.sizes[rng.below(cfg.sizes.size())];
    Matrix<Rational> a = sample_falsify_matrix(rng, n, cfg.density, cfg.max_numerator,
                                               cfg.max_denominator);
    if (!support_witness(a).has_nonzero_diagonal) ++out.unsupported;

    const Marginals<Rational> marg = Marginals<Rational>::ones(n, n);
    const auto k_row = terminates_at(a, marg, Side::row, cfg.depth);
    const auto k_col = terminates_at(a, marg, Side::column, cfg.depth);
    if (k_row && *k_row >= 3) {
      ++out.l3_hits;
      out.counterexamples.push_back(Counterexample{trial, Side::row, *k_row, a});
    }
    if (k_col && *k_col >= 3) {
      ++out.l3_hits;
      out.counterexamples.push_back(Counterexample{trial, Side::column, *k_col, a});
    }

    const Verdict observed = verdict_from_steps(k_row, k_col);
    const TerminationClass<Rational> cls = classify(a, marg);
    if (cls.verdict != observed) {
      ++out.classify_mismatches;
      out.mismatches.push_back(OracleMismatch{trial, cls.verdict, k_row, k_col, a});
    }
    ++out.histogram[cls.verdict];
    ++out.trials_run;
  }
}

inline void merge_into(FalsifierReport& into, FalsifierReport&& part) {
  into.trials_run += part.trials_run;
  into.l3_hits += part.l3_hits;
  into.unsupported += part.unsupported;
  into.classify_mismatches += part.classify_mismatches;
  for (const auto& [verdict, count] : part.histogram) into.histogram[verdict] += count;
  for (auto& ce : part.counterexamples) into.counterexamples.push_back(std::move(ce));
  for (auto& mm : part.mismatches) into.mismatches.push_back(std::move(mm));
}

} // namespace detail

/// Randomized search for a matrix that terminates after three or more
/// scalings. Every trial derives its generator from seed + trial index, so a
/// report is reproducible bit-for-bit and independent of the job count.
inline FalsifierReport falsify_search(const FalsifyConfig& cfg) {
  if (cfg.sizes.empty()) fail(errc::invalid_argument, "falsifier needs at least one size");
  for (std::size_t n : cfg.sizes)
    if (n < 1) fail(errc::invalid_argument, "matrix sizes must be at least 1");
  if (cfg.density <= 0.0 || cfg.density > 1.0)
    fail(errc::invalid_argument, "density must be in (0, 1]");
  if (cfg.max_numerator < 1 || cfg.max_denominator < 1)
    fail(errc::invalid_argument, "entry bounds must be positive");

  FalsifierReport report;
  report.config = cfg;
  report.deepest_checked = cfg.depth;
  for (Verdict v : {Verdict::L0, Verdict::L1, Verdict::L2, Verdict::NotFinite})
    report.histogram[v] = 0;

  const unsigned jobs = cfg.jobs == 0 ? 1 : cfg.jobs;
  if (jobs == 1 || cfg.trials < 2 * jobs) {
    detail::run_falsify_range(cfg, 0, cfg.trials, report);
    return report;
  }

  std::vector<FalsifierReport> parts(jobs);
  std::vector<std::thread> workers;
  const std::size_t chunk = (cfg.trials + jobs - 1) / jobs;
  for (unsigned w = 0; w < jobs; ++w) {
    const std::size_t begin = std::min<std::size_t>(w * chunk, cfg.trials);
    const std::size_t end = std::min<std::size_t>(begin + chunk, cfg.trials);
    workers.emplace_back(
        [&cfg, begin, end, &part = parts[w]] { detail::run_falsify_range(cfg, begin, end, part); });
  }
  for (auto& t : workers) t.join();
  // Chunks are merged in trial order, so the report matches a sequential run.
  for (auto& part : parts) detail::merge_into(report, std::move(part));
  return report;
}

struct LemmaConfig {
  std::size_t min_n = 2;
  std::size_t max_n = 8;
  std::size_t trials = 100000; // accepted samples, rejections not counted
  std::uint64_t seed = 7;
  long max_c_numerator = 20;
  long max_denominator = 10;
  long z_max = 4; // free z coordinates are drawn from (-1, z_max]
};

struct LemmaReport {
  LemmaConfig config;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t violations = 0; // samples with s2 >= 0 (expected 0)
  std::optional<Rational> min_s2;
  std::optional<Rational> max_s2;
  double wall_ms = 0.0;
};

/// s1 = sum_j c_j z_j and s2 = sum_j c_j z_j / (z_j + 1) for positive c and
/// z with every z_j + 1 > 0. Whenever s1 = 0 and z != 0, s2 is strictly
/// negative; lemma_harness samples that hypothesis space at random.
inline std::pair<Rational, Rational> lemma_sums(const std::vector<Rational>& c,
                                                const std::vector<Rational>& z) {
  if (c.size() != z.size()) fail(errc::dimension_mismatch, "c and z must have equal length");
  const Rational one(1);
  Rational s1(0), s2(0);
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (!(c[j] > Rational(0)))
      fail(errc::invalid_argument, "lemma weights must be positive");
    if (!(z[j] + one > Rational(0)))
      fail(errc::invalid_argument, "lemma requires z_j + 1 > 0");
    s1 += c[j] * z[j];
    s2 += c[j] * z[j] / (z[j] + one);
  }
  return {s1, s2};
}

inline LemmaReport lemma_harness(const LemmaConfig& cfg) {
  if (cfg.min_n < 2 || cfg.max_n < cfg.min_n)
    fail(errc::invalid_argument, "lemma harness needs 2 <= min_n <= max_n");
  LemmaReport report;
  report.config = cfg;
  const Rational zero(0), one(1);
  std::uint64_t attempt = 0;
  while (report.accepted < cfg.trials) {
    Rng rng(cfg.seed + attempt++);
    const std::size_t n = cfg.min_n + rng.below(cfg.max_n - cfg.min_n + 1);
    std::vector<Rational> c;
    c.reserve(n);
    for (std::size_t j = 0; j < n; ++j)
      c.push_back(rng.positive_rational(cfg.max_c_numerator, cfg.max_denominator));

    // Free coordinates in (-1, z_max], last coordinate solved so that
    // sum c_j z_j = 0 lands exactly; reject when it leaves the open domain.
    std::vector<Rational> z;
    z.reserve(n);
    Rational weighted(0);
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const long q = rng.range(1, cfg.max_denominator);
      const long p = rng.range(-q + 1, cfg.z_max * q);
      z.emplace_back(p, q);
      weighted += c[j] * z.back();
    }
    z.push_back(-weighted / c[n - 1]);
    bool all_zero = true;
    for (const Rational& v : z) all_zero = all_zero && v == zero;
    if (all_zero || !(z.back() + one > zero)) {
      ++report.rejected;
      continue;
    }

    const auto [s1, s2] = lemma_sums(c, z);
    if (!(s1 == zero)) throw std::logic_error("lemma harness constructed s1 != 0");
    if (!(s2 < zero)) ++report.violations;
    if (!report.min_s2 || s2 < *report.min_s2) report.min_s2 = s2;
    if (!report.max_s2 || s2 > *report.max_s2) report.max_s2 = s2;
    ++report.accepted;
  }
  return report;
}

template <ScalarType S>
struct GenResult {
  Matrix<S> matrix;
  std::size_t regenerations; // rejected degenerate draws before this one
};

namespace detail {

/// The unique rank-1 matrix with the requested row and column sums:
/// S = r c^t / T where T = sum r = sum c.
inline Matrix<Rational> rank_one_target(const Marginals<Rational>& marg) {
  const Rational total = marg.row_total();
  std::vector<Rational> flat;
  flat.reserve(marg.r.size() * marg.c.size());
  for (const Rational& ri : marg.r)
    for (const Rational& cj : marg.c) flat.push_back(ri * cj / total);
  return Matrix<Rational>(marg.r.size(), marg.c.size(), std::move(flat));
}

} // namespace detail

/// Matrix that reaches the target after exactly one scaling: a row-diagonal
/// distortion D * (r c^t / T). Degenerate draws (D a multiple of the
/// identity collapsing the distortion) are rejected and resampled.
inline GenResult<Rational> gen_exact_one_step(const Marginals<Rational>& marg,
                                              std::uint64_t seed) {
  if (!marg.balanced())
    fail(errc::unbalanced_marginals, "generator requires balanced marginals");
  const Matrix<Rational> target = detail::rank_one_target(marg);
  std::size_t regen = 0;
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng(seed + attempt);
    std::vector<Rational> d;
    d.reserve(marg.r.size());
    for (std::size_t i = 0; i < marg.r.size(); ++i) d.push_back(rng.positive_rational(8, 8));
    Matrix<Rational> a =
        apply_scaling(target, DiagonalScaling<Rational>(Side::row, std::move(d)));
    const TerminationClass<Rational> cls = classify(a, marg);
    if (cls.verdict == Verdict::L1 && (cls.witness_order == WitnessOrder::row_first ||
                                       cls.witness_order == WitnessOrder::either))
      return GenResult<Rational>{std::move(a), regen};
    ++regen;
  }
}

/// Matrix that needs two scalings: a random positive rank-1 matrix u v^t.
/// One row scaling sends it to r v^t / sum(v), one column scaling lands on
/// r c^t / T. Draws proportional to the target (u ~ r or v ~ c) classify as
/// L0/L1 and are resampled.
inline GenResult<Rational> gen_exact_two_step(const Marginals<Rational>& marg,
                                              std::uint64_t seed) {
  if (!marg.balanced())
    fail(errc::unbalanced_marginals, "generator requires balanced marginals");
  const std::size_t m = marg.r.size(), n = marg.c.size();
  std::size_t regen = 0;
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng rng(seed + attempt);
    std::vector<Rational> u, v;
    u.reserve(m);
    v.reserve(n);
    for (std::size_t i = 0; i < m; ++i) u.push_back(rng.positive_rational(20, 10));
    for (std::size_t j = 0; j < n; ++j) v.push_back(rng.positive_rational(20, 10));
    std::vector<Rational> flat;
    flat.reserve(m * n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) flat.push_back(u[i] * v[j]);
    Matrix<Rational> a(m, n, std::move(flat));
    if (classify(a, marg).verdict == Verdict::L2) return GenResult<Rational>{std::move(a), regen};
    ++regen;
  }
}

} // namespace dstoch
