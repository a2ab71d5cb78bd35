#pragma once

// JSON views of library objects, shared by the CLI and the test suite.
// Exact scalars serialize as canonical literal strings so nothing is lost;
// approximate scalars serialize as JSON numbers.

#include <json.hpp>

#include "structure.hpp"
#include "termination.hpp"

namespace dstoch {

template <ScalarType S>
nlohmann::json scalar_to_json(const S& v) {
  if constexpr (scalar_traits<S>::is_exact) {
    return v.str();
  } else {
    return v;
  }
}

template <ScalarType S>
nlohmann::json vector_to_json(const std::vector<S>& v) {
  nlohmann::json out = nlohmann::json::array();
  for (const S& x : v) out.push_back(scalar_to_json(x));
  return out;
}

template <ScalarType S>
nlohmann::json matrix_entries_to_json(const Matrix<S>& a) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < a.cols(); ++j) row.push_back(scalar_to_json(a(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

template <ScalarType S>
nlohmann::json marginals_to_json(const Marginals<S>& m) {
  return nlohmann::json{{"r", vector_to_json(m.r)}, {"c", vector_to_json(m.c)}};
}

template <ScalarType S>
nlohmann::json trace_to_json(const ScalingTrace<S>& trace, bool include_matrices) {
  nlohmann::json steps = nlohmann::json::array();
  for (const ScalingStep<S>& st : trace.steps) {
    nlohmann::json step{
        {"side", side_name(st.side)},
        {"factors", vector_to_json(st.applied.factors)},
        {"was_fixed_point", st.was_fixed_point},
        {"residual", scalar_to_json(max_marginal_residual(st.result, trace.marginals))},
    };
    if (include_matrices) step["matrix"] = matrix_entries_to_json(st.result);
    steps.push_back(std::move(step));
  }
  return nlohmann::json{{"first_side", side_name(trace.first_side)},
                        {"steps", std::move(steps)}};
}

template <ScalarType S>
nlohmann::json certificate_to_json(const ProofCertificate<S>& cert) {
  return nlohmann::json{{"z", vector_to_json(cert.z)},
                        {"d1", vector_to_json(cert.d1.factors)},
                        {"d2", vector_to_json(cert.d2.factors)},
                        {"s1", scalar_to_json(cert.s1)},
                        {"s2", scalar_to_json(cert.s2)},
                        {"reconstruction_ok", cert.reconstruction_ok}};
}

inline nlohmann::json falsifier_report_to_json(const FalsifierReport& report,
                                               bool include_timings) {
  nlohmann::json sizes = nlohmann::json::array();
  for (std::size_t n : report.config.sizes) sizes.push_back(n);
  nlohmann::json histogram;
  for (const auto& [verdict, count] : report.histogram)
    histogram[verdict_name(verdict)] = count;
  nlohmann::json counterexamples = nlohmann::json::array();
  for (const Counterexample& ce : report.counterexamples)
    counterexamples.push_back(nlohmann::json{{"trial", ce.trial},
                                             {"first_side", side_name(ce.first_side)},
                                             {"steps", ce.steps},
                                             {"entries", matrix_entries_to_json(ce.matrix)}});
  nlohmann::json mismatches = nlohmann::json::array();
  for (const OracleMismatch& mm : report.mismatches) {
    nlohmann::json row{{"trial", mm.trial},
                       {"classified", verdict_name(mm.classified)},
                       {"entries", matrix_entries_to_json(mm.matrix)}};
    row["row_first_steps"] =
        mm.row_first_steps ? nlohmann::json(*mm.row_first_steps) : nlohmann::json();
    row["column_first_steps"] =
        mm.column_first_steps ? nlohmann::json(*mm.column_first_steps) : nlohmann::json();
    mismatches.push_back(std::move(row));
  }
  nlohmann::json out{
      {"config",
       {{"sizes", std::move(sizes)},
        {"density", report.config.density},
        {"trials", report.config.trials},
        {"depth", report.config.depth},
        {"max_numerator", report.config.max_numerator},
        {"max_denominator", report.config.max_denominator},
        {"jobs", report.config.jobs}}},
      {"seed", report.config.seed},
      {"trials", report.trials_run},
      {"l3_hits", report.l3_hits},
      {"histogram", std::move(histogram)},
      {"deepest_checked", report.deepest_checked},
      {"unsupported", report.unsupported},
      {"classify_mismatches", report.classify_mismatches},
      {"counterexamples", std::move(counterexamples)},
      {"mismatches", std::move(mismatches)},
  };
  if (include_timings) out["wall_ms"] = report.wall_ms;
  return out;
}

inline nlohmann::json lemma_report_to_json(const LemmaReport& report, bool include_timings) {
  nlohmann::json out{
      {"config",
       {{"min_n", report.config.min_n},
        {"max_n", report.config.max_n},
        {"trials", report.config.trials},
        {"max_c_numerator", report.config.max_c_numerator},
        {"max_denominator", report.config.max_denominator},
        {"z_max", report.config.z_max}}},
      {"seed", report.config.seed},
      {"accepted", report.accepted},
      {"rejected", report.rejected},
      {"violations", report.violations},
      {"min_s2", report.min_s2 ? nlohmann::json(report.min_s2->str()) : nlohmann::json()},
      {"max_s2", report.max_s2 ? nlohmann::json(report.max_s2->str()) : nlohmann::json()},
  };
  if (include_timings) out["wall_ms"] = report.wall_ms;
  return out;
}

} // namespace dstoch
