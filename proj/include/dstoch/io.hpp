#pragma once

// Matrix file I/O.
//
// CSV: one row per line, comma-separated scalar literals, no header.
// JSON: {"rows": m, "cols": n, "entries": [["..",".."], ...], "r": [...],
//        "c": [...]} with rows/cols/r/c optional and entries as scalar
// strings. The exact backend round-trips losslessly through either format.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "matrix.hpp"

namespace dstoch {

enum class MatrixFormat { csv, json };

template <ScalarType S>
struct MatrixFile {
  Matrix<S> matrix;
  std::optional<Marginals<S>> marginals; // JSON files may carry targets inline
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

template <ScalarType S>
std::vector<S> parse_scalar_list(std::string_view text, char sep) {
  std::vector<S> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == sep) {
      out.push_back(scalar_traits<S>::parse(trim(text.substr(start, i - start))));
      start = i + 1;
    }
  }
  return out;
}

} // namespace detail

template <ScalarType S>
MatrixFile<S> parse_matrix_csv(std::string_view text) {
  std::vector<std::vector<S>> rows;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '\n') {
      std::string_view line = detail::trim(text.substr(start, i - start));
      start = i + 1;
      if (line.empty()) continue;
      rows.push_back(detail::parse_scalar_list<S>(line, ','));
    }
  }
  if (rows.empty()) fail(errc::parse_error, "CSV input contains no rows");
  return MatrixFile<S>{Matrix<S>::from_rows(rows), std::nullopt};
}

/// Inline one-liner form: rows separated by ';', entries by ','.
template <ScalarType S>
Matrix<S> parse_matrix_inline(std::string_view text) {
  std::vector<std::vector<S>> rows;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ';') {
      std::string_view row = detail::trim(text.substr(start, i - start));
      start = i + 1;
      if (row.empty()) continue;
      rows.push_back(detail::parse_scalar_list<S>(row, ','));
    }
  }
  if (rows.empty()) fail(errc::parse_error, "inline matrix contains no rows");
  return Matrix<S>::from_rows(rows);
}

template <ScalarType S>
MatrixFile<S> parse_matrix_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(errc::parse_error, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array())
    fail(errc::parse_error, "JSON matrix must be an object with an \"entries\" array");

  std::vector<std::vector<S>> rows;
  for (const auto& row : doc["entries"]) {
    if (!row.is_array()) fail(errc::parse_error, "\"entries\" must be an array of arrays");
    std::vector<S> parsed;
    parsed.reserve(row.size());
    for (const auto& cell : row) {
      if (!cell.is_string())
        fail(errc::parse_error, "matrix entries must be scalar strings");
      parsed.push_back(scalar_traits<S>::parse(cell.template get<std::string>()));
    }
    rows.push_back(std::move(parsed));
  }
  if (rows.empty()) fail(errc::parse_error, "JSON matrix has no rows");
  Matrix<S> a = Matrix<S>::from_rows(rows);

  if (doc.contains("rows") && doc["rows"].template get<std::size_t>() != a.rows())
    fail(errc::parse_error, "\"rows\" field disagrees with the entry grid");
  if (doc.contains("cols") && doc["cols"].template get<std::size_t>() != a.cols())
    fail(errc::parse_error, "\"cols\" field disagrees with the entry grid");

  std::optional<Marginals<S>> marg;
  const bool has_r = doc.contains("r"), has_c = doc.contains("c");
  if (has_r != has_c)
    fail(errc::parse_error, "marginals need both \"r\" and \"c\"");
  if (has_r) {
    auto read_vec = [](const nlohmann::json& arr) {
      std::vector<S> v;
      for (const auto& cell : arr) {
        if (!cell.is_string()) fail(errc::parse_error, "marginals must be scalar strings");
        v.push_back(scalar_traits<S>::parse(cell.template get<std::string>()));
      }
      return v;
    };
    marg = Marginals<S>(read_vec(doc["r"]), read_vec(doc["c"]));
    if (marg->r.size() != a.rows() || marg->c.size() != a.cols())
      fail(errc::dimension_mismatch, "marginals in file do not match the matrix shape");
  }
  return MatrixFile<S>{std::move(a), std::move(marg)};
}

template <ScalarType S>
std::string matrix_to_csv(const Matrix<S>& a) {
  std::ostringstream out;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (j) out << ',';
      out << scalar_traits<S>::to_text(a(i, j));
    }
    out << '\n';
  }
  return out.str();
}

template <ScalarType S>
nlohmann::json matrix_to_json(const Matrix<S>& a,
                              const std::optional<Marginals<S>>& marg = std::nullopt) {
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < a.cols(); ++j) row.push_back(scalar_traits<S>::to_text(a(i, j)));
    entries.push_back(std::move(row));
  }
  nlohmann::json doc{{"rows", a.rows()}, {"cols", a.cols()}, {"entries", std::move(entries)}};
  if (marg) {
    nlohmann::json r = nlohmann::json::array(), c = nlohmann::json::array();
    for (const S& v : marg->r) r.push_back(scalar_traits<S>::to_text(v));
    for (const S& v : marg->c) c.push_back(scalar_traits<S>::to_text(v));
    doc["r"] = std::move(r);
    doc["c"] = std::move(c);
  }
  return doc;
}

template <ScalarType S>
MatrixFile<S> read_matrix(const std::string& path, MatrixFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io_error, "cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  return format == MatrixFormat::csv ? parse_matrix_csv<S>(text) : parse_matrix_json<S>(text);
}

template <ScalarType S>
void write_matrix(const Matrix<S>& a, const std::string& path, MatrixFormat format,
                  const std::optional<Marginals<S>>& marg = std::nullopt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io_error, "cannot open '" + path + "' for writing");
  if (format == MatrixFormat::csv) {
    out << matrix_to_csv(a);
  } else {
    out << matrix_to_json(a, marg).dump(2) << '\n';
  }
  if (!out) fail(errc::io_error, "failed writing '" + path + "'");
}

} // namespace dstoch
