#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

#include "semihilbert/checks.hpp"
#include "semihilbert/error.hpp"
#include "semihilbert/matrix.hpp"
#include "semihilbert/suite.hpp"

namespace semihilbert {

// ---------------------------------------------------------------------------
// Matrix files: {"n": 2, "A": [[[re, im], ...], ...], "T": ...}

struct MatrixFile {
  std::size_t n = 0;
  std::map<std::string, ComplexMatrix> matrices;

  const ComplexMatrix& get(const std::string& name) const {
    auto it = matrices.find(name);
    if (it == matrices.end()) throw Error(ErrorKind::Parse, "matrix '" + name + "' not found");
    return it->second;
  }
  bool has(const std::string& name) const { return matrices.count(name) != 0; }
};

namespace detail {

inline cplx parse_entry(const nlohmann::json& e, const std::string& where) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    return {e[0].get<double>(), e[1].get<double>()};
  }
  throw Error(ErrorKind::Parse, where + ": entries must be [re, im] pairs");
}

inline ComplexMatrix parse_matrix(const nlohmann::json& rows, std::size_t n, const std::string& name) {
  if (!rows.is_array()) throw Error(ErrorKind::Parse, name + ": expected an array of rows");
  if (rows.size() != n) {
    throw Error(ErrorKind::DimensionMismatch,
                name + ": has " + std::to_string(rows.size()) + " rows, expected " + std::to_string(n));
  }
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array()) throw Error(ErrorKind::Parse, name + ": rows must be arrays");
    if (rows[i].size() != n) {
      throw Error(ErrorKind::DimensionMismatch, name + ": row " + std::to_string(i) + " has " +
                                                    std::to_string(rows[i].size()) + " entries");
    }
    for (std::size_t j = 0; j < n; ++j) m(i, j) = parse_entry(rows[i][j], name);
  }
  if (!m.all_finite()) throw Error(ErrorKind::Parse, name + ": non-finite entry");
  return m;
}

}  // namespace detail

inline MatrixFile parse_matrix_file(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::Parse, "top level must be an object");
  if (!doc.contains("n") || !doc["n"].is_number_unsigned() || doc["n"].get<std::size_t>() == 0) {
    throw Error(ErrorKind::Parse, "missing positive integer field 'n'");
  }
  MatrixFile out;
  out.n = doc["n"].get<std::size_t>();
  for (const auto& [key, value] : doc.items()) {
    if (key == "n") continue;
    out.matrices.emplace(key, detail::parse_matrix(value, out.n, key));
  }
  return out;
}

inline std::string serialize_matrix_file(const MatrixFile& file) {
  nlohmann::ordered_json doc;
  doc["n"] = file.n;
  for (const auto& [name, m] : file.matrices) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (std::size_t j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
      rows.push_back(row);
    }
    doc[name] = rows;
  }
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Suite reports. Written by hand so number formatting is pinned to %.17g.

namespace detail {

inline void put_number(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  if (v == 0.0) v = 0.0;  // -0 would not survive a parse round trip
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

inline void put_string(std::string& out, std::string_view s) {
  out += nlohmann::json(std::string(s)).dump();
}

inline void put_uint(std::string& out, std::uint64_t v) { out += std::to_string(v); }

inline double get_number(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

}  // namespace detail

inline std::string report_to_json(const SuiteReport& rep) {
  using detail::put_number;
  using detail::put_string;
  using detail::put_uint;
  std::string out;
  out.reserve(256 + rep.results.size() * 220);
  out += "{\n  \"meta\": {\"seed\": ";
  put_uint(out, rep.base_seed);
  out += ", \"dims\": [";
  for (std::size_t i = 0; i < rep.dims.size(); ++i) {
    if (i) out += ", ";
    put_uint(out, rep.dims[i]);
  }
  out += "], \"ranks\": [";
  for (std::size_t i = 0; i < rep.ranks.size(); ++i) {
    if (i) out += ", ";
    out += "[";
    for (std::size_t k = 0; k < rep.ranks[i].size(); ++k) {
      if (k) out += ", ";
      put_uint(out, rep.ranks[i][k]);
    }
    out += "]";
  }
  out += "], \"trials\": ";
  put_uint(out, rep.trials);
  out += ", \"instances\": ";
  put_uint(out, rep.instances);
  out += ", \"tolerances\": {\"equality\": ";
  put_number(out, rep.tolerances.equality);
  out += ", \"inequality\": ";
  put_number(out, rep.tolerances.inequality);
  out += "}, \"version\": ";
  put_string(out, rep.version);
  out += "},\n  \"results\": [";
  for (std::size_t i = 0; i < rep.results.size(); ++i) {
    const CheckResult& r = rep.results[i];
    out += i ? ",\n    " : "\n    ";
    out += "{\"check\": ";
    put_string(out, check_name(r.check));
    out += ", \"note\": ";
    put_string(out, r.note);
    out += r.relation == Relation::Equal ? ", \"kind\": \"eq\"" : ", \"kind\": \"le\"";
    out += ", \"seed\": ";
    put_uint(out, r.seed);
    out += ", \"dim\": ";
    put_uint(out, r.dim);
    out += ", \"rank\": ";
    put_uint(out, r.rank);
    out += ", \"lhs\": ";
    put_number(out, r.lhs);
    out += ", \"rhs\": ";
    put_number(out, r.rhs);
    out += ", \"slack\": ";
    put_number(out, r.slack);
    out += ", \"scale\": ";
    put_number(out, r.scale);
    out += ", \"tolerance\": ";
    put_number(out, r.tolerance);
    out += r.pass ? ", \"pass\": true}" : ", \"pass\": false}";
  }
  out += rep.results.empty() ? "],\n" : "\n  ],\n";
  out += "  \"summary\": {\"pass\": ";
  out += rep.pass ? "true" : "false";
  out += ", \"checks\": [";
  for (std::size_t i = 0; i < rep.summary.size(); ++i) {
    const CheckSummary& s = rep.summary[i];
    out += i ? ",\n    " : "\n    ";
    out += "{\"check\": ";
    put_string(out, check_name(s.check));
    out += ", \"count\": ";
    put_uint(out, s.count);
    out += ", \"failures\": ";
    put_uint(out, s.failures);
    out += ", \"min_slack\": ";
    put_number(out, s.min_slack);
    out += ", \"min_normalized_slack\": ";
    put_number(out, s.min_normalized_slack);
    out += ", \"argmin\": {\"seed\": ";
    put_uint(out, s.argmin_seed);
    out += ", \"dim\": ";
    put_uint(out, s.argmin_dim);
    out += ", \"rank\": ";
    put_uint(out, s.argmin_rank);
    out += ", \"note\": ";
    put_string(out, s.argmin_note);
    out += "}}";
  }
  out += rep.summary.empty() ? "]}\n}\n" : "\n  ]}\n}\n";
  return out;
}

inline SuiteReport report_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("malformed report: ") + e.what());
  }
  try {
    SuiteReport rep;
    const auto& meta = doc.at("meta");
    rep.base_seed = meta.at("seed").get<std::uint64_t>();
    rep.dims = meta.at("dims").get<std::vector<std::size_t>>();
    rep.ranks = meta.at("ranks").get<std::vector<std::vector<std::size_t>>>();
    rep.trials = meta.at("trials").get<std::size_t>();
    rep.instances = meta.at("instances").get<std::size_t>();
    rep.tolerances.equality = meta.at("tolerances").at("equality").get<double>();
    rep.tolerances.inequality = meta.at("tolerances").at("inequality").get<double>();
    rep.version = meta.at("version").get<std::string>();
    for (const auto& j : doc.at("results")) {
      CheckResult r;
      r.check = parse_check(j.at("check").get<std::string>());
      r.note = j.at("note").get<std::string>();
      r.relation = j.at("kind").get<std::string>() == "eq" ? Relation::Equal : Relation::LessEqual;
      r.seed = j.at("seed").get<std::uint64_t>();
      r.dim = j.at("dim").get<std::size_t>();
      r.rank = j.at("rank").get<std::size_t>();
      r.lhs = detail::get_number(j.at("lhs"));
      r.rhs = detail::get_number(j.at("rhs"));
      r.slack = detail::get_number(j.at("slack"));
      r.scale = detail::get_number(j.at("scale"));
      r.tolerance = detail::get_number(j.at("tolerance"));
      r.pass = j.at("pass").get<bool>();
      rep.results.push_back(std::move(r));
    }
    const auto& summary = doc.at("summary");
    rep.pass = summary.at("pass").get<bool>();
    for (const auto& j : summary.at("checks")) {
      CheckSummary s;
      s.check = parse_check(j.at("check").get<std::string>());
      s.count = j.at("count").get<std::size_t>();
      s.failures = j.at("failures").get<std::size_t>();
      s.min_slack = detail::get_number(j.at("min_slack"));
      s.min_normalized_slack = detail::get_number(j.at("min_normalized_slack"));
      const auto& arg = j.at("argmin");
      s.argmin_seed = arg.at("seed").get<std::uint64_t>();
      s.argmin_dim = arg.at("dim").get<std::size_t>();
      s.argmin_rank = arg.at("rank").get<std::size_t>();
      s.argmin_note = arg.at("note").get<std::string>();
      rep.summary.push_back(std::move(s));
    }
    return rep;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("report schema: ") + e.what());
  }
}

}  // namespace semihilbert
