#pragma once

// JSON state files, JSON reports and CSV tables.
//
// A state file is {labels, dims, kind, amplitudes} for pure states or
// {labels, dims, kind, matrix} for mixed ones, with complex numbers written as
// [re, im] pairs in the row-major basis order of qstate.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>

#include "json.hpp"

#include "entmono/common.hpp"
#include "entmono/convexroof.hpp"
#include "entmono/locc.hpp"
#include "entmono/qstate.hpp"
#include "entmono/redfun.hpp"
#include "entmono/verify.hpp"

namespace entmono {

using json = nlohmann::json;
using AnyState = std::variant<PureState, DensityOperator>;

namespace detail {

inline json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw InvalidInput("state file: complex entries must be [re, im] number pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw InvalidInput(std::string("state file: missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidInput(std::string("state file: field '") + key + "' has the wrong type");
  }
}

}  // namespace detail

inline json state_to_json(const PureState& s) {
  json amps = json::array();
  for (Eigen::Index i = 0; i < s.amplitudes().size(); ++i) amps.push_back(detail::complex_json(s.amplitudes()[i]));
  return {{"labels", s.labels()}, {"dims", s.dims()}, {"kind", "pure"}, {"amplitudes", amps}};
}

inline json state_to_json(const DensityOperator& op) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < op.matrix().rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < op.matrix().cols(); ++j) row.push_back(detail::complex_json(op.matrix()(i, j)));
    rows.push_back(row);
  }
  return {{"labels", op.labels()}, {"dims", op.dims()}, {"kind", "mixed"}, {"matrix", rows}};
}

inline json state_to_json(const AnyState& s) {
  return std::visit([](const auto& v) { return state_to_json(v); }, s);
}

inline AnyState state_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("state file: top level must be an object");
  auto labels = detail::field<std::vector<std::string>>(j, "labels");
  auto dims = detail::field<std::vector<int>>(j, "dims");
  auto kind = detail::field<std::string>(j, "kind");
  if (labels.size() != dims.size()) throw InvalidInput("state file: labels and dims differ in length");
  for (int d : dims)
    if (d < 1) throw InvalidInput("state file: dimensions must be positive");
  const std::size_t d = detail::checked_product(dims);
  if (kind == "pure") {
    const json& a = j.contains("amplitudes") ? j.at("amplitudes") : throw InvalidInput("state file: missing field 'amplitudes'");
    if (!a.is_array() || a.size() != d) throw InvalidInput("state file: amplitude count does not match dims");
    Vec v(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) v[static_cast<Eigen::Index>(i)] = detail::complex_from_json(a[i]);
    return PureState(std::move(labels), std::move(dims), std::move(v));
  }
  if (kind == "mixed") {
    const json& m = j.contains("matrix") ? j.at("matrix") : throw InvalidInput("state file: missing field 'matrix'");
    if (!m.is_array() || m.size() != d) throw InvalidInput("state file: matrix row count does not match dims");
    Mat out(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t r = 0; r < d; ++r) {
      if (!m[r].is_array() || m[r].size() != d) throw InvalidInput("state file: matrix must be square");
      for (std::size_t c = 0; c < d; ++c)
        out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = detail::complex_from_json(m[r][c]);
    }
    return DensityOperator(std::move(labels), std::move(dims), std::move(out));
  }
  throw InvalidInput("state file: kind must be 'pure' or 'mixed'");
}

// Canonical text: two-space indentation, sorted keys, trailing newline.
inline std::string canonical_text(const json& j) { return j.dump(2) + "\n"; }

inline AnyState load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open state file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput("state file '" + path + "' is not valid JSON: " + e.what());
  }
  return state_from_json(j);
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << text;
  if (!out) throw InvalidInput("failed writing '" + path + "'");
}

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string table_csv(const Table& t) {
  std::ostringstream out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << "\n";
  }
  return out.str();
}

inline json roof_to_json(const RoofResult& r) {
  return {{"upper_bound", r.value},       {"spread", r.spread},   {"converged", r.converged},
          {"restarts", r.restarts_used}, {"iterations", r.iterations}, {"members", r.decomposition.cardinality()}};
}

inline json report_to_json(const CheckReport& r) {
  json comps = json::array();
  for (const auto& c : r.comparisons)
    comps.push_back({{"partition_x", c.partition_x},
                     {"partition_y", c.partition_y},
                     {"value_x", c.value_x},
                     {"value_y", c.value_y},
                     {"relation", c.relation},
                     {"status", verdict_name(c.status)},
                     {"note", c.note}});
  return {{"condition", condition_name(r.condition)},
          {"state", r.state_id},
          {"family", family_name(r.spec.family)},
          {"h", format_reduced_function(r.spec.h)},
          {"comparisons", comps},
          {"verdict", verdict_name(r.verdict)},
          {"notes", r.notes}};
}

inline json outcome_to_json(const ConditionOutcome& o) {
  json j = report_to_json(o.report);
  j["expected"] = cell_name(o.expectation.cell);
  j["provenance"] = o.expectation.provenance;
  j["hard"] = o.hard;
  j["expect_fail"] = o.expect_fail;
  j["mismatch"] = o.mismatch;
  return j;
}

inline json case_to_json(const CaseReport& c) {
  json rows = json::array();
  for (const auto& r : c.rows)
    rows.push_back({{"quantity", r.quantity},
                    {"expected", r.expected},
                    {"computed", r.computed},
                    {"tolerance", r.tolerance},
                    {"comparator", r.comparator},
                    {"pass", r.pass},
                    {"provenance", r.hard ? "hard" : "informational"},
                    {"note", r.note}});
  return {{"case", c.name}, {"rows", rows}, {"pass", c.hard_pass()}};
}

inline json witness_to_json(const Witness& w) {
  json ops = json::array();
  for (const auto& op : w.operands) ops.push_back(state_to_json(op));
  return {{"operands", ops}, {"weight", w.weight}, {"margin", w.margin}, {"source", w.source}};
}

inline json probe_to_json(const ProbeReport& r) {
  json j = {{"h", format_reduced_function(r.spec)},
            {"property", property_name(r.property)},
            {"expectation", mark_name(r.expectation)},
            {"trials", r.trials},
            {"violations", r.violations},
            {"preloaded", r.preloaded},
            {"preloaded_violations", r.preloaded_violations},
            {"worst_margin", r.worst_margin},
            {"notes", r.notes}};
  j["witness"] = r.witness ? witness_to_json(*r.witness) : json(nullptr);
  return j;
}

// Trials that increased the measure on average are archived in full.
inline json sweep_to_json(const SweepReport& r) {
  json archived = json::array();
  for (const auto& t : r.records)
    if (t.record.delta > kMonotonicityTolerance)
      archived.push_back({{"index", t.index},
                          {"party", t.party},
                          {"outcomes", t.n_outcomes},
                          {"before", t.record.before},
                          {"after_avg", t.record.after_avg},
                          {"delta", t.record.delta}});
  return {{"family", family_name(r.spec.family)},
          {"h", format_reduced_function(r.spec.h)},
          {"trials", r.trials},
          {"violations", r.violations},
          {"worst_delta", r.worst_delta},
          {"violating_trials", archived}};
}

}  // namespace entmono
