#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "entmono/qstate.hpp"

namespace entmono::testing {

// Qubit state from a map of bit strings to (unnormalized) real amplitudes.
inline PureState qubits(const std::map<std::string, double>& terms, std::vector<std::string> labels = {}) {
  std::size_t n = terms.begin()->first.size();
  if (labels.empty()) labels = default_labels(n);
  Vec v = Vec::Zero(1 << n);
  for (const auto& [bits, amp] : terms) v[std::stoi(bits, nullptr, 2)] += amp;
  return PureState::normalized(labels, std::vector<int>(n, 2), v);
}

inline PureState bell(std::vector<std::string> labels = {"A", "B"}) {
  return qubits({{"00", 1.0}, {"11", 1.0}}, std::move(labels));
}

inline PureState ghz(std::size_t n, int d = 2) {
  std::vector<int> dims(n, d);
  std::size_t total = 1;
  for (int k : dims) total *= k;
  Vec v = Vec::Zero(static_cast<Eigen::Index>(total));
  for (int k = 0; k < d; ++k) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n; ++i) idx = idx * d + k;
    v[static_cast<Eigen::Index>(idx)] = 1.0;
  }
  return PureState::normalized(default_labels(n), dims, v);
}

inline PureState w4() { return qubits({{"1000", 1}, {"0100", 1}, {"0010", 1}, {"0001", 1}}); }

inline Mat diag(const std::vector<double>& d) {
  Mat m = Mat::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
  return m;
}

inline DensityOperator diag_op(const std::vector<double>& d, std::vector<int> dims = {}) {
  if (dims.empty()) dims = {static_cast<int>(d.size())};
  return DensityOperator(default_labels(dims.size()), dims, diag(d));
}

inline double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace entmono::testing
