#pragma once

// Named reference states with exact amplitudes.

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "entmono/common.hpp"
#include "entmono/qstate.hpp"

namespace entmono {

struct ReferenceState {
  std::string name;
  std::string description;
  std::vector<std::pair<std::string, double>> parameters;
  PureState state;
};

namespace detail {

// Qubit state from bit strings and amplitudes; the amplitudes must already be normalized.
inline PureState qubit_terms(const std::vector<std::pair<std::string, double>>& terms,
                             std::vector<std::string> labels = {}) {
  const std::size_t n = terms.front().first.size();
  if (labels.empty()) labels = default_labels(n);
  Vec v = Vec::Zero(Eigen::Index{1} << n);
  for (const auto& [bits, amp] : terms) v[std::stoll(bits, nullptr, 2)] += amp;
  return PureState(std::move(labels), std::vector<int>(n, 2), v);
}

inline double parameter(const std::map<std::string, double>& params, const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

}  // namespace detail

// sum_k sqrt(weights_k) |k k ... k> on n parties of dimension weights.size().
inline PureState generalized_ghz(std::size_t n, const std::vector<double>& weights) {
  if (n < 2) throw InvalidInput("generalized_ghz: at least two parties");
  if (weights.size() < 2) throw InvalidInput("generalized_ghz: local dimension must be at least 2");
  double total = 0;
  for (double w : weights) {
    if (!(w >= 0)) throw InvalidInput("generalized_ghz: weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidInput("generalized_ghz: weights must sum to 1");
  const int d = static_cast<int>(weights.size());
  std::vector<int> dims(n, d);
  Vec v = Vec::Zero(static_cast<Eigen::Index>(detail::checked_product(dims)));
  for (int k = 0; k < d; ++k) {
    Eigen::Index idx = 0;
    for (std::size_t i = 0; i < n; ++i) idx = idx * d + k;
    v[idx] = std::sqrt(weights[static_cast<std::size_t>(k)]);
  }
  return PureState::normalized(default_labels(n), dims, v);
}

// sqrt(t)|000> + sqrt(1-t)|111>.
inline PureState ghz_class(double t) {
  if (!(t >= 0 && t <= 1)) throw InvalidInput("ghz_class: t must lie in [0, 1]");
  return detail::qubit_terms({{"000", std::sqrt(t)}, {"111", std::sqrt(1 - t)}});
}

// sqrt(p)|100> + sqrt(q)|010> + sqrt(1-p-q)|001>.
inline PureState w_class(double p, double q) {
  const double r = 1 - p - q;
  if (!(p >= 0 && q >= 0 && r >= -1e-15)) throw InvalidInput("w_class: (p, q, 1-p-q) must be a probability vector");
  return detail::qubit_terms({{"100", std::sqrt(p)}, {"010", std::sqrt(q)}, {"001", std::sqrt(std::max(0.0, r))}});
}

inline std::vector<std::string> registry_names() {
  return {"w4", "phi", "varphi", "xi", "zeta", "omega-i", "omega-ii", "eta", "ghz-class", "w-class"};
}

// Builds a registry state. Parametric entries read "t" (ghz-class) or "p" and
// "q" (w-class) from `params`.
inline ReferenceState registry_state(const std::string& name, const std::map<std::string, double>& params = {}) {
  const double s5 = std::sqrt(5.0) / 4.0;
  if (name == "w4")
    return {name, "(|1000>+|0100>+|0010>+|0001>)/2", {},
            detail::qubit_terms({{"1000", 0.5}, {"0100", 0.5}, {"0010", 0.5}, {"0001", 0.5}})};
  if (name == "phi") {
    const double a = 1 / std::sqrt(3.0);
    return {name, "(|000>+|101>+|110>)/sqrt(3)", {}, detail::qubit_terms({{"000", a}, {"101", a}, {"110", a}})};
  }
  if (name == "varphi")
    return {name, "(sqrt5/4)(|0000>+|1111>+|1010>) + (1/4)|0100>", {},
            detail::qubit_terms({{"0000", s5}, {"1111", s5}, {"0100", 0.25}, {"1010", s5}})};
  if (name == "xi")
    return {name, "(sqrt5/4)(|0000>+|0100>+|1010>) + (1/4)|1111>", {},
            detail::qubit_terms({{"0000", s5}, {"1111", 0.25}, {"0100", s5}, {"1010", s5}})};
  if (name == "zeta")
    return {name, "sqrt(5/12)|000> + (1/sqrt3)|101> + (1/2)|110>", {},
            detail::qubit_terms({{"000", std::sqrt(5.0 / 12)}, {"101", 1 / std::sqrt(3.0)}, {"110", 0.5}})};
  if (name == "omega-i")
    return {name, "sqrt(7/9)|000> + (1/3)|110> + (1/3)|111>", {},
            detail::qubit_terms({{"000", std::sqrt(7.0 / 9)}, {"110", 1.0 / 3}, {"111", 1.0 / 3}})};
  if (name == "omega-ii")
    return {name, "sqrt(7/9)|000> + (1/3)|101> + (1/3)|111>", {},
            detail::qubit_terms({{"000", std::sqrt(7.0 / 9)}, {"101", 1.0 / 3}, {"111", 1.0 / 3}})};
  if (name == "eta") {
    PureState ab1 = detail::qubit_terms({{"00", std::sqrt(0.7)}, {"11", std::sqrt(0.3)}}, {"A", "B1"});
    PureState b2c = detail::qubit_terms({{"00", std::sqrt(0.6)}, {"11", std::sqrt(0.4)}}, {"B2", "C"});
    PureState joint = tensor_product(ab1, b2c);
    // B1 and B2 are adjacent, so merging them into B keeps the amplitude order.
    PureState abc({"A", "B", "C"}, {2, 4, 2}, joint.amplitudes());
    return {name, "(sqrt.7|00>+sqrt.3|11>)^{A B1} (sqrt.6|00>+sqrt.4|11>)^{B2 C}, B = B1 B2", {}, abc};
  }
  if (name == "ghz-class") {
    double t = detail::parameter(params, "t", 0.5);
    return {name, "sqrt(t)|000> + sqrt(1-t)|111>", {{"t", t}}, ghz_class(t)};
  }
  if (name == "w-class") {
    double p = detail::parameter(params, "p", 0.5), q = detail::parameter(params, "q", 0.3);
    return {name, "sqrt(p)|100> + sqrt(q)|010> + sqrt(1-p-q)|001>", {{"p", p}, {"q", q}}, w_class(p, q)};
  }
  throw InvalidInput("unknown registry state '" + name + "'");
}

}  // namespace entmono
