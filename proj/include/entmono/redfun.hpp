#pragma once

// Reduced functions: concave nonnegative spectral functions h on density
// operators, and randomized probes of their concavity, strict concavity,
// subadditivity and additivity.
//
// Every formula is evaluated on the thresholded spectrum (eigenvalues at or
// below the effective-rank threshold count as zero) and in trace-homogeneous
// form, e.g. 1 - Tr rho^2 is computed as (Tr rho)^2 - Tr rho^2. A rank-one
// spectrum therefore yields exactly zero for every kind.

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entmono/common.hpp"
#include "entmono/qstate.hpp"

namespace entmono {

enum class ReducedKind {
  VonNeumann,
  Concurrence,
  Tangle,
  Tsallis,
  Renyi,
  NegativityReduced,
  FidelityF,
  FidelityFPrime,
  FidelityAF,
  PartialNorm2,
  PartialNormMin,
  PartialNormMinPrime,
  PartialNegativity,
  TsallisPrime,
  RenyiPrime,
};

struct ReducedFunctionSpec {
  ReducedKind kind = ReducedKind::VonNeumann;
  double param = 0.0;  // q for the Tsallis kinds, alpha for the Renyi kinds

  friend bool operator==(const ReducedFunctionSpec&, const ReducedFunctionSpec&) = default;
};

inline bool has_parameter(ReducedKind k) {
  return k == ReducedKind::Tsallis || k == ReducedKind::Renyi || k == ReducedKind::TsallisPrime ||
         k == ReducedKind::RenyiPrime;
}

inline void validate(const ReducedFunctionSpec& s) {
  const double p = s.param;
  switch (s.kind) {
    case ReducedKind::Tsallis:
      if (!(p > 0) || p == 1.0 || !std::isfinite(p)) throw InvalidInput("tsallis: q must be positive and differ from 1");
      break;
    case ReducedKind::TsallisPrime:
      if (!(p > 1) || !std::isfinite(p)) throw InvalidInput("tsallisprime: q must exceed 1");
      break;
    case ReducedKind::Renyi:
    case ReducedKind::RenyiPrime:
      if (!(p > 0 && p < 1)) throw InvalidInput("renyi: alpha must lie in (0, 1)");
      break;
    default:
      break;
  }
}

struct KindName {
  ReducedKind kind;
  const char* name;
};

inline constexpr KindName kKindNames[] = {
    {ReducedKind::VonNeumann, "entropy"},
    {ReducedKind::Concurrence, "concurrence"},
    {ReducedKind::Tangle, "tangle"},
    {ReducedKind::Tsallis, "tsallis"},
    {ReducedKind::Renyi, "renyi"},
    {ReducedKind::NegativityReduced, "negativity"},
    {ReducedKind::FidelityF, "fidelityF"},
    {ReducedKind::FidelityFPrime, "fidelityFprime"},
    {ReducedKind::FidelityAF, "fidelityAF"},
    {ReducedKind::PartialNorm2, "pnorm2"},
    {ReducedKind::PartialNormMin, "pnorm-min"},
    {ReducedKind::PartialNormMinPrime, "pnorm-minprime"},
    {ReducedKind::PartialNegativity, "pnegativity"},
    {ReducedKind::TsallisPrime, "tsallisprime"},
    {ReducedKind::RenyiPrime, "renyiprime"},
};

inline std::string format_parameter(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", p);
  return buf;
}

inline std::string format_reduced_function(const ReducedFunctionSpec& s) {
  for (const auto& kn : kKindNames)
    if (kn.kind == s.kind) return has_parameter(s.kind) ? std::string(kn.name) + ":" + format_parameter(s.param) : kn.name;
  return "unknown";
}

// Parses CLI names such as "tangle", "tsallis:2" or "renyi:0.5".
inline ReducedFunctionSpec parse_reduced_function(std::string_view text) {
  std::string_view name = text;
  std::optional<double> param;
  if (auto colon = text.find(':'); colon != std::string_view::npos) {
    name = text.substr(0, colon);
    std::string digits(text.substr(colon + 1));
    char* end = nullptr;
    double v = std::strtod(digits.c_str(), &end);
    if (digits.empty() || end != digits.c_str() + digits.size()) throw InvalidInput("reduced function: bad parameter in '" + std::string(text) + "'");
    param = v;
  }
  for (const auto& kn : kKindNames) {
    if (name != kn.name) continue;
    ReducedFunctionSpec s{kn.kind, 0.0};
    if (has_parameter(kn.kind)) {
      if (!param) throw InvalidInput("reduced function: '" + std::string(name) + "' needs a parameter, e.g. " + kn.name + ":2");
      s.param = *param;
    } else if (param) {
      throw InvalidInput("reduced function: '" + std::string(name) + "' takes no parameter");
    }
    validate(s);
    return s;
  }
  throw InvalidInput("reduced function: unknown name '" + std::string(name) + "'");
}

// h evaluated on a spectrum produced by make_spectrum or eigenvalues().
inline double h_of_spectrum(const ReducedFunctionSpec& spec, const Spectrum& sp) {
  const double cut = sp.threshold();
  std::vector<double> lam;
  for (double v : sp.eigenvalues)
    if (v > cut) lam.push_back(v);
  if (lam.empty()) return 0.0;
  double s = 0.0;
  for (double v : lam) s += v;
  auto power_sum = [&](double q) {
    double acc = 0.0;
    for (double v : lam) acc += std::pow(v, q);
    return acc;
  };
  // sum_{i<j} l_i l_j, so that (Tr rho)^2 - Tr rho^2 = 2 * pairs without cancellation.
  auto pairs = [&] {
    double acc = 0.0, run = 0.0;
    for (double v : lam) {
      acc += v * run;
      run += v;
    }
    return acc;
  };
  const std::size_t rank = lam.size();
  if (rank == 1) return 0.0;
  const double q = spec.param;
  double h = 0.0;
  switch (spec.kind) {
    case ReducedKind::VonNeumann:
      for (double v : lam) h -= v * std::log(v);
      break;
    case ReducedKind::Concurrence:
      h = std::sqrt(4.0 * pairs());
      break;
    case ReducedKind::Tangle:
      h = 4.0 * pairs();
      break;
    case ReducedKind::Tsallis:
      h = (std::pow(s, q) - power_sum(q)) / (q - 1.0);
      break;
    case ReducedKind::TsallisPrime:
      h = std::pow(s, q) - power_sum(q);
      break;
    case ReducedKind::Renyi:
      h = std::log(power_sum(q) / std::pow(s, q)) / (1.0 - q);
      break;
    case ReducedKind::RenyiPrime:
      h = power_sum(q) - std::pow(s, q);
      break;
    case ReducedKind::NegativityReduced: {
      double r = power_sum(0.5);
      h = 0.5 * (r * r - s);
      break;
    }
    case ReducedKind::FidelityF:
      h = s * s * s - power_sum(3.0);
      break;
    case ReducedKind::FidelityFPrime: {
      double p2 = s * s - 2.0 * pairs();
      h = 2.0 * pairs() * (s * s + p2);
      break;
    }
    case ReducedKind::FidelityAF:
      h = std::pow(s, 1.5) - std::sqrt(power_sum(3.0));
      break;
    case ReducedKind::PartialNorm2:
      h = s - lam.front();
      break;
    case ReducedKind::PartialNormMin:
      h = lam.back();
      break;
    case ReducedKind::PartialNormMinPrime:
      h = static_cast<double>(rank) * lam.back();
      break;
    case ReducedKind::PartialNegativity:
      h = std::sqrt(lam[0] * lam[1]);
      break;
  }
  return std::max(0.0, h);
}

inline double h_eval(const ReducedFunctionSpec& spec, const DensityOperator& op) {
  validate(spec);
  return h_of_spectrum(spec, eigenvalues(op));
}

// Marks of the property table for a reduced function.
enum class Mark {
  Holds,        // asserted to hold
  Fails,        // asserted to fail
  Conjectured,  // conjectured to hold, not proven
  Unmarked,     // no claim for this parameter range
};

enum class Property { Concavity, StrictConcavity, Subadditivity, Additivity };

inline const char* property_name(Property p) {
  switch (p) {
    case Property::Concavity: return "concavity";
    case Property::StrictConcavity: return "strict-concavity";
    case Property::Subadditivity: return "subadditivity";
    case Property::Additivity: return "additivity";
  }
  return "?";
}

inline Property parse_property(std::string_view s) {
  for (auto p : {Property::Concavity, Property::StrictConcavity, Property::Subadditivity, Property::Additivity})
    if (s == property_name(p)) return p;
  throw InvalidInput("unknown property '" + std::string(s) + "'");
}

inline const char* mark_name(Mark m) {
  switch (m) {
    case Mark::Holds: return "holds";
    case Mark::Fails: return "fails";
    case Mark::Conjectured: return "conjectured";
    case Mark::Unmarked: return "unmarked";
  }
  return "?";
}

struct PropertyMarks {
  Mark concave, strictly_concave, subadditive, additive;

  Mark of(Property p) const {
    switch (p) {
      case Property::Concavity: return concave;
      case Property::StrictConcavity: return strictly_concave;
      case Property::Subadditivity: return subadditive;
      case Property::Additivity: return additive;
    }
    return Mark::Unmarked;
  }
};

// Catalog marks. Strict concavity of pnegativity is claimed on qubits only and
// is reported as Fails for general dimension.
inline PropertyMarks property_marks(const ReducedFunctionSpec& s) {
  using M = Mark;
  const bool q_large = s.param > 1.0;
  switch (s.kind) {
    case ReducedKind::VonNeumann: return {M::Holds, M::Holds, M::Holds, M::Holds};
    case ReducedKind::Concurrence: return {M::Holds, M::Holds, M::Holds, M::Fails};
    case ReducedKind::Tangle: return {M::Holds, M::Holds, M::Holds, M::Fails};
    case ReducedKind::Tsallis:
    case ReducedKind::TsallisPrime:
      return {M::Holds, q_large ? M::Holds : M::Unmarked, q_large ? M::Holds : M::Fails, M::Fails};
    case ReducedKind::RenyiPrime: return {M::Holds, M::Unmarked, M::Fails, M::Fails};
    case ReducedKind::Renyi: return {M::Holds, M::Holds, M::Fails, M::Holds};
    case ReducedKind::NegativityReduced: return {M::Holds, M::Holds, M::Fails, M::Fails};
    case ReducedKind::FidelityF: return {M::Holds, M::Holds, M::Holds, M::Fails};
    case ReducedKind::FidelityFPrime: return {M::Holds, M::Holds, M::Conjectured, M::Fails};
    case ReducedKind::FidelityAF: return {M::Holds, M::Holds, M::Conjectured, M::Fails};
    case ReducedKind::PartialNorm2: return {M::Holds, M::Fails, M::Holds, M::Fails};
    case ReducedKind::PartialNormMin: return {M::Holds, M::Fails, M::Fails, M::Fails};
    case ReducedKind::PartialNormMinPrime: return {M::Holds, M::Fails, M::Fails, M::Fails};
    case ReducedKind::PartialNegativity: return {M::Conjectured, M::Fails, M::Conjectured, M::Fails};
  }
  return {M::Unmarked, M::Unmarked, M::Unmarked, M::Unmarked};
}

inline bool is_strictly_concave(const ReducedFunctionSpec& s) {
  return property_marks(s).strictly_concave == Mark::Holds;
}

inline bool is_subadditive_proven(const ReducedFunctionSpec& s) {
  return property_marks(s).subadditive == Mark::Holds;
}

// The whole catalog with representative parameters.
inline std::vector<ReducedFunctionSpec> catalog(bool include_parametric_variants = true) {
  std::vector<ReducedFunctionSpec> out{
      {ReducedKind::VonNeumann, 0},       {ReducedKind::Concurrence, 0},       {ReducedKind::Tangle, 0},
      {ReducedKind::Tsallis, 2.0},        {ReducedKind::Renyi, 0.5},           {ReducedKind::NegativityReduced, 0},
      {ReducedKind::FidelityF, 0},        {ReducedKind::FidelityFPrime, 0},    {ReducedKind::FidelityAF, 0},
      {ReducedKind::PartialNorm2, 0},     {ReducedKind::PartialNormMin, 0},    {ReducedKind::PartialNormMinPrime, 0},
      {ReducedKind::PartialNegativity, 0}};
  if (include_parametric_variants) {
    out.push_back({ReducedKind::Tsallis, 0.5});
    out.push_back({ReducedKind::Tsallis, 3.0});
    out.push_back({ReducedKind::TsallisPrime, 2.0});
    out.push_back({ReducedKind::RenyiPrime, 0.5});
  }
  return out;
}

// A (possibly multi-operand) state witnessing a property violation. For the
// concavity properties the operands are the two mixed components (mixed at
// `weight`); for subadditivity the single operand is the bipartite operator;
// for additivity the operands are the two factors.
struct Witness {
  std::vector<DensityOperator> operands;
  double weight = 0.5;
  double margin = 0.0;
  std::string source;
};

struct CounterexampleList {
  std::vector<Witness> items;
  std::optional<std::string> flag;
};

namespace detail {

inline double mix_margin(const ReducedFunctionSpec& spec, const DensityOperator& a, const DensityOperator& b, double w) {
  DensityOperator mix(a.labels(), a.dims(), w * a.matrix() + (1.0 - w) * b.matrix(), DensityOperator::Check::Trusted);
  return w * h_eval(spec, a) + (1.0 - w) * h_eval(spec, b) - h_eval(spec, mix);
}

inline double subadditivity_margin(const ReducedFunctionSpec& spec, const DensityOperator& ab) {
  const auto& l = ab.labels();
  return h_eval(spec, ab) - h_eval(spec, partial_trace(ab, {l[0]})) - h_eval(spec, partial_trace(ab, {l[1]}));
}

inline double additivity_margin(const ReducedFunctionSpec& spec, const DensityOperator& a, const DensityOperator& b) {
  std::vector<std::string> la{"A"}, lb{"B"};
  DensityOperator a2(la, {static_cast<int>(a.dim())}, a.matrix(), DensityOperator::Check::Trusted);
  DensityOperator b2(lb, {static_cast<int>(b.dim())}, b.matrix(), DensityOperator::Check::Trusted);
  return h_eval(spec, tensor_product(a2, b2)) - h_eval(spec, a2) - h_eval(spec, b2);
}

inline DensityOperator diagonal_operator(const std::vector<double>& d, std::vector<int> dims) {
  Mat m = Mat::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
  auto labels = default_labels(dims.size());
  return DensityOperator(std::move(labels), std::move(dims), std::move(m));
}

inline DensityOperator min_norm_witness() {
  // Equal mixture of sqrt(4/5)|00> + sqrt(1/5)|11> and sqrt(4/5)|22> + sqrt(1/5)|33>.
  Vec psi = Vec::Zero(16), phi = Vec::Zero(16);
  psi[0 * 4 + 0] = std::sqrt(0.8);
  psi[1 * 4 + 1] = std::sqrt(0.2);
  phi[2 * 4 + 2] = std::sqrt(0.8);
  phi[3 * 4 + 3] = std::sqrt(0.2);
  Mat rho = 0.5 * psi * psi.adjoint() + 0.5 * phi * phi.adjoint();
  return DensityOperator({"A", "B"}, {4, 4}, std::move(rho));
}

}  // namespace detail

inline double violation_margin(const ReducedFunctionSpec& spec, Property property, const Witness& w) {
  switch (property) {
    case Property::Concavity:
    case Property::StrictConcavity:
      return detail::mix_margin(spec, w.operands.at(0), w.operands.at(1), w.weight);
    case Property::Subadditivity:
      return detail::subadditivity_margin(spec, w.operands.at(0));
    case Property::Additivity:
      return std::abs(detail::additivity_margin(spec, w.operands.at(0), w.operands.at(1)));
  }
  return 0.0;
}

// Witnesses stated in the literature for the catalog. Empty when the property
// is asserted to hold.
inline CounterexampleList known_counterexamples(const ReducedFunctionSpec& spec, Property property) {
  CounterexampleList out;
  if (property == Property::Subadditivity &&
      (spec.kind == ReducedKind::PartialNormMin || spec.kind == ReducedKind::PartialNormMinPrime)) {
    Witness w;
    w.operands.push_back(detail::min_norm_witness());
    w.source = "stated";
    w.margin = violation_margin(spec, property, w);
    out.items.push_back(std::move(w));
  }
  if (property == Property::Subadditivity && spec.kind == ReducedKind::Renyi)
    out.flag = "non-subadditivity is asserted without an explicit witness";
  return out;
}

// Witnesses constructed for this library where random sampling is unlikely to
// find a violation: commuting pairs on which a piecewise-linear h is affine,
// and classical distributions violating Renyi subadditivity. Each returned
// witness has been checked to violate the property.
inline CounterexampleList constructed_witnesses(const ReducedFunctionSpec& spec, Property property) {
  CounterexampleList out;
  auto add = [&](std::vector<DensityOperator> operands) {
    Witness w;
    w.operands = std::move(operands);
    w.source = "constructed";
    w.margin = violation_margin(spec, property, w);
    bool violates = property == Property::StrictConcavity ? w.margin >= -1e-12 : w.margin > 1e-9;
    if (violates) out.items.push_back(std::move(w));
  };
  using detail::diagonal_operator;
  if (property == Property::StrictConcavity) {
    switch (spec.kind) {
      case ReducedKind::PartialNorm2:
        add({diagonal_operator({0.6, 0.4, 0.0}, {3}), diagonal_operator({0.6, 0.0, 0.4}, {3})});
        break;
      case ReducedKind::PartialNormMin:
      case ReducedKind::PartialNormMinPrime:
        add({diagonal_operator({0.6, 0.4}, {2}), diagonal_operator({0.7, 0.3}, {2})});
        break;
      case ReducedKind::PartialNegativity:
        add({diagonal_operator({0.4, 0.4, 0.2}, {3}), diagonal_operator({0.45, 0.45, 0.1}, {3})});
        break;
      default:
        break;
    }
  }
  if (property == Property::Subadditivity &&
      (spec.kind == ReducedKind::Renyi || spec.kind == ReducedKind::RenyiPrime || spec.kind == ReducedKind::Tsallis ||
       spec.kind == ReducedKind::NegativityReduced)) {
    add({diagonal_operator({0.01, 0.97, 0.01, 0.01}, {2, 2})});
    add({diagonal_operator({0.94, 0.02, 0.02, 0.02}, {2, 2})});
  }
  return out;
}

enum class Preload { None, Stated, StatedAndConstructed };

// Sampling of random operators. FullRank draws from the Hilbert-Schmidt
// measure; MixedRank draws the rank uniformly first, which exposes effects of
// rank changes under mixing.
enum class RankMode { FullRank, MixedRank };

struct ProbeOptions {
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  // Single-system dimension for the concavity properties is the product of dims.
  std::vector<int> dims{2, 2};
  Preload preload = Preload::Stated;
  RankMode ranks = RankMode::FullRank;
};

struct ProbeReport {
  ReducedFunctionSpec spec;
  Property property = Property::Concavity;
  std::size_t trials = 0;
  std::size_t violations = 0;
  std::size_t preloaded = 0;
  std::size_t preloaded_violations = 0;
  double worst_margin = 0.0;  // largest observed violation margin
  std::optional<Witness> witness;
  Mark expectation = Mark::Unmarked;
  std::vector<std::string> notes;

  std::size_t total_violations() const { return violations + preloaded_violations; }
};

namespace detail {

inline DensityOperator sample_operator(const std::vector<int>& dims, Rng& rng, bool full_rank) {
  std::size_t d = checked_product(dims);
  std::size_t rank = d;
  if (!full_rank) rank = std::uniform_int_distribution<std::size_t>(1, d)(rng);
  return random_density_operator(dims, rank, rng());
}

}  // namespace detail

// Randomized probe of one property. Trials are independent and seeded by
// (seed, trial index); the report does not depend on the worker count.
inline ProbeReport property_probe(const ReducedFunctionSpec& spec, Property property, const ProbeOptions& opts = {}) {
  validate(spec);
  if (opts.trials < 1) throw InvalidInput("property_probe: trials must be at least 1");
  ProbeReport rep;
  rep.spec = spec;
  rep.property = property;
  rep.trials = opts.trials;
  rep.expectation = property_marks(spec).of(property);

  std::vector<int> dims = opts.dims;
  if (dims.size() < 2 && (property == Property::Subadditivity || property == Property::Additivity))
    throw InvalidInput("property_probe: subadditivity and additivity need two dims");
  const int single = static_cast<int>(detail::checked_product(dims));
  std::vector<int> single_dims{single};
  if (property == Property::StrictConcavity && spec.kind == ReducedKind::PartialNegativity) {
    single_dims = {2};
    rep.notes.push_back("strict concavity probed on qubit operators only; general dimension is not asserted");
  }
  if (property == Property::Concavity || property == Property::StrictConcavity) dims = single_dims;

  const bool full = opts.ranks == RankMode::FullRank;
  std::vector<Witness> samples(opts.trials);
  parallel_for(opts.trials, [&](std::size_t t) {
    Rng rng(derive_seed(opts.seed, t));
    Witness w;
    switch (property) {
      case Property::Concavity: {
        w.operands.push_back(detail::sample_operator(dims, rng, full));
        w.operands.push_back(detail::sample_operator(dims, rng, full));
        w.weight = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        break;
      }
      case Property::StrictConcavity: {
        w.operands.push_back(detail::sample_operator(dims, rng, true));
        w.operands.push_back(detail::sample_operator(dims, rng, true));
        w.weight = 0.5;
        break;
      }
      case Property::Subadditivity: {
        w.operands.push_back(detail::sample_operator({dims[0], dims[1]}, rng, full));
        break;
      }
      case Property::Additivity: {
        w.operands.push_back(detail::sample_operator({dims[0]}, rng, full));
        w.operands.push_back(detail::sample_operator({dims[1]}, rng, full));
        break;
      }
    }
    w.margin = violation_margin(spec, property, w);
    w.source = "random";
    samples[t] = std::move(w);
  });

  auto violates = [&](double margin) {
    return property == Property::StrictConcavity ? margin >= -1e-12 : margin > 1e-9;
  };
  auto consider = [&](Witness& w, bool preloaded) {
    if (!violates(w.margin)) return;
    if (preloaded)
      ++rep.preloaded_violations;
    else
      ++rep.violations;
    if (!rep.witness || w.margin > rep.worst_margin) {
      rep.worst_margin = w.margin;
      rep.witness = w;
    }
  };

  std::vector<Witness> preloads;
  if (opts.preload != Preload::None) {
    auto stated = known_counterexamples(spec, property);
    if (stated.flag) rep.notes.push_back(*stated.flag);
    for (auto& w : stated.items) preloads.push_back(std::move(w));
  }
  if (opts.preload == Preload::StatedAndConstructed)
    for (auto& w : constructed_witnesses(spec, property).items) preloads.push_back(std::move(w));
  rep.preloaded = preloads.size();
  for (auto& w : preloads) consider(w, true);
  for (auto& w : samples) consider(w, false);
  return rep;
}

}  // namespace entmono
