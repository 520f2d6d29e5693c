#pragma once

// Pure-state multipartite measures built from a reduced function h.
//
// For a pure state regrouped into parties P_1, ..., P_n:
//   sum          1/2 sum_i h(rho^{P_i})
//   max          max_i h(rho^{P_i})
//   sum-bipart   1/2 sum over unordered bipartitions S|S' of h(rho^S)
//   max-bipart   max over subsets S with |S| <= n/2 of h(rho^S)
//   g*           0 unless every single-party marginal has h > kGateEpsilon,
//                otherwise the value of the plain family
//   gmin         min_i h(rho^{P_i}), gated
//   gmin-bipart  min over unordered bipartitions of h(rho^S), gated
// With h = concurrence, gmin-bipart is the genuinely multipartite concurrence.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "entmono/common.hpp"
#include "entmono/partitions.hpp"
#include "entmono/qstate.hpp"
#include "entmono/redfun.hpp"

namespace entmono {

enum class Family { Sum, SumBipart, Max, MaxBipart, GSum, GSumBipart, GMax, GMaxBipart, GMin, GMinBipart };

inline constexpr Family kAllFamilies[] = {Family::Sum,  Family::SumBipart,  Family::Max,  Family::MaxBipart,
                                          Family::GSum, Family::GSumBipart, Family::GMax, Family::GMaxBipart,
                                          Family::GMin, Family::GMinBipart};

inline const char* family_name(Family f) {
  switch (f) {
    case Family::Sum: return "sum";
    case Family::SumBipart: return "sum-bipart";
    case Family::Max: return "max";
    case Family::MaxBipart: return "max-bipart";
    case Family::GSum: return "gsum";
    case Family::GSumBipart: return "gsum-bipart";
    case Family::GMax: return "gmax";
    case Family::GMaxBipart: return "gmax-bipart";
    case Family::GMin: return "gmin";
    case Family::GMinBipart: return "gmin-bipart";
  }
  return "?";
}

inline Family parse_family(std::string_view s) {
  for (auto f : kAllFamilies)
    if (s == family_name(f)) return f;
  throw InvalidInput("unknown measure family '" + std::string(s) + "'");
}

inline bool is_genuine(Family f) {
  return f == Family::GSum || f == Family::GSumBipart || f == Family::GMax || f == Family::GMaxBipart ||
         f == Family::GMin || f == Family::GMinBipart;
}

inline bool is_bipart(Family f) {
  return f == Family::SumBipart || f == Family::MaxBipart || f == Family::GSumBipart || f == Family::GMaxBipart ||
         f == Family::GMinBipart;
}

enum class Reduction { Sum, Max, Min };

inline Reduction reduction_of(Family f) {
  switch (f) {
    case Family::Sum:
    case Family::SumBipart:
    case Family::GSum:
    case Family::GSumBipart: return Reduction::Sum;
    case Family::Max:
    case Family::MaxBipart:
    case Family::GMax:
    case Family::GMaxBipart: return Reduction::Max;
    case Family::GMin:
    case Family::GMinBipart: return Reduction::Min;
  }
  return Reduction::Sum;
}

struct MeasureSpec {
  Family family = Family::Sum;
  ReducedFunctionSpec h;

  friend bool operator==(const MeasureSpec&, const MeasureSpec&) = default;
};

inline std::string format_measure(const MeasureSpec& m) {
  return std::string(family_name(m.family)) + "/" + format_reduced_function(m.h);
}

inline constexpr double kGateEpsilon = 1e-9;
inline constexpr std::size_t kMaxBipartitionParties = 8;

struct BipartitionIndex {
  std::size_t parties = 0;
  std::vector<std::vector<int>> subsets;  // party indices, ascending
};

// One representative subset per unordered bipartition, ordered by size and
// then lexicographically. For even n the half-size subsets containing the last
// party are dropped.
inline BipartitionIndex bipartition_subsets(std::size_t n) {
  if (n < 2 || n > kMaxBipartitionParties) throw DimensionGuard("bipartition_subsets: party count must lie in [2, 8]");
  BipartitionIndex out;
  out.parties = n;
  for (std::size_t size = 1; size <= n / 2; ++size) {
    std::vector<std::vector<int>> this_size;
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) {
      if (static_cast<std::size_t>(std::popcount(m)) != size) continue;
      if (2 * size == n && (m >> (n - 1)) & 1) continue;
      std::vector<int> s;
      for (std::size_t k = 0; k < n; ++k)
        if ((m >> k) & 1) s.push_back(static_cast<int>(k));
      this_size.push_back(std::move(s));
    }
    std::sort(this_size.begin(), this_size.end());
    for (auto& s : this_size) out.subsets.push_back(std::move(s));
  }
  return out;
}

// Every subset with 1 <= |S| <= n/2, without deduplication.
inline std::vector<std::vector<int>> small_subsets(std::size_t n) {
  std::vector<std::vector<int>> out;
  for (std::size_t size = 1; size <= n / 2; ++size) {
    std::vector<std::vector<int>> this_size;
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) {
      if (static_cast<std::size_t>(std::popcount(m)) != size) continue;
      std::vector<int> s;
      for (std::size_t k = 0; k < n; ++k)
        if ((m >> k) & 1) s.push_back(static_cast<int>(k));
      this_size.push_back(std::move(s));
    }
    std::sort(this_size.begin(), this_size.end());
    for (auto& s : this_size) out.push_back(std::move(s));
  }
  return out;
}

namespace detail {

// Precomputed index maps that evaluate one measure on pure states of a fixed
// layout (one party per site). Reused across calls by the convex roof.
class PureEvaluator {
 public:
  PureEvaluator(const MeasureSpec& spec, std::vector<int> dims) : spec_(spec), dims_(std::move(dims)) {
    validate(spec_.h);
    const std::size_t n = dims_.size();
    if (n < 2) throw InvalidInput("measure: fewer than two parties");
    if (is_bipart(spec_.family) && n > kMaxBipartitionParties)
      throw DimensionGuard("measure: bipartition families support at most 8 parties");
    all_ = (std::uint64_t{1} << n) - 1;
    const bool need_singles = !is_bipart(spec_.family) || is_genuine(spec_.family);
    if (need_singles)
      for (std::size_t i = 0; i < n; ++i) singles_.push_back(cut_index({static_cast<int>(i)}));
    if (is_bipart(spec_.family)) {
      auto subsets = spec_.family == Family::MaxBipart || spec_.family == Family::GMaxBipart
                         ? small_subsets(n)
                         : bipartition_subsets(n).subsets;
      for (const auto& s : subsets) biparts_.push_back(cut_index(s));
    }
  }

  const MeasureSpec& spec() const { return spec_; }
  const std::vector<int>& dims() const { return dims_; }

  // The measure of a normalized state vector.
  double operator()(const Vec& psi) const {
    std::vector<double> values(cuts_.size(), -1.0);
    auto value = [&](std::size_t c) {
      if (values[c] < 0) values[c] = h_cut(cuts_[c], psi);
      return values[c];
    };
    std::vector<double> terms;
    terms.reserve(std::max(singles_.size(), biparts_.size()));
    for (std::size_t c : singles_) {
      double v = value(c);
      if (is_genuine(spec_.family) && v <= kGateEpsilon) return 0.0;
      terms.push_back(v);
    }
    if (is_bipart(spec_.family)) {
      terms.clear();
      for (std::size_t c : biparts_) terms.push_back(value(c));
    }
    switch (reduction_of(spec_.family)) {
      case Reduction::Sum:
        return 0.5 * compensated_sum(terms);
      case Reduction::Max:
        return *std::max_element(terms.begin(), terms.end());
      case Reduction::Min: {
        double v = *std::min_element(terms.begin(), terms.end());
        return v <= kGateEpsilon ? 0.0 : v;
      }
    }
    return 0.0;
  }

  // Whether every single-party marginal has h above the gate threshold.
  bool gate(const Vec& psi) const {
    for (std::size_t i = 0; i < dims_.size(); ++i)
      if (h_of({static_cast<int>(i)}, psi) <= kGateEpsilon) return false;
    return true;
  }

  // h of the marginal on the given parties.
  double h_of(const std::vector<int>& parties, const Vec& psi) const { return h_cut(make_cut(mask_of(parties)), psi); }

 private:
  // A bipartition of the sites. Quadratic kinds use the 2x2 minors of the
  // coefficient matrix (the second elementary symmetric function of the
  // spectrum), which stays accurate near product states.
  struct Cut {
    std::uint64_t mask = 0;
    SiteSplit split;
    bool inner_smaller = true;
    std::vector<std::array<std::size_t, 4>> minors;
  };

  static constexpr std::size_t kMaxMinors = 1u << 14;

  std::uint64_t mask_of(const std::vector<int>& parties) const {
    std::uint64_t m = 0;
    for (int p : parties) m |= std::uint64_t{1} << p;
    return m;
  }

  bool uses_minors() const { return spec_.h.kind == ReducedKind::Tangle || spec_.h.kind == ReducedKind::Concurrence; }

  Cut make_cut(std::uint64_t mask) const {
    Cut c;
    c.mask = mask;
    std::vector<int> parties;
    for (std::size_t k = 0; k < dims_.size(); ++k)
      if ((mask >> k) & 1) parties.push_back(static_cast<int>(k));
    c.split = split_sites(dims_, parties);
    c.inner_smaller = c.split.inner_dim <= c.split.outer_dim;
    const std::size_t rows = c.split.inner_dim, cols = c.split.outer_dim;
    if (uses_minors() && rows * (rows - 1) / 2 * (cols * (cols - 1) / 2) <= kMaxMinors) {
      std::vector<std::size_t> at(rows * cols);
      for (std::size_t g = 0; g < c.split.inner.size(); ++g) at[c.split.inner[g] * cols + c.split.outer[g]] = g;
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = i + 1; j < rows; ++j)
          for (std::size_t a = 0; a < cols; ++a)
            for (std::size_t b = a + 1; b < cols; ++b)
              c.minors.push_back({at[i * cols + a], at[j * cols + b], at[i * cols + b], at[j * cols + a]});
    }
    return c;
  }

  std::size_t cut_index(const std::vector<int>& parties) {
    std::uint64_t m = mask_of(parties);
    std::uint64_t canon = std::min(m, all_ ^ m);
    for (std::size_t i = 0; i < cuts_.size(); ++i)
      if (std::min(cuts_[i].mask, all_ ^ cuts_[i].mask) == canon) return i;
    cuts_.push_back(make_cut(m));
    return cuts_.size() - 1;
  }

  double h_cut(const Cut& c, const Vec& psi) const {
    if (!c.minors.empty()) {
      double e2 = 0.0;
      for (const auto& q : c.minors)
        e2 += std::norm(psi[static_cast<Eigen::Index>(q[0])] * psi[static_cast<Eigen::Index>(q[1])] -
                        psi[static_cast<Eigen::Index>(q[2])] * psi[static_cast<Eigen::Index>(q[3])]);
      return spec_.h.kind == ReducedKind::Tangle ? 4.0 * e2 : 2.0 * std::sqrt(e2);
    }
    const auto rows = static_cast<Eigen::Index>(c.split.inner_dim);
    const auto cols = static_cast<Eigen::Index>(c.split.outer_dim);
    Mat m(rows, cols);
    const std::size_t d = c.split.inner.size();
    for (std::size_t g = 0; g < d; ++g) m(c.split.inner[g], c.split.outer[g]) = psi[static_cast<Eigen::Index>(g)];
    Mat gram = c.inner_smaller ? Mat(m * m.adjoint()) : Mat(m.adjoint() * m);
    return h_of_spectrum(spec_.h, hermitian_spectrum(gram));
  }

  MeasureSpec spec_;
  std::vector<int> dims_;
  std::uint64_t all_ = 0;
  std::vector<Cut> cuts_;
  std::vector<std::size_t> singles_;
  std::vector<std::size_t> biparts_;
};

inline PureState regroup_for_measure(const PureState& state, const Partition& partition) {
  if (partition.size() < 2) throw InvalidInput("measure: partition needs at least two blocks");
  std::vector<std::string> support = partition.support();
  if (!pure_marginal(state, support))
    throw InvalidInput("measure: the marginal on '" + format_partition(partition) +
                       "' is mixed; evaluate it with the convex roof");
  return regroup(state, partition);
}

}  // namespace detail

inline double measure_pure(const MeasureSpec& spec, const PureState& state, const Partition& partition) {
  PureState g = detail::regroup_for_measure(state, partition);
  detail::PureEvaluator eval(spec, g.dims());
  return eval(g.amplitudes());
}

inline double measure_pure(const MeasureSpec& spec, const PureState& state) {
  return measure_pure(spec, state, Partition::singletons(state.labels()));
}

inline bool genuine_gate(const ReducedFunctionSpec& h, const PureState& state, const Partition& partition) {
  PureState g = detail::regroup_for_measure(state, partition);
  detail::PureEvaluator eval({Family::GSum, h}, g.dims());
  return eval.gate(g.amplitudes());
}

}  // namespace entmono
