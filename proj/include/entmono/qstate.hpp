#pragma once

// Dense multipartite states over a labelled tensor factorization.
//
// Amplitudes and matrix entries are indexed row-major over the labels, the first
// label being the most significant digit. A state on labels (A, B) with dims
// (2, 3) stores the amplitude of |a b> at index 3a + b.

#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "entmono/common.hpp"
#include "entmono/partitions.hpp"

namespace entmono {

inline constexpr std::size_t kMaxGlobalDim = 4096;
inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kSpectrumTolerance = 1e-10;
inline constexpr double kRankThreshold = 1e-10;

struct Spectrum {
  std::vector<double> eigenvalues;  // descending, clamped at zero
  std::size_t effective_rank = 0;

  double threshold() const {
    double top = eigenvalues.empty() ? 0.0 : eigenvalues.front();
    return kRankThreshold * std::max(1.0, top);
  }
};

// Builds a Spectrum from raw eigenvalues of a Hermitian matrix.
inline Spectrum make_spectrum(std::vector<double> values) {
  for (auto& v : values) v = std::max(0.0, v);
  std::sort(values.begin(), values.end(), std::greater<>());
  Spectrum s;
  s.eigenvalues = std::move(values);
  double cut = s.threshold();
  s.effective_rank = static_cast<std::size_t>(
      std::count_if(s.eigenvalues.begin(), s.eigenvalues.end(), [cut](double v) { return v > cut; }));
  return s;
}

inline std::vector<std::string> default_labels(std::size_t n) {
  if (n > 26) throw InvalidInput("default_labels: more than 26 parties");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(1, static_cast<char>('A' + i));
  return out;
}

namespace detail {

inline std::size_t checked_product(const std::vector<int>& dims) {
  std::size_t d = 1;
  for (int k : dims) {
    if (k < 1) throw InvalidInput("state: local dimension must be positive");
    d *= static_cast<std::size_t>(k);
    if (d > kMaxGlobalDim) throw DimensionGuard("state: global dimension exceeds " + std::to_string(kMaxGlobalDim));
  }
  return d;
}

inline void validate_layout(const std::vector<std::string>& labels, const std::vector<int>& dims) {
  if (labels.empty()) throw InvalidInput("state: no labels");
  if (labels.size() != dims.size()) throw InvalidInput("state: labels and dims differ in length");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto& l = labels[i];
    if (l.empty()) throw InvalidInput("state: empty label");
    if (l.find_first_of("|, \t\n") != std::string::npos) throw InvalidInput("state: label '" + l + "' contains a separator");
    for (std::size_t j = 0; j < i; ++j)
      if (labels[j] == l) throw InvalidInput("state: duplicate label '" + l + "'");
    if (dims[i] < 2) throw InvalidInput("state: local dimension of '" + l + "' is below 2");
  }
  checked_product(dims);
}

// For every global index, its index within the sites `group` and within the
// remaining sites, both row-major in site order.
struct SiteSplit {
  std::vector<std::size_t> inner;
  std::vector<std::size_t> outer;
  std::size_t inner_dim = 1;
  std::size_t outer_dim = 1;
};

inline SiteSplit split_sites(const std::vector<int>& dims, const std::vector<int>& group) {
  const std::size_t n = dims.size();
  std::vector<bool> in(n, false);
  for (int g : group) in[g] = true;
  std::vector<std::size_t> stride(n, 1);
  SiteSplit s;
  // Strides: sites of each side keep their relative order, last site fastest.
  for (std::size_t k = n; k-- > 0;) {
    if (in[k]) {
      stride[k] = s.inner_dim;
      s.inner_dim *= dims[k];
    } else {
      stride[k] = s.outer_dim;
      s.outer_dim *= dims[k];
    }
  }
  std::size_t total = s.inner_dim * s.outer_dim;
  s.inner.assign(total, 0);
  s.outer.assign(total, 0);
  std::vector<int> digit(n, 0);
  std::size_t inner = 0, outer = 0;
  for (std::size_t g = 0; g < total; ++g) {
    s.inner[g] = inner;
    s.outer[g] = outer;
    for (std::size_t k = n; k-- > 0;) {
      std::size_t& acc = in[k] ? inner : outer;
      if (++digit[k] < dims[k]) {
        acc += stride[k];
        break;
      }
      acc -= stride[k] * (dims[k] - 1);
      digit[k] = 0;
    }
  }
  return s;
}

// Global index mapping for reordering sites: result[g] is the index of basis
// state g in the layout whose site order is `order`.
inline std::vector<std::size_t> permutation_map(const std::vector<int>& dims, const std::vector<int>& order) {
  const std::size_t n = dims.size();
  if (order.size() != n) throw InvalidInput("permute: order is not a permutation of the sites");
  std::vector<std::size_t> stride(n, 0);
  std::size_t acc = 1;
  for (std::size_t k = n; k-- > 0;) {
    if (order[k] < 0 || static_cast<std::size_t>(order[k]) >= n || stride[order[k]] != 0)
      throw InvalidInput("permute: order is not a permutation of the sites");
    stride[order[k]] = acc;
    acc *= dims[order[k]];
  }
  std::vector<std::size_t> out(acc);
  std::vector<int> digit(n, 0);
  std::size_t idx = 0;
  for (std::size_t g = 0; g < acc; ++g) {
    out[g] = idx;
    for (std::size_t k = n; k-- > 0;) {
      if (++digit[k] < dims[k]) {
        idx += stride[k];
        break;
      }
      idx -= stride[k] * (dims[k] - 1);
      digit[k] = 0;
    }
  }
  return out;
}

inline std::vector<int> site_indices(const std::vector<std::string>& labels, const std::vector<std::string>& keep) {
  if (keep.empty()) throw InvalidInput("partial_trace: empty keep set");
  std::vector<int> out;
  for (const auto& k : keep) {
    auto it = std::find(labels.begin(), labels.end(), k);
    if (it == labels.end()) throw InvalidInput("partial_trace: unknown label '" + k + "'");
    int i = static_cast<int>(it - labels.begin());
    if (std::find(out.begin(), out.end(), i) != out.end()) throw InvalidInput("partial_trace: duplicate label '" + k + "'");
    out.push_back(i);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

class PureState {
 public:
  // Validates the layout and normalization (within 1e-12).
  PureState(std::vector<std::string> labels, std::vector<int> dims, Vec amplitudes)
      : labels_(std::move(labels)), dims_(std::move(dims)), amplitudes_(std::move(amplitudes)) {
    detail::validate_layout(labels_, dims_);
    if (static_cast<std::size_t>(amplitudes_.size()) != detail::checked_product(dims_))
      throw InvalidInput("state: amplitude count does not match dims");
    double norm2 = amplitudes_.squaredNorm();
    if (!std::isfinite(norm2) || std::abs(norm2 - 1.0) > kNormTolerance)
      throw InvalidInput("state: amplitudes are not normalized");
  }

  // Normalizes an arbitrary nonzero vector first.
  static PureState normalized(std::vector<std::string> labels, std::vector<int> dims, Vec amplitudes) {
    double n = amplitudes.norm();
    if (!(n > 0) || !std::isfinite(n)) throw InvalidInput("state: zero or non-finite amplitude vector");
    return PureState(std::move(labels), std::move(dims), amplitudes / n);
  }

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<int>& dims() const { return dims_; }
  const Vec& amplitudes() const { return amplitudes_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  std::size_t parties() const { return labels_.size(); }

 private:
  std::vector<std::string> labels_;
  std::vector<int> dims_;
  Vec amplitudes_;
};

class DensityOperator {
 public:
  enum class Check { Full, Trusted };

  // Validates hermiticity, trace and positivity. `Check::Trusted` skips the
  // eigenvalue test for operators produced internally from valid states.
  DensityOperator(std::vector<std::string> labels, std::vector<int> dims, Mat matrix, Check check = Check::Full)
      : labels_(std::move(labels)), dims_(std::move(dims)), matrix_(std::move(matrix)) {
    detail::validate_layout(labels_, dims_);
    auto d = static_cast<Eigen::Index>(detail::checked_product(dims_));
    if (matrix_.rows() != d || matrix_.cols() != d) throw InvalidInput("density: matrix size does not match dims");
    if (!matrix_.allFinite()) throw InvalidInput("density: non-finite entries");
    double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kHermitianTolerance) throw InvalidInput("density: matrix is not Hermitian");
    matrix_ = 0.5 * (matrix_ + matrix_.adjoint()).eval();
    if (std::abs(matrix_.trace().real() - 1.0) > kHermitianTolerance) throw InvalidInput("density: trace is not 1");
    if (check == Check::Full) {
      Eigen::SelfAdjointEigenSolver<Mat> es(matrix_, Eigen::EigenvaluesOnly);
      if (es.eigenvalues().minCoeff() < -kSpectrumTolerance) throw InvalidInput("density: matrix is not positive semidefinite");
    }
  }

  static DensityOperator from_pure(const PureState& psi) {
    const Vec& a = psi.amplitudes();
    return DensityOperator(psi.labels(), psi.dims(), a * a.adjoint(), Check::Trusted);
  }

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<int>& dims() const { return dims_; }
  const Mat& matrix() const { return matrix_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  std::size_t parties() const { return labels_.size(); }

 private:
  std::vector<std::string> labels_;
  std::vector<int> dims_;
  Mat matrix_;
};

template <class State>
std::vector<int> dims_of(const State& s, const std::vector<int>& sites) {
  std::vector<int> out;
  for (int i : sites) out.push_back(s.dims()[i]);
  return out;
}

template <class State>
std::vector<std::string> labels_of(const State& s, const std::vector<int>& sites) {
  std::vector<std::string> out;
  for (int i : sites) out.push_back(s.labels()[i]);
  return out;
}

// Reduced operator on the sites `sites` (sorted) of a pure state.
inline Mat reduced_matrix(const Vec& psi, const std::vector<int>& dims, const std::vector<int>& sites) {
  detail::SiteSplit s = detail::split_sites(dims, sites);
  Mat m = Mat::Zero(static_cast<Eigen::Index>(s.inner_dim), static_cast<Eigen::Index>(s.outer_dim));
  for (std::size_t g = 0; g < s.inner.size(); ++g) m(s.inner[g], s.outer[g]) = psi[static_cast<Eigen::Index>(g)];
  return m * m.adjoint();
}

inline DensityOperator partial_trace(const PureState& state, const std::vector<std::string>& keep) {
  auto sites = detail::site_indices(state.labels(), keep);
  Mat r = reduced_matrix(state.amplitudes(), state.dims(), sites);
  return DensityOperator(labels_of(state, sites), dims_of(state, sites), std::move(r), DensityOperator::Check::Trusted);
}

inline DensityOperator partial_trace(const DensityOperator& op, const std::vector<std::string>& keep) {
  auto sites = detail::site_indices(op.labels(), keep);
  detail::SiteSplit s = detail::split_sites(op.dims(), sites);
  Mat r = Mat::Zero(static_cast<Eigen::Index>(s.inner_dim), static_cast<Eigen::Index>(s.inner_dim));
  const Mat& m = op.matrix();
  const std::size_t d = s.inner.size();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (s.outer[i] == s.outer[j]) r(s.inner[i], s.inner[j]) += m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return DensityOperator(labels_of(op, sites), dims_of(op, sites), std::move(r), DensityOperator::Check::Trusted);
}

// Spectrum of a Hermitian matrix without validating it as a density operator.
inline Spectrum hermitian_spectrum(const Mat& m) {
  if (m.rows() == 1) return make_spectrum({m(0, 0).real()});
  if (m.rows() == 2) {
    double a = m(0, 0).real(), d = m(1, 1).real();
    double off = std::norm(m(0, 1));
    double mean = 0.5 * (a + d);
    double rad = std::sqrt(0.25 * (a - d) * (a - d) + off);
    double hi = mean + rad;
    double det = a * d - off;
    double lo = hi > 0 ? det / hi : mean - rad;
    return make_spectrum({hi, lo});
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return make_spectrum(std::vector<double>(ev.data(), ev.data() + ev.size()));
}

inline Spectrum eigenvalues(const DensityOperator& op) {
  const Mat& m = op.matrix();
  double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTolerance) throw InvalidInput("eigenvalues: operator is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  if (ev.minCoeff() < -kSpectrumTolerance) throw InvalidInput("eigenvalues: negative eigenvalue beyond tolerance");
  return make_spectrum(std::vector<double>(ev.data(), ev.data() + ev.size()));
}

// Eigen-decomposition restricted to the effective support: eigenvalues are
// descending and the columns of `vectors` are the matching eigenvectors.
struct Eigensystem {
  std::vector<double> values;
  Mat vectors;
};

inline Eigensystem support_eigensystem(const DensityOperator& op) {
  Eigen::SelfAdjointEigenSolver<Mat> es(op.matrix());
  const auto& ev = es.eigenvalues();
  Spectrum sp = make_spectrum(std::vector<double>(ev.data(), ev.data() + ev.size()));
  Eigensystem out;
  const Eigen::Index d = ev.size();
  out.vectors.resize(d, static_cast<Eigen::Index>(sp.effective_rank));
  for (std::size_t k = 0; k < sp.effective_rank; ++k) {
    Eigen::Index src = d - 1 - static_cast<Eigen::Index>(k);
    out.values.push_back(std::max(0.0, ev[src]));
    out.vectors.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(src);
  }
  return out;
}

// Reorders sites according to `order` (a permutation of site indices).
inline PureState permute_sites(const PureState& s, const std::vector<int>& order) {
  auto map = detail::permutation_map(s.dims(), order);
  Vec out(s.amplitudes().size());
  for (std::size_t g = 0; g < map.size(); ++g) out[static_cast<Eigen::Index>(map[g])] = s.amplitudes()[static_cast<Eigen::Index>(g)];
  return PureState(labels_of(s, order), dims_of(s, order), std::move(out));
}

inline DensityOperator permute_sites(const DensityOperator& op, const std::vector<int>& order) {
  auto map = detail::permutation_map(op.dims(), order);
  const Eigen::Index d = op.matrix().rows();
  Mat out(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) out(static_cast<Eigen::Index>(map[i]), static_cast<Eigen::Index>(map[j])) = op.matrix()(i, j);
  return DensityOperator(labels_of(op, order), dims_of(op, order), std::move(out), DensityOperator::Check::Trusted);
}

namespace detail {

template <class State>
void check_partition_labels(const State& s, const Partition& p) {
  for (const auto& b : p.blocks())
    for (const auto& l : b)
      if (std::find(s.labels().begin(), s.labels().end(), l) == s.labels().end())
        throw InvalidInput("regroup: block label '" + l + "' is not a label of the state");
  if (p.size() == 0) throw InvalidInput("regroup: partition has no blocks");
}

template <class State>
std::vector<int> block_sites(const State& s, const Partition& p, std::size_t i) {
  std::vector<int> out;
  for (const auto& l : p.block(i)) out.push_back(static_cast<int>(std::find(s.labels().begin(), s.labels().end(), l) - s.labels().begin()));
  std::sort(out.begin(), out.end());
  return out;
}

template <class State>
void regroup_layout(const State& s, const Partition& p, std::vector<int>& order, std::vector<std::string>& labels,
                    std::vector<int>& dims) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto sites = block_sites(s, p, i);
    int d = 1;
    std::string name = format_partition(Partition({p.block(i)}, p.universe()));
    for (int k : sites) {
      order.push_back(k);
      d *= s.dims()[k];
    }
    labels.push_back(name);
    dims.push_back(d);
  }
}

}  // namespace detail

// One party per block, named by the block, with the product dimension. Labels
// outside every block are traced out, which requires them to factor off in the
// pure case.
inline DensityOperator regroup(const DensityOperator& op, const Partition& p) {
  detail::check_partition_labels(op, p);
  std::vector<std::string> support = p.support();
  DensityOperator reduced = support.size() == op.labels().size() ? op : partial_trace(op, support);
  std::vector<int> order;
  std::vector<std::string> labels;
  std::vector<int> dims;
  detail::regroup_layout(reduced, p, order, labels, dims);
  DensityOperator permuted = permute_sites(reduced, order);
  return DensityOperator(std::move(labels), std::move(dims), permuted.matrix(), DensityOperator::Check::Trusted);
}

// Tolerance on the largest eigenvalue for treating a marginal as pure.
inline constexpr double kPurityTolerance = 1e-10;

// The pure state on `keep` when the marginal there is pure, otherwise nothing.
inline std::optional<PureState> pure_marginal(const PureState& s, const std::vector<std::string>& keep) {
  auto sites = detail::site_indices(s.labels(), keep);
  if (sites.size() == s.labels().size()) return s;
  Mat r = reduced_matrix(s.amplitudes(), s.dims(), sites);
  Eigen::SelfAdjointEigenSolver<Mat> es(r);
  Eigen::Index top = r.rows() - 1;
  if (es.eigenvalues()[top] < 1.0 - kPurityTolerance) return std::nullopt;
  Vec v = es.eigenvectors().col(top);
  // Fix the global phase on the largest component for reproducibility.
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  v *= std::conj(v[arg]) / std::abs(v[arg]);
  return PureState::normalized(labels_of(s, sites), dims_of(s, sites), v);
}

inline PureState regroup(const PureState& s, const Partition& p) {
  detail::check_partition_labels(s, p);
  std::vector<std::string> support = p.support();
  std::optional<PureState> reduced = pure_marginal(s, support);
  if (!reduced) throw InvalidInput("regroup: the marginal on the partition support is mixed");
  std::vector<int> order;
  std::vector<std::string> labels;
  std::vector<int> dims;
  detail::regroup_layout(*reduced, p, order, labels, dims);
  PureState permuted = permute_sites(*reduced, order);
  return PureState(std::move(labels), std::move(dims), permuted.amplitudes());
}

inline PureState tensor_product(const PureState& a, const PureState& b) {
  std::vector<std::string> labels = a.labels();
  for (const auto& l : b.labels()) {
    if (std::find(labels.begin(), labels.end(), l) != labels.end()) throw InvalidInput("tensor_product: label collision on '" + l + "'");
    labels.push_back(l);
  }
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  detail::checked_product(dims);
  Vec out(static_cast<Eigen::Index>(a.dim() * b.dim()));
  for (Eigen::Index i = 0; i < a.amplitudes().size(); ++i)
    out.segment(i * b.amplitudes().size(), b.amplitudes().size()) = a.amplitudes()[i] * b.amplitudes();
  return PureState::normalized(std::move(labels), std::move(dims), std::move(out));
}

inline DensityOperator tensor_product(const DensityOperator& a, const DensityOperator& b) {
  std::vector<std::string> labels = a.labels();
  for (const auto& l : b.labels()) {
    if (std::find(labels.begin(), labels.end(), l) != labels.end()) throw InvalidInput("tensor_product: label collision on '" + l + "'");
    labels.push_back(l);
  }
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  detail::checked_product(dims);
  const Eigen::Index da = a.matrix().rows(), db = b.matrix().rows();
  Mat out(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < da; ++j) out.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
  return DensityOperator(std::move(labels), std::move(dims), std::move(out), DensityOperator::Check::Trusted);
}

// Haar-random pure state, deterministic per seed.
inline PureState random_pure_state(const std::vector<int>& dims, std::uint64_t seed,
                                   std::vector<std::string> labels = {}) {
  if (labels.empty()) labels = default_labels(dims.size());
  detail::validate_layout(labels, dims);
  Rng rng(seed);
  Mat g = ginibre(static_cast<Eigen::Index>(detail::checked_product(dims)), 1, rng);
  return PureState::normalized(std::move(labels), dims, g.col(0));
}

// Random mixed state G G^dagger / Tr, with G a Ginibre matrix of `rank` columns.
// rank = 0 selects full rank.
inline DensityOperator random_density_operator(const std::vector<int>& dims, std::size_t rank, std::uint64_t seed,
                                               std::vector<std::string> labels = {}) {
  if (labels.empty()) labels = default_labels(dims.size());
  detail::validate_layout(labels, dims);
  auto d = static_cast<Eigen::Index>(detail::checked_product(dims));
  Eigen::Index r = rank == 0 ? d : static_cast<Eigen::Index>(rank);
  Rng rng(seed);
  Mat g = ginibre(d, r, rng);
  Mat rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityOperator(std::move(labels), dims, std::move(rho), DensityOperator::Check::Trusted);
}

// Computational basis product state |k_1 k_2 ... >.
inline PureState basis_state(const std::vector<int>& dims, const std::vector<int>& digits,
                             std::vector<std::string> labels = {}) {
  if (labels.empty()) labels = default_labels(dims.size());
  if (digits.size() != dims.size()) throw InvalidInput("basis_state: digit count does not match dims");
  std::size_t idx = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (digits[k] < 0 || digits[k] >= dims[k]) throw InvalidInput("basis_state: digit out of range");
    idx = idx * dims[k] + digits[k];
  }
  Vec v = Vec::Zero(static_cast<Eigen::Index>(detail::checked_product(dims)));
  v[static_cast<Eigen::Index>(idx)] = 1.0;
  return PureState(std::move(labels), dims, std::move(v));
}

}  // namespace entmono
