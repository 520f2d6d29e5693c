#pragma once

// Convex-roof extension of pure-state measures to mixed states.
//
// Every pure-state decomposition of rho with m members is W = E sqrt(L) U^dag
// for an m x r isometry U, where E sqrt(L) holds the scaled support
// eigenvectors. The optimizer searches the ensemble average over W by complex
// Givens rotations of column pairs (a derivative-free compass search whose step
// halves after a sweep without improvement), started from Haar-random
// isometries. The result is an upper bound on the roof.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/SVD>

#include "entmono/common.hpp"
#include "entmono/measures.hpp"
#include "entmono/partitions.hpp"
#include "entmono/qstate.hpp"

namespace entmono {

struct DecompositionMember {
  double weight = 0.0;
  PureState state;
};

struct Decomposition {
  std::vector<DecompositionMember> members;

  std::size_t cardinality() const { return members.size(); }

  double total_weight() const {
    std::vector<double> w;
    for (const auto& m : members) w.push_back(m.weight);
    return compensated_sum(w);
  }

  // The mixture sum_i w_i |psi_i><psi_i|.
  Mat reconstruct() const {
    if (members.empty()) return Mat();
    const auto d = static_cast<Eigen::Index>(members.front().state.dim());
    Mat out = Mat::Zero(d, d);
    for (const auto& m : members) out += m.weight * m.state.amplitudes() * m.state.amplitudes().adjoint();
    return out;
  }
};

inline constexpr double kPruneWeight = 1e-12;
inline constexpr double kIsometryTolerance = 1e-10;
inline constexpr std::size_t kMaxRoofDim = 256;
inline constexpr std::size_t kMaxRoofMembers = 1024;

namespace detail {

// Scaled support eigenvectors E sqrt(L), one column per eigenvalue.
inline Mat scaled_support(const DensityOperator& op) {
  Eigensystem es = support_eigensystem(op);
  Mat v = es.vectors;
  for (std::size_t k = 0; k < es.values.size(); ++k) v.col(static_cast<Eigen::Index>(k)) *= std::sqrt(es.values[k]);
  return v;
}

inline Decomposition decomposition_from_columns(const DensityOperator& op, const Mat& w) {
  Decomposition out;
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    double weight = w.col(j).squaredNorm();
    if (weight < kPruneWeight) continue;
    out.members.push_back({weight, PureState::normalized(op.labels(), op.dims(), w.col(j))});
  }
  return out;
}

}  // namespace detail

// Member j is sum_k conj(u_jk) sqrt(lambda_k) |e_k>, with weight its squared norm.
// Members below the pruning weight are dropped.
inline Decomposition decomposition_from_unitary(const DensityOperator& op, const Mat& u) {
  Mat v = detail::scaled_support(op);
  if (u.cols() != v.cols()) throw InvalidInput("decomposition: isometry column count must equal the effective rank");
  if (u.rows() < u.cols()) throw InvalidInput("decomposition: isometry needs at least as many rows as columns");
  Mat gram = u.adjoint() * u;
  if ((gram - Mat::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff() > kIsometryTolerance)
    throw InvalidInput("decomposition: columns are not orthonormal");
  // Every member of a rank-one operator is the same state, so they merge.
  if (v.cols() == 1) return detail::decomposition_from_columns(op, v);
  return detail::decomposition_from_columns(op, v * u.adjoint());
}

struct RoofOptions {
  std::size_t m = 0;  // ensemble size, 0 selects r^2
  std::size_t restarts = 16;
  std::uint64_t seed = 1;
  std::size_t max_iters = 4000;  // sweeps per start
  double tol = 1e-8;             // improvement below tol over 50 sweeps stops a start
  double min_step = 1e-7;
};

struct RoofResult {
  double value = 0.0;
  Decomposition decomposition;
  std::size_t restarts_used = 0;
  bool converged = true;
  double spread = 0.0;
  std::size_t iterations = 0;  // sweeps summed over all starts
};

namespace detail {

struct RoofRun {
  double value = std::numeric_limits<double>::infinity();
  Mat columns;
  bool converged = false;
  std::size_t sweeps = 0;
};

class RoofObjective {
 public:
  explicit RoofObjective(const PureEvaluator& eval) : eval_(eval) {}

  double term(const Vec& w) const {
    double n2 = w.squaredNorm();
    if (n2 < kPruneWeight) return 0.0;
    return n2 * eval_(w / std::sqrt(n2));
  }

 private:
  const PureEvaluator& eval_;
};

// Each column pair keeps its own rotation angle, doubled after an accepted
// move and halved after a rejected one.
inline RoofRun compass_search(const RoofObjective& f, Mat w, const RoofOptions& opts) {
  constexpr std::size_t kStagnationWindow = 50;
  constexpr double kInitialStep = 0.3;
  constexpr double kMaxStep = 0.785;
  const Eigen::Index m = w.cols();
  const auto mu = static_cast<std::size_t>(m);
  std::vector<double> terms(mu);
  for (Eigen::Index j = 0; j < m; ++j) terms[static_cast<std::size_t>(j)] = f.term(w.col(j));
  std::vector<double> steps(mu * mu, kInitialStep);
  RoofRun run;
  std::vector<double> history{compensated_sum(terms)};
  const cplx phases[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
  Vec a, b;
  while (run.sweeps < opts.max_iters) {
    double largest = 0.0;
    for (Eigen::Index j = 0; j + 1 < m; ++j) {
      for (Eigen::Index k = j + 1; k < m; ++k) {
        const auto sj = static_cast<std::size_t>(j), sk = static_cast<std::size_t>(k);
        double& step = steps[sj * mu + sk];
        if (step < opts.min_step) continue;
        const double c = std::cos(step), s = std::sin(step);
        const double old = terms[sj] + terms[sk];
        bool moved = false;
        for (const cplx& e : phases) {
          a = c * w.col(j) - std::conj(e) * s * w.col(k);
          b = e * s * w.col(j) + c * w.col(k);
          const double ta = f.term(a), tb = f.term(b);
          if (ta + tb < old - 1e-15) {
            w.col(j) = a;
            w.col(k) = b;
            terms[sj] = ta;
            terms[sk] = tb;
            moved = true;
            break;
          }
        }
        step = moved ? std::min(kMaxStep, 2.0 * step) : 0.5 * step;
        largest = std::max(largest, step);
      }
    }
    ++run.sweeps;
    history.push_back(compensated_sum(terms));
    if (largest < opts.min_step) {
      run.converged = true;
      break;
    }
    if (history.size() > kStagnationWindow &&
        history[history.size() - 1 - kStagnationWindow] - history.back() < opts.tol) {
      run.converged = true;
      break;
    }
  }
  run.value = history.back();
  run.columns = std::move(w);
  return run;
}

}  // namespace detail

// Numerical roof of `spec` on `op` regrouped by `partition`.
inline RoofResult convex_roof(const MeasureSpec& spec, const DensityOperator& op, const Partition& partition,
                              const RoofOptions& opts = {}) {
  DensityOperator g = regroup(op, partition);
  if (g.dim() > kMaxRoofDim) throw DimensionGuard("convex_roof: operator dimension exceeds 256");
  detail::PureEvaluator eval(spec, g.dims());
  Mat v = detail::scaled_support(g);
  const auto r = static_cast<std::size_t>(v.cols());
  RoofResult out;
  if (r == 1) {
    PureState psi = PureState::normalized(g.labels(), g.dims(), v.col(0));
    out.value = eval(psi.amplitudes());
    out.decomposition.members.push_back({1.0, psi});
    return out;
  }
  const std::size_t m = opts.m == 0 ? r * r : opts.m;
  if (m < r) throw InvalidInput("convex_roof: ensemble size below the effective rank");
  if (m > kMaxRoofMembers) throw DimensionGuard("convex_roof: ensemble size exceeds 1024");
  const std::size_t restarts = std::max<std::size_t>(1, opts.restarts);
  // Start i uses an r x r Haar unitary, and, when m > r, also an m x r Haar isometry.
  const std::size_t per_restart = m > r ? 2 : 1;
  std::vector<detail::RoofRun> runs(restarts * per_restart);
  detail::RoofObjective objective(eval);
  parallel_for(runs.size(), [&](std::size_t idx) {
    const std::size_t i = idx / per_restart, phase = idx % per_restart;
    const std::size_t rows = phase == 0 ? r : m;
    Rng rng(derive_seed(opts.seed, i, phase));
    Mat u = haar_isometry(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(r), rng);
    runs[idx] = detail::compass_search(objective, v * u.adjoint(), opts);
  });
  std::size_t best = 0;
  double lo = runs[0].value, hi = runs[0].value;
  for (std::size_t idx = 0; idx < runs.size(); ++idx) {
    out.iterations += runs[idx].sweeps;
    lo = std::min(lo, runs[idx].value);
    hi = std::max(hi, runs[idx].value);
    if (runs[idx].value < runs[best].value) best = idx;
  }
  out.restarts_used = restarts;
  out.spread = hi - lo;
  out.converged = runs[best].converged;
  out.decomposition = detail::decomposition_from_columns(g, runs[best].columns);
  std::vector<double> terms;
  for (const auto& mem : out.decomposition.members) terms.push_back(mem.weight * eval(mem.state.amplitudes()));
  out.value = compensated_sum(terms);
  return out;
}

inline RoofResult convex_roof(const MeasureSpec& spec, const DensityOperator& op, const RoofOptions& opts = {}) {
  return convex_roof(spec, op, Partition::singletons(op.labels()), opts);
}

// Closed-form two-qubit concurrence max(0, l1 - l2 - l3 - l4), where l_i are
// the descending square roots of the eigenvalues of rho (sy x sy) rho* (sy x sy).
// With rho = V V^dag these are the singular values of V^T (sy x sy) V.
inline double wootters_concurrence(const DensityOperator& op) {
  if (op.dims() != std::vector<int>{2, 2}) throw InvalidInput("wootters_concurrence: operator must be two-qubit");
  Mat yy = Mat::Zero(4, 4);
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  Mat v = detail::scaled_support(op);
  Mat tau = v.transpose() * yy * v;
  Eigen::JacobiSVD<Mat> svd(tau);
  std::vector<double> l(4, 0.0);
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) l[static_cast<std::size_t>(i)] = svd.singularValues()[i];
  std::sort(l.rbegin(), l.rend());
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

}  // namespace entmono
