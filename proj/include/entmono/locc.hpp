#pragma once

// One-party local instruments and average-monotonicity trials on pure states.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "entmono/common.hpp"
#include "entmono/measures.hpp"
#include "entmono/partitions.hpp"
#include "entmono/qstate.hpp"

namespace entmono {

inline constexpr double kOutcomeCutoff = 1e-12;
inline constexpr double kCompletenessTolerance = 1e-9;
inline constexpr double kMonotonicityTolerance = 1e-9;

struct LocalInstrument {
  std::string party;
  std::vector<Mat> kraus;

  int dim() const { return kraus.empty() ? 0 : static_cast<int>(kraus.front().cols()); }

  // max |sum_i K_i^dag K_i - I|.
  double completeness_error() const {
    const Eigen::Index d = dim();
    Mat acc = Mat::Zero(d, d);
    for (const auto& k : kraus) acc += k.adjoint() * k;
    return (acc - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
  }
};

// A Haar isometry of shape (n * dim) x dim cut into n square blocks.
inline LocalInstrument random_local_instrument(int dim, int n_outcomes, std::uint64_t seed, std::string party = "A") {
  if (dim < 2) throw InvalidInput("instrument: dimension must be at least 2");
  if (n_outcomes < 1) throw InvalidInput("instrument: at least one outcome is required");
  Rng rng(seed);
  Mat v = haar_isometry(static_cast<Eigen::Index>(n_outcomes) * dim, dim, rng);
  LocalInstrument out;
  out.party = std::move(party);
  for (int i = 0; i < n_outcomes; ++i) out.kraus.push_back(v.block(static_cast<Eigen::Index>(i) * dim, 0, dim, dim));
  return out;
}

struct Outcome {
  double probability = 0.0;
  PureState state;
};

inline std::vector<Outcome> apply_instrument(const PureState& state, const LocalInstrument& inst) {
  auto it = std::find(state.labels().begin(), state.labels().end(), inst.party);
  if (it == state.labels().end()) throw InvalidInput("instrument: party '" + inst.party + "' is not a state label");
  const auto site = static_cast<std::size_t>(it - state.labels().begin());
  const int d = state.dims()[site];
  if (inst.dim() != d) throw InvalidInput("instrument: Kraus dimension does not match the party");
  for (const auto& k : inst.kraus)
    if (k.rows() != d || k.cols() != d) throw InvalidInput("instrument: Kraus operators must be square");
  Eigen::Index left = 1, right = 1;
  for (std::size_t i = 0; i < site; ++i) left *= state.dims()[i];
  for (std::size_t i = site + 1; i < state.dims().size(); ++i) right *= state.dims()[i];
  const Vec& psi = state.amplitudes();
  std::vector<Outcome> out;
  for (const auto& k : inst.kraus) {
    Vec post = Vec::Zero(psi.size());
    for (Eigen::Index l = 0; l < left; ++l)
      for (Eigen::Index a = 0; a < d; ++a)
        for (Eigen::Index b = 0; b < d; ++b) {
          const cplx kab = k(a, b);
          if (kab == cplx(0, 0)) continue;
          post.segment((l * d + a) * right, right) += kab * psi.segment((l * d + b) * right, right);
        }
    const double p = post.squaredNorm();
    if (p < kOutcomeCutoff) continue;
    out.push_back({p, PureState::normalized(state.labels(), state.dims(), post)});
  }
  return out;
}

struct TrialRecord {
  double before = 0.0;
  double after_avg = 0.0;
  double delta = 0.0;
  std::size_t outcomes = 0;
};

inline TrialRecord monotonicity_trial(const MeasureSpec& spec, const PureState& state, const Partition& partition,
                                      const LocalInstrument& inst) {
  TrialRecord r;
  r.before = measure_pure(spec, state, partition);
  std::vector<double> terms;
  for (const auto& o : apply_instrument(state, inst)) terms.push_back(o.probability * measure_pure(spec, o.state, partition));
  r.after_avg = compensated_sum(terms);
  r.delta = r.after_avg - r.before;
  r.outcomes = terms.size();
  return r;
}

struct SweepOptions {
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  std::vector<int> dims{2, 2, 2};
  int min_outcomes = 2;
  int max_outcomes = 4;
};

struct SweepTrial {
  std::size_t index = 0;
  std::string party;
  std::size_t n_outcomes = 0;
  TrialRecord record;
};

struct SweepReport {
  MeasureSpec spec;
  std::size_t trials = 0;
  std::size_t violations = 0;  // delta > kMonotonicityTolerance
  double worst_delta = 0.0;
  std::vector<SweepTrial> records;
};

// Trial i draws a random state from derive_seed(seed, i, 0), a party and an
// outcome count from derive_seed(seed, i, 2), and the instrument from
// derive_seed(seed, i, 1).
inline SweepReport locc_sweep(const MeasureSpec& spec, const SweepOptions& opts) {
  if (opts.min_outcomes < 1 || opts.max_outcomes < opts.min_outcomes)
    throw InvalidInput("locc sweep: invalid outcome range");
  SweepReport rep;
  rep.spec = spec;
  rep.trials = opts.trials;
  rep.records.resize(opts.trials);
  parallel_for(opts.trials, [&](std::size_t i) {
    PureState psi = random_pure_state(opts.dims, derive_seed(opts.seed, i, 0));
    Rng pick(derive_seed(opts.seed, i, 2));
    const std::size_t site = static_cast<std::size_t>(pick() % opts.dims.size());
    const int n = opts.min_outcomes + static_cast<int>(pick() % static_cast<std::uint64_t>(opts.max_outcomes - opts.min_outcomes + 1));
    LocalInstrument inst = random_local_instrument(opts.dims[site], n, derive_seed(opts.seed, i, 1), psi.labels()[site]);
    SweepTrial t;
    t.index = i;
    t.party = inst.party;
    t.n_outcomes = static_cast<std::size_t>(n);
    t.record = monotonicity_trial(spec, psi, Partition::singletons(psi.labels()), inst);
    rep.records[i] = t;
  });
  if (!rep.records.empty()) rep.worst_delta = -std::numeric_limits<double>::infinity();
  for (const auto& t : rep.records) {
    if (t.record.delta > kMonotonicityTolerance) ++rep.violations;
    rep.worst_delta = std::max(rep.worst_delta, t.record.delta);
  }
  return rep;
}

}  // namespace entmono
