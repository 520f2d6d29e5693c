#pragma once

// Mechanical checks of the unification, hierarchy, complete-monogamy and
// tight-complete-monogamy conditions on concrete pure states, the expectation
// table for every (family, h, condition) cell, case reproduction for the
// reference states, and the figure sweeps.
//
// A partition whose support is a proper subsystem with a mixed marginal is
// evaluated by the convex roof, which only yields an upper bound. Decisions
// that involve a roof use the band max(1e-4, 3 * restart spread) instead of
// the pure-state tolerance, and a violation inside that band is Inconclusive.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "entmono/common.hpp"
#include "entmono/convexroof.hpp"
#include "entmono/measures.hpp"
#include "entmono/partitions.hpp"
#include "entmono/qstate.hpp"
#include "entmono/redfun.hpp"
#include "entmono/registry.hpp"

namespace entmono {

enum class Condition { Unification, Hierarchy, CompleteMonogamy, TightCompleteMonogamy };
enum class Verdict { Pass, Fail, Inconclusive };

inline constexpr Condition kAllConditions[] = {Condition::Unification, Condition::Hierarchy,
                                               Condition::CompleteMonogamy, Condition::TightCompleteMonogamy};

inline const char* condition_name(Condition c) {
  switch (c) {
    case Condition::Unification: return "unification";
    case Condition::Hierarchy: return "hierarchy";
    case Condition::CompleteMonogamy: return "complete-monogamy";
    case Condition::TightCompleteMonogamy: return "tight-complete-monogamy";
  }
  return "?";
}

inline Condition parse_condition(std::string_view s) {
  for (auto c : kAllConditions)
    if (s == condition_name(c)) return c;
  throw InvalidInput("unknown condition '" + std::string(s) + "'");
}

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

inline constexpr double kPureTolerance = 1e-7;
inline constexpr double kRoofBandFloor = 1e-4;
inline constexpr double kStrictMargin = 1e-9;
inline constexpr std::size_t kMaxCheckParties = 5;

struct CheckOptions {
  double tolerance = kPureTolerance;
  RoofOptions roof{.restarts = 4};
  std::uint64_t seed = 1;  // seeds the additivity probe state
};

struct Evaluation {
  double value = 0.0;
  bool roof = false;
  double spread = 0.0;
  bool converged = true;
};

// Value of one measure on every partition of a fixed pure state, memoized by
// canonical partition text. Single-block partitions evaluate to 0.
class LatticeEvaluator {
 public:
  LatticeEvaluator(MeasureSpec spec, PureState state, RoofOptions roof = {.restarts = 4})
      : spec_(std::move(spec)), state_(std::move(state)), roof_(roof) {}

  const MeasureSpec& spec() const { return spec_; }
  const PureState& state() const { return state_; }

  const Evaluation& operator()(const Partition& p) {
    std::string key = format_partition(p);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Evaluation e;
    if (p.size() >= 2) {
      if (pure_marginal(state_, p.support())) {
        e.value = measure_pure(spec_, state_, p);
      } else {
        RoofResult r = convex_roof(spec_, DensityOperator::from_pure(state_), p, roof_);
        e.value = r.value;
        e.roof = true;
        e.spread = r.spread;
        e.converged = r.converged;
      }
    }
    return cache_.emplace(key, e).first->second;
  }

 private:
  MeasureSpec spec_;
  PureState state_;
  RoofOptions roof_;
  std::map<std::string, Evaluation> cache_;
};

struct Comparison {
  std::string partition_x;
  std::string partition_y;
  double value_x = 0.0;
  double value_y = 0.0;
  std::string relation;  // ">=", ">", "=", "=0"
  Verdict status = Verdict::Pass;
  std::string note;
};

struct CheckReport {
  Condition condition = Condition::Unification;
  std::string state_id;
  MeasureSpec spec;
  std::vector<Comparison> comparisons;
  Verdict verdict = Verdict::Pass;
  std::vector<std::string> notes;
};

namespace detail {

inline double decision_band(const Evaluation& a, const Evaluation& b, double tol) {
  if (!a.roof && !b.roof) return tol;
  return std::max({tol, kRoofBandFloor, 3.0 * a.spread, 3.0 * b.spread});
}

inline void finalize(CheckReport& r) {
  r.verdict = Verdict::Pass;
  for (const auto& c : r.comparisons) {
    if (c.status == Verdict::Fail) {
      r.verdict = Verdict::Fail;
      return;
    }
    if (c.status == Verdict::Inconclusive) r.verdict = Verdict::Inconclusive;
  }
}

inline void require_check_size(const PureState& s) {
  if (s.parties() < 2) throw InvalidInput("check: the state needs at least two parties");
  if (s.parties() > kMaxCheckParties) throw DimensionGuard("check: partition lattice checks support at most 5 parties");
}

// Pairs (x, y) with x coarsened to y by `kind`, both with at least two blocks,
// in lattice order.
inline std::vector<std::pair<Partition, Partition>> lattice_pairs(const std::vector<std::string>& universe,
                                                                  CoarseningKind kind) {
  std::vector<std::pair<Partition, Partition>> out;
  for (const auto& x : all_partitions(universe, 2))
    for (const auto& y : enumerate_coarsenings(x, kind))
      if (y.size() >= 2) out.emplace_back(x, y);
  return out;
}

// Genuine conditions only constrain states that are genuinely entangled
// across the finer partition, which a faithful genuine measure detects as a
// value above the decision band.
inline bool genuinely_entangled(const Evaluation& e, double tol) {
  const double band = e.roof ? std::max({tol, kRoofBandFloor, 3.0 * e.spread}) : tol;
  return e.value > band;
}

// Monotonicity value(x) >= value(y), strict for genuine families where strict
// failures within kStrictMargin are flagged rather than failed.
inline Comparison order_comparison(LatticeEvaluator& eval, const Partition& x, const Partition& y, double tol) {
  const Evaluation ex = eval(x), ey = eval(y);
  Comparison c;
  c.partition_x = format_partition(x);
  c.partition_y = format_partition(y);
  c.value_x = ex.value;
  c.value_y = ey.value;
  const bool genuine = is_genuine(eval.spec().family);
  c.relation = genuine ? ">" : ">=";
  const double margin = ex.value - ey.value;
  const double band = decision_band(ex, ey, tol);
  if (genuine && !genuinely_entangled(ex, tol)) {
    c.status = Verdict::Pass;
    c.note = "not applicable";
    return c;
  }
  if (margin >= -tol)
    c.status = Verdict::Pass;
  else if ((ex.roof || ey.roof) && margin >= -band)
    c.status = Verdict::Inconclusive;
  else
    c.status = Verdict::Fail;
  if (genuine && c.status == Verdict::Pass && margin <= kStrictMargin) c.note = "not strict";
  return c;
}

inline void add_order_comparisons(CheckReport& r, LatticeEvaluator& eval, CoarseningKind kind, double tol) {
  std::size_t not_strict = 0, skipped = 0;
  for (const auto& [x, y] : lattice_pairs(eval.state().labels(), kind)) {
    r.comparisons.push_back(order_comparison(eval, x, y, tol));
    if (r.comparisons.back().note == "not strict") ++not_strict;
    if (r.comparisons.back().note == "not applicable") ++skipped;
  }
  if (not_strict > 0)
    r.notes.push_back(std::to_string(not_strict) + " comparisons are not strict within 1e-9 (flagged, not failed)");
  if (skipped > 0)
    r.notes.push_back(std::to_string(skipped) + " comparisons skipped: the finer state is not genuinely entangled");
}

// For every pair whose values coincide, every partition of its Xi set must vanish.
inline void add_disentangling_comparisons(CheckReport& r, LatticeEvaluator& eval, CoarseningKind kind, double tol) {
  std::size_t triggered = 0;
  for (const auto& [x, y] : lattice_pairs(eval.state().labels(), kind)) {
    const Evaluation ex = eval(x), ey = eval(y);
    if (is_genuine(eval.spec().family) && !genuinely_entangled(ex, tol)) continue;
    const double gap = std::abs(ex.value - ey.value);
    const double band = decision_band(ex, ey, tol);
    if (gap > band) continue;
    const bool sure = gap <= tol;
    ++triggered;
    for (const auto& g : xi_set(x, y)) {
      const Evaluation eg = eval(g);
      Comparison c;
      c.partition_x = format_partition(g);
      c.partition_y = format_partition(x) + " -> " + format_partition(y);
      c.value_x = eg.value;
      c.value_y = 0.0;
      c.relation = "=0";
      const double zero_band = eg.roof ? std::max({tol, kRoofBandFloor, 3.0 * eg.spread}) : tol;
      if (eg.value <= tol)
        c.status = Verdict::Pass;
      else if (eg.value <= zero_band || !sure)
        c.status = Verdict::Inconclusive;
      else
        c.status = Verdict::Fail;
      if (!sure) c.note = "coincidence only within the roof band";
      r.comparisons.push_back(c);
    }
  }
  r.notes.push_back(std::to_string(triggered) + " coinciding pairs");
}

inline std::string fresh_label(const std::vector<std::string>& used, const std::string& stem) {
  for (int k = 1;; ++k) {
    std::string l = stem + std::to_string(k);
    if (std::find(used.begin(), used.end(), l) == used.end()) return l;
  }
}

}  // namespace detail

// Additivity on a product with a seeded two-qubit state (non-genuine families),
// permutation invariance under reversal of the parties, and monotonicity under
// discarding blocks over the whole partition lattice.
inline CheckReport check_unification(LatticeEvaluator& eval, const std::string& state_id, const CheckOptions& opts = {}) {
  const PureState& s = eval.state();
  detail::require_check_size(s);
  CheckReport r{Condition::Unification, state_id, eval.spec(), {}, Verdict::Pass, {}};
  const MeasureSpec& spec = eval.spec();
  const double tol = opts.tolerance;
  const Partition full = Partition::singletons(s.labels());
  const double base = eval(full).value;
  if (is_genuine(spec.family)) {
    r.notes.push_back("additivity does not apply to genuine families");
  } else if (!is_bipart(spec.family) || s.parties() + 2 <= kMaxBipartitionParties) {
    std::string l1 = detail::fresh_label(s.labels(), "P");
    std::string l2 = detail::fresh_label({l1}, "P" + l1);
    PureState probe = random_pure_state({2, 2}, derive_seed(opts.seed, 0), {l1, l2});
    PureState joint = tensor_product(s, probe);
    Comparison c;
    c.partition_x = "state x probe";
    c.partition_y = "state + probe";
    c.value_x = measure_pure(spec, joint);
    c.value_y = base + measure_pure(spec, probe);
    c.relation = "=";
    c.status = std::abs(c.value_x - c.value_y) <= tol ? Verdict::Pass : Verdict::Fail;
    r.comparisons.push_back(c);
  }
  {
    std::vector<int> order(s.parties());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(order.size() - 1 - i);
    PureState perm = permute_sites(s, order);
    Comparison c;
    c.partition_x = "reversed parties";
    c.partition_y = format_partition(full);
    c.value_x = measure_pure(spec, perm);
    c.value_y = base;
    c.relation = "=";
    c.status = std::abs(c.value_x - c.value_y) <= tol ? Verdict::Pass : Verdict::Fail;
    r.comparisons.push_back(c);
  }
  detail::add_order_comparisons(r, eval, CoarseningKind::DiscardBlocks, tol);
  detail::finalize(r);
  return r;
}

// Monotonicity under merging blocks over the whole partition lattice.
inline CheckReport check_hierarchy(LatticeEvaluator& eval, const std::string& state_id, const CheckOptions& opts = {}) {
  detail::require_check_size(eval.state());
  CheckReport r{Condition::Hierarchy, state_id, eval.spec(), {}, Verdict::Pass, {}};
  detail::add_order_comparisons(r, eval, CoarseningKind::CombineBlocks, opts.tolerance);
  detail::finalize(r);
  return r;
}

// Monotonicity under discarding blocks plus the disentangling condition over
// the Xi sets of coinciding pairs.
inline CheckReport check_complete_monogamy(LatticeEvaluator& eval, const std::string& state_id,
                                           const CheckOptions& opts = {}) {
  detail::require_check_size(eval.state());
  CheckReport r{Condition::CompleteMonogamy, state_id, eval.spec(), {}, Verdict::Pass, {}};
  detail::add_order_comparisons(r, eval, CoarseningKind::DiscardBlocks, opts.tolerance);
  detail::add_disentangling_comparisons(r, eval, CoarseningKind::DiscardBlocks, opts.tolerance);
  detail::finalize(r);
  return r;
}

// Monotonicity under merging blocks plus the disentangling condition over the
// Xi sets of coinciding merge pairs.
inline CheckReport check_tight_complete_monogamy(LatticeEvaluator& eval, const std::string& state_id,
                                                 const CheckOptions& opts = {}) {
  detail::require_check_size(eval.state());
  CheckReport r{Condition::TightCompleteMonogamy, state_id, eval.spec(), {}, Verdict::Pass, {}};
  detail::add_order_comparisons(r, eval, CoarseningKind::CombineBlocks, opts.tolerance);
  detail::add_disentangling_comparisons(r, eval, CoarseningKind::CombineBlocks, opts.tolerance);
  detail::finalize(r);
  return r;
}

inline CheckReport run_check(Condition c, LatticeEvaluator& eval, const std::string& state_id,
                             const CheckOptions& opts = {}) {
  switch (c) {
    case Condition::Unification: return check_unification(eval, state_id, opts);
    case Condition::Hierarchy: return check_hierarchy(eval, state_id, opts);
    case Condition::CompleteMonogamy: return check_complete_monogamy(eval, state_id, opts);
    case Condition::TightCompleteMonogamy: return check_tight_complete_monogamy(eval, state_id, opts);
  }
  throw InvalidInput("unknown condition");
}

inline CheckReport run_check(Condition c, const MeasureSpec& spec, const PureState& state, const std::string& state_id,
                             const CheckOptions& opts = {}) {
  LatticeEvaluator eval(spec, state, opts.roof);
  return run_check(c, eval, state_id, opts);
}

// ---------------------------------------------------------------------------
// Expectation table

enum class Cell { Holds, Fails, Open, Unlisted };

inline const char* cell_name(Cell c) {
  switch (c) {
    case Cell::Holds: return "holds";
    case Cell::Fails: return "fails";
    case Cell::Open: return "open";
    case Cell::Unlisted: return "unlisted";
  }
  return "?";
}

struct Expectation {
  Cell cell = Cell::Unlisted;
  std::string provenance;  // "asserted", "conjectured", "open", "unlisted"
};

namespace detail {

// Row of the sum-type and gated-sum tables: unified, complete, CM, TCM.
// 'y' holds, 'n' fails, 'c' holds under the subadditivity assumption.
inline std::optional<std::string> sum_row(const ReducedFunctionSpec& h) {
  switch (h.kind) {
    case ReducedKind::VonNeumann:
    case ReducedKind::Concurrence:
    case ReducedKind::Tangle:
    case ReducedKind::PartialNorm2: return "yyyy";
    case ReducedKind::Tsallis: return h.param > 1 ? std::optional<std::string>("yyyc") : std::nullopt;
    case ReducedKind::Renyi:
    case ReducedKind::NegativityReduced:
    case ReducedKind::PartialNormMin:
    case ReducedKind::PartialNormMinPrime: return "ynyn";
    case ReducedKind::FidelityF: return "yyyc";
    case ReducedKind::FidelityFPrime:
    case ReducedKind::FidelityAF:
    case ReducedKind::PartialNegativity: return "ycyc";
    default: return std::nullopt;
  }
}

// Row of the tripartite max-type table.
inline std::optional<std::string> max_row(const ReducedFunctionSpec& h) {
  switch (h.kind) {
    case ReducedKind::PartialNorm2:
    case ReducedKind::PartialNormMin:
    case ReducedKind::PartialNormMinPrime:
    case ReducedKind::PartialNegativity: return "yynn";
    case ReducedKind::Tsallis: return h.param > 1 ? std::optional<std::string>("yyyn") : std::nullopt;
    case ReducedKind::TsallisPrime:
    case ReducedKind::RenyiPrime: return std::nullopt;
    default: return "yyyn";
  }
}

// Row of the tripartite gated-max table.
inline std::optional<std::string> gmax_row(const ReducedFunctionSpec& h) {
  switch (h.kind) {
    case ReducedKind::PartialNorm2:
    case ReducedKind::PartialNormMin:
    case ReducedKind::PartialNormMinPrime:
    case ReducedKind::PartialNegativity: return "nnnn";
    case ReducedKind::Tsallis: return h.param > 1 ? std::optional<std::string>("yyyn") : std::nullopt;
    case ReducedKind::TsallisPrime:
    case ReducedKind::RenyiPrime: return std::nullopt;
    default: return "yyyn";
  }
}

inline Expectation from_symbol(char c) {
  switch (c) {
    case 'y': return {Cell::Holds, "asserted"};
    case 'n': return {Cell::Fails, "asserted"};
    case 'c': return {Cell::Holds, "conjectured"};
    case '?': return {Cell::Open, "open"};
  }
  return {Cell::Unlisted, "unlisted"};
}

}  // namespace detail

// The expected status of a condition for a (family, h) cell on n parties.
inline Expectation expected_condition(Family f, const ReducedFunctionSpec& h, Condition c, std::size_t parties) {
  const auto col = static_cast<std::size_t>(c);
  std::optional<std::string> row;
  const bool large = parties >= 4;
  switch (f) {
    case Family::Sum:
    case Family::GSum: row = detail::sum_row(h); break;
    case Family::SumBipart:
    case Family::GSumBipart: row = large ? std::optional<std::string>("yyyy") : detail::sum_row(h); break;
    case Family::Max:
    case Family::MaxBipart:
      if (large) row = "?n?n";
      else if (parties == 3) row = detail::max_row(h);
      break;
    case Family::GMax:
    case Family::GMaxBipart:
      if (large) row = "?n?n";
      else if (parties == 3) row = detail::gmax_row(h);
      break;
    case Family::GMin:
    case Family::GMinBipart:
      if (f == Family::GMinBipart && h.kind == ReducedKind::Concurrence && c == Condition::Hierarchy)
        return {Cell::Fails, "asserted"};
      if (h.kind == ReducedKind::PartialNorm2 && c == Condition::TightCompleteMonogamy && parties == 3)
        return {Cell::Fails, "asserted"};
      break;
  }
  if (!row) return {Cell::Unlisted, "unlisted"};
  return detail::from_symbol((*row)[col]);
}

struct DesignatedWitness {
  Family family;
  Condition condition;
  std::string state;
  bool strictly_concave_only = false;
  std::optional<ReducedKind> kind;  // nullopt: every h
};

// States on which a failing cell is expected to show its failure.
inline std::vector<DesignatedWitness> designated_witnesses() {
  return {
      {Family::Max, Condition::Hierarchy, "w4", false, std::nullopt},
      {Family::GMinBipart, Condition::Hierarchy, "xi", false, ReducedKind::Concurrence},
      {Family::Max, Condition::CompleteMonogamy, "phi", false, ReducedKind::PartialNorm2},
      {Family::Max, Condition::TightCompleteMonogamy, "eta", true, std::nullopt},
      {Family::Max, Condition::TightCompleteMonogamy, "w-class", true, std::nullopt},
      {Family::GMax, Condition::TightCompleteMonogamy, "w-class", true, std::nullopt},
      {Family::GMin, Condition::TightCompleteMonogamy, "zeta", false, ReducedKind::PartialNorm2},
  };
}

inline bool is_designated_witness(Family f, const ReducedFunctionSpec& h, Condition c, const std::string& state) {
  for (const auto& w : designated_witnesses()) {
    if (w.family != f || w.condition != c || w.state != state) continue;
    if (w.kind && *w.kind != h.kind) continue;
    if (w.strictly_concave_only && !is_strictly_concave(h)) continue;
    return true;
  }
  return false;
}

struct ConditionOutcome {
  CheckReport report;
  Expectation expectation;
  bool hard = false;           // a mismatch makes the suite fail
  bool expect_fail = false;    // hard expectation is a Fail verdict (designated witness)
  bool mismatch = false;
};

// Hard expectations: an asserted holding cell must not produce a Fail verdict,
// and a designated witness of an asserted failing cell must produce one.
inline ConditionOutcome judge(const CheckReport& report, std::size_t parties) {
  ConditionOutcome o;
  o.report = report;
  o.expectation = expected_condition(report.spec.family, report.spec.h, report.condition, parties);
  if (o.expectation.cell == Cell::Holds && o.expectation.provenance == "asserted") {
    o.hard = true;
    o.mismatch = report.verdict == Verdict::Fail;
  } else if (o.expectation.cell == Cell::Fails &&
             is_designated_witness(report.spec.family, report.spec.h, report.condition, report.state_id)) {
    o.hard = true;
    o.expect_fail = true;
    o.mismatch = report.verdict != Verdict::Fail;
  }
  return o;
}

struct ConditionFilter {
  std::vector<Family> families;
  std::vector<ReducedFunctionSpec> hs;
  std::vector<std::string> states;
  std::vector<Condition> conditions;
};

// The default grid: sum-type and gated-sum families with the four proven
// subadditive kinds on every registry state, plus every designated witness.
inline std::vector<ConditionOutcome> run_conditions(const ConditionFilter& filter, const CheckOptions& opts = {}) {
  struct Job {
    MeasureSpec spec;
    std::string state;
    std::vector<Condition> conditions;
  };
  std::vector<Job> jobs;
  auto add = [&](const MeasureSpec& spec, const std::string& state, Condition c) {
    for (auto& j : jobs)
      if (j.spec == spec && j.state == state) {
        if (std::find(j.conditions.begin(), j.conditions.end(), c) == j.conditions.end()) j.conditions.push_back(c);
        return;
      }
    jobs.push_back({spec, state, {c}});
  };
  const bool defaults = filter.families.empty() && filter.hs.empty() && filter.states.empty() && filter.conditions.empty();
  if (defaults) {
    for (auto f : {Family::Sum, Family::GSum})
      for (auto k : {ReducedKind::VonNeumann, ReducedKind::Concurrence, ReducedKind::Tangle, ReducedKind::PartialNorm2})
        for (const auto& s : registry_names())
          for (auto c : kAllConditions) add({f, {k, 0}}, s, c);
    for (const auto& w : designated_witnesses())
      for (const auto& h : catalog(false)) {
        if (w.kind && *w.kind != h.kind) continue;
        if (w.strictly_concave_only && !is_strictly_concave(h)) continue;
        add({w.family, h}, w.state, w.condition);
      }
  } else {
    std::vector<Family> fams = filter.families;
    if (fams.empty()) fams.assign(std::begin(kAllFamilies), std::end(kAllFamilies));
    std::vector<ReducedFunctionSpec> hs = filter.hs.empty() ? catalog(false) : filter.hs;
    std::vector<std::string> states = filter.states.empty() ? registry_names() : filter.states;
    std::vector<Condition> conds = filter.conditions;
    if (conds.empty()) conds.assign(std::begin(kAllConditions), std::end(kAllConditions));
    for (auto f : fams)
      for (const auto& h : hs)
        for (const auto& s : states)
          for (auto c : conds) add({f, h}, s, c);
  }
  std::vector<ConditionOutcome> out;
  for (const auto& j : jobs) {
    ReferenceState ref = registry_state(j.state);
    LatticeEvaluator eval(j.spec, ref.state, opts.roof);
    for (auto c : j.conditions) out.push_back(judge(run_check(c, eval, j.state, opts), ref.state.parties()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Case reproduction

struct CaseRow {
  std::string quantity;
  double expected = 0.0;
  double computed = 0.0;
  double tolerance = 0.0;
  std::string comparator = "abs";  // "abs": |computed - expected| <= tol; "gt": computed > expected
  bool pass = false;
  bool hard = true;
  std::string note;
};

struct CaseReport {
  std::string name;
  std::vector<CaseRow> rows;

  bool hard_pass() const {
    for (const auto& r : rows)
      if (r.hard && !r.pass) return false;
    return true;
  }
};

namespace detail {

inline CaseRow near_row(std::string quantity, double expected, double computed, double tol, std::string note = {}) {
  CaseRow r{std::move(quantity), expected, computed, tol, "abs", false, true, std::move(note)};
  r.pass = std::abs(computed - expected) <= tol;
  return r;
}

inline CaseRow greater_row(std::string quantity, double bound, double computed, std::string note = {}) {
  CaseRow r{std::move(quantity), bound, computed, 0.0, "gt", computed > bound, true, std::move(note)};
  return r;
}

inline MeasureSpec ms(Family f, ReducedKind k, double param = 0) { return {f, {k, param}}; }

inline double pure_value(const MeasureSpec& m, const PureState& s, const std::string& partition) {
  return measure_pure(m, s, parse_partition(partition, s.labels()));
}

inline double roof_value(const MeasureSpec& m, const PureState& s, const std::string& partition,
                         const RoofOptions& o = {}) {
  return convex_roof(m, DensityOperator::from_pure(s), parse_partition(partition, s.labels()), o).value;
}

inline double max_spectrum_deviation(const DensityOperator& op, std::vector<double> expected) {
  Spectrum sp = eigenvalues(op);
  std::vector<double> got(sp.eigenvalues.begin(), sp.eigenvalues.end());
  std::sort(got.rbegin(), got.rend());
  std::sort(expected.rbegin(), expected.rend());
  expected.resize(got.size(), 0.0);
  double dev = 0;
  for (std::size_t i = 0; i < got.size(); ++i) dev = std::max(dev, std::abs(got[i] - expected[i]));
  return dev;
}

inline std::string join_spectrum(const std::vector<double>& v) {
  std::string out = "{";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + std::to_string(v[i]);
  return out + "}";
}

constexpr ReducedKind kConc = ReducedKind::Concurrence;

inline CaseReport case_xi() {
  PureState s = registry_state("xi").state;
  CaseReport c{"xi", {}};
  c.rows.push_back(near_row("gmin-bipart/concurrence (A|B|C|D)", std::sqrt(15.0) / 8,
                            measure_pure(ms(Family::GMinBipart, kConc), s), 1e-9, "attained at ABC|D"));
  c.rows.push_back(near_row("concurrence (AB|CD)", std::sqrt(65.0) / 8, pure_value(ms(Family::Sum, kConc), s, "AB|CD"), 1e-9));
  DensityOperator bd = partial_trace(s, {"B", "D"});
  const double w = wootters_concurrence(bd);
  c.rows.push_back(near_row("wootters concurrence rho^BD", 0.839, w, 5e-3));
  c.rows.push_back(near_row("convex roof concurrence rho^BD vs wootters", w, roof_value(ms(Family::Sum, kConc), s, "B|D"), 1e-3));
  return c;
}

inline CaseReport case_zeta() {
  PureState s = registry_state("zeta").state;
  MeasureSpec gmin = ms(Family::GMin, ReducedKind::PartialNorm2), sum = ms(Family::Sum, ReducedKind::PartialNorm2);
  return {"zeta",
          {near_row("gmin/pnorm2 (A|B|C)", 0.25, measure_pure(gmin, s), 1e-12),
           near_row("pnorm2 (A|BC)", 5.0 / 12, pure_value(sum, s, "A|BC"), 1e-12),
           near_row("pnorm2 (AB|C)", 1.0 / 3, pure_value(sum, s, "AB|C"), 1e-12)}};
}

inline CaseReport case_phi() {
  PureState s = registry_state("phi").state;
  CaseReport c{"phi", {}};
  for (const char* l : {"A", "B", "C"})
    c.rows.push_back(near_row(std::string("spectrum deviation rho^") + l + " from {2/3, 1/3}", 0.0,
                              max_spectrum_deviation(partial_trace(s, {l}), {2.0 / 3, 1.0 / 3}), 1e-12));
  MeasureSpec e2 = ms(Family::Max, ReducedKind::PartialNorm2);
  for (const char* p : {"A|BC", "B|AC", "C|AB"})
    c.rows.push_back(near_row(std::string("max/pnorm2 (") + p + ")", 1.0 / 3, pure_value(e2, s, p), 1e-12));
  for (const char* p : {"A|B", "A|C", "B|C"})
    c.rows.push_back(near_row(std::string("convex roof max/pnorm2 (") + p + ")", 1.0 / 3, roof_value(e2, s, p), 1e-3));
  return c;
}

inline CaseReport case_varphi() {
  PureState s = registry_state("varphi").state;
  CaseReport c{"varphi", {}};
  DensityOperator a = partial_trace(s, {"A"}), ab = partial_trace(s, {"A", "B"});
  c.rows.push_back(near_row("spectrum deviation rho^A from {5/8, 3/8}", 0.0, max_spectrum_deviation(a, {5.0 / 8, 3.0 / 8}), 1e-12));
  c.rows.push_back(near_row("spectrum deviation rho^AB from {3/8, 5/16, 5/16}", 0.0,
                            max_spectrum_deviation(ab, {3.0 / 8, 5.0 / 16, 5.0 / 16}), 1e-12));
  const double bip = measure_pure(ms(Family::GMinBipart, ReducedKind::PartialNormMin), s);
  const double single = measure_pure(ms(Family::GMin, ReducedKind::PartialNormMin), s);
  c.rows.push_back(near_row("gmin-bipart/pnorm-min (A|B|C|D)", 5.0 / 16, bip, 1e-12));
  c.rows.push_back(near_row("gmin/pnorm-min (A|B|C|D)", 3.0 / 8, single, 1e-12));
  c.rows.push_back(greater_row("gmin/pnorm-min - gmin-bipart/pnorm-min", 0.0, single - bip));
  ReducedFunctionSpec pneg{ReducedKind::PartialNegativity, 0};
  c.rows.push_back(near_row("pnegativity rho^AB", std::sqrt(15.0) / (8 * std::sqrt(2.0)), h_eval(pneg, ab), 1e-12));
  c.rows.push_back(near_row("pnegativity rho^A", std::sqrt(15.0) / 8, h_eval(pneg, a), 1e-12));
  return c;
}

inline CaseReport case_omega(const std::string& name) {
  PureState s = registry_state(name).state;
  const bool mirrored = name == "omega-ii";
  CaseReport c{name, {}};
  MeasureSpec conc = ms(Family::Sum, kConc);
  c.rows.push_back(near_row("gmin-bipart/concurrence (A|B|C)", 0.5879, measure_pure(ms(Family::GMinBipart, kConc), s), 5e-4));
  c.rows.push_back(near_row("concurrence (A|BC)", 0.8315, pure_value(conc, s, "A|BC"), 5e-4));
  const std::string second = mirrored ? "C|AB" : "B|AC";
  c.rows.push_back(near_row("concurrence (" + second + ")", 0.8315, pure_value(conc, s, second), 5e-4));
  const std::vector<std::string> pair = mirrored ? std::vector<std::string>{"A", "C"} : std::vector<std::string>{"A", "B"};
  c.rows.push_back(near_row("wootters concurrence rho^" + pair[0] + pair[1], 0.8090,
                            wootters_concurrence(partial_trace(s, pair)), 5e-4));
  return c;
}

inline CaseReport case_w4() {
  PureState s = registry_state("w4").state;
  CaseReport c{"w4", {}};
  for (const auto& h : catalog()) {
    if (property_marks(h).of(Property::Subadditivity) != Mark::Holds) continue;
    MeasureSpec m{Family::Max, h};
    const double singles = measure_pure(m, s), halves = pure_value(m, s, "AB|CD");
    c.rows.push_back(greater_row("max/" + format_reduced_function(h) + ": (AB|CD) - (A|B|C|D)", 1e-6, halves - singles));
  }
  MeasureSpec tangle = ms(Family::Max, ReducedKind::Tangle);
  c.rows.push_back(near_row("max/tangle (A|B|C|D)", 0.75, measure_pure(tangle, s), 1e-12));
  c.rows.push_back(near_row("max/tangle (AB|CD)", 1.0, pure_value(tangle, s, "AB|CD"), 1e-12));
  return c;
}

inline CaseReport case_hmin_witness() {
  DensityOperator ab = detail::min_norm_witness();
  ReducedFunctionSpec h{ReducedKind::PartialNormMin, 0};
  const double whole = h_eval(h, ab), a = h_eval(h, partial_trace(ab, {"A"})), b = h_eval(h, partial_trace(ab, {"B"}));
  return {"hmin-witness",
          {near_row("pnorm-min rho^AB", 0.5, whole, 1e-12), near_row("pnorm-min rho^A", 0.1, a, 1e-12),
           near_row("pnorm-min rho^B", 0.1, b, 1e-12), near_row("subadditivity margin", 0.3, whole - a - b, 1e-12)}};
}

inline std::vector<double> ghz_weights(int d, double t) {
  if (d == 2) return {t, 1 - t};
  return {t, (1 - t) / 2, (1 - t) / 2};
}

inline CaseReport case_ghz_relation() {
  CaseReport c{"ghz-relation", {}};
  for (int d : {2, 3})
    for (std::size_t n : {3u, 4u}) {
      double dev_min_max = 0, dev_max_sum = 0, dev_bip = 0;
      for (int k = 0; k <= 20; ++k) {
        PureState s = generalized_ghz(n, ghz_weights(d, k / 20.0));
        const double nn = static_cast<double>(n);
        for (const auto& h : catalog()) {
          const double gmin = measure_pure({Family::GMin, h}, s), gmax = measure_pure({Family::GMax, h}, s);
          const double gsum = measure_pure({Family::GSum, h}, s), gbip = measure_pure({Family::GMinBipart, h}, s);
          dev_min_max = std::max(dev_min_max, std::abs(nn * gmin - nn * gmax));
          dev_max_sum = std::max(dev_max_sum, std::abs(nn * gmax - 2 * gsum));
          dev_bip = std::max(dev_bip, std::abs(gmin - gbip));
        }
      }
      const std::string tag = " (d=" + std::to_string(d) + ", n=" + std::to_string(n) + ", 21 t values, all h)";
      c.rows.push_back(near_row("max |n gmin - n gmax|" + tag, 0.0, dev_min_max, 1e-9));
      c.rows.push_back(near_row("max |n gmax - 2 gsum|" + tag, 0.0, dev_max_sum, 1e-9));
      c.rows.push_back(near_row("max |gmin - gmin-bipart|" + tag, 0.0, dev_bip, 1e-9));
    }
  return c;
}

inline CaseReport case_tcm_witness(const std::string& state) {
  CaseReport c{state, {}};
  PureState s = registry_state(state).state;
  for (auto k : {ReducedKind::VonNeumann, ReducedKind::Tangle}) {
    MeasureSpec m{Family::Max, {k, 0}};
    CheckReport r = run_check(Condition::TightCompleteMonogamy, m, s, state);
    CaseRow row = near_row("tight complete monogamy max/" + format_reduced_function(m.h) + " is violated (1 = fail)",
                           1.0, r.verdict == Verdict::Fail ? 1.0 : 0.0, 0.0, std::string("verdict ") + verdict_name(r.verdict));
    c.rows.push_back(row);
  }
  return c;
}

}  // namespace detail

inline std::vector<std::string> case_names() {
  return {"xi", "zeta", "phi", "varphi", "omega-i", "omega-ii", "w4", "hmin-witness", "ghz-relation", "eta", "w-class", "fig1", "fig2"};
}

// ---------------------------------------------------------------------------
// Figure sweeps

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const {
    auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw InvalidInput("table: no column '" + name + "'");
    return static_cast<std::size_t>(it - columns.begin());
  }
};

inline const std::vector<ReducedFunctionSpec>& figure_functions() {
  static const std::vector<ReducedFunctionSpec> hs{
      {ReducedKind::Concurrence, 0}, {ReducedKind::FidelityFPrime, 0}, {ReducedKind::PartialNorm2, 0}};
  return hs;
}

namespace detail {

inline void append_gated(std::vector<double>& row, const PureState& s) {
  for (const auto& h : figure_functions()) {
    row.push_back(measure_pure({Family::GSum, h}, s));
    row.push_back(measure_pure({Family::GMax, h}, s));
    row.push_back(measure_pure({Family::GMin, h}, s));
  }
}

inline std::vector<std::string> gated_columns() {
  std::vector<std::string> out;
  for (const auto& h : figure_functions()) {
    const std::string n = format_reduced_function(h);
    out.push_back("gsum_" + n);
    out.push_back("gmax_" + n);
    out.push_back("gmin_" + n);
  }
  return out;
}

}  // namespace detail

// GHZ class sqrt(t)|000> + sqrt(1-t)|111> on t = k / (points - 1).
inline Table figure1(std::size_t points) {
  if (points < 2) throw InvalidInput("figure1: at least two points");
  Table t;
  t.columns = {"t"};
  for (auto& c : detail::gated_columns()) t.columns.push_back(c);
  for (std::size_t k = 0; k < points; ++k) {
    const double x = static_cast<double>(k) / static_cast<double>(points - 1);
    std::vector<double> row{x};
    detail::append_gated(row, ghz_class(x));
    t.rows.push_back(std::move(row));
  }
  return t;
}

// W class on the grid p = i / (points - 1), q = j / (points - 1) restricted to
// p >= q >= 1 - p - q > 0.
inline Table figure2(std::size_t points) {
  if (points < 2) throw InvalidInput("figure2: at least two points");
  Table t;
  t.columns = {"p", "q", "r"};
  for (auto& c : detail::gated_columns()) t.columns.push_back(c);
  const double step = 1.0 / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i)
    for (std::size_t j = 0; j < points; ++j) {
      const double p = static_cast<double>(i) * step, q = static_cast<double>(j) * step, r = 1 - p - q;
      if (!(p >= q && q >= r && r > 1e-12)) continue;
      std::vector<double> row{p, q, r};
      detail::append_gated(row, w_class(p, q));
      t.rows.push_back(std::move(row));
    }
  return t;
}

namespace detail {

inline CaseReport case_fig1() {
  Table t = figure1(21);
  CaseReport c{"fig1", {}};
  const auto& mid = t.rows[10];
  c.rows.push_back(near_row("gmax_concurrence at t = 0.5", 1.0, mid[t.column("gmax_concurrence")], 1e-9));
  c.rows.push_back(near_row("gsum_concurrence at t = 0.5", 1.5, mid[t.column("gsum_concurrence")], 1e-9));
  double dev = 0, zero = 0;
  for (const auto& row : t.rows)
    for (const auto& h : figure_functions()) {
      const std::string n = format_reduced_function(h);
      dev = std::max(dev, std::abs(row[t.column("gmax_" + n)] - row[t.column("gmin_" + n)]));
    }
  for (std::size_t k = 1; k < t.columns.size(); ++k) zero = std::max(zero, std::abs(t.rows[0][k]));
  c.rows.push_back(near_row("max |gmax - gmin| over the grid", 0.0, dev, 0.0));
  c.rows.push_back(near_row("max value at t = 0", 0.0, zero, 0.0));
  return c;
}

inline CaseReport case_fig2() {
  Table t = figure2(21);
  CaseReport c{"fig2", {}};
  double simplex = 0, chain = 0;
  for (const auto& row : t.rows) {
    const double p = row[0], q = row[1], r = row[2];
    simplex = std::max({simplex, std::abs(p + q + r - 1), std::max(0.0, q - p), std::max(0.0, r - q), std::max(0.0, -r)});
    for (const auto& h : figure_functions()) {
      const std::string n = format_reduced_function(h);
      const double g = row[t.column("gsum_" + n)], g1 = row[t.column("gmax_" + n)], g2 = row[t.column("gmin_" + n)];
      chain = std::max({chain, g2 - g1, g1 - g});
    }
  }
  c.rows.push_back(greater_row("grid rows", 0.0, static_cast<double>(t.rows.size())));
  c.rows.push_back(near_row("max simplex and ordering violation of (p, q, r)", 0.0, simplex, 1e-12));
  c.rows.push_back(near_row("max violation of gmin <= gmax <= gsum", 0.0, std::max(0.0, chain), 1e-9));
  return c;
}

}  // namespace detail

inline CaseReport reproduce_case(const std::string& name) {
  if (name == "xi") return detail::case_xi();
  if (name == "zeta") return detail::case_zeta();
  if (name == "phi") return detail::case_phi();
  if (name == "varphi") return detail::case_varphi();
  if (name == "omega-i" || name == "omega-ii") return detail::case_omega(name);
  if (name == "w4") return detail::case_w4();
  if (name == "hmin-witness") return detail::case_hmin_witness();
  if (name == "ghz-relation") return detail::case_ghz_relation();
  if (name == "eta" || name == "w-class") return detail::case_tcm_witness(name);
  if (name == "fig1") return detail::case_fig1();
  if (name == "fig2") return detail::case_fig2();
  throw InvalidInput("unknown case '" + name + "'");
}

}  // namespace entmono
