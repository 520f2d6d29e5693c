#include <gtest/gtest.h>

#include <algorithm>

#include "entmono/verify.hpp"
#include "test_support.hpp"

namespace entmono {
namespace {

MeasureSpec spec(Family f, ReducedKind k) { return {f, {k, 0}}; }

TEST(Registry, NamesResolveAndNormalize) {
  for (const auto& name : registry_names()) {
    ReferenceState r = registry_state(name);
    EXPECT_EQ(r.name, name);
    EXPECT_NEAR(r.state.amplitudes().squaredNorm(), 1.0, 1e-12) << name;
  }
  EXPECT_THROW(registry_state("nope"), InvalidInput);
  EXPECT_THROW(registry_state("w-class", {{"p", 0.8}, {"q", 0.5}}), InvalidInput);
}

TEST(Registry, ExactAmplitudes) {
  const Vec w4 = registry_state("w4").state.amplitudes();
  for (int idx : {8, 4, 2, 1}) EXPECT_DOUBLE_EQ(w4[idx].real(), 0.5);
  const Vec zeta = registry_state("zeta").state.amplitudes();
  EXPECT_NEAR(zeta[0].real(), std::sqrt(5.0 / 12), 1e-15);
  EXPECT_NEAR(zeta[5].real(), 1 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(zeta[6].real(), 0.5, 1e-15);
  ReferenceState eta = registry_state("eta");
  EXPECT_EQ(eta.state.dims(), (std::vector<int>{2, 4, 2}));
  Vec ab = Vec::Zero(4), bc = Vec::Zero(4);
  ab[0] = std::sqrt(0.7);
  ab[3] = std::sqrt(0.3);
  bc[0] = std::sqrt(0.6);
  bc[3] = std::sqrt(0.4);
  Eigen::Index i = 0;
  for (Eigen::Index a = 0; a < 4; ++a)
    for (Eigen::Index b = 0; b < 4; ++b) EXPECT_NEAR(std::abs(eta.state.amplitudes()[i++] - ab[a] * bc[b]), 0.0, 1e-15);
  PureState w = w_class(0.5, 0.3);
  EXPECT_NEAR(w.amplitudes()[4].real(), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(w.amplitudes()[1].real(), std::sqrt(0.2), 1e-15);
}

TEST(Verify, SumTangleUnificationOnRandomStates) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    PureState s = random_pure_state({2, 2, 2, 2}, 300 + seed);
    CheckReport r = run_check(Condition::Unification, spec(Family::Sum, ReducedKind::Tangle), s, "random");
    EXPECT_NE(r.verdict, Verdict::Fail) << seed;
    EXPECT_GT(r.comparisons.size(), 10u);
  }
}

TEST(Verify, MaxTangleOnW4) {
  PureState s = registry_state("w4").state;
  LatticeEvaluator eval(spec(Family::Max, ReducedKind::Tangle), s);
  CheckReport u = check_unification(eval, "w4");
  for (const auto& c : u.comparisons) {
    if (c.partition_x == "state x probe") {
      // The maximum over blocks is not additive on products.
      EXPECT_EQ(c.status, Verdict::Fail);
      continue;
    }
    EXPECT_NE(c.status, Verdict::Fail) << c.partition_x << " -> " << c.partition_y;
  }
  CheckReport h = check_hierarchy(eval, "w4");
  EXPECT_EQ(h.verdict, Verdict::Fail);
  bool found = false;
  for (const auto& c : h.comparisons)
    if (c.partition_x == "A|B|C|D" && c.partition_y == "AB|CD") {
      found = true;
      EXPECT_NEAR(c.value_x, 0.75, 1e-12);
      EXPECT_NEAR(c.value_y, 1.0, 1e-12);
      EXPECT_EQ(c.status, Verdict::Fail);
    }
  EXPECT_TRUE(found);
}

TEST(Verify, XiBreaksGmeConcurrenceHierarchy) {
  CheckReport r = run_check(Condition::Hierarchy, spec(Family::GMinBipart, ReducedKind::Concurrence),
                            registry_state("xi").state, "xi");
  EXPECT_EQ(r.verdict, Verdict::Fail);
  bool found = false;
  for (const auto& c : r.comparisons)
    if (c.partition_x == "A|B|C|D" && c.partition_y == "AB|CD") {
      found = true;
      EXPECT_EQ(c.status, Verdict::Fail);
    }
  EXPECT_TRUE(found);
}

TEST(Verify, SumTangleCompleteMonogamyOnPhi) {
  CheckReport r = run_check(Condition::CompleteMonogamy, spec(Family::Sum, ReducedKind::Tangle),
                            registry_state("phi").state, "phi");
  EXPECT_NE(r.verdict, Verdict::Fail);
}

TEST(Verify, ProductWithBipartiteFactorIsTight) {
  PureState s = tensor_product(testing::bell(), basis_state({2}, {0}, {"C"}));
  CheckReport r = run_check(Condition::TightCompleteMonogamy, spec(Family::Sum, ReducedKind::VonNeumann), s, "bell x 0");
  EXPECT_EQ(r.verdict, Verdict::Pass);
  bool triggered = false;
  for (const auto& c : r.comparisons) triggered |= c.relation == "=0";
  EXPECT_TRUE(triggered);
}

TEST(Verify, ZetaBreaksGminPnorm2Tightness) {
  CheckReport r = run_check(Condition::TightCompleteMonogamy, spec(Family::GMin, ReducedKind::PartialNorm2),
                            registry_state("zeta").state, "zeta");
  EXPECT_EQ(r.verdict, Verdict::Fail);
}

TEST(Verify, WClassBreaksMaxTightness) {
  CheckReport r = run_check(Condition::TightCompleteMonogamy, spec(Family::Max, ReducedKind::VonNeumann),
                            registry_state("w-class").state, "w-class");
  EXPECT_EQ(r.verdict, Verdict::Fail);
}

TEST(Verify, Pnorm2EqualityWithoutSeparabilityOnW4) {
  // h2 = 1 - lambda_max has h(rho^CD) = h(rho^C) + h(rho^D) = 1/2 on W4 although rho^CD is entangled.
  PureState s = registry_state("w4").state;
  CheckReport r = run_check(Condition::TightCompleteMonogamy, spec(Family::Sum, ReducedKind::PartialNorm2), s, "w4");
  EXPECT_EQ(r.verdict, Verdict::Fail);
  bool found = false;
  for (const auto& c : r.comparisons)
    if (c.partition_x == "C|D" && c.partition_y == "A|B|C|D -> A|B|CD") {
      found = true;
      EXPECT_GT(c.value_x, 0.06);
      EXPECT_EQ(c.status, Verdict::Fail);
    }
  EXPECT_TRUE(found);
  EXPECT_NE(run_check(Condition::TightCompleteMonogamy, spec(Family::Sum, ReducedKind::Tangle), s, "w4").verdict,
            Verdict::Fail);
}

TEST(Verify, GenuineBiseparableMarginalsAreNotConstrained) {
  CheckReport r = run_check(Condition::Unification, spec(Family::GSum, ReducedKind::Tangle), registry_state("xi").state, "xi");
  EXPECT_NE(r.verdict, Verdict::Fail);
  bool skipped = false;
  for (const auto& c : r.comparisons) skipped |= c.note == "not applicable";
  EXPECT_TRUE(skipped);
}

TEST(Verify, GenuineStrictnessIsFlagged) {
  CheckReport r = run_check(Condition::Hierarchy, spec(Family::GSum, ReducedKind::Tangle), testing::ghz(3), "ghz");
  EXPECT_NE(r.verdict, Verdict::Fail);
  for (const auto& c : r.comparisons) EXPECT_EQ(c.relation, ">");
}

TEST(Verify, Guards) {
  EXPECT_THROW(run_check(Condition::Hierarchy, spec(Family::Sum, ReducedKind::Tangle),
                         random_pure_state({2, 2, 2, 2, 2, 2}, 1), "six"),
               DimensionGuard);
  EXPECT_THROW(parse_condition("nope"), InvalidInput);
  EXPECT_EQ(parse_condition("tight-complete-monogamy"), Condition::TightCompleteMonogamy);
}

TEST(Expectations, TableCells) {
  ReducedFunctionSpec entropy{ReducedKind::VonNeumann, 0}, renyi{ReducedKind::Renyi, 2}, pnorm2{ReducedKind::PartialNorm2, 0};
  ReducedFunctionSpec fprime{ReducedKind::FidelityFPrime, 0};
  EXPECT_EQ(expected_condition(Family::Sum, entropy, Condition::TightCompleteMonogamy, 3).cell, Cell::Holds);
  EXPECT_EQ(expected_condition(Family::Sum, renyi, Condition::Hierarchy, 3).cell, Cell::Fails);
  EXPECT_EQ(expected_condition(Family::Sum, fprime, Condition::Hierarchy, 3).provenance, "conjectured");
  EXPECT_EQ(expected_condition(Family::Max, entropy, Condition::TightCompleteMonogamy, 3).cell, Cell::Fails);
  EXPECT_EQ(expected_condition(Family::Max, pnorm2, Condition::CompleteMonogamy, 3).cell, Cell::Fails);
  EXPECT_EQ(expected_condition(Family::Max, entropy, Condition::Unification, 4).cell, Cell::Open);
  EXPECT_EQ(expected_condition(Family::Max, entropy, Condition::Hierarchy, 4).cell, Cell::Fails);
  EXPECT_EQ(expected_condition(Family::GMax, pnorm2, Condition::Unification, 3).cell, Cell::Fails);
  EXPECT_EQ(expected_condition(Family::SumBipart, renyi, Condition::Hierarchy, 4).cell, Cell::Holds);
  EXPECT_EQ(expected_condition(Family::GMin, entropy, Condition::Hierarchy, 3).cell, Cell::Unlisted);
}

TEST(Expectations, JudgeUsesDesignatedWitnesses) {
  PureState w4 = registry_state("w4").state;
  ConditionOutcome o = judge(run_check(Condition::Hierarchy, spec(Family::Max, ReducedKind::Tangle), w4, "w4"), 4);
  EXPECT_TRUE(o.hard);
  EXPECT_TRUE(o.expect_fail);
  EXPECT_FALSE(o.mismatch);
  ConditionOutcome other =
      judge(run_check(Condition::Hierarchy, spec(Family::Max, ReducedKind::Tangle), testing::ghz(4), "ghz4"), 4);
  EXPECT_FALSE(other.hard);
}

TEST(Expectations, FilteredGrid) {
  ConditionFilter f;
  f.families = {Family::Sum};
  f.hs = {{ReducedKind::Tangle, 0}};
  f.states = {"zeta", "ghz-class"};
  f.conditions = {Condition::Hierarchy, Condition::TightCompleteMonogamy};
  auto out = run_conditions(f);
  ASSERT_EQ(out.size(), 4u);
  for (const auto& o : out) {
    EXPECT_TRUE(o.hard);
    EXPECT_FALSE(o.mismatch) << o.report.state_id << " " << condition_name(o.report.condition);
  }
}

TEST(Cases, ExactCasesReproduce) {
  for (const char* name : {"zeta", "w4", "hmin-witness", "ghz-relation", "fig1", "fig2"}) {
    CaseReport c = reproduce_case(name);
    EXPECT_FALSE(c.rows.empty()) << name;
    for (const auto& r : c.rows) EXPECT_TRUE(r.pass) << name << ": " << r.quantity << " computed " << r.computed;
  }
  EXPECT_THROW(reproduce_case("nope"), InvalidInput);
}

TEST(Cases, XiExactRowsAndWoottersDiscrepancy) {
  CaseReport c = reproduce_case("xi");
  ASSERT_EQ(c.rows.size(), 4u);
  EXPECT_TRUE(c.rows[0].pass);
  EXPECT_TRUE(c.rows[1].pass);
  EXPECT_NEAR(c.rows[2].computed, 0.2795, 1e-3);
  EXPECT_TRUE(c.rows[3].pass);
}

TEST(Figures, Figure1Shape) {
  Table t = figure1(5);
  EXPECT_EQ(t.rows.size(), 5u);
  EXPECT_EQ(t.columns.size(), 10u);
  EXPECT_NEAR(t.rows[2][t.column("gsum_concurrence")], 1.5, 1e-12);
  EXPECT_NEAR(t.rows[2][t.column("gmin_pnorm2")], 0.5, 1e-12);
  EXPECT_THROW(figure1(1), InvalidInput);
}

TEST(Figures, Figure2Region) {
  Table t = figure2(11);
  EXPECT_FALSE(t.rows.empty());
  for (const auto& row : t.rows) {
    EXPECT_GE(row[0], row[1]);
    EXPECT_GE(row[1], row[2] - 1e-12);
    EXPECT_GT(row[2], 0.0);
  }
}

}  // namespace
}  // namespace entmono
