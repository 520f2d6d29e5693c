#include <gtest/gtest.h>

#include <unsupported/Eigen/KroneckerProduct>

#include "entmono/locc.hpp"
#include "test_support.hpp"

namespace entmono {
namespace {

MeasureSpec M(Family f, const char* h) { return {f, parse_reduced_function(h)}; }

LocalInstrument z_measurement(const std::string& party) {
  LocalInstrument z;
  z.party = party;
  z.kraus = {testing::diag({1, 0}), testing::diag({0, 1})};
  return z;
}

TEST(Locc, InstrumentCompleteness) {
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    for (int d : {2, 3})
      for (int n : {2, 3, 4}) {
        LocalInstrument inst = random_local_instrument(d, n, seed);
        EXPECT_EQ(inst.kraus.size(), static_cast<std::size_t>(n));
        EXPECT_LT(inst.completeness_error(), 1e-9);
      }
}

TEST(Locc, SingleOutcomeIsUnitary) {
  LocalInstrument u = random_local_instrument(3, 1, 9);
  ASSERT_EQ(u.kraus.size(), 1u);
  EXPECT_LT((u.kraus[0] * u.kraus[0].adjoint() - Mat::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Locc, Deterministic) {
  LocalInstrument a = random_local_instrument(2, 3, 44), b = random_local_instrument(2, 3, 44);
  for (std::size_t i = 0; i < a.kraus.size(); ++i) EXPECT_EQ(a.kraus[i], b.kraus[i]);
  EXPECT_NE(random_local_instrument(2, 3, 45).kraus[0], a.kraus[0]);
}

TEST(Locc, RejectsBadInputs) {
  EXPECT_THROW(random_local_instrument(1, 2, 1), InvalidInput);
  EXPECT_THROW(random_local_instrument(2, 0, 1), InvalidInput);
  PureState g = testing::ghz(3);
  EXPECT_THROW(apply_instrument(g, random_local_instrument(3, 2, 1, "A")), InvalidInput);
  EXPECT_THROW(apply_instrument(g, random_local_instrument(2, 2, 1, "Q")), InvalidInput);
}

TEST(Locc, UnitaryInstrumentRotatesLocally) {
  PureState psi = random_pure_state({2, 3}, 2);
  LocalInstrument u = random_local_instrument(3, 1, 5, "B");
  auto out = apply_instrument(psi, u);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_NEAR(out[0].probability, 1.0, 1e-12);
  Mat full = Eigen::kroneckerProduct(Mat::Identity(2, 2), u.kraus[0]).eval();
  EXPECT_NEAR(std::abs(out[0].state.amplitudes().dot(full * psi.amplitudes())), 1.0, 1e-12);
}

TEST(Locc, GhzCollapse) {
  PureState g = testing::ghz(3);
  auto out = apply_instrument(g, z_measurement("A"));
  ASSERT_EQ(out.size(), 2u);
  for (const auto& o : out) {
    EXPECT_NEAR(o.probability, 0.5, 1e-12);
    for (const char* l : {"A", "B", "C"}) EXPECT_TRUE(pure_marginal(o.state, {l}).has_value());
  }
}

TEST(Locc, ProductStaysProduct) {
  PureState s = tensor_product(random_pure_state({2}, 1, {"A"}), random_pure_state({2, 2}, 2, {"B", "C"}));
  for (const auto& o : apply_instrument(s, random_local_instrument(2, 3, 6, "B")))
    EXPECT_TRUE(pure_marginal(o.state, {"A"}).has_value());
}

TEST(Locc, ProbabilityConservation) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    PureState psi = random_pure_state({2, 3, 2}, seed);
    double total = 0;
    for (const auto& o : apply_instrument(psi, random_local_instrument(3, 4, seed, "B"))) total += o.probability;
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
}

TEST(Locc, LocalUnitaryInvariance) {
  PureState psi = random_pure_state({2, 2, 2}, 31);
  Partition full = Partition::singletons(psi.labels());
  for (auto f : kAllFamilies)
    for (const auto& h : catalog()) {
      TrialRecord r = monotonicity_trial({f, h}, psi, full, random_local_instrument(2, 1, 3, "C"));
      EXPECT_NEAR(r.delta, 0.0, 1e-10) << family_name(f) << " " << format_reduced_function(h);
    }
}

TEST(Locc, SumTypeIsMonotone) {
  SweepOptions o{300, 7};
  for (const char* h : {"tangle", "entropy", "concurrence", "negativity", "pnorm2"})
    for (auto f : {Family::Sum, Family::GSum, Family::SumBipart, Family::GSumBipart}) {
      SweepReport r = locc_sweep(M(f, h), o);
      EXPECT_EQ(r.violations, 0u) << family_name(f) << " " << h << " worst " << r.worst_delta;
      EXPECT_EQ(r.records.size(), 300u);
    }
}

TEST(Locc, SweepIsDeterministic) {
  SweepOptions o{50, 3};
  SweepReport a = locc_sweep(M(Family::Max, "tangle"), o), b = locc_sweep(M(Family::Max, "tangle"), o);
  EXPECT_EQ(a.worst_delta, b.worst_delta);
  EXPECT_EQ(a.violations, b.violations);
}

}  // namespace
}  // namespace entmono
