#include <gtest/gtest.h>

#include "entmono/redfun.hpp"
#include "test_support.hpp"

namespace entmono {
namespace {

ReducedFunctionSpec H(const char* name) { return parse_reduced_function(name); }

TEST(RedFun, ParseAndFormat) {
  for (const auto& s : catalog()) EXPECT_EQ(parse_reduced_function(format_reduced_function(s)), s);
  EXPECT_EQ(H("tsallis:2").param, 2.0);
  EXPECT_EQ(H("renyi:0.5").kind, ReducedKind::Renyi);
  EXPECT_THROW(H("tsallis"), InvalidInput);
  EXPECT_THROW(H("tsallis:1"), InvalidInput);
  EXPECT_THROW(H("tsallis:-1"), InvalidInput);
  EXPECT_THROW(H("renyi:1.5"), InvalidInput);
  EXPECT_THROW(H("tsallisprime:0.5"), InvalidInput);
  EXPECT_THROW(H("tangle:2"), InvalidInput);
  EXPECT_THROW(H("entropyy"), InvalidInput);
  EXPECT_THROW(H("renyi:abc"), InvalidInput);
}

TEST(RedFun, MaximallyMixedQubit) {
  DensityOperator half = testing::diag_op({0.5, 0.5});
  EXPECT_NEAR(h_eval(H("tangle"), half), 1.0, 1e-15);
  EXPECT_NEAR(h_eval(H("concurrence"), half), 1.0, 1e-15);
  EXPECT_NEAR(h_eval(H("negativity"), half), 0.5, 1e-15);
  EXPECT_NEAR(h_eval(H("entropy"), half), std::log(2.0), 1e-15);
  EXPECT_NEAR(h_eval(H("renyi:0.5"), half), std::log(2.0), 1e-15);
  EXPECT_NEAR(h_eval(H("pnorm2"), half), 0.5, 1e-15);
  EXPECT_NEAR(h_eval(H("pnorm-min"), half), 0.5, 1e-15);
  EXPECT_NEAR(h_eval(H("pnorm-minprime"), half), 1.0, 1e-15);
  EXPECT_NEAR(h_eval(H("pnegativity"), half), 0.5, 1e-15);
  EXPECT_NEAR(h_eval(H("fidelityF"), half), 0.75, 1e-15);
  EXPECT_NEAR(h_eval(H("fidelityFprime"), half), 0.75, 1e-15);
  EXPECT_NEAR(h_eval(H("fidelityAF"), half), 1.0 - std::sqrt(0.25), 1e-15);
  EXPECT_NEAR(h_eval(H("tsallis:2"), half), 0.5, 1e-15);
  EXPECT_NEAR(h_eval(H("tsallisprime:2"), half), 0.5, 1e-15);
  EXPECT_NEAR(h_eval(H("renyiprime:0.5"), half), std::sqrt(2.0) - 1.0, 1e-15);
}

TEST(RedFun, MinNormWitnessValues) {
  DensityOperator ab = detail::min_norm_witness();
  EXPECT_NEAR(h_eval(H("pnorm-min"), ab), 0.5, 1e-12);
  EXPECT_NEAR(h_eval(H("pnorm-min"), partial_trace(ab, {"A"})), 0.1, 1e-12);
  EXPECT_NEAR(h_eval(H("pnorm-min"), partial_trace(ab, {"B"})), 0.1, 1e-12);
  EXPECT_NEAR(h_eval(H("pnorm-minprime"), ab), 1.0, 1e-12);
  EXPECT_NEAR(h_eval(H("pnorm-minprime"), partial_trace(ab, {"A"})), 0.4, 1e-12);
}

TEST(RedFun, PartialNegativityOnSpectra) {
  EXPECT_NEAR(h_of_spectrum(H("pnegativity"), make_spectrum({5.0 / 8, 3.0 / 8})), std::sqrt(15.0) / 8, 1e-12);
  EXPECT_NEAR(h_of_spectrum(H("pnegativity"), make_spectrum({3.0 / 8, 5.0 / 16, 5.0 / 16})),
              std::sqrt(15.0) / (8 * std::sqrt(2.0)), 1e-12);
}

TEST(RedFun, ZeroOnPureStates) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    PureState psi = random_pure_state({3}, seed);
    DensityOperator p = DensityOperator::from_pure(psi);
    for (const auto& s : catalog()) EXPECT_LE(std::abs(h_eval(s, p)), 1e-10) << format_reduced_function(s);
    PureState prod = tensor_product(random_pure_state({2}, seed, {"A"}), random_pure_state({2}, seed + 100, {"B"}));
    DensityOperator a = partial_trace(prod, {"A"});
    for (const auto& s : catalog()) EXPECT_LE(h_eval(s, a), 1e-10) << format_reduced_function(s);
  }
}

TEST(RedFun, NonnegativeAndIdentities) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    DensityOperator r = random_density_operator({4}, 1 + seed % 4, seed);
    for (const auto& s : catalog()) EXPECT_GE(h_eval(s, r), 0.0);
    double c = h_eval(H("concurrence"), r);
    EXPECT_NEAR(c * c, h_eval(H("tangle"), r), 1e-12);
    EXPECT_NEAR(h_eval(H("fidelityF"), r), 2.0 * h_eval(H("tsallis:3"), r), 1e-12);
    EXPECT_NEAR(h_eval(H("tsallisprime:2"), r), h_eval(H("tsallis:2"), r), 1e-12);
    EXPECT_NEAR(h_eval(H("renyiprime:0.5"), r), 0.5 * h_eval(H("tsallis:0.5"), r), 1e-12);
    Mat m = r.matrix();
    double p2 = (m * m).trace().real();
    EXPECT_NEAR(h_eval(H("fidelityFprime"), r), 1.0 - p2 * p2, 1e-12);
  }
}

TEST(RedFun, RejectsInvalidSpectra) {
  Mat bad = testing::diag({1.2, -0.2});
  EXPECT_THROW(eigenvalues(DensityOperator({"A"}, {2}, bad, DensityOperator::Check::Trusted)), InvalidInput);
}

TEST(RedFun, TangleIsSubadditive) {
  ProbeReport r = property_probe(H("tangle"), Property::Subadditivity, {10000, 3, {2, 2}, Preload::Stated});
  EXPECT_EQ(r.total_violations(), 0u);
  EXPECT_EQ(r.expectation, Mark::Holds);
}

TEST(RedFun, EntropyIsAdditive) {
  ProbeReport r = property_probe(H("entropy"), Property::Additivity, {2000, 4, {2, 3}, Preload::Stated});
  EXPECT_EQ(r.total_violations(), 0u);
}

TEST(RedFun, MinNormWitnessIsPreloaded) {
  ProbeReport r = property_probe(H("pnorm-min"), Property::Subadditivity, {200, 5, {2, 2}, Preload::Stated});
  EXPECT_GE(r.total_violations(), 1u);
  EXPECT_NEAR(r.worst_margin, 0.3, 1e-12);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(r.witness->operands[0].dims(), (std::vector<int>{4, 4}));
}

TEST(RedFun, KnownCounterexamples) {
  auto minw = known_counterexamples(H("pnorm-min"), Property::Subadditivity);
  ASSERT_EQ(minw.items.size(), 1u);
  EXPECT_NEAR(minw.items[0].margin, 0.3, 1e-12);
  auto minp = known_counterexamples(H("pnorm-minprime"), Property::Subadditivity);
  ASSERT_EQ(minp.items.size(), 1u);
  EXPECT_NEAR(minp.items[0].margin, 0.2, 1e-12);
  EXPECT_TRUE(known_counterexamples(H("tangle"), Property::Subadditivity).items.empty());
  auto renyi = known_counterexamples(H("renyi:0.5"), Property::Subadditivity);
  EXPECT_TRUE(renyi.items.empty());
  EXPECT_TRUE(renyi.flag.has_value());
}

TEST(RedFun, ConstructedRenyiWitness) {
  auto w = constructed_witnesses(H("renyi:0.5"), Property::Subadditivity);
  ASSERT_FALSE(w.items.empty());
  EXPECT_GT(w.items[0].margin, 1e-3);
}

TEST(RedFun, ProbesAreDeterministic) {
  ProbeOptions o{300, 17, {2, 2}, Preload::None};
  ProbeReport a = property_probe(H("negativity"), Property::Subadditivity, o);
  ProbeReport b = property_probe(H("negativity"), Property::Subadditivity, o);
  EXPECT_EQ(a.violations, b.violations);
  EXPECT_EQ(a.worst_margin, b.worst_margin);
}

// The mark pattern of the catalog: asserted properties show no violation,
// asserted failures are exhibited by random search or a constructed witness.
TEST(RedFun, PropertyTablePattern) {
  for (const auto& s : catalog()) {
    for (auto p : {Property::Concavity, Property::StrictConcavity, Property::Subadditivity, Property::Additivity}) {
      Mark m = property_marks(s).of(p);
      ProbeOptions o{1500, 11, {2, 2}, Preload::StatedAndConstructed};
      if (p == Property::Concavity || p == Property::StrictConcavity) o.dims = {3};
      ProbeReport r = property_probe(s, p, o);
      std::string tag = format_reduced_function(s) + " " + property_name(p);
      if (m == Mark::Holds) {
        EXPECT_EQ(r.total_violations(), 0u) << tag << " worst " << r.worst_margin;
      } else if (m == Mark::Fails) {
        EXPECT_GE(r.total_violations(), 1u) << tag;
      }
    }
  }
}

// With the smallest nonzero eigenvalue as the minimal norm, mixing operators of
// different support can create tiny eigenvalues, so concavity fails once rank
// deficient operators are sampled.
TEST(RedFun, MinNormConcavityFailsAcrossRanks) {
  ProbeOptions o{2000, 11, {3}, Preload::None, RankMode::MixedRank};
  EXPECT_GT(property_probe(H("pnorm-min"), Property::Concavity, o).violations, 0u);
  EXPECT_GT(property_probe(H("pnorm-minprime"), Property::Concavity, o).violations, 0u);
  EXPECT_EQ(property_probe(H("pnorm2"), Property::Concavity, o).violations, 0u);
  EXPECT_EQ(property_probe(H("tangle"), Property::Concavity, o).violations, 0u);
  Witness w;
  w.operands = {testing::diag_op({0.5, 0.5, 0.0}), testing::diag_op({0.0, 0.5, 0.5})};
  w.weight = 0.99;
  EXPECT_GT(violation_margin(H("pnorm-min"), Property::Concavity, w), 0.4);
}

TEST(RedFun, PartialNegativityStrictOnQubits) {
  ProbeReport r = property_probe(H("pnegativity"), Property::StrictConcavity, {1000, 2, {3}, Preload::None});
  EXPECT_EQ(r.violations, 0u);
  EXPECT_FALSE(r.notes.empty());
}

}  // namespace
}  // namespace entmono
