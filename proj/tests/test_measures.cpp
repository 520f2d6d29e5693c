#include <gtest/gtest.h>

#include <set>

#include "entmono/measures.hpp"
#include "test_support.hpp"

namespace entmono {
namespace {

using testing::qubits;

MeasureSpec M(Family f, const char* h) { return {f, parse_reduced_function(h)}; }

Partition full(const PureState& s) { return Partition::singletons(s.labels()); }

PureState xi() {
  double s5 = std::sqrt(5.0) / 4.0;
  return qubits({{"0000", s5}, {"1111", 0.25}, {"0100", s5}, {"1010", s5}});
}

PureState zeta() { return qubits({{"000", std::sqrt(5.0 / 12)}, {"101", 1 / std::sqrt(3.0)}, {"110", 0.5}}); }

PureState phi() { return qubits({{"000", 1.0}, {"101", 1.0}, {"110", 1.0}}); }

PureState generalized_ghz(std::size_t n, const std::vector<double>& coeffs) {
  const int d = static_cast<int>(coeffs.size());
  std::vector<int> dims(n, d);
  std::size_t total = 1;
  for (int k : dims) total *= static_cast<std::size_t>(k);
  Vec v = Vec::Zero(static_cast<Eigen::Index>(total));
  for (int k = 0; k < d; ++k) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n; ++i) idx = idx * static_cast<std::size_t>(d) + static_cast<std::size_t>(k);
    v[static_cast<Eigen::Index>(idx)] = coeffs[static_cast<std::size_t>(k)];
  }
  return PureState::normalized(default_labels(n), dims, v);
}

TEST(Measures, FamilyNames) {
  for (auto f : kAllFamilies) EXPECT_EQ(parse_family(family_name(f)), f);
  EXPECT_THROW(parse_family("summ"), InvalidInput);
  EXPECT_EQ(format_measure(M(Family::GMinBipart, "concurrence")), "gmin-bipart/concurrence");
}

TEST(Measures, BipartitionSubsets) {
  EXPECT_EQ(bipartition_subsets(2).subsets, (std::vector<std::vector<int>>{{0}}));
  EXPECT_EQ(bipartition_subsets(3).subsets, (std::vector<std::vector<int>>{{0}, {1}, {2}}));
  EXPECT_EQ(bipartition_subsets(4).subsets,
            (std::vector<std::vector<int>>{{0}, {1}, {2}, {3}, {0, 1}, {0, 2}, {1, 2}}));
  for (std::size_t n = 2; n <= 8; ++n) {
    auto idx = bipartition_subsets(n);
    EXPECT_EQ(idx.subsets.size(), (std::size_t{1} << (n - 1)) - 1);
    std::set<std::uint64_t> seen;
    const std::uint64_t all = (std::uint64_t{1} << n) - 1;
    for (const auto& s : idx.subsets) {
      std::uint64_t m = 0;
      for (int k : s) m |= std::uint64_t{1} << k;
      EXPECT_TRUE(seen.insert(std::min(m, all ^ m)).second);
    }
  }
  EXPECT_THROW(bipartition_subsets(1), DimensionGuard);
  EXPECT_THROW(bipartition_subsets(9), DimensionGuard);
}

TEST(Measures, XiGenuineConcurrence) {
  PureState s = xi();
  EXPECT_NEAR(measure_pure(M(Family::GMinBipart, "concurrence"), s), std::sqrt(15.0) / 8, 1e-12);
  EXPECT_NEAR(measure_pure(M(Family::Max, "concurrence"), s, parse_partition("ABC|D", s.labels())),
              std::sqrt(15.0) / 8, 1e-12);
  EXPECT_NEAR(measure_pure(M(Family::Max, "concurrence"), s, parse_partition("AB|CD", s.labels())),
              std::sqrt(65.0) / 8, 1e-12);
}

TEST(Measures, ZetaMinNorm) {
  PureState s = zeta();
  EXPECT_NEAR(measure_pure(M(Family::GMin, "pnorm2"), s), 0.25, 1e-12);
  EXPECT_NEAR(measure_pure(M(Family::Max, "pnorm2"), s, parse_partition("A|BC", s.labels())), 5.0 / 12, 1e-12);
  EXPECT_NEAR(measure_pure(M(Family::Max, "pnorm2"), s, parse_partition("AB|C", s.labels())), 1.0 / 3, 1e-12);
}

TEST(Measures, PhiBipartiteMax) {
  PureState s = phi();
  EXPECT_NEAR(measure_pure(M(Family::Max, "pnorm2"), s, parse_partition("A|BC", s.labels())), 1.0 / 3, 1e-12);
}

TEST(Measures, SumIsAdditiveOverProducts) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    PureState ab = random_pure_state({2, 3}, seed, {"A", "B"});
    PureState cd = random_pure_state({2, 2}, seed + 50, {"C", "D"});
    PureState all = tensor_product(ab, cd);
    for (const auto& h : catalog()) {
      MeasureSpec m{Family::Sum, h};
      EXPECT_NEAR(measure_pure(m, all), measure_pure(m, ab) + measure_pure(m, cd), 1e-10)
          << format_reduced_function(h);
    }
  }
}

TEST(Measures, GenuineGate) {
  EXPECT_TRUE(genuine_gate(parse_reduced_function("tangle"), testing::ghz(3), full(testing::ghz(3))));
  PureState prod = tensor_product(testing::bell(), basis_state({2}, {0}, {"C"}));
  EXPECT_FALSE(genuine_gate(parse_reduced_function("tangle"), prod, full(prod)));
  for (const auto& h : catalog()) EXPECT_TRUE(genuine_gate(h, testing::w4(), full(testing::w4())));
}

TEST(Measures, BiseparableTripartiteStatesVanish) {
  PureState prod = tensor_product(random_pure_state({2, 2}, 3, {"A", "B"}), random_pure_state({2}, 4, {"C"}));
  PureState perm = permute_sites(prod, {0, 2, 1});
  for (const auto& h : catalog())
    for (auto f : kAllFamilies) {
      if (!is_genuine(f)) continue;
      EXPECT_EQ(measure_pure({f, h}, perm), 0.0) << family_name(f) << " " << format_reduced_function(h);
    }
}

TEST(Measures, GhzTimesProductVanishes) {
  PureState s = tensor_product(testing::ghz(3), basis_state({2}, {0}, {"D"}));
  for (auto f : kAllFamilies)
    if (is_genuine(f)) EXPECT_EQ(measure_pure(M(f, "tangle"), s), 0.0) << family_name(f);
}

// Two Bell pairs are biseparable across AB|CD yet every single-party marginal
// is maximally mixed. The bipartition minimum detects the cut, the single-party
// gate does not.
TEST(Measures, BellPairsAndTheSinglePartyGate) {
  PureState s = tensor_product(testing::bell({"A", "B"}), testing::bell({"C", "D"}));
  EXPECT_EQ(measure_pure(M(Family::GMinBipart, "concurrence"), s), 0.0);
  EXPECT_NEAR(measure_pure(M(Family::GMin, "tangle"), s), 1.0, 1e-12);
  EXPECT_NEAR(measure_pure(M(Family::Sum, "tangle"), s), 2.0, 1e-12);
}

TEST(Measures, Errors) {
  PureState g = testing::ghz(3);
  EXPECT_THROW(measure_pure(M(Family::Sum, "tangle"), g, parse_partition("A|B", g.labels())), InvalidInput);
  EXPECT_THROW(measure_pure(M(Family::Sum, "tangle"), g, parse_partition("ABC", g.labels())), InvalidInput);
  PureState p = tensor_product(testing::bell(), basis_state({2}, {1}, {"C"}));
  EXPECT_NEAR(measure_pure(M(Family::Sum, "tangle"), p, parse_partition("A|B", p.labels())), 1.0, 1e-12);
}

TEST(Measures, PermutationInvariance) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    PureState s = random_pure_state({2, 3, 2, 2}, seed);
    PureState p = permute_sites(s, {3, 1, 0, 2});
    for (auto f : kAllFamilies)
      for (const char* h : {"tangle", "entropy", "pnorm-min"})
        EXPECT_NEAR(measure_pure(M(f, h), s), measure_pure(M(f, h), p), 1e-11) << family_name(f) << " " << h;
  }
}

TEST(Measures, OrderingChains) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    std::vector<int> dims = seed % 2 ? std::vector<int>{2, 2, 2} : std::vector<int>{2, 2, 2, 2};
    PureState s = random_pure_state(dims, seed);
    for (const auto& h : catalog()) {
      auto v = [&](Family f) { return measure_pure({f, h}, s); };
      std::string tag = format_reduced_function(h);
      EXPECT_LE(v(Family::GMinBipart), v(Family::GMin) + 1e-9) << tag;
      EXPECT_LE(v(Family::GMin), v(Family::GMax) + 1e-9) << tag;
      EXPECT_LE(v(Family::GMax), v(Family::GSum) + 1e-9) << tag;
      EXPECT_LE(v(Family::Sum), v(Family::SumBipart) + 1e-9) << tag;
      EXPECT_LE(v(Family::Max), v(Family::MaxBipart) + 1e-9) << tag;
      if (is_subadditive_proven(h)) EXPECT_LE(v(Family::Max), v(Family::Sum) + 1e-9) << tag;
    }
  }
}

TEST(Measures, TripartiteCoincidences) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    PureState s = random_pure_state({2, 3, 2}, seed);
    for (const auto& h : catalog()) {
      auto v = [&](Family f) { return measure_pure({f, h}, s); };
      EXPECT_EQ(v(Family::SumBipart), v(Family::Sum));
      EXPECT_EQ(v(Family::MaxBipart), v(Family::Max));
      EXPECT_EQ(v(Family::GMinBipart), v(Family::GMin));
    }
  }
}

TEST(Measures, GeneralizedGhzRelation) {
  const std::vector<std::vector<double>> coeffs{{0.8, 0.6}, {0.3, 0.9, 0.5}, {1.0, 1.0}};
  for (std::size_t n : {3u, 4u, 5u})
    for (const auto& c : coeffs) {
      PureState s = generalized_ghz(n, c);
      for (const auto& h : catalog()) {
        auto v = [&](Family f) { return measure_pure({f, h}, s); };
        const double nn = static_cast<double>(n);
        std::string tag = format_reduced_function(h) + " n=" + std::to_string(n);
        EXPECT_NEAR(nn * v(Family::GMin), nn * v(Family::GMax), 1e-9) << tag;
        EXPECT_NEAR(nn * v(Family::GMax), 2 * v(Family::GSum), 1e-9) << tag;
        EXPECT_NEAR(v(Family::GMin), v(Family::GMinBipart), 1e-9) << tag;
      }
    }
}

TEST(Measures, W4HalfSplitsExceedSingles) {
  PureState w = testing::w4();
  MeasureSpec m = M(Family::MaxBipart, "tangle");
  EXPECT_NEAR(measure_pure(M(Family::Max, "tangle"), w), 0.75, 1e-12);
  EXPECT_NEAR(measure_pure(m, w), 1.0, 1e-12);
}

}  // namespace
}  // namespace entmono
