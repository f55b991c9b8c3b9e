#include "abelquot/verify.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace abelquot;
using namespace testing_support;

namespace {

const EndoRing kRings[] = {EndoRing::Z, EndoRing::GaussianZ, EndoRing::EisensteinZ};

RingElement random_element(std::mt19937_64& rng, EndoRing r) {
  return {r, uniform(rng, -5, 5), r == EndoRing::Z ? 0 : uniform(rng, -5, 5)};
}

// Fixed points of u on C/Λ counted on the grid (1/N)Λ / Λ with N = deg(u - 1).
std::size_t grid_fixed_points(const RingElement& u) {
  const IntMatrix m = integral_rep(u) - IntMatrix::identity(2);
  const auto N = abs(leibniz_det(m)).convert_to<std::int64_t>();
  return grid_solutions(m, QVec(2, Rational(0)), N).size();
}

}  // namespace

TEST(Ring, UnitGroupsHaveOrdersTwoFourSix) {
  EXPECT_EQ(units(EndoRing::Z).size(), 2u);
  EXPECT_EQ(units(EndoRing::GaussianZ).size(), 4u);
  EXPECT_EQ(units(EndoRing::EisensteinZ).size(), 6u);
  for (const auto r : kRings)
    for (const auto& u : units(r)) {
      ASSERT_TRUE(ring_element_order(u).has_value());
      EXPECT_EQ(static_cast<std::size_t>(*ring_element_order(u)), matrix_order(integral_rep(u)));
      EXPECT_EQ(norm(u), 1);
    }
}

TEST(Ring, RepresentationIsMultiplicativeAndAdditive) {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 300; ++k) {
    const EndoRing r = kRings[rng() % 3];
    const RingElement x = random_element(rng, r), y = random_element(rng, r);
    EXPECT_EQ(integral_rep(x * y), integral_rep(x) * integral_rep(y));
    EXPECT_EQ(integral_rep(x + y), integral_rep(x) + integral_rep(y));
    EXPECT_EQ(BigInt(norm(x)), leibniz_det(integral_rep(x)));
  }
}

TEST(Ring, NonUnitsHaveNoOrder) {
  EXPECT_FALSE(ring_element_order({EndoRing::Z, 2, 0}).has_value());
  EXPECT_FALSE(ring_element_order({EndoRing::GaussianZ, 1, 1}).has_value());
  EXPECT_FALSE(primitive_unit(EndoRing::Z, 4).has_value());
  EXPECT_TRUE(primitive_unit(EndoRing::EisensteinZ, 3).has_value());
}

// Table of fixed-point counts for automorphisms of order 2, 3, 4, 6.
TEST(FixedPoints, TableMatchesGridEnumeration) {
  const std::map<int, std::size_t> expected{{2, 4}, {3, 3}, {4, 2}, {6, 1}};
  std::set<int> seen;
  for (const auto r : kRings)
    for (const auto& u : units(r)) {
      const int o = *ring_element_order(u);
      if (o < 2) continue;
      seen.insert(o);
      EXPECT_EQ(grid_fixed_points(u), expected.at(o)) << to_string(u);
      EXPECT_EQ(fixed_point_count(u), expected.at(o)) << to_string(u);
    }
  EXPECT_EQ(seen, (std::set<int>{2, 3, 4, 6}));
}

TEST(FixedPoints, OrderSumVanishes) {
  for (const auto& row : order_sum_suite()) EXPECT_TRUE(row.pass) << row.name << " " << row.detail;
}

TEST(Torsion, GeneratedSubgroupMatchesBruteForce) {
  std::mt19937_64 rng(22);
  for (int k = 0; k < 100; ++k) {
    std::vector<TorsionPoint> gens;
    for (int g = 0; g < 2; ++g) gens.emplace_back("E", random_fraction(rng, 6), random_fraction(rng, 6));
    std::set<TorsionPoint> brute{TorsionPoint::zero("E")};
    for (bool grew = true; grew;) {
      grew = false;
      const std::vector<TorsionPoint> cur(brute.begin(), brute.end());
      for (const auto& p : cur)
        for (const auto& g : gens) grew = brute.insert(p + g).second || grew;
    }
    const auto got = generated_subgroup("E", gens);
    EXPECT_EQ(std::set<TorsionPoint>(got.begin(), got.end()), brute);
  }
  EXPECT_THROW(generated_subgroup("E", {TorsionPoint("F", Rational(1, 2), 0)}), PreconditionError);
}

TEST(Torsion, FullTorsionHasOrderNSquared) {
  for (int n = 1; n <= 6; ++n) {
    const auto s = generated_subgroup("E", {TorsionPoint("E", Rational(1, n), 0), TorsionPoint("E", 0, Rational(1, n))});
    EXPECT_EQ(s.size(), static_cast<std::size_t>(n * n));
  }
}

TEST(Quotient, DegreeEqualsSubgroupOrderAndKernelIsExact) {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 80; ++k) {
    const EllipticCurve E = EllipticCurve::root_curve("E", kRings[rng() % 3]);
    const TorsionPoint a("E", random_fraction(rng, 6), random_fraction(rng, 6));
    const auto S = generated_subgroup("E", {a});
    const auto [Q, q] = quotient_by_translation_subgroup(E, S);
    EXPECT_EQ(q.degree(), S.size());
    for (const auto& s : S) EXPECT_TRUE(push_forward(s, q).is_zero());
    // points of E[12] outside S survive
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 12; ++j) {
        const TorsionPoint p("E", Rational(i, 12), Rational(j, 12));
        const bool in_s = std::find(S.begin(), S.end(), p) != S.end();
        EXPECT_EQ(push_forward(p, q).is_zero(), in_s);
      }
  }
}

TEST(Quotient, LatticeIndependentOfGenerators) {
  const EllipticCurve E = EllipticCurve::root_curve("E", EndoRing::Z);
  const auto S1 = generated_subgroup("E", {TorsionPoint("E", Rational(1, 6), Rational(1, 3))});
  const auto S2 = generated_subgroup("E", {TorsionPoint("E", Rational(5, 6), Rational(2, 3))});
  EXPECT_TRUE(same_lattice(quotient_by_translation_subgroup(E, S1).first, quotient_by_translation_subgroup(E, S2).first));
  EXPECT_THROW(quotient_by_translation_subgroup(E, {TorsionPoint("E", Rational(1, 2), 0)}), PreconditionError);
}

TEST(Quotient, ComplexMultiplicationSurvivesOnlyStableSubgroups) {
  const EllipticCurve E = EllipticCurve::root_curve("E", EndoRing::GaussianZ);
  const auto stable = generated_subgroup("E", {TorsionPoint("E", Rational(1, 2), Rational(1, 2))});
  const auto unstable = generated_subgroup("E", {TorsionPoint("E", Rational(1, 2), 0)});
  EXPECT_EQ(quotient_by_translation_subgroup(E, stable).first.ring, EndoRing::GaussianZ);
  EXPECT_EQ(quotient_by_translation_subgroup(E, unstable).first.ring, EndoRing::Z);
}

TEST(Character, TrivializingCoverKillsCharacter) {
  for (const auto r : kRings) {
    const EllipticCurve E = EllipticCurve::root_curve("E", r);
    for (int n = 1; n <= 4; ++n)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const Character chi("E", Rational(i, n), Rational(j, n));
          const TrivializingCover t = trivializing_sublattice(E, chi);
          const std::size_t ord = character_order(chi).convert_to<std::size_t>();
          // evaluate χ on the cover's basis vectors directly
          for (std::size_t c = 0; c < 2; ++c) {
            const Rational v = chi.values[0] * t.map.matrix(0, c) + chi.values[1] * t.map.matrix(1, c);
            EXPECT_TRUE(is_integer(v));
          }
          EXPECT_EQ(t.map.degree(), ord);
          EXPECT_EQ(t.point.order(), ord);
          EXPECT_TRUE(push_forward(t.point, t.map).is_zero());
        }
  }
}

TEST(Character, PullbackAlongQuotientComposes) {
  const EllipticCurve E = EllipticCurve::root_curve("E", EndoRing::Z);
  const auto [Q, q] = quotient_by_translation_subgroup(E, generated_subgroup("E", {TorsionPoint("E", Rational(1, 2), 0)}));
  const Character chi(Q.id, Rational(1, 2), 0);
  const Character back = pullback_character(chi, q);
  EXPECT_EQ(back.curve, "E");
  EXPECT_THROW(pullback_character(Character("X", 0, 0), q), PreconditionError);
}
