#include "abelquot/verify.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace abelquot;
using namespace testing_support;

namespace {

Surface product(EndoRing a, EndoRing b) {
  return Surface::product(EllipticCurve::root_curve("E", a), EllipticCurve::root_curve("F", b));
}

GeneratorSpec diag(EndoRing a, std::int64_t p1, EndoRing b, std::int64_t p2, std::int64_t p2b, TorsionPoint t1,
                   TorsionPoint t2) {
  return {DiagonalHolonomy{{a, p1, 0}, {b, p2, p2b}}, {std::move(t1), std::move(t2)}};
}

TorsionPoint pt(const char* c, Rational x, Rational y) { return TorsionPoint(c, x, y); }

}  // namespace

TEST(AffineAuto, ComposeInverseAndPower) {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 100; ++k) {
    const Scenario s = random_diagonal_scenario(rng);
    const Surface& surf = s.surface;
    const AffineAuto g = from_spec(surf, s.generators[0]);
    EXPECT_TRUE(compose(g, inverse(g)).is_identity());
    EXPECT_TRUE(compose(inverse(g), g).is_identity());
    const QVec x{random_fraction(rng, 5), random_fraction(rng, 5), random_fraction(rng, 5), random_fraction(rng, 5)};
    EXPECT_EQ(compose(g, g).apply(x), g.apply(g.apply(x)));
    EXPECT_EQ(power(g, 3), compose(g, compose(g, g)));
  }
}

TEST(ActionGroup, ClosureMatchesNaiveClosure) {
  std::mt19937_64 rng(32);
  int checked = 0;
  while (checked < 60) {
    const Scenario s = random_diagonal_scenario(rng);
    std::vector<AffineAuto> gens;
    for (const auto& g : s.generators) gens.push_back(from_spec(s.surface, g));
    ActionGroup G;
    try {
      G = ActionGroup::close(s.surface, gens, 200);
    } catch (const Error&) {
      continue;
    }
    const auto brute = naive_closure(gens);
    EXPECT_EQ(std::set<AffineAuto>(G.elements().begin(), G.elements().end()), brute);
    ++checked;
  }
}

TEST(ActionGroup, TableIsAGroupLaw) {
  std::mt19937_64 rng(33);
  int checked = 0;
  while (checked < 40) {
    const Scenario s = random_diagonal_scenario(rng);
    ActionGroup G;
    try {
      G = s.group(200);
    } catch (const Error&) {
      continue;
    }
    const std::size_t n = G.order();
    EXPECT_TRUE(G[0].is_identity());
    for (std::size_t i = 0; i < n; ++i) {
      std::set<std::size_t> row;
      for (std::size_t j = 0; j < n; ++j) row.insert(G.product(i, j));
      EXPECT_EQ(row.size(), n);
      EXPECT_EQ(G.product(i, G.inverse_of(i)), 0u);
      EXPECT_EQ(matrix_order(G[i].linear()) > 0, true);
      EXPECT_EQ(power(G[i], G.element_order(i)).is_identity(), true);
    }
    for (int t = 0; t < 50; ++t) {
      const std::size_t a = rng() % n, b = rng() % n, c = rng() % n;
      EXPECT_EQ(G.product(G.product(a, b), c), G.product(a, G.product(b, c)));
      EXPECT_EQ(G[G.product(a, b)], compose(G[a], G[b]));
    }
    EXPECT_TRUE(G.is_normal(G.translation_subgroup()));
    ++checked;
  }
}

TEST(ActionGroup, LargeDenominatorsUseExactArithmetic) {
  const Surface s = product(EndoRing::Z, EndoRing::Z);
  const Rational tiny(1, BigInt(1) << 40);
  const ActionGroup G = ActionGroup::from_specs(s, {diag(EndoRing::Z, -1, EndoRing::Z, 1, 0, pt("E", tiny, 0), pt("F", 0, 0))});
  EXPECT_EQ(G.order(), 2u);
  EXPECT_EQ(G[1].translation()[0], tiny);
}

TEST(ActionGroup, ErrorsCarryCodes) {
  const Surface s = product(EndoRing::Z, EndoRing::Z);
  try {
    ActionGroup::from_specs(s, {diag(EndoRing::Z, 1, EndoRing::Z, 1, 0, pt("E", Rational(1, 2000), 0), pt("F", 0, 0))});
    FAIL() << "expected cap error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CapExceeded);
  }
  try {
    ActionGroup::from_specs(s, {diag(EndoRing::Z, 2, EndoRing::Z, 1, 0, pt("E", 0, 0), pt("F", 0, 0))});
    FAIL() << "expected infinite order";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InfiniteOrder);
    EXPECT_NE(std::string(e.what()).find("linear part not of finite order"), std::string::npos);
  }
  const Surface sq = Surface::square(EllipticCurve::root_curve("E", EndoRing::Z));
  auto m = [](std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
    const EndoRing z = EndoRing::Z;
    return GeneratorSpec{MatrixHolonomy{{RingElement{z, a}, RingElement{z, b}, RingElement{z, c}, RingElement{z, d}}},
                         {TorsionPoint::zero("E"), TorsionPoint::zero("E")}};
  };
  try {
    ActionGroup::from_specs(sq, {m(1, 1, 0, 1)});
    FAIL() << "expected infinite order";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InfiniteOrder);
  }
  // two finite-order matrices generating an infinite group
  try {
    ActionGroup::from_specs(sq, {m(0, -1, 1, 0), m(0, 1, -1, -1)});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_TRUE(e.code() == ErrorCode::InfiniteOrder || e.code() == ErrorCode::CapExceeded);
  }
  EXPECT_THROW(ActionGroup::from_specs(s, {m(0, 1, 1, 0)}), PreconditionError);
  EXPECT_THROW(ActionGroup::from_specs(product(EndoRing::Z, EndoRing::Z),
                                       {diag(EndoRing::Z, 1, EndoRing::GaussianZ, 0, 1, pt("E", 0, 0), pt("F", 0, 0))}),
               PreconditionError);
}

TEST(ActionGroup, DistinguishedSubgroups) {
  // <t_(1/2,0) x [-1], 1 x t_(0,1/2)> on E x F
  const Surface s = product(EndoRing::Z, EndoRing::Z);
  const ActionGroup G = ActionGroup::from_specs(
      s, {diag(EndoRing::Z, 1, EndoRing::Z, -1, 0, pt("E", Rational(1, 2), 0), pt("F", 0, 0)),
          diag(EndoRing::Z, 1, EndoRing::Z, 1, 0, pt("E", 0, 0), pt("F", 0, Rational(1, 2)))});
  EXPECT_EQ(G.order(), 4u);
  EXPECT_EQ(G.translation_subgroup().size(), 2u);
  EXPECT_EQ(G.holonomy_group().size(), 2u);
  EXPECT_EQ(G.first_axis_translations().size(), 1u);
  EXPECT_EQ(G.second_axis_translations().size(), 2u);
  EXPECT_EQ(G.first_factor_kernel().size(), 2u);
  EXPECT_TRUE(G.is_abelian());
  EXPECT_TRUE(G.is_diagonal());
  EXPECT_FALSE(G.translations_only());
}

TEST(AbelianInvariants, KnownGroups) {
  EXPECT_EQ(abelian_invariants({1}), std::vector<std::size_t>{});
  EXPECT_EQ(abelian_invariants({1, 2, 2, 2}), (std::vector<std::size_t>{2, 2}));
  EXPECT_EQ(abelian_invariants({1, 2, 4, 4}), (std::vector<std::size_t>{4}));
  EXPECT_EQ(abelian_invariants({1, 2, 2, 2, 4, 4, 4, 4}), (std::vector<std::size_t>{2, 4}));
  EXPECT_EQ(abelian_invariants({1, 2, 3, 3, 6, 6}), (std::vector<std::size_t>{6}));
  EXPECT_EQ(abelian_group_name({2, 4}), "Z/2 x Z/4");
}

TEST(FixedLocus, IsolatedPointsNumberLefschetz) {
  std::mt19937_64 rng(34);
  int checked = 0;
  while (checked < 150) {
    const Scenario s = random_diagonal_scenario(rng);
    const AffineAuto g = from_spec(s.surface, s.generators[0]);
    const BigInt d = leibniz_det(g.linear() - IntMatrix::identity(4));
    const FixedLocus f = fixed_locus(g);
    for (const auto& p : f.isolated) EXPECT_EQ(g.apply(p), p);
    for (const auto& c : f.curves) {
      EXPECT_EQ(g.apply(c.base), c.base);
      EXPECT_TRUE(((g.linear() - IntMatrix::identity(4)) * c.lattice).is_zero());
    }
    if (d != 0) {
      EXPECT_EQ(BigInt(f.isolated.size()), abs(d));
      EXPECT_TRUE(f.curves.empty());
    } else {
      EXPECT_TRUE(f.isolated.empty());
    }
    ++checked;
  }
}

TEST(FixedLocus, TranslationsAndIdentity) {
  const AffineAuto id;
  EXPECT_TRUE(fixed_locus(id).full);
  const AffineAuto t = AffineAuto::translation_by(pt("E", Rational(1, 2), 0), pt("F", 0, 0));
  EXPECT_TRUE(fixed_locus(t).empty());
}

TEST(Subtorus, DiagonalSplittingOfSwap) {
  // swap (x, y) -> (y, x) on E x E; B = diagonal
  const EllipticCurve E = EllipticCurve::root_curve("E", EndoRing::Z);
  const Surface sq = Surface::square(E);
  const EndoRing z = EndoRing::Z;
  const ActionGroup G = ActionGroup::from_specs(
      sq, {GeneratorSpec{MatrixHolonomy{{RingElement{z, 0}, RingElement{z, 1}, RingElement{z, 1}, RingElement{z, 0}}},
                         {TorsionPoint::zero("E"), TorsionPoint::zero("E")}}});
  const IntMatrix B{{1, 0}, {0, 1}, {1, 0}, {0, 1}};
  const SubtorusSplitting sp = split_invariant_subtorus(G, B);
  const IntMatrix L = G[1].linear();
  EXPECT_EQ(hermite_normal_form(L * sp.C_lattice), hermite_normal_form(sp.C_lattice));
  EXPECT_EQ(sp.isogeny_degree, 4);
  EXPECT_EQ(sp.lifted_group.order(), G.order() * 4);
  EXPECT_TRUE(sp.lifted_group.is_diagonal());
  EXPECT_THROW(split_invariant_subtorus(G, IntMatrix{{1, 0}, {0, 1}, {0, 0}, {0, 0}}), PreconditionError);
}

TEST(Subtorus, ComplexStructureGroupCommutesWithHolonomy) {
  for (const auto r : {EndoRing::Z, EndoRing::GaussianZ, EndoRing::EisensteinZ}) {
    const Construction c = p2_action(r);
    const ActionGroup G = c.group();
    for (const auto& U : complex_structure_group(G.surface()))
      for (const auto& L : G.holonomy_group()) EXPECT_EQ(U * L, L * U);
  }
}
