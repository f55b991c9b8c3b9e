#include "abelquot/report.hpp"
#include "abelquot/verify.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace abelquot;
using namespace testing_support;

namespace {

const EndoRing kRings[] = {EndoRing::Z, EndoRing::GaussianZ, EndoRing::EisensteinZ};

EllipticCurve curve(const char* id, EndoRing r) { return EllipticCurve::root_curve(id, r); }

GeneratorSpec matrix_gen(EndoRing r, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  return {MatrixHolonomy{{RingElement{r, a}, RingElement{r, b}, RingElement{r, c}, RingElement{r, d}}},
          {TorsionPoint::zero("E"), TorsionPoint::zero("E")}};
}

std::vector<ActionGroup> random_groups(std::uint64_t seed, std::size_t count, std::size_t cap = 256) {
  std::mt19937_64 rng(seed);
  std::vector<ActionGroup> out;
  while (out.size() < count) {
    try {
      out.push_back(random_diagonal_scenario(rng).group(cap));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::CapExceeded) throw;
    }
  }
  return out;
}

}  // namespace

TEST(Smoothness, PseudoreflectionPredicate) {
  const IntMatrix refl = block_diagonal(IntMatrix::identity(2), integral_rep({EndoRing::Z, -1}));
  const IntMatrix both = block_diagonal(integral_rep({EndoRing::Z, -1}), integral_rep({EndoRing::Z, -1}));
  EXPECT_TRUE(is_pseudoreflection(refl));
  EXPECT_FALSE(is_pseudoreflection(both));
  EXPECT_FALSE(is_pseudoreflection(IntMatrix::identity(4)));
}

TEST(Smoothness, KummerHasSixteenSingularPoints) {
  const ClassificationResult r = classify(kummer_action(curve("E", EndoRing::Z), curve("F", EndoRing::Z)).group());
  EXPECT_EQ(r.cls, SurfaceClass::Singular);
  EXPECT_EQ(r.smoothness.failing_count(), 16u);
  ASSERT_TRUE(r.smoothness.witness.has_value());
  EXPECT_EQ(r.smoothness.witness->stabilizer_order(), 2u);
  EXPECT_EQ(r.invariants.euler, 8);
}

TEST(Smoothness, TransposedCycleGivesSingularDualAction) {
  const Surface sq = Surface::square(curve("E", EndoRing::Z));
  const ActionGroup G =
      ActionGroup::from_specs(sq, {matrix_gen(EndoRing::Z, 0, 1, 1, 0), matrix_gen(EndoRing::Z, 0, -1, 1, -1)});
  const ClassificationResult r = classify(G);
  EXPECT_EQ(G.order(), 6u);
  EXPECT_EQ(r.cls, SurfaceClass::Singular);
  EXPECT_EQ(r.smoothness.failing_count(), 8u);
  for (const auto& p : r.smoothness.special_points)
    if (!p.pseudoreflection_generated) EXPECT_EQ(p.stabilizer_order(), 3u);
}

TEST(Smoothness, StabilizersFixTheirPoints) {
  for (const auto& G : random_groups(41, 40))
    for (const auto& p : smoothness(G).special_points) {
      EXPECT_EQ(p.stabilizer, stabilizer(G, p.point));
      for (const std::size_t i : p.stabilizer) EXPECT_EQ(G[i].apply(p.point), p.point);
    }
}

TEST(Smoothness, ReflectionTestAgreesWithAxisProducts) {
  std::size_t compared = 0;
  for (const auto& G : random_groups(42, 80))
    for (const auto& p : smoothness(G).special_points) {
      EXPECT_EQ(splits_along_axes(G, p.stabilizer), p.pseudoreflection_generated);
      ++compared;
    }
  EXPECT_GT(compared, 0u);
}

TEST(Invariants, EulerMatchesLefschetzCount) {
  for (const auto& G : random_groups(43, 80)) EXPECT_EQ(invariants(G).euler, lefschetz_euler(G));
  for (const auto& c : construction_gallery()) {
    const ActionGroup G = c.group();
    EXPECT_EQ(invariants(G).euler, lefschetz_euler(G)) << c.name;
  }
}

TEST(Invariants, IrregularityMatchesAveragedProjector) {
  for (const auto& G : random_groups(44, 80)) EXPECT_EQ(invariants(G).irregularity, averaged_irregularity(G));
  for (const auto& c : construction_gallery()) {
    const ActionGroup G = c.group();
    EXPECT_EQ(invariants(G).irregularity, averaged_irregularity(G)) << c.name;
  }
}

TEST(Invariants, FreenessAgreesWithFixedPointSearch) {
  for (const auto& G : random_groups(45, 60)) {
    bool free = true;
    for (std::size_t i = 1; i < G.order(); ++i) free = free && fixed_locus(G[i]).empty();
    EXPECT_EQ(invariants(G).free, free);
    EXPECT_EQ(is_free(G), free);
  }
}

TEST(Reduce, NormalFormStatementsOnRandomGroups) {
  std::size_t normalized = 0;
  for (const auto& G : random_groups(46, 120)) {
    bool first_trivial = true;
    for (const auto& g : G.elements()) first_trivial = first_trivial && g.block(0).is_identity();
    if (!first_trivial) continue;
    const NormalForm nf = normalize(G);
    ++normalized;
    EXPECT_TRUE(nf.r == 1 || nf.r == 2 || nf.r == 3 || nf.r == 4 || nf.r == 6);
    EXPECT_EQ(nf.group.order(), nf.r * nf.delta.size());
    EXPECT_TRUE(nf.group.first_axis_translations().size() == 1);
    EXPECT_TRUE(nf.group.second_axis_translations().size() == 1);
    if (nf.r > 1) {
      const AffineAuto& g = nf.group[nf.generator];
      EXPECT_EQ(nf.group.element_order(nf.generator), nf.r);
      EXPECT_TRUE(is_zero_mod_one(g.translation_part(1)));
      for (const std::size_t d : nf.delta) EXPECT_EQ(nf.group.product(d, nf.generator), nf.group.product(nf.generator, d));
    }
  }
  EXPECT_GT(normalized, 50u);
}

TEST(Reduce, TranslationConjugationPreservesOrder) {
  const Construction c = split_bundle_action(curve("E", EndoRing::Z), TorsionPoint("E", Rational(1, 2), 0), 2);
  const ActionGroup G = c.group();
  const ActionGroup H = conjugate_by_translation(G, {Rational(1, 3), 0, Rational(1, 5), Rational(2, 7)});
  EXPECT_EQ(H.order(), G.order());
  EXPECT_EQ(invariants(H).euler, invariants(G).euler);
  const ActionGroup S = swap_factors(G);
  EXPECT_EQ(S.surface().first.id, "F");
  EXPECT_EQ(S.order(), G.order());
}

TEST(Reduce, PipelineRejectsFreeActions) {
  const EllipticCurve E = curve("E", EndoRing::Z);
  const ActionGroup G = hyperelliptic_action(E, curve("F", EndoRing::Z), 2, TorsionPoint("E", Rational(1, 2), 0)).group();
  try {
    reduce_pipeline(G);
    FAIL() << "expected a lemma violation";
  } catch (const LemmaViolation& e) {
    EXPECT_EQ(e.lemma, "kernel");
  }
}

TEST(Reduce, SplitBundleResiduals) {
  for (int n = 1; n <= 4; ++n) {
    const EllipticCurve E = curve("E", EndoRing::Z);
    const Reduction r = reduce_pipeline(split_bundle_action(E, TorsionPoint("E", Rational(1, n), 0), n).group());
    EXPECT_EQ(r.bundle_order(), static_cast<std::size_t>(n));
    EXPECT_EQ(r.residual_order, static_cast<std::size_t>(n));
  }
  const Reduction s = reduce_pipeline(sym2_action(curve("E", EndoRing::Z)).group());
  EXPECT_EQ(s.residual, ResidualType::KleinFour);
  EXPECT_EQ(residual_name(s), "Z/2 x Z/2");
}

TEST(Classify, EveryFamilyAndRing) {
  for (const auto& c : construction_gallery()) {
    const ClassificationResult r = classify(c.group());
    EXPECT_TRUE(r.signature().matches(c.expected)) << c.name << " got " << class_tag(r.cls);
  }
}

TEST(Classify, EulerByClass) {
  for (const auto& c : construction_gallery()) {
    const ClassificationResult r = classify(c.group());
    const int expected = r.cls == SurfaceClass::P2 ? 3 : r.cls == SurfaceClass::P1xP1 ? 4 : 0;
    EXPECT_EQ(r.invariants.euler, expected) << c.name;
  }
}

TEST(Classify, BaseCurvesOfRuledSurfaces) {
  const EllipticCurve E = curve("E", EndoRing::GaussianZ);
  const TorsionPoint a("E", Rational(1, 2), Rational(1, 2));
  const ClassificationResult r = classify(split_bundle_action(E, a, 2).group());
  ASSERT_EQ(r.cls, SurfaceClass::SplitBundle);
  const auto [Q, q] = quotient_by_translation_subgroup(E, generated_subgroup("E", {a}));
  EXPECT_TRUE(same_lattice(*r.base, Q));
  EXPECT_EQ(r.base->ring, EndoRing::GaussianZ);
  const ClassificationResult s = classify(sym2_action(E).group());
  ASSERT_EQ(s.cls, SurfaceClass::Sym2);
  EXPECT_TRUE(same_lattice(*s.base, E));
}

TEST(Classify, HyperellipticAndAbelianParameters) {
  const EllipticCurve E = curve("E", EndoRing::Z);
  for (const int m : {2, 3, 4, 6}) {
    const ClassificationResult r =
        classify(hyperelliptic_action(E, curve("F", hyperelliptic_ring(m)), m, TorsionPoint("E", Rational(1, m), 0)).group());
    EXPECT_EQ(r.cls, SurfaceClass::Hyperelliptic);
    EXPECT_EQ(r.holonomy_group, "Z/" + std::to_string(m));
    EXPECT_EQ(r.invariants.irregularity, 1u);
    EXPECT_TRUE(r.invariants.free);
  }
  const ClassificationResult a = classify(abelian_action(E, curve("F", EndoRing::Z), 4).group());
  EXPECT_EQ(a.cls, SurfaceClass::Abelian);
  EXPECT_EQ(a.group_structure, "Z/4");
  EXPECT_EQ(a.invariants.irregularity, 2u);
}

TEST(Classify, RandomGroupsLandInExpectedClasses) {
  for (const auto& G : random_groups(47, 100)) {
    const ClassificationResult r = classify(G);
    switch (r.invariants.irregularity) {
      case 0: EXPECT_TRUE(r.cls == SurfaceClass::P2 || r.cls == SurfaceClass::P1xP1 || r.cls == SurfaceClass::Singular); break;
      case 1:
        EXPECT_TRUE(r.cls == SurfaceClass::SplitBundle || r.cls == SurfaceClass::Sym2 ||
                    r.cls == SurfaceClass::Hyperelliptic || r.cls == SurfaceClass::Singular);
        break;
      case 2: EXPECT_EQ(r.cls, SurfaceClass::Abelian); break;
      default: ADD_FAILURE() << "irregularity " << r.invariants.irregularity;
    }
    if (r.cls == SurfaceClass::Hyperelliptic) EXPECT_TRUE(r.invariants.free);
    if (r.cls == SurfaceClass::Singular) EXPECT_FALSE(r.smoothness.smooth);
  }
}

TEST(Classify, ReportsAreDeterministic) {
  for (const auto& c : construction_gallery()) {
    const std::string a = report_json(classify(c.group())).dump();
    const std::string b = report_json(classify(c.group())).dump();
    EXPECT_EQ(a, b) << c.name;
  }
}
