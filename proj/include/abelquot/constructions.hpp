#pragma once

#include "abelquot/action.hpp"
#include "abelquot/classify.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace abelquot {

/// A canonical action together with the classification it should produce.
struct Construction {
  std::string name;
  Surface surface;
  std::vector<GeneratorSpec> generators;
  ClassSignature expected;

  ActionGroup group(std::size_t cap = ActionGroup::kDefaultCap) const {
    return ActionGroup::from_specs(surface, generators, cap);
  }
};

namespace detail {

inline GeneratorSpec diag(RingElement p1, RingElement p2, TorsionPoint a, TorsionPoint b) {
  return {DiagonalHolonomy{p1, p2}, {std::move(a), std::move(b)}};
}

inline GeneratorSpec diag(const Surface& s, RingElement p1, RingElement p2) {
  return diag(p1, p2, TorsionPoint::zero(s.first.id), TorsionPoint::zero(s.second.id));
}

inline RingElement unit(const EllipticCurve& e, std::int64_t a) { return {e.root_ring, a, 0}; }

inline void require_order(const TorsionPoint& a, const EllipticCurve& E, std::size_t n) {
  if (a.curve != E.id) throw PreconditionError("point is not on curve " + E.id);
  if (a.order() != n)
    throw PreconditionError("point " + to_string(a) + " has order " + a.order().str() + ", expected " + std::to_string(n));
}

inline RingElement automorphism_of_order(const EllipticCurve& F, int m) {
  const auto u = primitive_unit(F.root_ring, m);
  if (!u || !acts_on(F, *u))
    throw PreconditionError("curve " + F.id + " has no automorphism of order " + std::to_string(m));
  return *u;
}

inline EllipticCurve subgroup_quotient(const EllipticCurve& E, const TorsionPoint& a) {
  return quotient_by_translation_subgroup(E, generated_subgroup(E.id, {a})).first;
}

}  // namespace detail

/// S_3 acting on {x + y + z = 0} ⊂ E^3, written on E^2 via (x, y): the swap
/// (x, y) ↦ (y, x) and the cycle (x, y) ↦ (y, -x - y). Matrices act on
/// column vectors, so the cycle is [[0, 1], [-1, -1]]; its transpose
/// generates the dual action, whose quotient has eight A2 points.
inline Construction p2_action(EndoRing ring = EndoRing::Z) {
  const EllipticCurve E = EllipticCurve::root_curve("E", ring);
  Construction c{"P2", Surface::square(E), {}, {}};
  auto m = [&](std::int64_t a, std::int64_t b, std::int64_t cc, std::int64_t d) {
    return GeneratorSpec{MatrixHolonomy{{RingElement{ring, a}, RingElement{ring, b}, RingElement{ring, cc}, RingElement{ring, d}}},
                         {TorsionPoint::zero("E"), TorsionPoint::zero("E")}};
  };
  c.generators = {m(0, 1, 1, 0), m(0, 1, -1, -1)};
  c.expected.cls = SurfaceClass::P2;
  return c;
}

/// ⟨[-1] x 1, 1 x [-1]⟩.
inline Construction p1xp1_action(const EllipticCurve& E, const EllipticCurve& F) {
  Construction c{"P1xP1", Surface::product(E, F), {}, {}};
  c.generators = {detail::diag(c.surface, detail::unit(E, -1), detail::unit(F, 1)),
                  detail::diag(c.surface, detail::unit(E, 1), detail::unit(F, -1))};
  c.expected.cls = SurfaceClass::P1xP1;
  return c;
}

/// The ruled surface P(O ⊕ L) over E/⟨a⟩ with L of order n, as (E x F)/G.
///
/// n = 1: G = ⟨1 x [-1]⟩. n = 2, 3: G = ⟨t_a x φ⟩ with φ of order 2n on F.
/// n = 4: G = ⟨t_{2a} x t_b, t_a x φ⟩ with φ = i and b the non-zero 2-torsion
/// point fixed by i, so that G ≅ Z/2 x Z/4 and N = ⟨1 x (t_b ∘ [-1])⟩.
inline Construction split_bundle_action(const EllipticCurve& E, const TorsionPoint& a, int n,
                                        std::optional<EllipticCurve> F = std::nullopt) {
  if (n < 1 || n > 4) throw PreconditionError("bundle order must be between 1 and 4");
  detail::require_order(a, E, static_cast<std::size_t>(n));
  if (!F) F = EllipticCurve::root_curve("F", n == 3 ? EndoRing::EisensteinZ : n == 1 ? EndoRing::Z : EndoRing::GaussianZ);
  Construction c{"SplitBundle n=" + std::to_string(n), Surface::product(E, *F), {}, {}};
  const TorsionPoint o = TorsionPoint::zero(F->id);
  switch (n) {
    case 1: c.generators = {detail::diag(c.surface, detail::unit(E, 1), detail::unit(*F, -1))}; break;
    case 2:
    case 3: c.generators = {detail::diag(detail::unit(E, 1), detail::automorphism_of_order(*F, 2 * n), a, o)}; break;
    case 4: {
      const RingElement phi = detail::automorphism_of_order(*F, 4);
      const TorsionPoint b(F->id, Rational(1, 2), Rational(1, 2));
      if (frac(rep_on(*F, phi) * b.vec()) != b.vec())
        throw InternalError("2-torsion point is not fixed by the order-4 automorphism");
      c.generators = {detail::diag(detail::unit(E, 1), detail::unit(*F, 1), BigInt(2) * a, b),
                      detail::diag(detail::unit(E, 1), phi, a, o)};
      break;
    }
  }
  c.expected.cls = SurfaceClass::SplitBundle;
  c.expected.bundle_order = static_cast<std::size_t>(n);
  c.expected.base = detail::subgroup_quotient(E, a);
  return c;
}

/// {t_a x (t_a ∘ [ε]) : a ∈ E[2], ε = ±1} on E x E.
inline Construction sym2_action(const EllipticCurve& E) {
  Construction c{"Sym2", Surface::square(E), {}, {}};
  const TorsionPoint h1(E.id, Rational(1, 2), 0), h2(E.id, 0, Rational(1, 2));
  const RingElement one = detail::unit(E, 1);
  c.generators = {detail::diag(one, one, h1, h1), detail::diag(one, one, h2, h2),
                  detail::diag(c.surface, one, detail::unit(E, -1))};
  c.expected.cls = SurfaceClass::Sym2;
  c.expected.base = E;
  return c;
}

/// ⟨t_a x ψ⟩ with a of order m on E and ψ of order m on F; acts freely.
inline Construction hyperelliptic_action(const EllipticCurve& E, const EllipticCurve& F, int m, const TorsionPoint& a) {
  if (m != 2 && m != 3 && m != 4 && m != 6) throw PreconditionError("holonomy order must be 2, 3, 4 or 6");
  detail::require_order(a, E, static_cast<std::size_t>(m));
  Construction c{"Hyperelliptic m=" + std::to_string(m), Surface::product(E, F), {}, {}};
  c.generators = {detail::diag(detail::unit(E, 1), detail::automorphism_of_order(F, m), a,
                               TorsionPoint::zero(F.id))};
  c.expected.cls = SurfaceClass::Hyperelliptic;
  c.expected.holonomy_order = static_cast<std::size_t>(m);
  c.expected.group_order = static_cast<std::size_t>(m);
  return c;
}

/// The partner curve whose ring has an automorphism of order m.
inline EndoRing hyperelliptic_ring(int m) {
  switch (m) {
    case 3:
    case 6: return EndoRing::EisensteinZ;
    case 4: return EndoRing::GaussianZ;
    default: return EndoRing::Z;
  }
}

/// Translation by (1/k, 0) x (0, 1/k): a cyclic group of order k.
inline Construction abelian_action(const EllipticCurve& E, const EllipticCurve& F, int k) {
  if (k < 1) throw PreconditionError("translation order must be positive");
  Construction c{"Abelian k=" + std::to_string(k), Surface::product(E, F), {}, {}};
  c.generators = {detail::diag(detail::unit(E, 1), detail::unit(F, 1), TorsionPoint(E.id, Rational(1, k), 0),
                               TorsionPoint(F.id, 0, Rational(1, k)))};
  c.expected.cls = SurfaceClass::Abelian;
  c.expected.group_order = static_cast<std::size_t>(k);
  return c;
}

/// ⟨[-1] x [-1]⟩: sixteen A1 singularities.
inline Construction kummer_action(const EllipticCurve& E, const EllipticCurve& F) {
  Construction c{"Kummer", Surface::product(E, F), {}, {}};
  c.generators = {detail::diag(c.surface, detail::unit(E, -1), detail::unit(F, -1))};
  c.expected.cls = SurfaceClass::Singular;
  return c;
}

/// Builds a construction by family name, as the command line names them.
/// `n` is the bundle order for SplitBundle and the group order for Abelian;
/// `m` is the holonomy order for Hyperelliptic; `ring` is the ring of E.
inline Construction construct(std::string_view family, int n = 1, EndoRing ring = EndoRing::Z, int m = 2) {
  const EllipticCurve E = EllipticCurve::root_curve("E", ring);
  const EllipticCurve Fz = EllipticCurve::root_curve("F", EndoRing::Z);
  if (family == "P2") return p2_action(ring);
  if (family == "P1xP1") return p1xp1_action(E, Fz);
  if (family == "SplitBundle") {
    if (n < 1 || n > 4) throw PreconditionError("SplitBundle needs 1 <= n <= 4");
    return split_bundle_action(E, TorsionPoint(E.id, Rational(1, n), 0), n);
  }
  if (family == "Sym2") return sym2_action(E);
  if (family == "Hyperelliptic") {
    if (m != 2 && m != 3 && m != 4 && m != 6) throw PreconditionError("Hyperelliptic needs m in {2, 3, 4, 6}");
    return hyperelliptic_action(E, EllipticCurve::root_curve("F", hyperelliptic_ring(m)), m,
                                TorsionPoint(E.id, Rational(1, m), 0));
  }
  if (family == "Abelian") {
    if (n < 1 || n > 1000) throw PreconditionError("Abelian needs 1 <= n <= 1000");
    return abelian_action(E, Fz, n);
  }
  if (family == "Kummer") return kummer_action(E, Fz);
  throw PreconditionError("unknown construction '" + std::string(family) + "'");
}

/// One representative per parameter choice, for round-trip checks.
inline std::vector<Construction> construction_gallery() {
  std::vector<Construction> out;
  const std::vector<EndoRing> rings{EndoRing::Z, EndoRing::GaussianZ, EndoRing::EisensteinZ};
  for (const auto r : rings) out.push_back(p2_action(r));
  for (const auto r : rings)
    out.push_back(p1xp1_action(EllipticCurve::root_curve("E", r), EllipticCurve::root_curve("F", EndoRing::Z)));
  for (const auto r : rings) {
    const EllipticCurve E = EllipticCurve::root_curve("E", r);
    for (int n = 1; n <= 4; ++n) out.push_back(split_bundle_action(E, TorsionPoint(E.id, Rational(1, n), 0), n));
  }
  for (const auto r : rings) out.push_back(sym2_action(EllipticCurve::root_curve("E", r)));
  for (const int m : {2, 3, 4, 6}) {
    const EllipticCurve E = EllipticCurve::root_curve("E", EndoRing::Z);
    out.push_back(hyperelliptic_action(E, EllipticCurve::root_curve("F", hyperelliptic_ring(m)), m,
                                       TorsionPoint(E.id, Rational(1, m), 0)));
  }
  for (int k = 1; k <= 4; ++k)
    out.push_back(abelian_action(EllipticCurve::root_curve("E", EndoRing::Z), EllipticCurve::root_curve("F", EndoRing::Z), k));
  return out;
}

}  // namespace abelquot
