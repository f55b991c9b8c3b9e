#pragma once

#include "abelquot/errors.hpp"
#include "abelquot/normal_form.hpp"
#include "abelquot/ring.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace abelquot {

/// An elliptic curve C / Λ described without periods. `frame` holds a basis of
/// Λ (as columns) in the coordinates of a root curve whose lattice basis is
/// (1, gen) for the root ring, or an arbitrary basis when the root ring is Z.
/// Root curves have frame = I; quotients and covers carry rational frames.
struct EllipticCurve {
  std::string id;
  EndoRing ring = EndoRing::Z;       // ring whose units act on this lattice
  EndoRing root_ring = EndoRing::Z;  // meaning of ring elements on this curve
  std::string root;
  RatMatrix frame = RatMatrix::identity(2);

  static EllipticCurve root_curve(std::string id, EndoRing ring) {
    EllipticCurve e;
    e.root = id;
    e.id = std::move(id);
    e.ring = ring;
    e.root_ring = ring;
    return e;
  }

  /// A curve whose lattice has basis `frame` in the root coordinates of `parent`.
  /// The automorphism ring is the root ring when the lattice is stable under
  /// the root generator, Z otherwise.
  static EllipticCurve derived(std::string id, const EllipticCurve& parent, RatMatrix frame) {
    EllipticCurve e;
    e.id = std::move(id);
    e.root = parent.root;
    e.root_ring = parent.root_ring;
    e.frame = std::move(frame);
    e.ring = EndoRing::Z;
    if (e.root_ring != EndoRing::Z) {
      const RatMatrix conj = inverse(e.frame) * to_rational(integral_rep(RingElement::generator(e.root_ring))) * e.frame;
      if (is_integral(conj)) e.ring = e.root_ring;
    }
    return e;
  }
};

/// Two curves have the same lattice in the same ambient coordinates.
inline bool same_lattice(const EllipticCurve& a, const EllipticCurve& b) {
  return a.root == b.root && hermite_normal_form(a.frame) == hermite_normal_form(b.frame);
}

/// Whether x is an endomorphism of the curve's lattice.
inline bool acts_on(const EllipticCurve& e, const RingElement& x) {
  if (x.ring != e.root_ring) return x.b == 0;
  return is_integral(inverse(e.frame) * to_rational(integral_rep(x)) * e.frame);
}

/// Integral matrix of multiplication by x on the curve's own lattice basis.
inline IntMatrix rep_on(const EllipticCurve& e, const RingElement& x) {
  RingElement y = x;
  if (x.ring != e.root_ring) {
    if (x.b != 0) throw PreconditionError("ring element " + to_string(x) + " does not act on curve " + e.id);
    y = RingElement{e.root_ring, x.a, 0};
  }
  const RatMatrix m = inverse(e.frame) * to_rational(integral_rep(y)) * e.frame;
  if (!is_integral(m)) throw PreconditionError("ring element " + to_string(x) + " does not preserve the lattice of " + e.id);
  return to_integer(m);
}

/// Group automorphisms of the curve, expressed in its root ring.
inline std::vector<RingElement> automorphisms(const EllipticCurve& e) {
  if (e.ring == e.root_ring) return units(e.ring);
  return {RingElement{e.root_ring, 1, 0}, RingElement{e.root_ring, -1, 0}};
}

/// A point of E[n] given by coordinates modulo 1 on the lattice basis.
struct TorsionPoint {
  std::string curve;
  std::array<Rational, 2> coords{Rational(0), Rational(0)};

  TorsionPoint() = default;
  TorsionPoint(std::string c, Rational x, Rational y) : curve(std::move(c)), coords{frac(x), frac(y)} {}
  static TorsionPoint zero(const std::string& c) { return TorsionPoint(c, 0, 0); }

  bool is_zero() const { return coords[0] == 0 && coords[1] == 0; }
  BigInt order() const { return lcm(den(coords[0]), den(coords[1])); }
  QVec vec() const { return {coords[0], coords[1]}; }

  friend bool operator==(const TorsionPoint&, const TorsionPoint&) = default;
  friend bool operator<(const TorsionPoint& a, const TorsionPoint& b) {
    if (a.curve != b.curve) return a.curve < b.curve;
    return lex_less(a.vec(), b.vec());
  }
};

inline TorsionPoint operator+(const TorsionPoint& p, const TorsionPoint& q) {
  if (p.curve != q.curve) throw PreconditionError("adding points on different curves");
  return TorsionPoint(p.curve, p.coords[0] + q.coords[0], p.coords[1] + q.coords[1]);
}

inline TorsionPoint operator-(const TorsionPoint& p) { return TorsionPoint(p.curve, -p.coords[0], -p.coords[1]); }

inline TorsionPoint operator*(const BigInt& k, const TorsionPoint& p) {
  return TorsionPoint(p.curve, Rational(k) * p.coords[0], Rational(k) * p.coords[1]);
}

inline std::string to_string(const TorsionPoint& p) {
  return "(" + to_string(p.coords[0]) + "," + to_string(p.coords[1]) + ")";
}

/// Subgroup of E generated by the given points.
inline std::vector<TorsionPoint> generated_subgroup(const std::string& curve, const std::vector<TorsionPoint>& gens) {
  std::set<TorsionPoint> seen{TorsionPoint::zero(curve)};
  std::vector<TorsionPoint> frontier{TorsionPoint::zero(curve)};
  while (!frontier.empty()) {
    std::vector<TorsionPoint> next;
    for (const auto& p : frontier)
      for (const auto& g : gens) {
        auto q = p + g;
        if (seen.insert(q).second) next.push_back(q);
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

/// A character of the lattice Λ -> C^1, stored as angles: value k/n means ζ_n^k.
/// It defines a torsion line bundle of the same order.
struct Character {
  std::string curve;
  std::array<Rational, 2> values{Rational(0), Rational(0)};

  Character() = default;
  Character(std::string c, Rational v1, Rational v2) : curve(std::move(c)), values{frac(v1), frac(v2)} {}

  bool is_trivial() const { return values[0] == 0 && values[1] == 0; }
  friend bool operator==(const Character&, const Character&) = default;
};

inline BigInt character_order(const Character& chi) { return lcm(den(chi.values[0]), den(chi.values[1])); }

/// The isogeny between two curves induced by the identity of C. `matrix` sends
/// source-basis coordinates to target-basis coordinates; it is integral because
/// the source lattice sits inside the target lattice.
struct CurveQuotientMap {
  std::string source;
  std::string target;
  RatMatrix matrix = RatMatrix::identity(2);

  BigInt degree() const {
    const Rational d = determinant(matrix);
    return boost::multiprecision::abs(num(d));
  }
};

inline TorsionPoint push_forward(const TorsionPoint& p, const CurveQuotientMap& q) {
  if (p.curve != q.source) throw PreconditionError("point " + p.curve + " is not on the source of the map");
  const QVec v = q.matrix * p.vec();
  return TorsionPoint(q.target, v[0], v[1]);
}

namespace detail {

inline std::string lattice_tag(const RatMatrix& basis) {
  const RatMatrix h = hermite_normal_form(basis);
  std::string s = "[";
  for (std::size_t i = 0; i < h.rows(); ++i) {
    if (i) s += ";";
    for (std::size_t j = 0; j < h.cols(); ++j) s += (j ? "," : "") + to_string(h(i, j));
  }
  return s + "]";
}

}  // namespace detail

/// E' = E / S for a finite subgroup S, with the quotient map q: E -> E'.
/// The lattice of E' is Λ + lifts(S), with the canonical Hermite basis.
inline std::pair<EllipticCurve, CurveQuotientMap> quotient_by_translation_subgroup(const EllipticCurve& E,
                                                                                    const std::vector<TorsionPoint>& S) {
  std::set<TorsionPoint> group(S.begin(), S.end());
  for (const auto& s : group)
    if (s.curve != E.id) throw PreconditionError("point on " + s.curve + " passed for curve " + E.id);
  if (!group.count(TorsionPoint::zero(E.id))) throw PreconditionError("translation subgroup must contain 0");
  for (const auto& s : group)
    for (const auto& t : group)
      if (!group.count(s + t)) throw PreconditionError("translation set is not closed under addition");

  if (group.size() == 1) return {E, CurveQuotientMap{E.id, E.id, RatMatrix::identity(2)}};

  RatMatrix gens(2, 2 + group.size());
  gens(0, 0) = 1;
  gens(1, 1) = 1;
  std::size_t c = 2;
  for (const auto& s : group) {
    gens(0, c) = s.coords[0];
    gens(1, c) = s.coords[1];
    ++c;
  }
  const RatMatrix basis = hermite_normal_form(gens);  // new lattice in E-coordinates
  EllipticCurve quotient = EllipticCurve::derived(E.id + "/" + detail::lattice_tag(basis), E, E.frame * basis);
  CurveQuotientMap q{E.id, quotient.id, inverse(basis)};
  if (q.degree() != group.size()) throw InternalError("quotient degree does not match subgroup order");
  return {std::move(quotient), std::move(q)};
}

/// (q^*χ)(λ) = χ(q(λ)) on the source basis.
inline Character pullback_character(const Character& chi, const CurveQuotientMap& q) {
  if (chi.curve != q.target) throw PreconditionError("character does not live on the target of the map");
  const IntMatrix m = to_integer(q.matrix);
  const QVec v = m.transposed() * QVec{chi.values[0], chi.values[1]};
  return Character(q.source, v[0], v[1]);
}

struct TrivializingCover {
  EllipticCurve cover;     // E''
  TorsionPoint point;      // a in E'' of order n with E''/<a> = E
  CurveQuotientMap map;    // E'' -> E
};

/// For χ of order n on E, a cover E'' -> E of degree n killing χ.
///
/// With χ(λ1) primitive and χ(λ2) = k χ(λ1): λ2' = λ2 - k λ1 and Λ'' = <n λ1, λ2'>.
/// When only χ(λ2) is primitive the two basis vectors swap roles. When
/// neither is (possible only for composite n with n > 4), a unimodular change
/// of basis produces a primitive first value.
inline TrivializingCover trivializing_sublattice(const EllipticCurve& E, const Character& chi) {
  if (chi.curve != E.id) throw PreconditionError("character is not on curve " + E.id);
  const BigInt n = character_order(chi);
  if (n == 1) return {E, TorsionPoint::zero(E.id), CurveQuotientMap{E.id, E.id, RatMatrix::identity(2)}};

  // Integer numerators c_i with χ(λ_i) = c_i / n.
  const BigInt c1 = num(chi.values[0] * Rational(n));
  const BigInt c2 = num(chi.values[1] * Rational(n));
  auto inverse_mod = [&](const BigInt& x) {
    const BigInt s = detail::ext_gcd(x, n).x % n;
    return s < 0 ? BigInt(s + n) : s;
  };

  // Columns: a basis (μ1, μ2) of Λ in old coordinates with χ(μ1) primitive and χ(μ2) = 0.
  IntMatrix basis(2, 2);
  if (gcd(c1, n) == 1) {
    const BigInt k = (c2 * inverse_mod(c1)) % n;
    basis = IntMatrix{{1, -k}, {0, 1}};
  } else if (gcd(c2, n) == 1) {
    const BigInt k = (c1 * inverse_mod(c2)) % n;
    basis = IntMatrix{{0, 1}, {1, -k}};
  } else {
    const auto e = detail::ext_gcd(c1, c2);  // g = x c1 + y c2, coprime to n
    basis = IntMatrix{{e.x, -c2 / e.g}, {e.y, c1 / e.g}};
  }
  IntMatrix cover_basis = basis;  // columns (n μ1, μ2)
  cover_basis(0, 0) *= n;
  cover_basis(1, 0) *= n;

  const RatMatrix in_e = to_rational(cover_basis);
  EllipticCurve cover = EllipticCurve::derived(E.id + "^" + detail::lattice_tag(in_e), E, E.frame * in_e);
  TorsionPoint a(cover.id, Rational(1, n), Rational(0));  // μ1 = (1/n) (n μ1)
  CurveQuotientMap q{cover.id, E.id, in_e};
  return {std::move(cover), std::move(a), std::move(q)};
}

}  // namespace abelquot
