#pragma once

#include "abelquot/action.hpp"

#include <cstddef>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace abelquot {

/// Exchanges the two factors.
inline ActionGroup swap_factors(const ActionGroup& G) {
  IntMatrix P(4, 4);
  P.set_block(0, 2, IntMatrix::identity(2));
  P.set_block(2, 0, IntMatrix::identity(2));
  Surface s{G.surface().second, G.surface().first, G.surface().same_curve};
  std::vector<AffineAuto> elements;
  for (const auto& g : G.elements()) elements.emplace_back(P * g.linear() * P, P * g.translation());
  return ActionGroup::close(std::move(s), elements, std::max(G.order(), ActionGroup::kDefaultCap));
}

/// Pushes G down along E1 x E2 -> E1/S1 x E2/S2. Each S_i must be normalized by
/// the holonomy so that the linear parts descend.
inline ActionGroup quotient_factors(const ActionGroup& G, const std::vector<TorsionPoint>& S1,
                                    const std::vector<TorsionPoint>& S2) {
  auto [e1, q1] = quotient_by_translation_subgroup(G.surface().first, S1);
  auto [e2, q2] = quotient_by_translation_subgroup(G.surface().second, S2);
  const RatMatrix Q = block_diagonal(q1.matrix, q2.matrix);
  const RatMatrix Qi = inverse(Q);
  Surface s{std::move(e1), std::move(e2), false};
  s.same_curve = G.surface().same_curve && s.first.id == s.second.id;
  std::vector<AffineAuto> elements;
  for (const auto& g : G.elements()) {
    const RatMatrix l = Q * to_rational(g.linear()) * Qi;
    if (!is_integral(l)) throw PreconditionError("holonomy does not descend to the quotient");
    elements.emplace_back(to_integer(l), Q * g.translation());
  }
  return ActionGroup::close(std::move(s), elements, std::max(G.order(), ActionGroup::kDefaultCap));
}

/// t_p^{-1} G t_p for a point p of the surface: translations become t + (L - I) p.
inline ActionGroup conjugate_by_translation(const ActionGroup& G, const QVec& p) {
  std::vector<AffineAuto> elements;
  for (const auto& g : G.elements())
    elements.emplace_back(g.linear(), g.translation() + (g.linear() - IntMatrix::identity(4)) * p);
  return ActionGroup::close(G.surface(), elements, std::max(G.order(), ActionGroup::kDefaultCap));
}

/// G after orienting (trivial holonomy on the first factor), removing the
/// axis translation subgroups N_E x 1 and 1 x N_F, and conjugating so that a
/// generator of G/Δ has no second-factor translation.
struct NormalForm {
  ActionGroup group;
  bool swapped = false;
  std::size_t removed_first = 1;   // total order of the N_E quotients
  std::size_t removed_second = 1;  // total order of the N_F quotients
  std::vector<std::size_t> delta;
  std::size_t r = 1;
  std::size_t generator = 0;  // index of g in group; 0 when r = 1
  QVec shift;                 // p on the second factor; empty when r = 1
};

namespace detail {

inline std::vector<TorsionPoint> axis_points(const ActionGroup& G, const std::vector<std::size_t>& idx,
                                             std::size_t factor) {
  std::vector<TorsionPoint> out;
  for (const std::size_t i : idx) out.push_back(G.translation_point(i, factor));
  return out;
}

inline void check_delta_bounds(const NormalForm& nf) {
  const std::size_t d = nf.delta.size();
  std::size_t exponent = 1;
  for (const std::size_t i : nf.delta) exponent = std::lcm(exponent, nf.group.element_order(i));
  bool ok = false;
  switch (nf.r) {
    case 1: ok = true; break;
    case 2: ok = (d == 1 || d == 2 || d == 4) && exponent <= 2; break;
    case 3: ok = d == 1 || d == 3; break;
    case 4: ok = d == 1 || d == 2; break;
    case 6: ok = d == 1; break;
    default: break;
  }
  if (!ok)
    throw LemmaViolation("translation bound",
                         "|Delta| = " + std::to_string(d) + " with exponent " + std::to_string(exponent) +
                             " for r = " + std::to_string(nf.r));
}

}  // namespace detail

/// Brings a diagonal group with one holonomy-trivial factor into normal form,
/// asserting the structural statements along the way.
inline NormalForm normalize(const ActionGroup& input) {
  if (!input.is_diagonal()) throw PreconditionError("normal form needs diagonal linear parts");
  NormalForm nf{input};
  auto first_trivial = [](const ActionGroup& G) {
    for (const auto& g : G.elements())
      if (!g.block(0).is_identity()) return false;
    return true;
  };
  if (!first_trivial(nf.group)) {
    nf.group = swap_factors(nf.group);
    nf.swapped = true;
    if (!first_trivial(nf.group)) throw PreconditionError("neither factor has trivial holonomy");
  }

  // Quotienting by N_E x 1 can create new second-axis translations and vice versa.
  while (nf.group.first_axis_translations().size() > 1 || nf.group.second_axis_translations().size() > 1) {
    const ActionGroup& G = nf.group;
    nf.removed_first *= G.first_axis_translations().size();
    nf.removed_second *= G.second_axis_translations().size();
    nf.group = quotient_factors(G, detail::axis_points(G, G.first_axis_translations(), 0),
                                detail::axis_points(G, G.second_axis_translations(), 1));
  }

  const ActionGroup* G = &nf.group;
  nf.delta = G->translation_subgroup();
  for (const std::size_t i : nf.delta) {
    const AffineAuto& t = (*G)[i];
    const BigInt oa = lcm(den(t.translation()[0]), den(t.translation()[1]));
    const BigInt ob = lcm(den(t.translation()[2]), den(t.translation()[3]));
    if (oa != ob) throw LemmaViolation("translation orders", "t_a x t_b with ord(a) != ord(b)");
  }

  std::size_t g = 0;
  for (std::size_t i = 0; i < G->order(); ++i) {
    const std::size_t ri = rord((*G)[i]);
    if (ri > nf.r) {
      nf.r = ri;
      g = i;
    }
  }
  if (nf.r != 1 && nf.r != 2 && nf.r != 3 && nf.r != 4 && nf.r != 6)
    throw LemmaViolation("cyclic quotient", "holonomy of order " + std::to_string(nf.r));
  if (G->order() != nf.r * nf.delta.size())
    throw LemmaViolation("cyclic quotient", "G/Delta is not generated by an element of maximal holonomy order");
  if (nf.r == 1) {
    detail::check_delta_bounds(nf);
    return nf;
  }

  // Kill the second-factor translation of g: (φ - 1) p = -b0, smallest solution.
  const IntMatrix phi = (*G)[g].block(1);
  const CongruenceSolution sol = solve_congruence(phi - IntMatrix::identity(2), frac(-(*G)[g].translation_part(1)));
  if (sol.empty() || !sol.finite()) throw InternalError("generator holonomy has eigenvalue 1");
  nf.shift = sol.base_points.front();
  const AffineAuto old_g = (*G)[g];
  nf.group = conjugate_by_translation(nf.group, {Rational(0), Rational(0), nf.shift[0], nf.shift[1]});
  G = &nf.group;
  const AffineAuto new_g(old_g.linear(),
                         old_g.translation() + (old_g.linear() - IntMatrix::identity(4)) *
                                                   QVec{Rational(0), Rational(0), nf.shift[0], nf.shift[1]});
  nf.generator = *G->find(new_g);
  nf.delta = G->translation_subgroup();
  if (!is_zero_mod_one((*G)[nf.generator].translation_part(1))) throw InternalError("normalization failed");

  if (G->element_order(nf.generator) != nf.r)
    throw LemmaViolation("generator order", "ord(g) = " + std::to_string(G->element_order(nf.generator)) +
                                                " but r = " + std::to_string(nf.r));
  for (const std::size_t i : nf.delta) {
    const QVec b = (*G)[i].translation_part(1);
    if (frac(phi * b) != b) throw LemmaViolation("fixed translations", "phi(b) != b for a translation in Delta");
    if (G->product(nf.generator, i) != G->product(i, nf.generator))
      throw LemmaViolation("direct product", "g does not commute with Delta");
  }
  std::set<std::size_t> cyclic;
  for (std::size_t k = 0, x = 0; k < nf.r; ++k, x = G->product(nf.generator, x)) cyclic.insert(x);
  std::set<std::size_t> covered;
  for (const std::size_t x : cyclic)
    for (const std::size_t d : nf.delta) covered.insert(G->product(x, d));
  if (covered.size() != G->order()) throw LemmaViolation("direct product", "G != Delta x <g>");
  detail::check_delta_bounds(nf);
  return nf;
}

enum class ResidualType { Trivial, Cyclic, KleinFour };

/// Output of the full reduction: G' = G / K̃ where K̃ is the preimage of the
/// kernel of the action on the fibre, and the base curve of the ruling.
struct Reduction {
  NormalForm normal;
  std::vector<std::size_t> kernel;         // N = Ker(G -> Aut(E))
  std::vector<std::size_t> fibre_kernel;   // K̃ ⊇ N; K̃ / N = Ker(G/N -> Aut(F/N))
  std::size_t residual_order = 1;
  ResidualType residual = ResidualType::Trivial;
  EllipticCurve base;
  bool sym2 = false;
  std::size_t bundle_order() const { return sym2 ? 0 : residual_order; }
};

inline std::string residual_name(const Reduction& r) {
  switch (r.residual) {
    case ResidualType::Trivial: return "1";
    case ResidualType::Cyclic: return "Z/" + std::to_string(r.residual_order);
    case ResidualType::KleinFour: return "Z/2 x Z/2";
  }
  return "?";
}

/// For a smooth, non-free, irregularity-one diagonal group.
inline Reduction reduce_pipeline(const ActionGroup& input) {
  Reduction out{normalize(input)};
  const ActionGroup& G = out.normal.group;
  out.kernel = G.first_factor_kernel();
  if (out.kernel.size() <= 1) throw LemmaViolation("kernel", "N is trivial");
  bool cyclic = false;
  for (const std::size_t i : out.kernel) cyclic = cyclic || G.element_order(i) == out.kernel.size();
  if (!cyclic) throw LemmaViolation("kernel", "N is not cyclic");

  // h ∈ K̃ iff its action on the second factor agrees with some element of N.
  std::set<std::pair<IntMatrix, QVec>> fibre_parts;
  for (const std::size_t i : out.kernel) fibre_parts.emplace(G[i].block(1), G[i].translation_part(1));
  for (std::size_t i = 0; i < G.order(); ++i)
    if (fibre_parts.count({G[i].block(1), G[i].translation_part(1)})) out.fibre_kernel.push_back(i);

  const std::set<std::size_t> k(out.fibre_kernel.begin(), out.fibre_kernel.end());
  out.residual_order = G.order() / out.fibre_kernel.size();
  std::size_t max_order = 1;
  for (std::size_t i = 0; i < G.order(); ++i) {
    std::size_t o = 1;
    for (std::size_t x = i; !k.count(x); x = G.product(i, x)) ++o;
    max_order = std::max(max_order, o);
  }
  if (max_order == out.residual_order && out.residual_order <= 4) {
    out.residual = out.residual_order == 1 ? ResidualType::Trivial : ResidualType::Cyclic;
  } else if (out.residual_order == 4 && max_order == 2) {
    out.residual = ResidualType::KleinFour;
    out.sym2 = true;
  } else {
    throw LemmaViolation("residual group", "G' of order " + std::to_string(out.residual_order) +
                                               " and exponent " + std::to_string(max_order));
  }

  // Base of the ruling: E / p1(G) for split bundles, E / p1(K̃) for Sym^2.
  std::set<TorsionPoint> base_points;
  for (std::size_t i = 0; i < G.order(); ++i)
    if (!out.sym2 || k.count(i)) base_points.insert(G.translation_point(i, 0));
  out.base = quotient_by_translation_subgroup(G.surface().first, {base_points.begin(), base_points.end()}).first;
  return out;
}

}  // namespace abelquot
