#pragma once

#include "abelquot/congruence.hpp"
#include "abelquot/errors.hpp"
#include "abelquot/torus.hpp"

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace abelquot {

/// E1 x E2 with lattice Z^4 = Λ1 ⊕ Λ2; coordinates (Λ1 basis, Λ2 basis).
struct Surface {
  EllipticCurve first;
  EllipticCurve second;
  bool same_curve = false;  // E2 is literally E1 and matrix holonomy is allowed

  static Surface product(EllipticCurve e, EllipticCurve f) { return {std::move(e), std::move(f), false}; }
  static Surface square(const EllipticCurve& e) { return {e, e, true}; }

  const EllipticCurve& factor(std::size_t i) const { return i == 0 ? first : second; }
};

struct DiagonalHolonomy {
  RingElement first;
  RingElement second;
  friend bool operator==(const DiagonalHolonomy&, const DiagonalHolonomy&) = default;
};

/// A 2x2 matrix over the shared ring of E^2, row-major.
struct MatrixHolonomy {
  std::array<RingElement, 4> entries;
  friend bool operator==(const MatrixHolonomy&, const MatrixHolonomy&) = default;
};

using Holonomy = std::variant<DiagonalHolonomy, MatrixHolonomy>;

/// Symbolic description of t_(a,b) ∘ φ, as read from a scenario file.
struct GeneratorSpec {
  Holonomy linear;
  std::array<TorsionPoint, 2> translation;
  friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

/// x ↦ L x + t on R^4 / Z^4, with L integral in the surface's lattice basis.
class AffineAuto {
 public:
  AffineAuto() : linear_(IntMatrix::identity(4)), translation_(4, Rational(0)) {}
  AffineAuto(IntMatrix linear, QVec translation) : linear_(std::move(linear)), translation_(frac(std::move(translation))) {
    if (linear_.rows() != 4 || linear_.cols() != 4 || translation_.size() != 4)
      throw PreconditionError("affine automorphism must be 4x4 with a 4-vector translation");
  }

  static AffineAuto identity() { return {}; }
  static AffineAuto translation_by(const TorsionPoint& a, const TorsionPoint& b) {
    return {IntMatrix::identity(4), {a.coords[0], a.coords[1], b.coords[0], b.coords[1]}};
  }

  const IntMatrix& linear() const { return linear_; }
  const QVec& translation() const { return translation_; }
  IntMatrix block(std::size_t i) const { return linear_.block(2 * i, 2 * i, 2, 2); }
  QVec translation_part(std::size_t i) const { return {translation_[2 * i], translation_[2 * i + 1]}; }

  bool is_identity() const { return is_translation() && is_zero_mod_one(translation_); }
  bool is_translation() const { return linear_.is_identity(); }
  bool is_diagonal() const { return linear_.block(0, 2, 2, 2).is_zero() && linear_.block(2, 0, 2, 2).is_zero(); }

  QVec apply(const QVec& x) const { return frac(linear_ * x + translation_); }

  friend bool operator==(const AffineAuto&, const AffineAuto&) = default;
  friend bool operator<(const AffineAuto& a, const AffineAuto& b) {
    if (a.linear_ != b.linear_) return a.linear_ < b.linear_;
    return lex_less(a.translation_, b.translation_);
  }

 private:
  IntMatrix linear_;
  QVec translation_;
};

/// (g ∘ h)(x) = L_g (L_h x + t_h) + t_g.
inline AffineAuto compose(const AffineAuto& g, const AffineAuto& h) {
  return {g.linear() * h.linear(), g.linear() * h.translation() + g.translation()};
}

inline AffineAuto inverse(const AffineAuto& g) {
  const IntMatrix li = to_integer(inverse(g.linear()));
  return {li, -(li * g.translation())};
}

inline AffineAuto power(const AffineAuto& g, std::size_t k) {
  AffineAuto acc;
  for (std::size_t i = 0; i < k; ++i) acc = compose(g, acc);
  return acc;
}

inline IntMatrix kronecker(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t r = 0; r < b.rows(); ++r)
        for (std::size_t c = 0; c < b.cols(); ++c) k(i * b.rows() + r, j * b.cols() + c) = a(i, j) * b(r, c);
  return k;
}

/// The 4x4 integral linear part of a holonomy specification.
inline IntMatrix holonomy_matrix(const Surface& s, const Holonomy& h) {
  if (const auto* d = std::get_if<DiagonalHolonomy>(&h)) {
    for (const auto* x : {&d->first, &d->second})
      if (!ring_element_order(*x))
        throw Error(ErrorCode::InfiniteOrder, "linear part not of finite order: " + to_string(*x) + " is not a unit");
    if (!acts_on(s.first, d->first))
      throw PreconditionError(to_string(d->first) + " is not an automorphism of " + s.first.id);
    if (!acts_on(s.second, d->second))
      throw PreconditionError(to_string(d->second) + " is not an automorphism of " + s.second.id);
    return block_diagonal(rep_on(s.first, d->first), rep_on(s.second, d->second));
  }
  const auto& m = std::get<MatrixHolonomy>(h);
  if (!s.same_curve) throw PreconditionError("matrix holonomy needs a same-curve surface");
  IntMatrix l(4, 4);
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t k = 0; k < 2; ++k) {
      const RingElement& x = m.entries[2 * j + k];
      if (!acts_on(s.first, x)) throw PreconditionError(to_string(x) + " is not an endomorphism of " + s.first.id);
      l.set_block(2 * j, 2 * k, rep_on(s.first, x));
    }
  if (determinant(l) * determinant(l) != 1 || matrix_order(l) == 0)
    throw Error(ErrorCode::InfiniteOrder, "linear part not of finite order");
  return l;
}

inline AffineAuto from_spec(const Surface& s, const GeneratorSpec& g) {
  for (std::size_t i = 0; i < 2; ++i)
    if (g.translation[i].curve != s.factor(i).id)
      throw PreconditionError("translation point on " + g.translation[i].curve + " given for factor " + s.factor(i).id);
  return {holonomy_matrix(s, g.linear),
          {g.translation[0].coords[0], g.translation[0].coords[1], g.translation[1].coords[0], g.translation[1].coords[1]}};
}

namespace detail {

/// An affine map stored as 16 integer entries followed by the 4 translation
/// numerators over a fixed denominator d, reduced into [0, d).
struct PackedAuto {
  std::array<std::int64_t, 20> v{};
  friend auto operator<=>(const PackedAuto&, const PackedAuto&) = default;
};

inline bool mul_add(std::int64_t& acc, std::int64_t a, std::int64_t b) {
  std::int64_t p;
  return !__builtin_mul_overflow(a, b, &p) && !__builtin_add_overflow(acc, p, &acc);
}

inline std::optional<PackedAuto> pack(const AffineAuto& g, std::int64_t d) {
  constexpr std::int64_t bound = std::int64_t{1} << 31;
  PackedAuto p;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const BigInt& x = g.linear()(i, j);
      if (x >= bound || x <= -bound) return std::nullopt;
      p.v[4 * i + j] = x.convert_to<std::int64_t>();
    }
  for (std::size_t i = 0; i < 4; ++i) {
    const Rational t = g.translation()[i] * d;
    if (!is_integer(t)) return std::nullopt;
    p.v[16 + i] = num(t).convert_to<std::int64_t>();
  }
  return p;
}

inline AffineAuto unpack(const PackedAuto& p, std::int64_t d) {
  IntMatrix l(4, 4);
  for (std::size_t i = 0; i < 16; ++i) l(i / 4, i % 4) = p.v[i];
  QVec t(4);
  for (std::size_t i = 0; i < 4; ++i) t[i] = Rational(p.v[16 + i], d);
  return {std::move(l), std::move(t)};
}

inline std::optional<PackedAuto> compose_packed(const PackedAuto& g, const PackedAuto& h, std::int64_t d) {
  PackedAuto out;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      std::int64_t acc = 0;
      for (std::size_t k = 0; k < 4; ++k)
        if (!mul_add(acc, g.v[4 * i + k], h.v[4 * k + j])) return std::nullopt;
      out.v[4 * i + j] = acc;
    }
    std::int64_t acc = g.v[16 + i];
    for (std::size_t k = 0; k < 4; ++k)
      if (!mul_add(acc, g.v[4 * i + k], h.v[16 + k])) return std::nullopt;
    acc %= d;
    out.v[16 + i] = acc < 0 ? acc + d : acc;
  }
  return out;
}

}  // namespace detail

/// Finite group of affine automorphisms with its multiplication table and the
/// distinguished subgroups used by the classification.
class ActionGroup {
 public:
  static constexpr std::size_t kDefaultCap = 1024;

  static ActionGroup close(Surface surface, const std::vector<AffineAuto>& generators, std::size_t cap = kDefaultCap) {
    ActionGroup G;
    G.surface_ = std::move(surface);
    if (!G.close_packed(generators, cap)) G.close_exact(generators, cap);
    G.build_caches();
    return G;
  }

  static ActionGroup from_specs(const Surface& surface, const std::vector<GeneratorSpec>& specs,
                                std::size_t cap = kDefaultCap) {
    std::vector<AffineAuto> gens;
    for (const auto& s : specs) gens.push_back(from_spec(surface, s));
    return close(surface, gens, cap);
  }

  const Surface& surface() const { return surface_; }
  const std::vector<AffineAuto>& elements() const { return elements_; }
  const AffineAuto& operator[](std::size_t i) const { return elements_[i]; }
  std::size_t order() const { return elements_.size(); }

  std::optional<std::size_t> find(const AffineAuto& a) const {
    const auto it = index_.find(a);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t product(std::size_t i, std::size_t j) const { return table_[i * order() + j]; }
  std::size_t inverse_of(std::size_t i) const { return inverses_[i]; }
  std::size_t element_order(std::size_t i) const { return orders_[i]; }

  /// Δ: elements with trivial holonomy.
  const std::vector<std::size_t>& translation_subgroup() const { return delta_; }
  /// G0: distinct linear parts, sorted.
  const std::vector<IntMatrix>& holonomy_group() const { return holonomy_; }
  /// N_E x 1: translations t_a x 1.
  const std::vector<std::size_t>& first_axis_translations() const { return n_e_; }
  /// 1 x N_F: translations 1 x t_b.
  const std::vector<std::size_t>& second_axis_translations() const { return n_f_; }
  /// N = Ker(G -> Aut(E1)) for diagonal groups; empty otherwise.
  const std::vector<std::size_t>& first_factor_kernel() const { return n_; }

  bool is_diagonal() const { return diagonal_; }
  bool translations_only() const { return delta_.size() == order(); }

  bool is_abelian() const {
    for (std::size_t i = 0; i < order(); ++i)
      for (std::size_t j = i + 1; j < order(); ++j)
        if (product(i, j) != product(j, i)) return false;
    return true;
  }

  bool is_normal(const std::vector<std::size_t>& subset) const {
    const std::set<std::size_t> s(subset.begin(), subset.end());
    for (std::size_t g = 0; g < order(); ++g)
      for (const std::size_t h : subset)
        if (!s.count(product(product(g, h), inverses_[g]))) return false;
    return true;
  }

  /// Subgroup generated by the given elements, as sorted indices.
  std::vector<std::size_t> generated(const std::vector<std::size_t>& gens) const {
    std::set<std::size_t> seen{0};
    std::vector<std::size_t> frontier{0};
    while (!frontier.empty()) {
      std::vector<std::size_t> next;
      for (const std::size_t x : frontier)
        for (const std::size_t g : gens) {
          const std::size_t y = product(g, x);
          if (seen.insert(y).second) next.push_back(y);
        }
      frontier = std::move(next);
    }
    return {seen.begin(), seen.end()};
  }

  TorsionPoint translation_point(std::size_t i, std::size_t factor) const {
    const QVec t = elements_[i].translation_part(factor);
    return TorsionPoint(surface_.factor(factor).id, t[0], t[1]);
  }

 private:
  // Closure and multiplication table in machine integers. Returns false,
  // leaving the group untouched, when some value does not fit.
  bool close_packed(const std::vector<AffineAuto>& generators, std::size_t cap) {
    BigInt big_d = 1;
    for (const auto& g : generators) big_d = lcm(big_d, common_denominator(g.translation()));
    if (big_d >= (BigInt(1) << 31)) return false;
    const auto d = big_d.convert_to<std::int64_t>();
    std::vector<detail::PackedAuto> gens, elems;
    for (const auto& g : generators) {
      auto p = detail::pack(g, d);
      if (!p) return false;
      gens.push_back(*p);
    }
    std::map<detail::PackedAuto, std::size_t> index;
    std::set<std::array<std::int64_t, 16>> checked;
    auto add = [&](const detail::PackedAuto& a) {
      if (index.count(a)) return;
      if (elems.size() >= cap) throw Error(ErrorCode::CapExceeded, "group not finite at cap " + std::to_string(cap));
      std::array<std::int64_t, 16> lin;
      std::copy_n(a.v.begin(), 16, lin.begin());
      if (checked.insert(lin).second && matrix_order(detail::unpack(a, d).linear()) == 0)
        throw Error(ErrorCode::InfiniteOrder, "linear part not of finite order");
      index.emplace(a, elems.size());
      elems.push_back(a);
    };
    add(*detail::pack(AffineAuto::identity(), d));
    for (std::size_t i = 0; i < elems.size(); ++i)
      for (const auto& g : gens) {
        const auto c = detail::compose_packed(g, elems[i], d);
        if (!c) return false;
        add(*c);
      }
    const std::size_t n = elems.size();
    std::vector<std::size_t> table(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const auto c = detail::compose_packed(elems[i], elems[j], d);
        if (!c) return false;
        const auto it = index.find(*c);
        if (it == index.end()) throw InternalError("closure is not closed under composition");
        table[i * n + j] = it->second;
      }
    for (const auto& p : elems) {
      index_.emplace(detail::unpack(p, d), elements_.size());
      elements_.push_back(detail::unpack(p, d));
    }
    table_ = std::move(table);
    return true;
  }

  void close_exact(const std::vector<AffineAuto>& generators, std::size_t cap) {
    auto add = [&](AffineAuto a) {
      if (index_.count(a)) return;
      if (elements_.size() >= cap) throw Error(ErrorCode::CapExceeded, "group not finite at cap " + std::to_string(cap));
      if (matrix_order(a.linear()) == 0) throw Error(ErrorCode::InfiniteOrder, "linear part not of finite order");
      index_.emplace(a, elements_.size());
      elements_.push_back(std::move(a));
    };
    add(AffineAuto::identity());
    for (std::size_t i = 0; i < elements_.size(); ++i)
      for (const auto& g : generators) add(compose(g, elements_[i]));
    const std::size_t n = order();
    table_.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const auto it = index_.find(compose(elements_[i], elements_[j]));
        if (it == index_.end()) throw InternalError("closure is not closed under composition");
        table_[i * n + j] = it->second;
      }
  }

  void build_caches() {
    const std::size_t n = order();
    inverses_.assign(n, 0);
    orders_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j)
        if (product(i, j) == 0) inverses_[i] = j;
      std::size_t k = 1, p = i;
      while (p != 0) {
        p = product(i, p);
        ++k;
      }
      orders_[i] = k;
    }
    diagonal_ = true;
    std::set<IntMatrix> lin;
    for (std::size_t i = 0; i < n; ++i) {
      const AffineAuto& g = elements_[i];
      lin.insert(g.linear());
      diagonal_ = diagonal_ && g.is_diagonal();
      if (g.is_translation()) {
        delta_.push_back(i);
        if (is_zero_mod_one(g.translation_part(1))) n_e_.push_back(i);
        if (is_zero_mod_one(g.translation_part(0))) n_f_.push_back(i);
      }
    }
    holonomy_.assign(lin.begin(), lin.end());
    if (diagonal_)
      for (std::size_t i = 0; i < n; ++i)
        if (elements_[i].block(0).is_identity() && is_zero_mod_one(elements_[i].translation_part(0))) n_.push_back(i);
  }

  Surface surface_;
  std::vector<AffineAuto> elements_;
  std::map<AffineAuto, std::size_t> index_;
  std::vector<std::size_t> table_;
  std::vector<std::size_t> inverses_;
  std::vector<std::size_t> orders_;
  std::vector<std::size_t> delta_, n_e_, n_f_, n_;
  std::vector<IntMatrix> holonomy_;
  bool diagonal_ = true;
};

/// Order of the second-factor holonomy of a diagonal element.
inline std::size_t rord(const AffineAuto& g) {
  if (!g.is_diagonal()) throw PreconditionError("rord needs a diagonal linear part");
  return matrix_order(g.block(1));
}

inline const std::vector<std::size_t>& translation_subgroup(const ActionGroup& G) { return G.translation_subgroup(); }

/// Invariant factors d1 | d2 | ... (all > 1) of a finite abelian group, given
/// the multiset of its element orders.
inline std::vector<std::size_t> abelian_invariants(const std::vector<std::size_t>& element_orders) {
  const std::size_t n = element_orders.size();
  std::map<std::size_t, std::vector<std::size_t>> prime_parts;  // p -> exponents of cyclic p-factors
  std::size_t m = n;
  for (std::size_t p = 2; m > 1; ++p) {
    if (m % p) continue;
    while (m % p == 0) m /= p;
    // c_k = log_p #{x : x^(p^k) = 1}; factors with p-part >= p^k number c_k - c_{k-1}.
    std::vector<std::size_t> c{0};
    for (std::size_t pk = p;; pk *= p) {
      std::size_t count = 0;
      for (const std::size_t o : element_orders)
        if (pk % o == 0) ++count;
      std::size_t lg = 0;
      while (count > 1) {
        count /= p;
        ++lg;
      }
      if (lg == c.back()) break;
      c.push_back(lg);
    }
    std::vector<std::size_t> exps;
    for (std::size_t k = 1; k < c.size(); ++k) {
      const std::size_t at_least_k = c[k] - c[k - 1];
      const std::size_t at_least_next = k + 1 < c.size() ? c[k + 1] - c[k] : 0;
      for (std::size_t j = 0; j < at_least_k - at_least_next; ++j) exps.push_back(k);
    }
    prime_parts[p] = exps;
  }
  // Combine the largest exponents of each prime into the largest factor, and so on.
  std::size_t count = 0;
  for (auto& [p, e] : prime_parts) {
    std::sort(e.rbegin(), e.rend());
    count = std::max(count, e.size());
  }
  std::vector<std::size_t> out(count, 1);
  for (const auto& [p, e] : prime_parts)
    for (std::size_t i = 0; i < e.size(); ++i)
      for (std::size_t k = 0; k < e[i]; ++k) out[i] *= p;
  std::reverse(out.begin(), out.end());
  return out;
}

inline std::string abelian_group_name(const std::vector<std::size_t>& invariants) {
  if (invariants.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < invariants.size(); ++i) s += (i ? " x Z/" : "Z/") + std::to_string(invariants[i]);
  return s;
}

/// A connected component of a one-dimensional fixed locus: base + (lattice ⊗ R).
struct FixedCurve {
  QVec base;
  IntMatrix lattice;  // 4x2 saturated
};

struct FixedLocus {
  bool full = false;
  std::vector<QVec> isolated;
  std::vector<FixedCurve> curves;

  bool empty() const { return !full && isolated.empty() && curves.empty(); }
  /// Topological Euler number: a finite set counts its points; tori count 0.
  std::size_t euler() const { return full || !curves.empty() ? 0 : isolated.size(); }
};

/// Fix(g) = {x : (L - I) x ≡ -t}.
inline FixedLocus fixed_locus(const AffineAuto& g) {
  FixedLocus out;
  if (g.is_translation()) {
    out.full = is_zero_mod_one(g.translation());
    return out;
  }
  const CongruenceSolution sol = solve_congruence(g.linear() - IntMatrix::identity(4), frac(-g.translation()));
  const std::size_t k = sol.kernel.cols();
  if (k == 0) {
    out.isolated = sol.base_points;
  } else if (k == 2) {
    for (const auto& p : sol.base_points) out.curves.push_back({p, sol.kernel});
  } else {
    throw InternalError("fixed locus of a finite-order automorphism has odd dimension");
  }
  return out;
}

inline bool is_free(const ActionGroup& G) {
  for (std::size_t i = 1; i < G.order(); ++i)
    if (!fixed_locus(G[i]).empty()) return false;
  return true;
}

namespace detail {

// The signed-permutation group of order 8; its Q-span is all of M_2(Q), so a
// lattice invariant under it in each factor is a sum of factor sublattices.
inline std::vector<IntMatrix> dihedral_square() {
  const IntMatrix rot{{0, -1}, {1, 0}};
  const IntMatrix ref{{0, 1}, {1, 0}};
  std::vector<IntMatrix> out;
  IntMatrix r = IntMatrix::identity(2);
  for (int k = 0; k < 4; ++k) {
    out.push_back(r);
    out.push_back(r * ref);
    r = r * rot;
  }
  return out;
}

inline std::vector<IntMatrix> curve_units(const EllipticCurve& e) {
  if (e.ring == EndoRing::Z) return dihedral_square();
  std::vector<IntMatrix> out;
  for (const auto& u : units(e.root_ring)) out.push_back(rep_on(e, u));
  return out;
}

// True when every column of M B lies in the Z-span of B (B saturated).
inline bool preserves(const IntMatrix& M, const IntMatrix& B, const RatMatrix& Winv) {
  const RatMatrix image = Winv * to_rational(M * B);
  for (std::size_t i = B.cols(); i < image.rows(); ++i)
    for (std::size_t j = 0; j < image.cols(); ++j)
      if (image(i, j) != 0) return false;
  return true;
}

}  // namespace detail

/// Linear maps whose invariant rank-2 sublattices are exactly the complex
/// subtori: the unit action of the shared ring on E^2, or factor-wise maps on
/// E1 x E2. For ring Z the rotation-reflection group stands in for C^*.
inline std::vector<IntMatrix> complex_structure_group(const Surface& s) {
  std::vector<IntMatrix> out;
  if (s.same_curve) {
    for (const auto& x : detail::curve_units(s.first)) out.push_back(kronecker(IntMatrix::identity(2), x));
    return out;
  }
  for (const auto& x : detail::curve_units(s.first))
    for (const auto& y : detail::curve_units(s.second)) out.push_back(block_diagonal(x, y));
  return out;
}

/// Elliptic curve structure on a complex rank-2 saturated sublattice S of the
/// surface lattice. The returned curve's own basis is the column basis of S.
inline EllipticCurve identify_subtorus_curve(const Surface& s, const IntMatrix& S, const std::string& id) {
  const IntMatrix top = S.block(0, 0, 2, 2), bottom = S.block(2, 0, 2, 2);
  if (bottom.is_zero()) return EllipticCurve::derived(id, s.first, s.first.frame * to_rational(top));
  if (top.is_zero()) return EllipticCurve::derived(id, s.second, s.second.frame * to_rational(bottom));
  if (!s.same_curve) throw PreconditionError("sublattice is not a complex subtorus of a product of distinct curves");

  const EllipticCurve& e = s.first;
  RatMatrix f(2, 2);  // S-coordinates -> E-coordinates, complex linear
  if (e.ring != EndoRing::Z) {
    const IntMatrix Re = rep_on(e, RingElement::generator(e.root_ring));
    const IntMatrix J = kronecker(IntMatrix::identity(2), Re);
    const RatMatrix Winv = inverse(complete_to_unimodular(S));
    const RatMatrix image = Winv * to_rational(J * S);
    const RatMatrix Rs = image.block(0, 0, 2, 2);
    if (!image.block(2, 0, 2, 2).is_zero()) throw PreconditionError("sublattice is not complex");
    RatMatrix src(2, 2), dst(2, 2);
    src(0, 0) = 1;
    src(0, 1) = Rs(0, 0);
    src(1, 1) = Rs(1, 0);
    dst(0, 0) = 1;
    dst(0, 1) = Rational(Re(0, 0));
    dst(1, 1) = Rational(Re(1, 0));
    f = dst * inverse(src);
  } else {
    // Each basis vector is b ⊗ y with one primitive b in Z^2 and y in Λ ⊗ Q.
    std::optional<std::array<BigInt, 2>> b;
    for (std::size_t c = 0; c < 2; ++c) {
      const std::array<BigInt, 2> m[2] = {{S(0, c), S(1, c)}, {S(2, c), S(3, c)}};  // rows b_i y
      if (!b) {
        for (std::size_t j = 0; j < 2 && !b; ++j) {
          BigInt x = m[0][j], y = m[1][j];
          if (x == 0 && y == 0) continue;
          const BigInt g = gcd(x, y);
          x /= g;
          y /= g;
          if (x < 0 || (x == 0 && y < 0)) {
            x = -x;
            y = -y;
          }
          b = std::array<BigInt, 2>{x, y};
        }
      }
      const std::size_t i = (*b)[0] != 0 ? 0 : 1;
      const Rational y0 = Rational(m[i][0]) / Rational((*b)[i]), y1 = Rational(m[i][1]) / Rational((*b)[i]);
      for (std::size_t r = 0; r < 2; ++r)
        if (Rational(m[r][0]) != Rational((*b)[r]) * y0 || Rational(m[r][1]) != Rational((*b)[r]) * y1)
          throw PreconditionError("sublattice is not complex");
      f(0, c) = y0;
      f(1, c) = y1;
    }
  }
  return EllipticCurve::derived(id, e, e.frame * f);
}

struct SubtorusSplitting {
  IntMatrix B_lattice;    // 4x2
  IntMatrix C_lattice;    // 4x2
  IntMatrix change;       // [B | C], the addition map on lattices
  BigInt isogeny_degree;  // [Z^4 : B ⊕ C]
  ActionGroup lifted_group;
};

/// Splits the surface up to isogeny along a holonomy-invariant complex
/// subtorus B and lifts G to B x C along the addition map.
inline SubtorusSplitting split_invariant_subtorus(const ActionGroup& G, const IntMatrix& B,
                                                  std::size_t cap = ActionGroup::kDefaultCap) {
  if (B.rows() != 4 || B.cols() != 2 || rank(B) != 2) throw PreconditionError("B must be a rank-2 sublattice");
  IntMatrix W;
  try {
    W = complete_to_unimodular(B);
  } catch (const std::domain_error&) {
    throw PreconditionError("B is not saturated");
  }
  const RatMatrix Winv = inverse(W);
  const auto& holonomy = G.holonomy_group();
  const auto structure = complex_structure_group(G.surface());
  for (const auto& L : holonomy)
    if (!detail::preserves(L, B, Winv)) throw PreconditionError("B is not invariant under the holonomy group");
  for (const auto& U : structure)
    if (!detail::preserves(U, B, Winv)) throw PreconditionError("B is not a complex subtorus");

  // Average the projector onto B along W's complement over holonomy and the complex structure.
  RatMatrix D(4, 4);
  D(0, 0) = 1;
  D(1, 1) = 1;
  const RatMatrix P0 = to_rational(W) * D * Winv;
  RatMatrix P(4, 4);
  for (const auto& L : holonomy)
    for (const auto& U : structure) {
      const IntMatrix M = L * U;
      P = P + to_rational(M) * P0 * inverse(M);
    }
  P = Rational(1, static_cast<long long>(holonomy.size() * structure.size())) * P;
  const IntMatrix C = kernel_lattice(P);
  if (C.cols() != 2) throw InternalError("averaged projector has kernel of rank " + std::to_string(C.cols()));

  IntMatrix change(4, 4);
  change.set_block(0, 0, B);
  change.set_block(0, 2, C);
  const BigInt degree = boost::multiprecision::abs(determinant(change));
  const RatMatrix ci = inverse(change);

  Surface lifted;
  lifted.first = identify_subtorus_curve(G.surface(), B, G.surface().first.id + ".B");
  lifted.second = identify_subtorus_curve(G.surface(), C, G.surface().first.id + ".C");
  lifted.same_curve = false;

  // Lifts of the identity: ker(B x C -> A) = change^{-1} Z^4 / Z^4.
  const CongruenceSolution kernel = solve_congruence(change, QVec(4, Rational(0)));
  std::vector<AffineAuto> elements;
  for (const auto& g : G.elements()) {
    const RatMatrix l = ci * to_rational(g.linear()) * to_rational(change);
    if (!is_integral(l)) throw InternalError("holonomy does not preserve B ⊕ C");
    const IntMatrix li = to_integer(l);
    const QVec t = ci * g.translation();
    for (const auto& k : kernel.base_points) elements.emplace_back(li, t + k);
  }
  ActionGroup lifted_group = ActionGroup::close(lifted, elements, std::max(cap, elements.size()));
  if (!lifted_group.is_diagonal()) throw InternalError("lifted group is not diagonal");
  if (lifted_group.order() != G.order() * kernel.count()) throw InternalError("lifted group has unexpected order");
  return {B, C, change, degree, std::move(lifted_group)};
}

}  // namespace abelquot
