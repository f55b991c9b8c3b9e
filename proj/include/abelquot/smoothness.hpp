#pragma once

#include "abelquot/action.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace abelquot {

/// A pseudoreflection here is a non-trivial linear part with eigenvalue 1. On
/// the real 4x4 form, det(L - I) = |det_C(φ - 1)|^2, so the test is exact.
inline bool is_pseudoreflection(const IntMatrix& L) {
  return !L.is_identity() && determinant(L - IntMatrix::identity(L.rows())) == 0;
}

struct SpecialPoint {
  QVec point;
  std::vector<std::size_t> stabilizer;  // indices into the group
  std::size_t reflection_subgroup_order = 1;
  bool pseudoreflection_generated = true;

  std::size_t stabilizer_order() const { return stabilizer.size(); }
};

struct SmoothnessReport {
  bool smooth = true;
  std::vector<SpecialPoint> special_points;  // sorted by point
  std::optional<SpecialPoint> witness;       // first failing point

  std::size_t failing_count() const {
    std::size_t n = 0;
    for (const auto& p : special_points) n += p.pseudoreflection_generated ? 0 : 1;
    return n;
  }
};

inline std::vector<FixedLocus> fixed_loci(const ActionGroup& G) {
  std::vector<FixedLocus> out;
  out.reserve(G.order());
  for (const auto& g : G.elements()) out.push_back(fixed_locus(g));
  return out;
}

inline std::vector<std::size_t> stabilizer(const ActionGroup& G, const QVec& z) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < G.order(); ++i)
    if (G[i].apply(z) == z) out.push_back(i);
  return out;
}

namespace detail {

/// The group in machine integers with translations over a common denominator,
/// for the many stabilizer computations of a smoothness check.
class StabilizerFinder {
 public:
  explicit StabilizerFinder(const ActionGroup& G) : G_(&G) {
    BigInt d = 1;
    for (const auto& g : G.elements()) d = lcm(d, common_denominator(g.translation()));
    if (d >= (BigInt(1) << 20)) return;
    d_ = d.convert_to<std::int64_t>();
    for (const auto& g : G.elements()) {
      const auto p = pack(g, d_);
      if (!p) return;
      packed_.push_back(*p);
    }
    ok_ = true;
  }

  std::vector<std::size_t> operator()(const QVec& z) const {
    const BigInt e = common_denominator(z);
    if (!ok_ || e >= (BigInt(1) << 20)) return stabilizer(*G_, z);
    const std::int64_t m = std::lcm(d_, e.convert_to<std::int64_t>()), scale = m / d_;
    std::array<std::int64_t, 4> x;
    for (std::size_t i = 0; i < 4; ++i) x[i] = num(z[i] * m).convert_to<std::int64_t>();
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < packed_.size(); ++k) {
      const auto& v = packed_[k].v;
      bool fixed = true;
      for (std::size_t i = 0; i < 4 && fixed; ++i) {
        std::int64_t acc = v[16 + i] * scale - x[i];
        for (std::size_t j = 0; j < 4; ++j)
          if (!mul_add(acc, v[4 * i + j], x[j])) return stabilizer(*G_, z);
        fixed = acc % m == 0;
      }
      if (fixed) out.push_back(k);
    }
    return out;
  }

 private:
  const ActionGroup* G_;
  std::int64_t d_ = 1;
  std::vector<PackedAuto> packed_;
  bool ok_ = false;
};

struct ComponentKey {
  IntMatrix lattice;  // Hermite basis
  QVec offset;        // base modulo the lattice, in complementary coordinates

  friend bool operator<(const ComponentKey& a, const ComponentKey& b) {
    if (a.lattice != b.lattice) return a.lattice < b.lattice;
    return lex_less(a.offset, b.offset);
  }
};

// The two rows of W^{-1} (W unimodular, completing K) that vanish on K.
inline IntMatrix complement_rows(const IntMatrix& K) {
  const IntMatrix Winv = to_integer(inverse(complete_to_unimodular(K)));
  return Winv.block(K.cols(), 0, Winv.rows() - K.cols(), Winv.cols());
}

struct Component {
  QVec base;
  IntMatrix lattice;
  IntMatrix complement;  // 2x4
};

// Zero-dimensional intersection of two fixed curves, empty when parallel.
inline std::vector<QVec> intersect(const Component& a, const Component& b) {
  const IntMatrix M = b.complement * a.lattice;
  if (determinant(M) == 0) return {};
  const CongruenceSolution s = solve_congruence(M, frac(b.complement * (b.base - a.base)));
  std::vector<QVec> out;
  for (const auto& u : s.base_points) out.push_back(frac(a.base + a.lattice * u));
  return out;
}

}  // namespace detail

/// Points whose stabilizer can fail to be generated by pseudoreflections:
/// isolated fixed points of non-trivial elements and transversal
/// intersections of fixed curves.
inline std::vector<QVec> special_points(const std::vector<FixedLocus>& loci) {
  auto less = [](const QVec& a, const QVec& b) { return lex_less(a, b); };
  std::set<QVec, decltype(less)> points(less);
  std::map<detail::ComponentKey, detail::Component> components;
  std::map<IntMatrix, IntMatrix> complements;
  for (std::size_t i = 1; i < loci.size(); ++i) {
    for (const auto& p : loci[i].isolated) points.insert(p);
    for (const auto& c : loci[i].curves) {
      IntMatrix h = hermite_normal_form(c.lattice);
      auto it = complements.find(h);
      if (it == complements.end()) it = complements.emplace(h, detail::complement_rows(h)).first;
      detail::ComponentKey key{h, frac(it->second * c.base)};
      components.emplace(std::move(key), detail::Component{c.base, h, it->second});
    }
  }
  std::vector<const detail::Component*> comps;
  for (const auto& [k, c] : components) comps.push_back(&c);
  for (std::size_t i = 0; i < comps.size(); ++i)
    for (std::size_t j = i + 1; j < comps.size(); ++j) {
      if (comps[i]->lattice == comps[j]->lattice) continue;
      for (auto& p : detail::intersect(*comps[i], *comps[j])) points.insert(std::move(p));
    }
  return {points.begin(), points.end()};
}

/// Chevalley-Shephard-Todd at every special point: the stabilizer must be
/// generated by its pseudoreflections. Other points on fixed curves have
/// stabilizers made of reflections along that curve and are smooth.
inline SmoothnessReport smoothness(const ActionGroup& G, const std::vector<FixedLocus>& loci) {
  std::vector<bool> reflection(G.order());
  for (std::size_t i = 0; i < G.order(); ++i) reflection[i] = is_pseudoreflection(G[i].linear());

  const detail::StabilizerFinder stab(G);
  SmoothnessReport report;
  for (const auto& z : special_points(loci)) {
    SpecialPoint sp;
    sp.point = z;
    sp.stabilizer = stab(z);
    std::vector<std::size_t> refl;
    for (const std::size_t i : sp.stabilizer)
      if (reflection[i]) refl.push_back(i);
    sp.reflection_subgroup_order = G.generated(refl).size();
    sp.pseudoreflection_generated = sp.reflection_subgroup_order == sp.stabilizer.size();
    if (!sp.pseudoreflection_generated && report.smooth) {
      report.smooth = false;
      report.witness = sp;
    }
    report.special_points.push_back(std::move(sp));
  }
  return report;
}

inline SmoothnessReport smoothness(const ActionGroup& G) { return smoothness(G, fixed_loci(G)); }

/// For a stabilizer of diagonal elements: whether it is the direct product of
/// its parts acting on one factor only. Used to cross-check the reflection test.
inline bool splits_along_axes(const ActionGroup& G, const std::vector<std::size_t>& stab) {
  std::size_t first_only = 0, second_only = 0;
  for (const std::size_t i : stab) {
    if (!G[i].is_diagonal()) throw PreconditionError("axis decomposition needs diagonal stabilizers");
    if (G[i].block(1).is_identity()) ++first_only;
    if (G[i].block(0).is_identity()) ++second_only;
  }
  return first_only * second_only == stab.size();
}

struct InvariantVector {
  BigInt euler = 0;
  std::size_t irregularity = 0;
  bool free = true;
  bool translations_only = true;
};

/// Euler number by Lefschetz averaging and irregularity from invariant homology.
inline InvariantVector invariants(const ActionGroup& G, const std::vector<FixedLocus>& loci) {
  InvariantVector v;
  std::size_t total = 0;
  for (std::size_t i = 0; i < G.order(); ++i) {
    total += loci[i].euler();
    if (i > 0 && !loci[i].empty()) v.free = false;
  }
  if (total % G.order() != 0) throw InternalError("Euler number is not integral");
  v.euler = BigInt(total / G.order());
  v.translations_only = G.translations_only();

  const auto& hol = G.holonomy_group();
  IntMatrix stacked(4 * hol.size(), 4);
  for (std::size_t k = 0; k < hol.size(); ++k) stacked.set_block(4 * k, 0, hol[k] - IntMatrix::identity(4));
  const std::size_t dim = kernel_lattice(stacked).cols();
  if (dim % 2) throw InternalError("invariant homology has odd rank");
  v.irregularity = dim / 2;
  return v;
}

inline InvariantVector invariants(const ActionGroup& G) { return invariants(G, fixed_loci(G)); }

}  // namespace abelquot
