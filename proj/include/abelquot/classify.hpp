#pragma once

#include "abelquot/action.hpp"
#include "abelquot/reduce.hpp"
#include "abelquot/smoothness.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace abelquot {

enum class SurfaceClass { P2, P1xP1, SplitBundle, Sym2, Abelian, Hyperelliptic, Singular, OutOfScope };

inline std::string_view class_tag(SurfaceClass c) {
  switch (c) {
    case SurfaceClass::P2: return "P2";
    case SurfaceClass::P1xP1: return "P1xP1";
    case SurfaceClass::SplitBundle: return "SplitBundle";
    case SurfaceClass::Sym2: return "Sym2";
    case SurfaceClass::Abelian: return "Abelian";
    case SurfaceClass::Hyperelliptic: return "Hyperelliptic";
    case SurfaceClass::Singular: return "Singular";
    case SurfaceClass::OutOfScope: return "OutOfScope";
  }
  return "?";
}

inline std::optional<SurfaceClass> parse_class(std::string_view tag) {
  for (const auto c : {SurfaceClass::P2, SurfaceClass::P1xP1, SurfaceClass::SplitBundle, SurfaceClass::Sym2,
                       SurfaceClass::Abelian, SurfaceClass::Hyperelliptic, SurfaceClass::Singular,
                       SurfaceClass::OutOfScope})
    if (class_tag(c) == tag) return c;
  return std::nullopt;
}

/// The parameters that identify a quotient up to the choices the classification
/// cannot see. Base curves compare by lattice.
struct ClassSignature {
  SurfaceClass cls = SurfaceClass::Singular;
  std::optional<EllipticCurve> base;  // SplitBundle, Sym2
  std::size_t bundle_order = 0;       // SplitBundle
  std::size_t holonomy_order = 0;     // Hyperelliptic
  std::size_t group_order = 0;        // Abelian, Hyperelliptic

  bool matches(const ClassSignature& o) const {
    if (cls != o.cls || bundle_order != o.bundle_order || holonomy_order != o.holonomy_order ||
        group_order != o.group_order || base.has_value() != o.base.has_value())
      return false;
    return !base || same_lattice(*base, *o.base);
  }
};

struct ReductionSummary {
  bool via_splitting = false;  // matrix group reduced through an invariant subtorus
  BigInt isogeny_degree = 1;
  bool swapped = false;
  std::size_t removed_first = 1;
  std::size_t removed_second = 1;
  std::size_t delta_order = 1;
  std::size_t r = 1;
  std::size_t kernel_order = 1;
  std::size_t fibre_kernel_order = 1;
  std::string residual;
};

struct ClassificationResult {
  SurfaceClass cls = SurfaceClass::Singular;
  std::size_t group_order = 0;
  SmoothnessReport smoothness;
  InvariantVector invariants;

  std::optional<EllipticCurve> base;
  std::size_t bundle_order = 0;
  std::size_t holonomy_order = 0;
  std::string holonomy_group;   // Hyperelliptic
  std::string group_structure;  // Abelian, Hyperelliptic
  std::optional<RatMatrix> quotient_lattice;  // Abelian: basis of Z^4 + translations
  std::optional<ReductionSummary> reduction;
  std::string note;  // OutOfScope explanation

  ClassSignature signature() const {
    ClassSignature s;
    s.cls = cls;
    s.base = base;
    s.bundle_order = cls == SurfaceClass::SplitBundle ? bundle_order : 0;
    s.holonomy_order = cls == SurfaceClass::Hyperelliptic ? holonomy_order : 0;
    s.group_order = cls == SurfaceClass::Abelian || cls == SurfaceClass::Hyperelliptic ? group_order : 0;
    return s;
  }
};

inline std::string cyclic_name(std::size_t n) { return n == 1 ? "1" : "Z/" + std::to_string(n); }

namespace detail {

inline std::vector<std::size_t> all_element_orders(const ActionGroup& G) {
  std::vector<std::size_t> orders;
  for (std::size_t i = 0; i < G.order(); ++i) orders.push_back(G.element_order(i));
  return orders;
}

inline ReductionSummary summarize(const Reduction& r) {
  ReductionSummary s;
  s.swapped = r.normal.swapped;
  s.removed_first = r.normal.removed_first;
  s.removed_second = r.normal.removed_second;
  s.delta_order = r.normal.delta.size();
  s.r = r.normal.r;
  s.kernel_order = r.kernel.size();
  s.fibre_kernel_order = r.fibre_kernel.size();
  s.residual = residual_name(r);
  return s;
}

// Rank-2 saturated sublattices that could carry an invariant complex subtorus:
// the common fixed lattice, then kernels and images of L - I.
inline std::vector<IntMatrix> splitting_candidates(const ActionGroup& G) {
  std::vector<IntMatrix> out;
  auto consider = [&](const IntMatrix& K) {
    if (K.cols() != 2) return;
    IntMatrix h = hermite_normal_form(K);
    for (const auto& o : out)
      if (o == h) return;
    out.push_back(std::move(h));
  };
  const auto& hol = G.holonomy_group();
  IntMatrix stacked(4 * hol.size(), 4);
  for (std::size_t k = 0; k < hol.size(); ++k) stacked.set_block(4 * k, 0, hol[k] - IntMatrix::identity(4));
  consider(kernel_lattice(stacked));
  for (const auto& L : hol) {
    const IntMatrix M = L - IntMatrix::identity(4);
    consider(kernel_lattice(M));
    consider(saturate(M));
  }
  return out;
}

inline void apply_reduction(ClassificationResult& res, const Reduction& r) {
  res.cls = r.sym2 ? SurfaceClass::Sym2 : SurfaceClass::SplitBundle;
  res.bundle_order = r.bundle_order();
  res.base = r.base;
}

}  // namespace detail

/// The decision procedure: singular, abelian, hyperelliptic, rational
/// (by Euler number), or a ruled surface over an elliptic curve.
inline ClassificationResult classify(const ActionGroup& G) {
  ClassificationResult res;
  res.group_order = G.order();
  const std::vector<FixedLocus> loci = fixed_loci(G);
  res.smoothness = smoothness(G, loci);
  res.invariants = invariants(G, loci);

  if (!res.smoothness.smooth) {
    res.cls = SurfaceClass::Singular;
    return res;
  }
  if (res.invariants.translations_only) {
    res.cls = SurfaceClass::Abelian;
    res.group_structure = abelian_group_name(abelian_invariants(detail::all_element_orders(G)));
    RatMatrix gens(4, 4 + G.order());
    for (std::size_t i = 0; i < 4; ++i) gens(i, i) = 1;
    for (std::size_t k = 0; k < G.order(); ++k)
      for (std::size_t i = 0; i < 4; ++i) gens(i, 4 + k) = G[k].translation()[i];
    res.quotient_lattice = hermite_normal_form(gens);
    return res;
  }
  if (res.invariants.free) {
    res.cls = SurfaceClass::Hyperelliptic;
    res.holonomy_order = G.holonomy_group().size();
    bool cyclic = false;
    for (const auto& L : G.holonomy_group()) cyclic = cyclic || matrix_order(L) == res.holonomy_order;
    res.holonomy_group = cyclic ? cyclic_name(res.holonomy_order) : "non-cyclic of order " + std::to_string(res.holonomy_order);
    res.group_structure = G.is_abelian() ? abelian_group_name(abelian_invariants(detail::all_element_orders(G)))
                                         : "non-abelian of order " + std::to_string(G.order());
    return res;
  }
  switch (res.invariants.irregularity) {
    case 0:
      if (res.invariants.euler == 3) {
        res.cls = SurfaceClass::P2;
      } else if (res.invariants.euler == 4) {
        res.cls = SurfaceClass::P1xP1;
      } else {
        throw InternalError("rational quotient with Euler number " + res.invariants.euler.str());
      }
      return res;
    case 1: break;
    default: throw InternalError("smooth non-free quotient with irregularity 2");
  }

  if (G.is_diagonal()) {
    const Reduction r = reduce_pipeline(G);
    detail::apply_reduction(res, r);
    res.reduction = detail::summarize(r);
    return res;
  }
  for (const auto& B : detail::splitting_candidates(G)) {
    std::optional<SubtorusSplitting> split;
    try {
      split = split_invariant_subtorus(G, B);
    } catch (const PreconditionError&) {
      continue;
    }
    const Reduction r = reduce_pipeline(split->lifted_group);
    detail::apply_reduction(res, r);
    res.reduction = detail::summarize(r);
    res.reduction->via_splitting = true;
    res.reduction->isogeny_degree = split->isogeny_degree;
    return res;
  }
  res.cls = SurfaceClass::OutOfScope;
  res.note = "no holonomy-invariant complex subtorus found among kernels and images of L - I; "
             "the invariant-subtorus reduction does not apply";
  return res;
}

}  // namespace abelquot
