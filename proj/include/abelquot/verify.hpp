#pragma once

#include "abelquot/classify.hpp"
#include "abelquot/constructions.hpp"
#include "abelquot/scenario.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace abelquot {

struct CheckRow {
  std::string suite;
  std::string name;
  bool pass = true;
  std::string detail;  // counterexample or summary
};

/// Number of fixed points of each automorphism order on a curve, as tabulated
/// for elliptic curves: deg(φ - 1) for φ of order 2, 3, 4, 6.
inline const std::map<int, std::size_t>& expected_fixed_points() {
  static const std::map<int, std::size_t> table{{2, 4}, {3, 3}, {4, 2}, {6, 1}};
  return table;
}

inline std::size_t fixed_point_count(const RingElement& u) {
  const IntMatrix m = integral_rep(u) - IntMatrix::identity(2);
  return solve_congruence(m, QVec(2, Rational(0))).count();
}

inline std::vector<CheckRow> fixed_point_suite() {
  std::vector<CheckRow> rows;
  for (const auto& [order, expected] : expected_fixed_points())
    for (const auto ring : {EndoRing::Z, EndoRing::GaussianZ, EndoRing::EisensteinZ})
      for (const auto& u : units(ring)) {
        if (ring_element_order(u) != order) continue;
        const std::size_t got = fixed_point_count(u);
        rows.push_back({"fixed points", "order " + std::to_string(order) + " unit " + to_string(u) + " in " +
                                            std::string(ring_tag(ring)),
                        got == expected, "expected " + std::to_string(expected) + ", got " + std::to_string(got)});
      }
  return rows;
}

/// 1 + φ + ... + φ^(r-1) = 0 for every unit φ of order r >= 2.
inline std::vector<CheckRow> order_sum_suite() {
  std::vector<CheckRow> rows;
  for (const auto ring : {EndoRing::Z, EndoRing::GaussianZ, EndoRing::EisensteinZ})
    for (const auto& u : units(ring)) {
      const int r = *ring_element_order(u);
      if (r < 2) continue;
      const IntMatrix phi = integral_rep(u);
      IntMatrix sum(2, 2), p = IntMatrix::identity(2);
      for (int k = 0; k < r; ++k) {
        sum = sum + p;
        p = p * phi;
      }
      std::ostringstream os;
      os << sum;
      rows.push_back({"order sum", to_string(u) + " in " + std::string(ring_tag(ring)) + " (order " + std::to_string(r) + ")",
                      sum.is_zero(), "sum = " + os.str()});
    }
  return rows;
}

inline std::vector<CheckRow> unit_group_suite() {
  std::vector<CheckRow> rows;
  for (const auto ring : {EndoRing::Z, EndoRing::GaussianZ, EndoRing::EisensteinZ}) {
    const auto us = units(ring);
    bool cyclic = false, closed = true;
    for (const auto& u : us) {
      cyclic = cyclic || ring_element_order(u) == static_cast<int>(us.size());
      for (const auto& v : us) closed = closed && ring_element_order(u * v).has_value();
    }
    const bool ok = static_cast<int>(us.size()) == unit_group_order(ring) && cyclic && closed;
    rows.push_back({"unit group", std::string(ring_tag(ring)), ok,
                    "order " + std::to_string(us.size()) + (cyclic ? ", cyclic" : ", not cyclic")});
  }
  return rows;
}

/// Pull-back of χ along its trivializing cover is trivial and the kernel point
/// has order exactly n, for every character on a grid of denominators 1..4.
inline std::vector<CheckRow> character_suite() {
  std::vector<CheckRow> rows;
  for (const auto ring : {EndoRing::Z, EndoRing::GaussianZ, EndoRing::EisensteinZ}) {
    const EllipticCurve E = EllipticCurve::root_curve("E", ring);
    for (int n = 1; n <= 4; ++n) {
      std::size_t checked = 0;
      std::string failure;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const Character chi(E.id, Rational(i, n), Rational(j, n));
          if (character_order(chi) != n) continue;
          ++checked;
          const TrivializingCover t = trivializing_sublattice(E, chi);
          const bool trivial = pullback_character(chi, t.map).is_trivial();
          const bool order = t.point.order() == n;
          const auto [back, q] = quotient_by_translation_subgroup(t.cover, generated_subgroup(t.cover.id, {t.point}));
          const bool covers = same_lattice(back, E) && t.map.degree() == n;
          if ((!trivial || !order || !covers) && failure.empty())
            failure = "chi = (" + std::to_string(i) + "/" + std::to_string(n) + ", " + std::to_string(j) + "/" +
                      std::to_string(n) + ")";
        }
      rows.push_back({"character cover", "n = " + std::to_string(n) + " on " + std::string(ring_tag(ring)),
                      failure.empty() && checked > 0,
                      failure.empty() ? std::to_string(checked) + " characters" : failure});
    }
  }
  return rows;
}

inline std::vector<CheckRow> roundtrip_rows(const std::vector<Construction>& constructions) {
  std::vector<CheckRow> rows;
  for (const auto& c : constructions) {
    CheckRow row{"roundtrip", c.name + " [" + std::string(ring_tag(c.surface.first.ring)) + "," +
                                  std::string(ring_tag(c.surface.second.ring)) + "]"};
    try {
      const Scenario s = scenario_from(c);
      const Scenario back = parse_scenario(nlohmann::json::parse(to_json(s).dump()));
      const ClassificationResult r = classify(back.group());
      const bool json_ok = back == s;
      const bool class_ok = r.signature().matches(c.expected);
      row.pass = json_ok && class_ok;
      row.detail = std::string(class_tag(r.cls)) + (json_ok ? "" : " (scenario JSON mismatch)");
      if (r.cls == SurfaceClass::SplitBundle) row.detail += " n=" + std::to_string(r.bundle_order);
    } catch (const std::exception& e) {
      row.pass = false;
      row.detail = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Construction gallery classifies back to its parameters; scenario JSON round-trips.
inline std::vector<CheckRow> roundtrip_suite() { return roundtrip_rows(construction_gallery()); }

/// A construction from a random family with random rings and a random point
/// of the required order.
inline Construction random_construction(std::mt19937_64& rng) {
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  const EndoRing rings[] = {EndoRing::Z, EndoRing::GaussianZ, EndoRing::EisensteinZ};
  auto curve = [&](const char* id) { return EllipticCurve::root_curve(id, rings[pick(3)]); };
  auto point_of_order = [&](const EllipticCurve& e, int n) {
    for (;;) {
      TorsionPoint p(e.id, Rational(static_cast<std::int64_t>(pick(n)), n), Rational(static_cast<std::int64_t>(pick(n)), n));
      if (p.order() == n) return p;
    }
  };
  switch (pick(6)) {
    case 0: return p2_action(rings[pick(3)]);
    case 1: return p1xp1_action(curve("E"), curve("F"));
    case 2: {
      const int n = 1 + static_cast<int>(pick(4));
      const EllipticCurve E = curve("E");
      return split_bundle_action(E, point_of_order(E, n), n);
    }
    case 3: return sym2_action(curve("E"));
    case 4: {
      const int ms[] = {2, 3, 4, 6};
      const int m = ms[pick(4)];
      const EllipticCurve E = curve("E");
      return hyperelliptic_action(E, EllipticCurve::root_curve("F", hyperelliptic_ring(m)), m, point_of_order(E, m));
    }
    default: return abelian_action(curve("E"), curve("F"), 1 + static_cast<int>(pick(4)));
  }
}

inline std::vector<CheckRow> random_roundtrip_suite(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::vector<Construction> cs;
  for (std::size_t k = 0; k < count; ++k) cs.push_back(random_construction(rng));
  return roundtrip_rows(cs);
}

/// Seeded random diagonal groups on E x F: random rings, unit holonomies and
/// torsion translations with denominators in {2, 3, 4, 6}. Uses raw engine
/// output modulo n so the sequence is identical on every platform.
inline Scenario random_diagonal_scenario(std::mt19937_64& rng) {
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  const EndoRing rings[] = {EndoRing::Z, EndoRing::GaussianZ, EndoRing::EisensteinZ};
  const EllipticCurve E = EllipticCurve::root_curve("E", rings[pick(3)]);
  const EllipticCurve F = EllipticCurve::root_curve("F", rings[pick(3)]);
  const bool first_trivial = pick(4) != 0;
  const std::size_t count = 1 + pick(3);
  auto point = [&](const EllipticCurve& c) {
    if (pick(3) == 0) return TorsionPoint::zero(c.id);
    const std::int64_t dens[] = {2, 3, 4, 6};
    const std::int64_t d = dens[pick(4)];
    return TorsionPoint(c.id, Rational(static_cast<std::int64_t>(pick(d)), d), Rational(static_cast<std::int64_t>(pick(d)), d));
  };
  std::vector<GeneratorSpec> gens;
  for (std::size_t k = 0; k < count; ++k) {
    const auto ue = units(E.ring), uf = units(F.ring);
    const RingElement p1 = first_trivial ? ue.front() : ue[pick(ue.size())];
    const RingElement p2 = uf[pick(uf.size())];
    TorsionPoint a = point(E);
    TorsionPoint b = point(F);
    gens.push_back({DiagonalHolonomy{p1, p2}, {std::move(a), std::move(b)}});
  }
  return scenario_from(Surface::product(E, F), std::move(gens));
}

struct CorpusReport {
  std::uint64_t seed = 0;
  std::size_t attempted = 0;
  std::size_t valid = 0;
  std::size_t cap_exceeded = 0;
  std::size_t normalized = 0;                  // reached the normal form
  std::size_t smooth_nonfree_irregular = 0;    // smooth, non-free, q = 1
  std::size_t reduced = 0;                     // of those, survived the full reduction
  std::size_t special_points_compared = 0;
  std::size_t oracle_disagreements = 0;
  std::map<std::size_t, std::size_t> quotient_orders;  // r -> count
  std::map<std::string, std::size_t> classes;
  std::map<std::string, std::size_t> residuals;
  std::vector<std::string> violations;
};

/// Builds `count` valid groups (closure within `cap`) and checks the normal
/// form statements, the reduction on smooth non-free irregular quotients, and
/// the reflection test against the axis-product test at every special point.
inline CorpusReport run_structural_corpus(std::uint64_t seed, std::size_t count,
                                          std::size_t cap = ActionGroup::kDefaultCap) {
  CorpusReport rep;
  rep.seed = seed;
  std::mt19937_64 rng(seed);
  const std::size_t max_attempts = 50 * count + 100;
  while (rep.valid < count && rep.attempted < max_attempts) {
    ++rep.attempted;
    const Scenario s = random_diagonal_scenario(rng);
    std::optional<ActionGroup> G;
    try {
      G = s.group(cap);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::CapExceeded) throw;
      ++rep.cap_exceeded;
      continue;
    }
    ++rep.valid;
    const std::string tag = "group #" + std::to_string(rep.valid) + " (attempt " + std::to_string(rep.attempted) + ")";

    bool oriented = false;
    for (std::size_t f = 0; f < 2 && !oriented; ++f) {
      bool trivial = true;
      for (const auto& g : G->elements()) trivial = trivial && g.block(f).is_identity();
      oriented = trivial;
    }
    if (oriented) {
      try {
        const NormalForm nf = normalize(*G);
        ++rep.normalized;
        ++rep.quotient_orders[nf.r];
      } catch (const LemmaViolation& e) {
        rep.violations.push_back(tag + ": " + e.what());
      }
    }

    try {
      const ClassificationResult r = classify(*G);
      ++rep.classes[std::string(class_tag(r.cls))];
      if (r.smoothness.smooth && !r.invariants.free && r.invariants.irregularity == 1) {
        ++rep.smooth_nonfree_irregular;
        if (r.cls == SurfaceClass::SplitBundle || r.cls == SurfaceClass::Sym2) {
          ++rep.reduced;
          ++rep.residuals[r.reduction->residual];
        } else {
          rep.violations.push_back(tag + ": irregular ruled quotient classified as " + std::string(class_tag(r.cls)));
        }
      }
      for (const auto& p : r.smoothness.special_points) {
        ++rep.special_points_compared;
        if (splits_along_axes(*G, p.stabilizer) != p.pseudoreflection_generated) {
          ++rep.oracle_disagreements;
          rep.violations.push_back(tag + ": reflection test and axis-product test disagree");
        }
      }
    } catch (const InternalError& e) {
      rep.violations.push_back(tag + ": " + e.what());
    }
  }
  return rep;
}

inline std::vector<CheckRow> corpus_rows(const CorpusReport& rep, std::size_t required) {
  std::vector<CheckRow> rows;
  auto count_violations = [&](const std::string& needle) {
    std::size_t n = 0;
    for (const auto& v : rep.violations) n += v.find(needle) != std::string::npos ? 1 : 0;
    return n;
  };
  rows.push_back({"corpus", "valid diagonal groups", rep.valid >= required,
                  std::to_string(rep.valid) + " valid of " + std::to_string(rep.attempted) + " attempts, " +
                      std::to_string(rep.cap_exceeded) + " over cap"});
  std::string orders;
  for (const auto& [r, n] : rep.quotient_orders) orders += (orders.empty() ? "" : ", ") + std::to_string(r) + ":" + std::to_string(n);
  const std::size_t cyc = count_violations("cyclic quotient") + count_violations("generator order") +
                          count_violations("translation orders");
  rows.push_back({"corpus", "G/Delta cyclic of order 1,2,3,4,6", cyc == 0,
                  std::to_string(rep.normalized) + " normalized; r counts {" + orders + "}"});
  const std::size_t bounds = count_violations("translation bound") + count_violations("fixed translations") +
                             count_violations("direct product");
  rows.push_back({"corpus", "Delta bounds and G = Delta x <g>", bounds == 0, std::to_string(bounds) + " violations"});
  std::string residuals;
  for (const auto& [name, n] : rep.residuals) residuals += (residuals.empty() ? "" : ", ") + name + ":" + std::to_string(n);
  rows.push_back({"corpus", "residual group in {1, Z/2, Z/3, Z/4, (Z/2)^2}",
                  rep.reduced == rep.smooth_nonfree_irregular && count_violations("residual group") == 0 &&
                      count_violations("kernel") == 0,
                  std::to_string(rep.reduced) + "/" + std::to_string(rep.smooth_nonfree_irregular) + " reduced {" +
                      residuals + "}"});
  rows.push_back({"corpus", "reflection test agrees with axis-product test", rep.oracle_disagreements == 0,
                  std::to_string(rep.special_points_compared) + " special points, " +
                      std::to_string(rep.oracle_disagreements) + " disagreements"});
  rows.push_back({"corpus", "no internal errors", rep.violations.empty(),
                  rep.violations.empty() ? "none" : rep.violations.front()});
  return rows;
}

}  // namespace abelquot
