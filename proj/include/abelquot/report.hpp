#pragma once

#include "abelquot/classify.hpp"

#include <nlohmann/json.hpp>

#include <sstream>
#include <string>
#include <string_view>

namespace abelquot {

inline constexpr std::string_view kToolVersion = "1.0.0";

namespace detail {

inline nlohmann::ordered_json rational_vector_json(const QVec& v) {
  auto a = nlohmann::ordered_json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

inline nlohmann::ordered_json rational_matrix_json(const RatMatrix& m) {
  auto rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

inline nlohmann::ordered_json special_point_json(const SpecialPoint& p) {
  return {{"point", rational_vector_json(p.point)},
          {"stabilizer_order", p.stabilizer_order()},
          {"reflection_subgroup_order", p.reflection_subgroup_order},
          {"pseudoreflection_generated", p.pseudoreflection_generated}};
}

}  // namespace detail

/// Lattice of a curve as a canonical basis in the coordinates of its root curve.
inline nlohmann::ordered_json curve_json(const EllipticCurve& e) {
  return {{"id", e.id},
          {"ring", std::string(ring_tag(e.ring))},
          {"root", e.root},
          {"root_ring", std::string(ring_tag(e.root_ring))},
          {"lattice", detail::rational_matrix_json(hermite_normal_form(e.frame))}};
}

/// Stable JSON rendering: fixed key order, special points in lexicographic order.
inline nlohmann::ordered_json report_json(const ClassificationResult& r) {
  using nlohmann::ordered_json;
  ordered_json out;
  out["class"] = std::string(class_tag(r.cls));
  if (r.cls == SurfaceClass::Singular) out["witnesses"] = r.smoothness.failing_count();

  ordered_json params = ordered_json::object();
  switch (r.cls) {
    case SurfaceClass::SplitBundle:
      params["n"] = r.bundle_order;
      params["base"] = curve_json(*r.base);
      break;
    case SurfaceClass::Sym2: params["base"] = curve_json(*r.base); break;
    case SurfaceClass::Hyperelliptic:
      params["holonomy"] = r.holonomy_group;
      params["holonomy_order"] = r.holonomy_order;
      params["group_order"] = r.group_order;
      params["group"] = r.group_structure;
      break;
    case SurfaceClass::Abelian:
      params["group_order"] = r.group_order;
      params["group"] = r.group_structure;
      params["quotient_lattice"] = detail::rational_matrix_json(*r.quotient_lattice);
      break;
    case SurfaceClass::OutOfScope: params["reason"] = r.note; break;
    default: break;
  }
  out["params"] = params;
  out["group_order"] = r.group_order;
  out["invariants"] = {{"euler", r.invariants.euler.convert_to<long long>()},
                       {"irregularity", r.invariants.irregularity},
                       {"free", r.invariants.free},
                       {"translations_only", r.invariants.translations_only}};

  ordered_json points = ordered_json::array();
  for (const auto& p : r.smoothness.special_points) points.push_back(detail::special_point_json(p));
  out["smoothness"] = {{"smooth", r.smoothness.smooth},
                       {"special_point_count", r.smoothness.special_points.size()},
                       {"failing_point_count", r.smoothness.failing_count()},
                       {"witness", r.smoothness.witness ? detail::special_point_json(*r.smoothness.witness) : ordered_json(nullptr)},
                       {"special_points", points}};
  if (r.reduction) {
    const auto& s = *r.reduction;
    out["reduction"] = {{"via_splitting", s.via_splitting},
                        {"isogeny_degree", s.isogeny_degree.str()},
                        {"swapped", s.swapped},
                        {"removed_first", s.removed_first},
                        {"removed_second", s.removed_second},
                        {"delta_order", s.delta_order},
                        {"r", s.r},
                        {"kernel_order", s.kernel_order},
                        {"fibre_kernel_order", s.fibre_kernel_order},
                        {"residual", s.residual}};
  }
  return out;
}

/// Short human-readable summary.
inline std::string report_text(const ClassificationResult& r) {
  std::ostringstream os;
  os << "class            " << class_tag(r.cls) << "\n";
  os << "group order      " << r.group_order << "\n";
  switch (r.cls) {
    case SurfaceClass::SplitBundle:
      os << "bundle order     " << r.bundle_order << "\n";
      os << "base curve       " << r.base->id << "\n";
      break;
    case SurfaceClass::Sym2: os << "base curve       " << r.base->id << "\n"; break;
    case SurfaceClass::Hyperelliptic:
      os << "holonomy         " << r.holonomy_group << "\n";
      os << "group            " << r.group_structure << "\n";
      break;
    case SurfaceClass::Abelian: os << "group            " << r.group_structure << "\n"; break;
    case SurfaceClass::Singular: os << "witnesses        " << r.smoothness.failing_count() << "\n"; break;
    case SurfaceClass::OutOfScope: os << "reason           " << r.note << "\n"; break;
    default: break;
  }
  os << "euler            " << r.invariants.euler << "\n";
  os << "irregularity     " << r.invariants.irregularity << "\n";
  os << "free             " << (r.invariants.free ? "yes" : "no") << "\n";
  os << "special points   " << r.smoothness.special_points.size() << "\n";
  return os.str();
}

}  // namespace abelquot
