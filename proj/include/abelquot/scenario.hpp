#pragma once

#include "abelquot/action.hpp"
#include "abelquot/constructions.hpp"
#include "abelquot/errors.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace abelquot {

/// The on-disk description of an action: root curves, the surface, and
/// symbolic generators with rational translation coordinates.
struct Scenario {
  int version = 1;
  std::vector<std::pair<std::string, EndoRing>> curves;
  Surface surface;
  std::vector<GeneratorSpec> generators;

  ActionGroup group(std::size_t cap = ActionGroup::kDefaultCap) const {
    return ActionGroup::from_specs(surface, generators, cap);
  }

  friend bool operator==(const Scenario& a, const Scenario& b) {
    return a.version == b.version && a.curves == b.curves && a.surface.first.id == b.surface.first.id &&
           a.surface.second.id == b.surface.second.id && a.surface.same_curve == b.surface.same_curve &&
           a.generators == b.generators;
  }
};

inline constexpr int kScenarioVersion = 1;

inline Scenario scenario_from(const Surface& s, std::vector<GeneratorSpec> generators) {
  for (const auto* e : {&s.first, &s.second})
    if (e->id != e->root || !e->frame.is_identity())
      throw PreconditionError("scenarios describe products of root curves only; " + e->id + " is derived");
  Scenario sc;
  sc.curves.emplace_back(s.first.id, s.first.ring);
  if (s.second.id != s.first.id) sc.curves.emplace_back(s.second.id, s.second.ring);
  sc.surface = s;
  sc.generators = std::move(generators);
  return sc;
}

inline Scenario scenario_from(const Construction& c) { return scenario_from(c.surface, c.generators); }

namespace detail {

using ojson = nlohmann::ordered_json;

inline ojson ring_element_json(const RingElement& x) { return ojson{{"a", x.a}, {"b", x.b}}; }

inline ojson point_json(const TorsionPoint& p) { return ojson::array({to_string(p.coords[0]), to_string(p.coords[1])}); }

[[noreturn]] inline void schema_error(const std::string& what) { throw Error(ErrorCode::Schema, what); }

inline const nlohmann::json& field(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.is_object()) schema_error(where + " must be an object");
  const auto it = j.find(key);
  if (it == j.end()) schema_error(where + " is missing '" + key + "'");
  return *it;
}

inline std::int64_t integer_field(const nlohmann::json& j, const char* key, const std::string& where) {
  const auto& v = field(j, key, where);
  if (!v.is_number_integer()) schema_error(where + "." + key + " must be an integer");
  return v.get<std::int64_t>();
}

inline RingElement parse_ring_element(const nlohmann::json& j, EndoRing ring, const std::string& where) {
  const std::int64_t a = integer_field(j, "a", where), b = integer_field(j, "b", where);
  if (ring == EndoRing::Z && b != 0) schema_error(where + " has b != 0 on a curve with ring Z");
  return {ring, a, b};
}

inline Rational parse_coordinate(const nlohmann::json& j, const std::string& where) {
  if (!j.is_string()) throw Error(ErrorCode::InvalidTorsion, where + " must be a string \"p/q\"");
  Rational x;
  try {
    x = parse_rational(j.get<std::string>());
  } catch (const std::exception& e) {
    throw Error(ErrorCode::InvalidTorsion, where + ": " + e.what());
  }
  if (x < 0 || x >= 1) throw Error(ErrorCode::InvalidTorsion, where + " = " + j.get<std::string>() + " is not in [0,1)");
  return x;
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const Scenario& s) {
  using detail::ojson;
  ojson curves = ojson::array();
  for (const auto& [id, ring] : s.curves) curves.push_back(ojson{{"id", id}, {"ring", std::string(ring_tag(ring))}});
  ojson gens = ojson::array();
  for (const auto& g : s.generators) {
    ojson linear;
    if (const auto* d = std::get_if<DiagonalHolonomy>(&g.linear)) {
      linear["diag"] = ojson::array({detail::ring_element_json(d->first), detail::ring_element_json(d->second)});
    } else {
      const auto& m = std::get<MatrixHolonomy>(g.linear).entries;
      linear["matrix"] = ojson::array({ojson::array({detail::ring_element_json(m[0]), detail::ring_element_json(m[1])}),
                                       ojson::array({detail::ring_element_json(m[2]), detail::ring_element_json(m[3])})});
    }
    gens.push_back(ojson{{"linear", linear},
                         {"translation", ojson::array({detail::point_json(g.translation[0]), detail::point_json(g.translation[1])})}});
  }
  return ojson{{"version", s.version},
               {"curves", curves},
               {"surface", ojson{{"first", s.surface.first.id}, {"second", s.surface.second.id}, {"same_curve", s.surface.same_curve}}},
               {"generators", gens}};
}

/// Validates and decodes a scenario. Errors carry Schema or InvalidTorsion codes.
inline Scenario parse_scenario(const nlohmann::json& j) {
  using detail::field;
  using detail::schema_error;
  Scenario s;
  s.version = static_cast<int>(detail::integer_field(j, "version", "scenario"));
  if (s.version != kScenarioVersion) schema_error("unsupported scenario version " + std::to_string(s.version));

  const auto& curves = field(j, "curves", "scenario");
  if (!curves.is_array() || curves.empty()) schema_error("scenario.curves must be a non-empty array");
  std::set<std::string> ids;
  for (const auto& c : curves) {
    const auto& id = field(c, "id", "curve");
    const auto& ring = field(c, "ring", "curve");
    if (!id.is_string() || id.get<std::string>().empty()) schema_error("curve.id must be a non-empty string");
    if (!ring.is_string()) schema_error("curve.ring must be a string");
    EndoRing r;
    try {
      r = parse_ring(ring.get<std::string>());
    } catch (const std::invalid_argument& e) {
      schema_error(e.what());
    }
    if (!ids.insert(id.get<std::string>()).second) schema_error("duplicate curve id '" + id.get<std::string>() + "'");
    s.curves.emplace_back(id.get<std::string>(), r);
  }
  auto curve = [&](const std::string& id) {
    for (const auto& [cid, r] : s.curves)
      if (cid == id) return EllipticCurve::root_curve(cid, r);
    schema_error("unknown curve id '" + id + "'");
  };

  const auto& surf = field(j, "surface", "scenario");
  const auto& first = field(surf, "first", "surface");
  const auto& second = field(surf, "second", "surface");
  const auto& same = field(surf, "same_curve", "surface");
  if (!first.is_string() || !second.is_string()) schema_error("surface.first and surface.second must be curve ids");
  if (!same.is_boolean()) schema_error("surface.same_curve must be a boolean");
  s.surface = {curve(first.get<std::string>()), curve(second.get<std::string>()), same.get<bool>()};
  if (s.surface.same_curve && s.surface.first.id != s.surface.second.id)
    schema_error("same_curve requires both factors to be the same curve");

  const auto& gens = field(j, "generators", "scenario");
  if (!gens.is_array()) schema_error("scenario.generators must be an array");
  for (std::size_t k = 0; k < gens.size(); ++k) {
    const std::string where = "generators[" + std::to_string(k) + "]";
    const auto& g = gens[k];
    const auto& linear = field(g, "linear", where);
    GeneratorSpec spec;
    const bool has_diag = linear.is_object() && linear.contains("diag");
    const bool has_matrix = linear.is_object() && linear.contains("matrix");
    if (has_diag == has_matrix) schema_error(where + ".linear must have exactly one of 'diag' or 'matrix'");
    if (has_diag) {
      const auto& d = linear["diag"];
      if (!d.is_array() || d.size() != 2) schema_error(where + ".linear.diag must hold two ring elements");
      spec.linear = DiagonalHolonomy{detail::parse_ring_element(d[0], s.surface.first.ring, where + ".linear.diag[0]"),
                                     detail::parse_ring_element(d[1], s.surface.second.ring, where + ".linear.diag[1]")};
    } else {
      if (!s.surface.same_curve) schema_error(where + ": matrix holonomy requires same_curve");
      const auto& m = linear["matrix"];
      if (!m.is_array() || m.size() != 2 || !m[0].is_array() || m[0].size() != 2 || !m[1].is_array() || m[1].size() != 2)
        schema_error(where + ".linear.matrix must be 2x2");
      MatrixHolonomy mh;
      for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c)
          mh.entries[2 * r + c] = detail::parse_ring_element(m[r][c], s.surface.first.ring,
                                                             where + ".linear.matrix[" + std::to_string(r) + "][" + std::to_string(c) + "]");
      spec.linear = mh;
    }
    const auto& t = field(g, "translation", where);
    if (!t.is_array() || t.size() != 2) schema_error(where + ".translation must be a pair of points");
    for (std::size_t f = 0; f < 2; ++f) {
      const std::string tw = where + ".translation[" + std::to_string(f) + "]";
      if (!t[f].is_array() || t[f].size() != 2) schema_error(tw + " must be a pair of coordinates");
      spec.translation[f] = TorsionPoint(s.surface.factor(f).id, detail::parse_coordinate(t[f][0], tw + "[0]"),
                                         detail::parse_coordinate(t[f][1], tw + "[1]"));
    }
    s.generators.push_back(std::move(spec));
  }
  return s;
}

inline Scenario parse_scenario_text(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Parse, std::string("malformed JSON: ") + e.what());
  }
  return parse_scenario(j);
}

}  // namespace abelquot
