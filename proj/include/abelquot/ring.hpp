#pragma once

#include "abelquot/matrix.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace abelquot {

/// The three endomorphism rings an elliptic curve can carry here: Z, Z[i], Z[w]
/// with w^2 + w + 1 = 0. Elements are a + b*gen on the lattice basis (1, gen).
enum class EndoRing { Z, GaussianZ, EisensteinZ };

inline std::string_view ring_tag(EndoRing r) {
  switch (r) {
    case EndoRing::Z: return "Z";
    case EndoRing::GaussianZ: return "Zi";
    case EndoRing::EisensteinZ: return "Zw";
  }
  return "?";
}

inline EndoRing parse_ring(std::string_view tag) {
  if (tag == "Z") return EndoRing::Z;
  if (tag == "Zi") return EndoRing::GaussianZ;
  if (tag == "Zw") return EndoRing::EisensteinZ;
  throw std::invalid_argument("unknown ring tag '" + std::string(tag) + "'");
}

/// Order of the unit group: Z/2, Z/4 or Z/6.
inline int unit_group_order(EndoRing r) {
  switch (r) {
    case EndoRing::Z: return 2;
    case EndoRing::GaussianZ: return 4;
    case EndoRing::EisensteinZ: return 6;
  }
  return 0;
}

struct RingElement {
  EndoRing ring = EndoRing::Z;
  std::int64_t a = 0;
  std::int64_t b = 0;

  RingElement() = default;
  RingElement(EndoRing r, std::int64_t a_, std::int64_t b_ = 0) : ring(r), a(a_), b(b_) {
    if (r == EndoRing::Z && b != 0) throw std::invalid_argument("element of Z must have b = 0");
  }

  static RingElement one(EndoRing r) { return {r, 1, 0}; }
  static RingElement generator(EndoRing r) {
    if (r == EndoRing::Z) throw std::invalid_argument("Z has no extra generator");
    return {r, 0, 1};
  }

  friend bool operator==(const RingElement&, const RingElement&) = default;
  friend bool operator<(const RingElement& x, const RingElement& y) {
    if (x.ring != y.ring) return x.ring < y.ring;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  }
};

inline void require_same_ring(const RingElement& x, const RingElement& y) {
  if (x.ring != y.ring) throw std::invalid_argument("ring elements from different rings");
}

inline RingElement operator+(const RingElement& x, const RingElement& y) {
  require_same_ring(x, y);
  return {x.ring, x.a + y.a, x.b + y.b};
}

inline RingElement operator-(const RingElement& x) { return {x.ring, -x.a, -x.b}; }

inline RingElement operator-(const RingElement& x, const RingElement& y) { return x + (-y); }

inline RingElement operator*(const RingElement& x, const RingElement& y) {
  require_same_ring(x, y);
  switch (x.ring) {
    case EndoRing::Z: return {x.ring, x.a * y.a, 0};
    case EndoRing::GaussianZ:  // i^2 = -1
      return {x.ring, x.a * y.a - x.b * y.b, x.a * y.b + x.b * y.a};
    case EndoRing::EisensteinZ:  // w^2 = -1 - w
      return {x.ring, x.a * y.a - x.b * y.b, x.a * y.b + x.b * y.a - x.b * y.b};
  }
  return {};
}

inline std::string to_string(const RingElement& x) {
  if (x.ring == EndoRing::Z || x.b == 0) return std::to_string(x.a);
  const char* g = x.ring == EndoRing::GaussianZ ? "i" : "w";
  std::string s;
  if (x.a != 0) s = std::to_string(x.a) + (x.b > 0 ? "+" : "-");
  else if (x.b < 0) s = "-";
  const auto mag = x.b < 0 ? -x.b : x.b;
  if (mag != 1) s += std::to_string(mag);
  return s + g;
}

/// Every unit of the ring, listed as powers of a generator of the unit group
/// (-1, i, or -w), starting with 1.
inline std::vector<RingElement> units(EndoRing r) {
  switch (r) {
    case EndoRing::Z: return {{r, 1}, {r, -1}};
    case EndoRing::GaussianZ: return {{r, 1, 0}, {r, 0, 1}, {r, -1, 0}, {r, 0, -1}};
    case EndoRing::EisensteinZ:
      // powers of -w: 1, -w, w^2 = -1-w, -1, w, -w^2 = 1+w
      return {{r, 1, 0}, {r, 0, -1}, {r, -1, -1}, {r, -1, 0}, {r, 0, 1}, {r, 1, 1}};
  }
  return {};
}

/// Multiplicative order of a root of unity, found by looking the element up in
/// the (finite, explicit) unit group. Non-units give nullopt.
inline std::optional<int> ring_element_order(const RingElement& x) {
  const auto us = units(x.ring);
  const int n = static_cast<int>(us.size());
  for (int k = 0; k < n; ++k) {
    if (us[static_cast<std::size_t>(k)] != x) continue;
    int g = n, kk = k;
    while (kk) {
      const int t = g % kk;
      g = kk;
      kk = t;
    }
    return n / g;
  }
  return std::nullopt;
}

/// The unit with the given multiplicative order and smallest positive angle:
/// -1, w, i, -w for orders 2, 3, 4, 6.
inline std::optional<RingElement> primitive_unit(EndoRing r, int order) {
  if (order == 3 && r == EndoRing::EisensteinZ) return RingElement{r, 0, 1};
  for (const auto& u : units(r))
    if (ring_element_order(u) == order) return u;
  return std::nullopt;
}

/// Multiplication-by-x on the basis (1, gen), as a 2x2 integer matrix.
inline IntMatrix integral_rep(const RingElement& x) {
  switch (x.ring) {
    case EndoRing::Z: return IntMatrix{{x.a, 0}, {0, x.a}};
    case EndoRing::GaussianZ:
      // x*1 = a + b i ; x*i = -b + a i
      return IntMatrix{{x.a, -x.b}, {x.b, x.a}};
    case EndoRing::EisensteinZ:
      // x*1 = a + b w ; x*w = a w + b w^2 = -b + (a - b) w
      return IntMatrix{{x.a, -x.b}, {x.b, x.a - x.b}};
  }
  return {};
}

/// Reduced norm |x|^2 = det(integral_rep(x)).
inline std::int64_t norm(const RingElement& x) {
  switch (x.ring) {
    case EndoRing::Z: return x.a * x.a;
    case EndoRing::GaussianZ: return x.a * x.a + x.b * x.b;
    case EndoRing::EisensteinZ: return x.a * x.a - x.a * x.b + x.b * x.b;
  }
  return 0;
}

}  // namespace abelquot
