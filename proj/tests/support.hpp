#pragma once

// Seeded generators and brute-force oracles shared by the test suites.

#include "abelquot/action.hpp"

#include <cstdint>
#include <random>
#include <set>
#include <vector>

namespace testing_support {

using namespace abelquot;

inline std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline IntMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, std::int64_t bound) {
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = uniform(rng, -bound, bound);
  return m;
}

/// Product of random elementary column operations.
inline IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n, int steps = 8) {
  IntMatrix u = IntMatrix::identity(n);
  for (int s = 0; s < steps; ++s) {
    const std::size_t i = rng() % n, j = rng() % n;
    if (i == j) continue;
    const std::int64_t k = uniform(rng, -2, 2);
    for (std::size_t r = 0; r < n; ++r) u(r, j) += BigInt(k) * u(r, i);
  }
  return u;
}

inline Rational random_fraction(std::mt19937_64& rng, std::int64_t max_den) {
  const std::int64_t d = uniform(rng, 1, max_den);
  return Rational(uniform(rng, 0, d - 1), d);
}

/// Determinant by permutation expansion.
inline BigInt leibniz_det(const IntMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  BigInt total = 0;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) inversions += p[i] > p[j] ? 1 : 0;
    BigInt term = inversions % 2 ? -1 : 1;
    for (std::size_t i = 0; i < n; ++i) term *= m(i, p[i]);
    total += term;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

/// All x in (1/N Z)^n / Z^n with M x ≡ t, by enumeration.
inline std::set<QVec, bool (*)(const QVec&, const QVec&)> grid_solutions(const IntMatrix& M, const QVec& t, std::int64_t N) {
  std::set<QVec, bool (*)(const QVec&, const QVec&)> out(lex_less);
  const std::size_t n = M.cols();
  std::vector<std::int64_t> idx(n, 0);
  for (;;) {
    QVec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = Rational(idx[i], N);
    if (frac(M * x) == frac(t)) out.insert(x);
    std::size_t i = 0;
    while (i < n && ++idx[i] == N) idx[i++] = 0;
    if (i == n) break;
  }
  return out;
}

/// Naive closure: keep composing pairs until nothing new appears.
inline std::set<AffineAuto> naive_closure(const std::vector<AffineAuto>& gens, std::size_t limit = 4096) {
  std::set<AffineAuto> s(gens.begin(), gens.end());
  s.insert(AffineAuto::identity());
  for (bool grew = true; grew;) {
    grew = false;
    const std::vector<AffineAuto> cur(s.begin(), s.end());
    for (const auto& a : cur)
      for (const auto& b : cur)
        if (s.insert(compose(a, b)).second) grew = true;
    if (s.size() > limit) break;
  }
  return s;
}

/// Euler number by the Lefschetz count: a non-translation g with det(L - I) != 0
/// has exactly |det(L - I)| fixed points; every other element contributes 0.
inline BigInt lefschetz_euler(const ActionGroup& G) {
  BigInt total = 0;
  for (const auto& g : G.elements()) {
    const BigInt d = leibniz_det(g.linear() - IntMatrix::identity(4));
    total += d < 0 ? BigInt(-d) : d;
  }
  return total / G.order();
}

/// Rank of the G0-invariant part of Q^4, via the averaged projector, halved.
inline std::size_t averaged_irregularity(const ActionGroup& G) {
  const auto& hol = G.holonomy_group();
  RatMatrix P(4, 4);
  for (const auto& L : hol) P = P + to_rational(L);
  P = Rational(1, static_cast<long long>(hol.size())) * P;
  // rank by Gaussian elimination
  std::size_t rank = 0;
  for (std::size_t c = 0; c < 4 && rank < 4; ++c) {
    std::size_t piv = rank;
    while (piv < 4 && P(piv, c) == 0) ++piv;
    if (piv == 4) continue;
    for (std::size_t k = 0; k < 4; ++k) std::swap(P(rank, k), P(piv, k));
    for (std::size_t r = 0; r < 4; ++r) {
      if (r == rank || P(r, c) == 0) continue;
      const Rational f = P(r, c) / P(rank, c);
      for (std::size_t k = 0; k < 4; ++k) P(r, k) -= f * P(rank, k);
    }
    ++rank;
  }
  return rank / 2;
}

}  // namespace testing_support
