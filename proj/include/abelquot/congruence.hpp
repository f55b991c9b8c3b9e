#pragma once

#include "abelquot/normal_form.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace abelquot {

/// Solutions of M x = t in (Q/Z)^n, or more precisely in (R/Z)^n: a union of
/// cosets base + (kernel ⊗ R) of one saturated sublattice. When `kernel` has no
/// columns the cosets are points.
struct CongruenceSolution {
  std::vector<QVec> base_points;  // reduced to [0,1)^n, lexicographically sorted
  IntMatrix kernel;               // n x k saturated basis, k = 0 for finite sets

  bool empty() const { return base_points.empty(); }
  bool finite() const { return kernel.cols() == 0; }
  std::size_t count() const { return base_points.size(); }
};

/// Solves M x ≡ t (mod Z^n) for x in the real torus R^n / Z^n.
///
/// With U M V = D in Smith form and x = V y, the system decouples into
/// d_i y_i ≡ (U t)_i. Non-zero d_i give |d_i| values for y_i; d_i = 0 either
/// makes the system inconsistent or frees y_i, contributing a kernel direction.
inline CongruenceSolution solve_congruence(const IntMatrix& M, const QVec& t) {
  if (!M.square() || M.rows() != t.size()) throw std::invalid_argument("solve_congruence: shape mismatch");
  const std::size_t n = M.rows();
  const SmithForm s = smith_normal_form(M);
  const QVec rhs = s.U * t;
  const std::size_t r = s.rank();

  CongruenceSolution out;
  out.kernel = s.V.columns(r, n - r);
  for (std::size_t i = r; i < n; ++i)
    if (!is_integer(rhs[i])) return out;

  // Enumerate every choice of k_i in [0, d_i) for the pivoted coordinates.
  std::vector<BigInt> d(r);
  for (std::size_t i = 0; i < r; ++i) d[i] = s.D(i, i);
  std::vector<BigInt> k(r, 0);
  for (;;) {
    QVec y(n, Rational(0));
    for (std::size_t i = 0; i < r; ++i) y[i] = (rhs[i] + Rational(k[i])) / Rational(d[i]);
    out.base_points.push_back(frac(s.V * y));
    std::size_t i = 0;
    while (i < r) {
      if (++k[i] < d[i]) break;
      k[i] = 0;
      ++i;
    }
    if (i == r) break;
  }
  std::sort(out.base_points.begin(), out.base_points.end(), lex_less);
  return out;
}

}  // namespace abelquot
