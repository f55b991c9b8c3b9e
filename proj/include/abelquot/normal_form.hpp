#pragma once

#include "abelquot/matrix.hpp"

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

namespace abelquot {

struct SmithForm {
  IntMatrix U;  // m x m unimodular
  IntMatrix D;  // m x n diagonal, d_i | d_{i+1}, d_i >= 0
  IntMatrix V;  // n x n unimodular

  std::size_t rank() const {
    std::size_t r = 0;
    while (r < D.rows() && r < D.cols() && D(r, r) != 0) ++r;
    return r;
  }
  std::vector<BigInt> invariant_factors() const {
    std::vector<BigInt> d;
    for (std::size_t i = 0; i < D.rows() && i < D.cols(); ++i) d.push_back(D(i, i));
    return d;
  }
};

namespace detail {

struct ExtGcd {
  BigInt g, x, y;  // g = x*a + y*b, g >= 0
};

inline ExtGcd ext_gcd(const BigInt& a, const BigInt& b) {
  BigInt old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    BigInt q = old_r / r;
    BigInt tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

// Applies the unimodular 2x2 transform [[x, y], [-b/g, a/g]] to rows (i, j)
// of `m` so that m(i, c) becomes gcd and m(j, c) becomes 0; mirrors it on `u`.
inline void combine_rows(IntMatrix& m, IntMatrix& u, std::size_t i, std::size_t j, std::size_t c) {
  const BigInt a = m(i, c), b = m(j, c);
  if (a != 0 && b % a == 0) {  // plain elimination keeps row i fixed, so the loop terminates
    const BigInt q = -(b / a);
    m.add_row(j, i, q);
    u.add_row(j, i, q);
    return;
  }
  const auto [g, x, y] = ext_gcd(a, b);
  const BigInt p = a / g, q = b / g;
  auto apply = [&](IntMatrix& t) {
    for (std::size_t k = 0; k < t.cols(); ++k) {
      const BigInt ti = t(i, k), tj = t(j, k);
      t(i, k) = x * ti + y * tj;
      t(j, k) = -q * ti + p * tj;
    }
  };
  apply(m);
  apply(u);
}

inline void combine_cols(IntMatrix& m, IntMatrix& v, std::size_t i, std::size_t j, std::size_t r) {
  const BigInt a = m(r, i), b = m(r, j);
  if (a != 0 && b % a == 0) {
    const BigInt q = -(b / a);
    m.add_col(j, i, q);
    v.add_col(j, i, q);
    return;
  }
  const auto [g, x, y] = ext_gcd(a, b);
  const BigInt p = a / g, q = b / g;
  auto apply = [&](IntMatrix& t) {
    for (std::size_t k = 0; k < t.rows(); ++k) {
      const BigInt ti = t(k, i), tj = t(k, j);
      t(k, i) = x * ti + y * tj;
      t(k, j) = -q * ti + p * tj;
    }
  };
  apply(m);
  apply(v);
}

}  // namespace detail

/// Smith normal form: U * M * V = D with U, V unimodular and D diagonal with
/// non-negative entries forming a divisibility chain.
inline SmithForm smith_normal_form(const IntMatrix& M) {
  const std::size_t m = M.rows(), n = M.cols();
  IntMatrix D = M;
  IntMatrix U = IntMatrix::identity(m);
  IntMatrix V = IntMatrix::identity(n);
  const std::size_t steps = std::min(m, n);

  for (std::size_t t = 0; t < steps; ++t) {
    // Pick the smallest non-zero entry of the trailing block as pivot.
    bool found = false;
    std::size_t pr = t, pc = t;
    BigInt best = 0;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j) {
        if (D(i, j) == 0) continue;
        const BigInt mag = boost::multiprecision::abs(D(i, j));
        if (!found || mag < best) {
          found = true;
          best = mag;
          pr = i;
          pc = j;
        }
      }
    if (!found) break;
    D.swap_rows(t, pr);
    U.swap_rows(t, pr);
    D.swap_cols(t, pc);
    V.swap_cols(t, pc);

    for (;;) {
      for (std::size_t i = t + 1; i < m; ++i)
        if (D(i, t) != 0) detail::combine_rows(D, U, t, i, t);
      for (std::size_t j = t + 1; j < n; ++j)
        if (D(t, j) != 0) detail::combine_cols(D, V, t, j, t);
      bool clean = true;
      for (std::size_t i = t + 1; i < m && clean; ++i)
        if (D(i, t) != 0) clean = false;
      if (!clean) continue;
      // Divisibility: fold any trailing entry not divisible by the pivot into row t.
      bool divisible = true;
      for (std::size_t i = t + 1; i < m && divisible; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (D(i, j) % D(t, t) != 0) {
            D.add_row(t, i, BigInt(1));
            U.add_row(t, i, BigInt(1));
            divisible = false;
            break;
          }
      if (divisible) break;
    }
    if (D(t, t) < 0) {
      D.negate_row(t);
      U.negate_row(t);
    }
  }
  return {std::move(U), std::move(D), std::move(V)};
}

/// Saturated basis (as columns) of {x in Z^n : M x = 0}.
inline IntMatrix kernel_lattice(const IntMatrix& M) {
  const SmithForm s = smith_normal_form(M);
  const std::size_t r = s.rank();
  return s.V.columns(r, M.cols() - r);
}

/// Kernel over Q of a rational matrix, returned as a saturated integer lattice.
inline IntMatrix kernel_lattice(const RatMatrix& M) {
  const BigInt d = common_denominator(M);
  return kernel_lattice(to_integer(Rational(d) * M));
}

inline std::size_t rank(const IntMatrix& M) { return smith_normal_form(M).rank(); }

/// Saturation of the lattice spanned by the columns: (Q-span) ∩ Z^n.
inline IntMatrix saturate(const IntMatrix& B) {
  const SmithForm s = smith_normal_form(B);
  const IntMatrix Uinv = to_integer(inverse(s.U));
  return Uinv.columns(0, s.rank());
}

/// For a saturated basis B (n x k), a unimodular n x n matrix whose first k
/// columns span the same lattice as B.
inline IntMatrix complete_to_unimodular(const IntMatrix& B) {
  const SmithForm s = smith_normal_form(B);
  for (std::size_t i = 0; i < s.rank(); ++i)
    if (s.D(i, i) != 1) throw std::domain_error("lattice is not saturated");
  return to_integer(inverse(s.U));
}

/// Column-style Hermite normal form of the lattice spanned by the columns of M:
/// a basis H (n x rank) in column echelon form with positive pivots and
/// entries left of each pivot reduced into [0, pivot). Unique for a given lattice.
inline IntMatrix hermite_normal_form(const IntMatrix& M) {
  IntMatrix H = M;
  auto col_combine = [&](std::size_t i, std::size_t j, std::size_t r) {
    const BigInt a = H(r, i), b = H(r, j);
    const auto [g, x, y] = detail::ext_gcd(a, b);
    const BigInt p = a / g, q = b / g;
    for (std::size_t k = 0; k < H.rows(); ++k) {
      const BigInt hi = H(k, i), hj = H(k, j);
      H(k, i) = x * hi + y * hj;
      H(k, j) = -q * hi + p * hj;
    }
  };
  std::size_t pivot_col = 0;
  std::vector<std::size_t> pivots;  // columns holding earlier pivots
  for (std::size_t r = 0; r < H.rows() && pivot_col < H.cols(); ++r) {
    std::size_t first = pivot_col;
    while (first < H.cols() && H(r, first) == 0) ++first;
    if (first == H.cols()) continue;
    H.swap_cols(pivot_col, first);
    for (std::size_t j = pivot_col + 1; j < H.cols(); ++j)
      if (H(r, j) != 0) col_combine(pivot_col, j, r);
    if (H(r, pivot_col) < 0) H.negate_col(pivot_col);
    const BigInt piv = H(r, pivot_col);
    for (const std::size_t pc : pivots) {
      const BigInt q = floor_div(H(r, pc), piv);
      if (q != 0) H.add_col(pc, pivot_col, BigInt(-q));
    }
    pivots.push_back(pivot_col);
    ++pivot_col;
  }
  return H.columns(0, pivot_col);
}

/// Canonical basis of the rational lattice spanned by the columns of B.
inline RatMatrix hermite_normal_form(const RatMatrix& B) {
  const BigInt d = common_denominator(B);
  const IntMatrix H = hermite_normal_form(to_integer(Rational(d) * B));
  return Rational(1, d) * to_rational(H);
}

}  // namespace abelquot
