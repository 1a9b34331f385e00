#pragma once

// Shared helpers for the test suites: scalar literals, independent oracles,
// and the difference-equation tables for the order-2 and order-3 conditions.

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "cmvlab/cmvlab.hpp"

namespace testsupport {

using cmvlab::BandMatrix;
using cmvlab::CmvPair;
using cmvlab::ExactComplex;
using cmvlab::FloatComplex;
using cmvlab::LaurentPoly;
using cmvlab::random_hermitian_band;
using cmvlab::random_real_diagonal;
using cmvlab::random_small_scalar;
using cmvlab::Rational;
using cmvlab::Rng;
using cmvlab::ScalarTraits;
using cmvlab::VerblunskySeq;

inline ExactComplex q(long p, long den = 1) { return ExactComplex(Rational(p, den)); }
inline ExactComplex qi(long pr, long dr, long pi, long di) {
  return ExactComplex(Rational(pr, dr), Rational(pi, di));
}

template <class S>
S sc(long p, long den = 1) {
  return ScalarTraits<S>::from_real(
      typename ScalarTraits<S>::Real(ScalarTraits<S>::real_from_string(
          den == 1 ? std::to_string(p)
                   : std::to_string(p) + "/" + std::to_string(den))));
}

template <class S>
VerblunskySeq<S> alpha_constant_3_5() {
  if constexpr (ScalarTraits<S>::exact)
    return VerblunskySeq<S>::constant(ExactComplex(Rational(3, 5)));
  else
    return VerblunskySeq<S>::constant(FloatComplex(0.6, 0.0));
}

// Tridiagonal closed form of the order-1 conjugated ad image of a real
// diagonal: off-diagonal a_k = (lambda_k - lambda_{k+1}) rho_k alpha_k with
// alternating signs and conjugations, diagonal (-1)^k b_k with
// b_0 = (lambda_0 - lambda_1) rho_0^2 and
// b_k = (lambda_{k-1} - lambda_k) rho_{k-1}^2 + (lambda_k - lambda_{k+1}) rho_k^2.
template <class S>
BandMatrix<S> order1_closed_form(const VerblunskySeq<S>& alpha,
                                 const std::vector<S>& lambda) {
  using T = ScalarTraits<S>;
  const int w = int(lambda.size());
  BandMatrix<S> out(w, 1, 1, w - 1);
  auto lam = [&](int k) { return lambda[k]; };
  for (int k = 0; k < w; ++k) {
    S b;
    if (k == 0)
      b = (lam(0) - lam(1)) * alpha.rho(0) * alpha.rho(0);
    else if (k + 1 < w)
      b = (lam(k - 1) - lam(k)) * alpha.rho(k - 1) * alpha.rho(k - 1) +
          (lam(k) - lam(k + 1)) * alpha.rho(k) * alpha.rho(k);
    else
      continue;
    out.set(k, k, k % 2 == 0 ? b : -b);
    if (k + 2 < w) {
      const S a = (lam(k) - lam(k + 1)) * alpha.rho(k) * alpha.alpha(k);
      const S upper = k % 2 == 0 ? -a : T::conj(a);
      out.set(k, k + 1, upper);
      out.set(k + 1, k, T::conj(upper));
    }
  }
  return out;
}

// For the zero-coefficient sequence the basis polynomials are monomials, so
// a differential operator maps to its matrix in that basis directly. This is
// the forward direction of the reconstruction round trip.
template <class S>
BandMatrix<S> operator_matrix_zero_alpha(const cmvlab::DiffOperator<S>& d,
                                         int window) {
  using T = ScalarTraits<S>;
  auto degree_of = [](int n) { return n % 2 == 0 ? n / 2 : -(n + 1) / 2; };
  auto index_of = [window](int deg) {
    return deg >= 0 ? (deg == 0 ? 0 : 2 * deg) : -2 * deg - 1;
  };
  BandMatrix<S> out = BandMatrix<S>::zero(window);
  for (int n = 0; n < window; ++n) {
    LaurentPoly<S> image = d.apply(
        LaurentPoly<S>::monomial(degree_of(n), T::one()));
    for (const auto& [deg, c] : image.coeffs()) {
      const int row = index_of(deg);
      if (row < window) out.set(row, n, out.at(row, n) + c);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Difference-equation tables for diagonal unknowns, orders 2 and 3.
//
// Each family lives on one upper diagonal of the order-n conjugated ad
// image. eval(alpha, lambda, k) returns the equation value; position(k) is
// the entry index on that diagonal (discovered once against the exact
// implementation and frozen). first_k..unbounded describe the k range.
// ---------------------------------------------------------------------------

struct TableFamily {
  std::string name;
  int offset;   // upper diagonal index (0 = main)
  int first_k;
  bool unbounded;            // k ranges to the window bound when true
  int position_shift;        // entry index t = k + position_shift
  std::function<ExactComplex(const VerblunskySeq<ExactComplex>&,
                             const std::vector<ExactComplex>&, int)>
      eval;
};

inline std::vector<TableFamily> table_families(int n) {
  using V = VerblunskySeq<ExactComplex>;
  using L = std::vector<ExactComplex>;
  auto conj = [](const ExactComplex& s) {
    return ScalarTraits<ExactComplex>::conj(s);
  };
  if (n == 2) {
    return {
        {"neighbor", 3, 1, true, -1,
         [](const V& a, const L& l, int k) {
           return (l[k + 1] - l[k]) * a.alpha(k);
         }},
        {"gap-start", 2, 0, false, 0,
         [](const V& a, const L& l, int) { return (l[1] - l[0]) * a.alpha(0); }},
        {"skew-start", 1, 0, false, 0,
         [](const V& a, const L& l, int) { return (l[2] - l[0]) * a.alpha(0); }},
        {"skew", 1, 1, true, 0,
         [](const V& a, const L& l, int k) {
           return (l[k + 2] - l[k - 1]) * a.alpha(k);
         }},
        {"recurrence-start-0", 0, 0, false, 0,
         [](const V&, const L& l, int) { return l[2] - sc<ExactComplex>(2) * l[0] + l[1]; }},
        {"recurrence-start-1", 0, 0, false, 1,
         [](const V&, const L& l, int) { return l[3] - sc<ExactComplex>(2) * l[1] + l[0]; }},
        {"recurrence", 0, 0, true, 2,
         [](const V&, const L& l, int k) {
           return l[k + 4] - sc<ExactComplex>(2) * l[k + 2] + l[k];
         }},
    };
  }
  return {
      {"neighbor", 5, 2, true, -2,
       [](const V& a, const L& l, int k) {
         return (l[k + 1] - l[k]) * a.alpha(k);
       }},
      {"neighbor-start", 4, 0, false, 0,
       [](const V& a, const L& l, int) { return (l[2] - l[1]) * a.alpha(1); }},
      {"coupled-start", 3, 0, false, 0,
       [conj](const V& a, const L& l, int) {
         return (l[3] - l[0]) * a.alpha(1) -
                (l[1] - l[0]) * a.alpha(0) *
                    (conj(a.alpha(0)) * a.alpha(1) - a.alpha(0));
       }},
      {"skew", 3, 2, true, -1,
       [](const V& a, const L& l, int k) {
         return (l[k + 2] - l[k - 1]) * a.alpha(k);
       }},
      {"gap2-start", 2, 0, false, 0,
       [](const V& a, const L& l, int) { return (l[2] - l[0]) * a.alpha(0); }},
      {"gap1-start", 2, 0, false, 1,
       [](const V& a, const L& l, int) { return (l[1] - l[0]) * a.alpha(0); }},
      {"wide-start-0", 1, 0, false, 0,
       [](const V& a, const L& l, int) { return (l[3] - l[0]) * a.alpha(0); }},
      {"wide-start-1", 1, 0, false, 1,
       [](const V& a, const L& l, int) { return (l[4] - l[0]) * a.alpha(1); }},
      {"wide", 1, 2, true, 0,
       [](const V& a, const L& l, int k) {
         return (l[k + 3] - l[k - 2]) * a.alpha(k);
       }},
      {"recurrence-start-0", 0, 0, false, 0,
       [](const V&, const L& l, int) {
         const auto three = sc<ExactComplex>(3);
         return l[3] - three * l[1] + three * l[0] - l[2];
       }},
      {"recurrence-start-1", 0, 0, false, 1,
       [](const V&, const L& l, int) {
         const auto three = sc<ExactComplex>(3);
         return l[4] - three * l[2] + three * l[0] - l[1];
       }},
      {"recurrence-start-2", 0, 0, false, 2,
       [](const V&, const L& l, int) {
         const auto three = sc<ExactComplex>(3);
         return l[5] - three * l[3] + three * l[1] - l[0];
       }},
      {"recurrence", 0, 0, true, 3,
       [](const V&, const L& l, int k) {
         const auto three = sc<ExactComplex>(3);
         return l[k + 6] - three * l[k + 4] + three * l[k + 2] - l[k];
       }},
  };
}

struct TableCheckResult {
  bool checked_any = false;
  bool ok = true;
  std::string detail;
};

// Per-diagonal equivalence: going from the top diagonal down, as long as
// every family on higher diagonals is satisfied, the set of nonzero trusted
// entries on diagonal d must be exactly the mapped positions of the violated
// diagonal-d equations.
inline TableCheckResult check_table_equivalence(
    const VerblunskySeq<ExactComplex>& alpha,
    const std::vector<ExactComplex>& lambda, int n, int window) {
  using S = ExactComplex;
  using T = ScalarTraits<S>;
  CmvPair<S> pair(alpha, window);
  BandMatrix<S> had =
      cmvlab::hermitian_ad(pair, BandMatrix<S>::diagonal(lambda), n);

  // Equation index reach: the deepest lambda index any family touches is
  // k + 2n; keep k small enough that lambda is defined.
  const int m = int(lambda.size());
  const int k_limit = m - 2 * n - 1;

  TableCheckResult result;
  bool higher_ok = true;
  for (int d = 2 * n - 1; d >= 0; --d) {
    if (!higher_ok) break;
    const auto entries = had.diagonal_entries(d);

    // Positions where we both evaluated the equations and trust the entry.
    int t_limit = 0;
    for (const auto& fam : table_families(n)) {
      if (fam.offset != d) continue;
      const int k_hi = fam.unbounded ? k_limit : fam.first_k;
      t_limit = std::max(t_limit, k_hi + fam.position_shift);
    }
    t_limit = std::min<int>(t_limit, int(entries.size()) - 1);

    std::set<int> expect;
    bool diag_ok = true;
    for (const auto& fam : table_families(n)) {
      if (fam.offset != d) continue;
      const int k_hi = fam.unbounded ? k_limit : fam.first_k;
      for (int k = fam.first_k; k <= k_hi; ++k)
        if (!T::is_zero(fam.eval(alpha, lambda, k))) {
          diag_ok = false;
          if (k + fam.position_shift <= t_limit)
            expect.insert(k + fam.position_shift);
        }
    }
    std::set<int> got;
    for (int t = 0; t <= t_limit; ++t)
      if (!T::is_zero(entries[t])) got.insert(t);

    result.checked_any = true;
    if (got != expect) {
      result.ok = false;
      result.detail = "diagonal " + std::to_string(d) + ": expected {";
      for (int t : expect) result.detail += std::to_string(t) + " ";
      result.detail += "} got {";
      for (int t : got) result.detail += std::to_string(t) + " ";
      result.detail += "}";
      return result;
    }
    higher_ok = diag_ok;
  }
  return result;
}

}  // namespace testsupport
