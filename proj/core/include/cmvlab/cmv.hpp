#pragma once

#include <array>
#include <string>
#include <vector>

#include "cmvlab/band.hpp"
#include "cmvlab/laurent.hpp"
#include "cmvlab/verblunsky.hpp"

namespace cmvlab {

// Symmetric unitary 2x2 block [[conj(a_k), rho_k], [rho_k, -a_k]].
template <class S>
struct ThetaBlock {
  std::array<std::array<S, 2>, 2> m;
};

template <class S>
ThetaBlock<S> theta(const VerblunskySeq<S>& alpha, int k) {
  using T = ScalarTraits<S>;
  const S a = alpha.alpha(k);
  const S r = alpha.rho(k);
  return ThetaBlock<S>{{{{T::conj(a), r}, {r, -a}}}};
}

// The factor pair and its shift decomposition
//   L = A_e + B_e S + S^dag B_e,  M = A_o + B_o S + S^dag B_o,
// with A_e = diag(conj(a_0), -a_0, conj(a_2), -a_2, ...),
//      A_o = diag(1, conj(a_1), -a_1, conj(a_3), -a_3, ...),
//      B_e = diag(rho_0, 0, rho_2, 0, ...), B_o = diag(0, rho_1, 0, rho_3, ...).
template <class S>
struct FactorSet {
  BandMatrix<S> L, M;
  BandMatrix<S> Ae, Be, Ao, Bo;
};

template <class S>
FactorSet<S> build_factors(const VerblunskySeq<S>& alpha, int window) {
  using T = ScalarTraits<S>;
  if (window < 2) throw WindowTooSmall("factor window must be >= 2");

  std::vector<S> ae(window), be(window), ao(window), bo(window);
  for (int k = 0; k < window; ++k) {
    if (k % 2 == 0) {
      ae[k] = T::conj(alpha.alpha(k));
      be[k] = alpha.rho(k);
      ao[k] = k == 0 ? T::one() : -alpha.alpha(k - 1);
      bo[k] = T::zero();
    } else {
      ae[k] = -alpha.alpha(k - 1);
      be[k] = T::zero();
      ao[k] = T::conj(alpha.alpha(k));
      bo[k] = alpha.rho(k);
    }
  }

  FactorSet<S> f;
  f.Ae = BandMatrix<S>::diagonal(ae);
  f.Be = BandMatrix<S>::diagonal(be);
  f.Ao = BandMatrix<S>::diagonal(ao);
  f.Bo = BandMatrix<S>::diagonal(bo);

  auto assemble = [&](const std::vector<S>& a, const std::vector<S>& b) {
    BandMatrix<S> out(window, 1, 1, window);
    for (int k = 0; k < window; ++k) {
      out.set(k, k, a[k]);
      if (k + 1 < window) {
        out.set(k, k + 1, b[k]);
        out.set(k + 1, k, b[k]);
      }
    }
    return out;
  };
  f.L = assemble(ae, be);
  f.M = assemble(ao, bo);
  return f;
}

// C = L M and its transpose counterpart Ct = M L, both five-diagonal and
// unitary inside the horizon.
template <class S>
struct CmvMatrices {
  BandMatrix<S> C, Ct;
};

template <class S>
CmvMatrices<S> build_cmv(const VerblunskySeq<S>& alpha, int window) {
  if (window < 4) throw WindowTooSmall("CMV window must be >= 4");
  FactorSet<S> f = build_factors(alpha, window);
  return {f.L * f.M, f.M * f.L};
}

// Closed-form five-diagonal matrix, written entrywise. Used as an
// independent check against the L*M product.
template <class S>
BandMatrix<S> cmv_closed_form(const VerblunskySeq<S>& alpha, int window) {
  using T = ScalarTraits<S>;
  auto a = [&](int k) { return alpha.alpha(k); };
  auto ac = [&](int k) { return T::conj(alpha.alpha(k)); };
  auto r = [&](int k) { return alpha.rho(k); };

  BandMatrix<S> c(window, 2, 2, window);
  auto put = [&](int i, int j, S v) {
    if (i >= 0 && j >= 0 && i < window && j < window) c.set(i, j, std::move(v));
  };
  put(0, 0, ac(0));
  put(0, 1, r(0) * ac(1));
  put(0, 2, r(0) * r(1));
  put(1, 0, r(0));
  put(1, 1, -a(0) * ac(1));
  put(1, 2, -a(0) * r(1));
  for (int j = 1; 2 * j < window; ++j) {
    const int e = 2 * j, o = 2 * j + 1;
    put(e, e - 1, r(e - 1) * ac(e));
    put(e, e, -a(e - 1) * ac(e));
    put(e, e + 1, r(e) * ac(e + 1));
    put(e, e + 2, r(e) * r(e + 1));
    put(o, e - 1, r(e - 1) * r(e));
    put(o, e, -a(e - 1) * r(e));
    put(o, e + 1, -a(e) * ac(e + 1));
    put(o, e + 2, -a(e) * r(e + 1));
  }
  return c;
}

// Orthonormal Laurent polynomials x_n and chi_n = (x_n)_*.
template <class S>
struct OlpPair {
  std::vector<LaurentPoly<S>> x;
  std::vector<LaurentPoly<S>> chi;
};

// Block recurrence obtained from z x = L chi and chi = M x:
//   chi_{2k+1} = (z x_{2k} - conj(a_{2k}) chi_{2k}) / rho_{2k}
//   x_{2k+1}   = z^{-1} (rho_{2k} chi_{2k} - a_{2k} chi_{2k+1})
//   x_{2k+2}   = (chi_{2k+1} - conj(a_{2k+1}) x_{2k+1}) / rho_{2k+1}
//   chi_{2k+2} = rho_{2k+1} x_{2k+1} - a_{2k+1} x_{2k+2}
// Division by z is an exact degree shift; division by rho stays in the field.
template <class S>
OlpPair<S> compute_olp(const VerblunskySeq<S>& alpha, int count) {
  using T = ScalarTraits<S>;
  using Poly = LaurentPoly<S>;
  if (count < 1) throw WindowTooSmall("need at least one polynomial");

  OlpPair<S> olp;
  olp.x.push_back(Poly::one());
  olp.chi.push_back(Poly::one());
  for (int k = 0; int(olp.x.size()) <= count; ++k) {
    const S a0 = alpha.alpha(2 * k), r0 = alpha.rho(2 * k);
    const S a1 = alpha.alpha(2 * k + 1), r1 = alpha.rho(2 * k + 1);
    const S inv_r0 = T::one() / r0, inv_r1 = T::one() / r1;

    const Poly& x0 = olp.x[2 * k];
    const Poly& c0 = olp.chi[2 * k];
    Poly c1 = inv_r0 * (x0.shifted(1) - T::conj(a0) * c0);
    Poly x1 = (r0 * c0 - a0 * c1).shifted(-1);
    Poly x2 = inv_r1 * (c1 - T::conj(a1) * x1);
    Poly c2 = r1 * x1 - a1 * x2;
    olp.x.push_back(std::move(x1));
    olp.chi.push_back(std::move(c1));
    if (int(olp.x.size()) <= count) {
      olp.x.push_back(std::move(x2));
      olp.chi.push_back(std::move(c2));
    }
  }
  olp.x.resize(count + 1);
  olp.chi.resize(count + 1);
  return olp;
}

// Moment m_k of the orthogonality measure as the (0,0) entry of C^k;
// m_{-k} = conj(m_k). Confined to oracle duty.
template <class S>
S moments(const VerblunskySeq<S>& alpha, int k, int window) {
  using T = ScalarTraits<S>;
  if (k == 0) return T::one();
  const bool neg = k < 0;
  const int kk = neg ? -k : k;
  CmvMatrices<S> cm = build_cmv(alpha, window);
  BandMatrix<S> p = cm.C;
  for (int j = 1; j < kk; ++j) p = p * cm.C;
  const S m = p.at(0, 0);
  return neg ? T::conj(m) : m;
}

namespace detail {

// Degree of the n-th monomial in the orthonormalization order
// 1, z^{-1}, z, z^{-2}, z^2, ...
inline int olp_monomial_degree(int n) {
  return n % 2 == 0 ? n / 2 : -(n + 1) / 2;
}

}  // namespace detail

// Gram-Schmidt on (1, z^{-1}, z, z^{-2}, z^2, ...) against the moment Gram
// matrix, normalized so the coefficient of the new monomial is a positive
// real. Independent of the block recurrence; agreement with compute_olp is
// the orthogonality oracle.
//
// The custom moment provider exists so tests can feed inconsistent moments.
template <class S, class MomentFn>
OlpPair<S> gram_schmidt_oracle_with(MomentFn&& moment, int count) {
  using T = ScalarTraits<S>;
  using Poly = LaurentPoly<S>;
  using Real = typename T::Real;

  auto inner = [&](const Poly& f, const Poly& g) {
    S acc = T::zero();
    for (const auto& [df, cf] : f.coeffs())
      for (const auto& [dg, cg] : g.coeffs())
        acc += cf * T::conj(cg) * moment(df - dg);
    return acc;
  };

  OlpPair<S> olp;
  for (int n = 0; n <= count; ++n) {
    Poly v = Poly::monomial(detail::olp_monomial_degree(n), T::one());
    for (int j = 0; j < n; ++j) v -= inner(v, olp.x[j]) * olp.x[j];
    const S nrm_sq = inner(v, v);
    if (!T::is_real(nrm_sq) || !(T::re(nrm_sq) > Real(0)))
      throw GramNotPositive("moment matrix not positive definite at index " +
                            std::to_string(n));
    S inv_norm;
    if constexpr (T::exact) {
      auto root = exact_sqrt(T::re(nrm_sq));
      if (!root)
        throw GramNotPositive("norm^2 is not a rational square at index " +
                              std::to_string(n));
      inv_norm = T::from_real(Real(1) / *root);
    } else {
      inv_norm = T::from_real(1.0 / std::sqrt(T::re(nrm_sq)));
    }
    Poly xn = inv_norm * v;
    olp.chi.push_back(xn.substar());
    olp.x.push_back(std::move(xn));
  }
  return olp;
}

template <class S>
OlpPair<S> gram_schmidt_oracle(const VerblunskySeq<S>& alpha, int count,
                               int window) {
  std::vector<S> cache(2 * count + 3);
  for (int k = 0; k <= 2 * count + 2; ++k) cache[k] = moments(alpha, k, window);
  auto moment = [&cache](int k) {
    using T = ScalarTraits<S>;
    return k >= 0 ? cache[k] : T::conj(cache[-k]);
  };
  return gram_schmidt_oracle_with<S>(moment, count);
}

}  // namespace cmvlab
