#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cmvlab/cmv.hpp"

namespace cmvlab {

// One coherent window of CMV data: the factors L, M, the products C = LM and
// Ct = ML, and cached powers of C. Copies are cheap; the transposed() view
// swaps the roles of C and Ct (equivalently L and M) without rebuilding.
template <class S>
class CmvPair {
 public:
  CmvPair(VerblunskySeq<S> alpha, int window, int max_cached_power = 6)
      : data_(std::make_shared<Data>()), swapped_(false) {
    Data& d = *std::const_pointer_cast<Data>(data_);
    d.alpha = std::move(alpha);
    d.window = window;
    d.factors = build_factors(d.alpha, window);
    d.cpow.push_back(BandMatrix<S>::identity(window));
    d.cpow.push_back(d.factors.L * d.factors.M);
    for (int j = 2; j <= max_cached_power; ++j) {
      if (d.cpow.back().horizon() <= 2) break;
      d.cpow.push_back(d.cpow.back() * d.cpow[1]);
    }
  }

  const VerblunskySeq<S>& alpha() const { return data_->alpha; }
  int window() const { return data_->window; }
  bool swapped() const { return swapped_; }

  const BandMatrix<S>& L() const {
    return swapped_ ? data_->factors.M : data_->factors.L;
  }
  const BandMatrix<S>& M() const {
    return swapped_ ? data_->factors.L : data_->factors.M;
  }
  const FactorSet<S>& factors() const { return data_->factors; }

  BandMatrix<S> C() const { return cpow(1); }
  BandMatrix<S> Ct() const { return transposed().cpow(1); }

  // C^j for any integer j; negative powers are dagger powers.
  BandMatrix<S> cpow(int j) const {
    BandMatrix<S> base = base_pow(j < 0 ? -j : j);
    if (swapped_) base = base.transpose();
    return j < 0 ? base.dagger() : base;
  }

  // Parity selector: C for even k, Ct for odd k.
  CmvPair select(int k) const { return k % 2 == 0 ? *this : transposed(); }

  CmvPair transposed() const {
    CmvPair out = *this;
    out.swapped_ = !swapped_;
    return out;
  }

 private:
  struct Data {
    VerblunskySeq<S> alpha = VerblunskySeq<S>::zero();
    int window = 0;
    FactorSet<S> factors;
    std::vector<BandMatrix<S>> cpow;  // C^0, C^1, ...
  };

  BandMatrix<S> base_pow(int j) const {
    const auto& cache = data_->cpow;
    if (j < int(cache.size())) return cache[j];
    BandMatrix<S> out = cache.back();
    for (int k = int(cache.size()); k <= j; ++k) out = out * cache[1];
    return out;
  }

  std::shared_ptr<const Data> data_;
  bool swapped_;
};

template <class S>
struct AdPaths {
  BandMatrix<S> primary;   // the better-trusted of the two routes
  BandMatrix<S> secondary;
};

namespace detail {

template <class S>
BandMatrix<S> pick_and_check(BandMatrix<S> a, BandMatrix<S> b, const char* what) {
  if (!a.eq(b))
    throw Error(std::string("internal cross-check failed: ") + what);
  return a.horizon() >= b.horizon() ? std::move(a) : std::move(b);
}

inline long binomial(int n, int k) {
  long b = 1;
  for (int j = 0; j < k; ++j) b = b * (n - j) / (j + 1);
  return b;
}

}  // namespace detail

// (ad C)^n Omega computed both as the iterated commutator and as the
// binomial sum  sum_k (-1)^k C(n,k) C^{n-k} Omega C^k; the two routes must
// agree inside the common horizon.
template <class S>
BandMatrix<S> ad_power(const CmvPair<S>& pair, const BandMatrix<S>& omega, int n) {
  using T = ScalarTraits<S>;
  if (n < 0) throw Error("ad_power expects n >= 0");
  if (n == 0) return omega;

  BandMatrix<S> c = pair.cpow(1);
  BandMatrix<S> iterated = omega;
  for (int j = 0; j < n; ++j) iterated = c * iterated - iterated * c;

  BandMatrix<S> binom = pair.cpow(n) * omega;
  for (int k = 1; k <= n; ++k) {
    const long coef = detail::binomial(n, k) * (k % 2 == 0 ? 1 : -1);
    binom = binom + T::from_int(coef) * (pair.cpow(n - k) * omega * pair.cpow(k));
  }
  return detail::pick_and_check(std::move(iterated), std::move(binom),
                                "ad_power iterated vs binomial");
}

// Both routes for the conjugated Hermitian variant:
//   direct     (C^dag)^m ((ad C)^n Omega) (C^dag)^m              n = 2m
//              L^dag (C^dag)^m ((ad C)^n Omega) (C^dag)^m M^dag  n = 2m+1
//   recursion  X <- M X M^dag - L^dag X L   (even step)
//              X <- L X L^dag - M^dag X M   (odd step)
template <class S>
AdPaths<S> hermitian_ad_paths(const CmvPair<S>& pair, const BandMatrix<S>& omega,
                              int n) {
  if (n < 0) throw Error("hermitian_ad expects n >= 0");
  if (n == 0) return {omega, omega};

  const BandMatrix<S> ldag = pair.L().dagger();
  const BandMatrix<S> mdag = pair.M().dagger();

  BandMatrix<S> rec = omega;
  for (int j = 0; j < n; ++j) {
    if (j % 2 == 0)
      rec = pair.M() * rec * mdag - ldag * rec * pair.L();
    else
      rec = pair.L() * rec * ldag - mdag * rec * pair.M();
  }

  const int m = n / 2;
  BandMatrix<S> mid = pair.cpow(-m) * ad_power(pair, omega, n) * pair.cpow(-m);
  BandMatrix<S> direct = (n % 2 == 0) ? std::move(mid) : ldag * mid * mdag;

  if (!rec.eq(direct))
    throw Error("internal cross-check failed: hermitian ad recursion vs definition");
  return rec.horizon() >= direct.horizon()
             ? AdPaths<S>{std::move(rec), std::move(direct)}
             : AdPaths<S>{std::move(direct), std::move(rec)};
}

template <class S>
BandMatrix<S> hermitian_ad(const CmvPair<S>& pair, const BandMatrix<S>& omega,
                           int n) {
  return hermitian_ad_paths(pair, omega, n).primary;
}

// Explicit small-order expansions, written term by term. n <= 4.
template <class S>
BandMatrix<S> hermitian_ad_expanded(const CmvPair<S>& pair,
                                    const BandMatrix<S>& omega, int n) {
  using T = ScalarTraits<S>;
  const BandMatrix<S> l = pair.L(), m = pair.M();
  const BandMatrix<S> ld = l.dagger(), md = m.dagger();
  switch (n) {
    case 1:
      return m * omega * md - ld * omega * l;
    case 2:
      return l * m * omega * md * ld - T::from_int(2) * omega +
             md * ld * omega * l * m;
    case 3:
      return m * l * m * omega * md * ld * md - T::from_int(3) * (m * omega * md) +
             T::from_int(3) * (ld * omega * l) - ld * md * ld * omega * l * m * l;
    case 4:
      return l * m * l * m * omega * md * ld * md * ld -
             T::from_int(4) * (l * m * omega * md * ld) + T::from_int(6) * omega -
             T::from_int(4) * (md * ld * omega * l * m) +
             md * ld * md * ld * omega * l * m * l * m;
    default:
      throw Error("explicit expansion available for n = 1..4 only");
  }
}

// Entrywise verification report for the symmetry, conjugation and
// factorization identities of the conjugated ad calculus.
struct IdentityReport {
  std::vector<std::pair<std::string, bool>> checks;

  void add(std::string name, bool ok) { checks.emplace_back(std::move(name), ok); }
  bool all_pass() const {
    for (const auto& [name, ok] : checks)
      if (!ok) return false;
    return true;
  }
};

template <class S>
IdentityReport hermitian_relations_check(const CmvPair<S>& pair,
                                         const BandMatrix<S>& omega, int n,
                                         double tol = kDefaultZeroTol) {
  using T = ScalarTraits<S>;
  IdentityReport report;
  const CmvPair<S> tpair = pair.transposed();

  // (ad C)^n Omega^dag = C^n ((ad C)^n Omega)^dag C^n
  {
    BandMatrix<S> lhs = ad_power(pair, omega.dagger(), n);
    BandMatrix<S> rhs = pair.cpow(n) * ad_power(pair, omega, n).dagger() * pair.cpow(n);
    report.add("adjoint-symmetry", lhs.eq(rhs, tol));
  }

  const AdPaths<S> paths = hermitian_ad_paths(pair, omega, n);
  report.add("definition-vs-recursion", paths.primary.eq(paths.secondary, tol));
  const BandMatrix<S>& had = paths.primary;

  if (n >= 1 && n <= 4)
    report.add("small-n-expansion", had.eq(hermitian_ad_expanded(pair, omega, n), tol));

  report.add("hermitian-conjugation",
             hermitian_ad(pair, omega.dagger(), n).eq(had.dagger(), tol));

  {
    BandMatrix<S> rhs = hermitian_ad(tpair, omega.transpose(), n);
    if (n % 2 != 0) rhs = -rhs;
    report.add("transpose-relation", had.transpose().eq(rhs, tol));
  }

  {
    BandMatrix<S> lhs = hermitian_ad(pair, pair.L() * omega * pair.M(), n);
    BandMatrix<S> inner = hermitian_ad(tpair, omega, n);
    BandMatrix<S> rhs = (n % 2 == 0) ? pair.L() * inner * pair.M()
                                     : pair.M() * inner * pair.L();
    report.add("factor-conjugation", lhs.eq(rhs, tol));
  }

  {
    bool ok = true;
    for (int k = 1; k < n; ++k) {
      BandMatrix<S> staged =
          hermitian_ad(pair.select(k), hermitian_ad(pair, omega, k), n - k);
      ok = ok && had.eq(staged, tol);
    }
    report.add("ad-factorization", ok);
  }

  (void)T::zero();
  return report;
}

// Recover the Laurent symbol of a centralizer element:
// f(z) = sum_k Omega_{0,k} x_k(z), then verify Omega = f(C).
template <class S>
LaurentPoly<S> centralizer_symbol(const CmvPair<S>& pair,
                                  const BandMatrix<S>& omega,
                                  double tol = kDefaultZeroTol) {
  using T = ScalarTraits<S>;
  if (!bm_commutator(pair.cpow(1), omega).is_zero(tol))
    throw NotInCentralizer("operand does not commute with the CMV matrix");

  const int row_reach = omega.upper_bandwidth();
  OlpPair<S> olp = compute_olp(pair.alpha(), std::max(row_reach, 1));
  LaurentPoly<S> f;
  for (int k = 0; k <= row_reach; ++k) f += omega.at(0, k) * olp.x[k];

  BandMatrix<S> fc = BandMatrix<S>::zero(pair.window());
  for (const auto& [d, c] : f.coeffs()) fc = fc + c * pair.cpow(d);
  if (!fc.eq(omega, tol))
    throw ReconstructionMismatch("f(C) does not reproduce the operand");

  const int half = std::max(omega.lower_bandwidth(), omega.upper_bandwidth()) / 2;
  if (!f.is_zero() && (f.min_degree() < -half || f.max_degree() > half))
    throw ReconstructionMismatch("symbol support exceeds the banded centralizer bound");
  return f;
}

// For tridiagonal Omega, (ad C)^{n+1} Omega = 0 collapses to the order-n
// condition  (ad_n C) Omega = a I; returns a.
template <class S>
S ad_integrate(const CmvPair<S>& pair, const BandMatrix<S>& omega, int n,
               double tol = kDefaultZeroTol) {
  if (omega.lower_bandwidth() > 1 || omega.upper_bandwidth() > 1)
    throw Error("ad_integrate expects a (tri)diagonal operand");
  BandMatrix<S> had = hermitian_ad(pair, omega, n);
  const S a = had.at(0, 0);
  BandMatrix<S> residue = had - BandMatrix<S>::scalar(had.window(), a);
  if (!residue.is_zero(tol, std::max(1.0, had.max_abs())))
    throw NotConstantMultiple("conjugated ad image is not proportional to I");
  return a;
}

}  // namespace cmvlab
