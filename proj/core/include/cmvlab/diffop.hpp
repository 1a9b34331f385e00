#pragma once

#include <vector>

#include "cmvlab/laurent.hpp"

namespace cmvlab {

// Linear differential operator sum_k D_k(z) d^k/dz^k with Laurent polynomial
// coefficients, stored in normal form (all coefficients left of the
// derivative powers). Order 0 is multiplication by D_0.
template <class S>
class DiffOperator {
 public:
  using Poly = LaurentPoly<S>;
  using Traits = ScalarTraits<S>;

  DiffOperator() = default;
  explicit DiffOperator(std::vector<Poly> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  static DiffOperator multiplication(Poly f) {
    return DiffOperator(std::vector<Poly>{std::move(f)});
  }

  // c(z) d^k/dz^k
  static DiffOperator term(int k, Poly c) {
    std::vector<Poly> v(k + 1);
    v[k] = std::move(c);
    return DiffOperator(std::move(v));
  }

  static DiffOperator euler() {  // z d/dz
    return term(1, Poly::monomial(1, Traits::one()));
  }

  const std::vector<Poly>& coeffs() const { return coeffs_; }

  Poly coeff(int k) const {
    return k < int(coeffs_.size()) ? coeffs_[k] : Poly::zero();
  }

  // Index of the last nonzero coefficient; -1 for the zero operator.
  int order() const { return int(coeffs_.size()) - 1; }

  bool is_zero() const { return coeffs_.empty(); }

  Poly apply(const Poly& f) const {
    Poly out;
    Poly fk = f;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      if (!coeffs_[k].is_zero()) out += coeffs_[k] * fk;
      fk = fk.derivative();
    }
    return out;
  }

  friend DiffOperator operator+(const DiffOperator& a, const DiffOperator& b) {
    std::vector<Poly> out(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = a.coeff(k) + b.coeff(k);
    return DiffOperator(std::move(out));
  }

  friend DiffOperator operator-(const DiffOperator& a, const DiffOperator& b) {
    std::vector<Poly> out(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = a.coeff(k) - b.coeff(k);
    return DiffOperator(std::move(out));
  }

  // Composition (a after b): a(z,d) applied after b(z,d), renormalized so that
  // all polynomial coefficients stand left of the derivatives. Uses
  // d^m (g h) = sum_j C(m,j) g^(j) h^(m-j).
  friend DiffOperator compose(const DiffOperator& a, const DiffOperator& b) {
    std::vector<Poly> out;
    auto add_term = [&out](int k, const Poly& c) {
      if (c.is_zero()) return;
      if (int(out.size()) <= k) out.resize(k + 1);
      out[k] += c;
    };
    for (int m = 0; m <= a.order(); ++m) {
      if (a.coeffs_[m].is_zero()) continue;
      for (int n = 0; n <= b.order(); ++n) {
        if (b.coeffs_[n].is_zero()) continue;
        Poly gj = b.coeffs_[n];  // j-th derivative of b's coefficient
        long binom = 1;
        for (int j = 0; j <= m; ++j) {
          add_term(m - j + n,
                   Traits::from_int(binom) * (a.coeffs_[m] * gj));
          gj = gj.derivative();
          binom = binom * (m - j) / (j + 1);
        }
      }
    }
    return DiffOperator(std::move(out));
  }

  // The unique operator D_* with D_* f = (D f_*)_* for all f. Built from
  // (d/dz)_* = -z^2 d/dz and (f.)_* = (f_*)., composed left to right.
  DiffOperator substar() const {
    const DiffOperator dstar =
        term(1, Poly::monomial(2, -Traits::one()));  // -z^2 d/dz
    DiffOperator out;
    DiffOperator dstar_pow = multiplication(Poly::one());
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      if (!coeffs_[k].is_zero())
        out = out + compose(multiplication(coeffs_[k].substar()), dstar_pow);
      dstar_pow = compose(dstar, dstar_pow);
    }
    return out;
  }

  bool eq(const DiffOperator& b, double tol = kDefaultZeroTol) const {
    const int r = std::max(order(), b.order());
    for (int k = 0; k <= r; ++k)
      if (!coeff(k).eq(b.coeff(k), tol)) return false;
    return true;
  }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
  }

  std::vector<Poly> coeffs_;
};

template <class S>
LaurentPoly<S> op_apply(const DiffOperator<S>& D, const LaurentPoly<S>& f) {
  return D.apply(f);
}

template <class S>
DiffOperator<S> op_substar(const DiffOperator<S>& D) {
  return D.substar();
}

}  // namespace cmvlab
