#pragma once

#include <algorithm>
#include <initializer_list>
#include <map>
#include <string>
#include <utility>

#include "cmvlab/scalar.hpp"

namespace cmvlab {

// Laurent polynomial: finite map degree -> coefficient. Zero coefficients are
// never stored; on the float backend, normalize() additionally drops
// coefficients below tol * max|coeff|.
template <class S>
class LaurentPoly {
 public:
  using Traits = ScalarTraits<S>;
  using CoeffMap = std::map<int, S>;

  LaurentPoly() = default;

  explicit LaurentPoly(CoeffMap coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

  LaurentPoly(std::initializer_list<std::pair<int, S>> init) {
    for (const auto& [d, c] : init) coeffs_[d] = c;
    normalize();
  }

  static LaurentPoly zero() { return {}; }
  static LaurentPoly constant(S c) { return monomial(0, std::move(c)); }
  static LaurentPoly one() { return constant(Traits::one()); }

  static LaurentPoly monomial(int degree, S c) {
    LaurentPoly p;
    p.coeffs_[degree] = std::move(c);
    p.normalize();
    return p;
  }

  const CoeffMap& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }

  // Support bounds; only meaningful when nonzero.
  int min_degree() const { return coeffs_.empty() ? 0 : coeffs_.begin()->first; }
  int max_degree() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }

  S coeff(int degree) const {
    auto it = coeffs_.find(degree);
    return it == coeffs_.end() ? Traits::zero() : it->second;
  }

  void set_coeff(int degree, S c) {
    if (Traits::is_zero(c))
      coeffs_.erase(degree);
    else
      coeffs_[degree] = std::move(c);
  }

  void normalize(double tol = kDefaultZeroTol) {
    if constexpr (Traits::exact) {
      for (auto it = coeffs_.begin(); it != coeffs_.end();)
        it = Traits::is_zero(it->second) ? coeffs_.erase(it) : std::next(it);
    } else {
      double scale = 0.0;
      for (const auto& [d, c] : coeffs_) scale = std::max(scale, Traits::abs_approx(c));
      for (auto it = coeffs_.begin(); it != coeffs_.end();)
        it = (Traits::abs_approx(it->second) <= tol * scale) ? coeffs_.erase(it)
                                                             : std::next(it);
    }
  }

  friend LaurentPoly operator+(const LaurentPoly& f, const LaurentPoly& g) {
    CoeffMap out = f.coeffs_;
    for (const auto& [d, c] : g.coeffs_) {
      auto [it, fresh] = out.try_emplace(d, c);
      if (!fresh) it->second += c;
    }
    return LaurentPoly(std::move(out));
  }

  friend LaurentPoly operator-(const LaurentPoly& f, const LaurentPoly& g) {
    return f + (-g);
  }

  friend LaurentPoly operator-(const LaurentPoly& f) {
    CoeffMap out;
    for (const auto& [d, c] : f.coeffs_) out.emplace(d, -c);
    return LaurentPoly(std::move(out));
  }

  friend LaurentPoly operator*(const S& c, const LaurentPoly& f) {
    CoeffMap out;
    for (const auto& [d, fc] : f.coeffs_) out.emplace(d, c * fc);
    return LaurentPoly(std::move(out));
  }

  // Convolution product; support bounds add.
  friend LaurentPoly operator*(const LaurentPoly& f, const LaurentPoly& g) {
    CoeffMap out;
    for (const auto& [df, cf] : f.coeffs_)
      for (const auto& [dg, cg] : g.coeffs_) {
        auto [it, fresh] = out.try_emplace(df + dg, cf * cg);
        if (!fresh) it->second += cf * cg;
      }
    return LaurentPoly(std::move(out));
  }

  LaurentPoly& operator+=(const LaurentPoly& g) { return *this = *this + g; }
  LaurentPoly& operator-=(const LaurentPoly& g) { return *this = *this - g; }

  // Multiplication by z^k.
  LaurentPoly shifted(int k) const {
    CoeffMap out;
    for (const auto& [d, c] : coeffs_) out.emplace(d + k, c);
    return LaurentPoly(std::move(out));
  }

  // Formal derivative: z^d -> d z^(d-1) for every integer d.
  LaurentPoly derivative() const {
    CoeffMap out;
    for (const auto& [d, c] : coeffs_)
      if (d != 0) out.emplace(d - 1, Traits::from_int(d) * c);
    return LaurentPoly(std::move(out));
  }

  // f_*(z) = conj(f(1/conj z)): degree d coefficient c -> degree -d, conj(c).
  LaurentPoly substar() const {
    CoeffMap out;
    for (const auto& [d, c] : coeffs_) out.emplace(-d, Traits::conj(c));
    return LaurentPoly(std::move(out));
  }

  S eval(const S& z) const {
    if (Traits::is_zero(z) && min_degree() < 0 && !is_zero())
      throw ZeroArgument("Laurent polynomial with negative-degree terms at z = 0");
    // Horner over the shifted ordinary polynomial z^{-dmin} f(z).
    S acc = Traits::zero();
    if (coeffs_.empty()) return acc;
    const int dmin = min_degree();
    const int dmax = max_degree();
    for (int d = dmax; d >= dmin; --d) {
      acc = acc * z;
      auto it = coeffs_.find(d);
      if (it != coeffs_.end()) acc += it->second;
    }
    if (dmin > 0)
      for (int k = 0; k < dmin; ++k) acc = acc * z;
    else
      for (int k = 0; k < -dmin; ++k) acc = acc / z;
    return acc;
  }

  bool eq(const LaurentPoly& g, double tol = kDefaultZeroTol) const {
    LaurentPoly d = *this - g;
    d.normalize(tol);
    if constexpr (Traits::exact) return d.is_zero();
    double scale = 0.0;
    for (const auto& [deg, c] : coeffs_) scale = std::max(scale, Traits::abs_approx(c));
    for (const auto& [deg, c] : g.coeffs_) scale = std::max(scale, Traits::abs_approx(c));
    if (scale == 0.0) scale = 1.0;
    for (const auto& [deg, c] : d.coeffs())
      if (!Traits::is_zero(c, tol, scale)) return false;
    return true;
  }

  friend bool operator==(const LaurentPoly& f, const LaurentPoly& g) {
    return f.coeffs_ == g.coeffs_;
  }

  std::string to_string() const {
    if (coeffs_.empty()) return "0";
    std::string out;
    for (const auto& [d, c] : coeffs_) {
      if (!out.empty()) out += " + ";
      out += "(" + Traits::to_string(c) + ")";
      if (d != 0) out += "*z^" + std::to_string(d);
    }
    return out;
  }

 private:
  CoeffMap coeffs_;
};

template <class S>
LaurentPoly<S> lp_mul(const LaurentPoly<S>& f, const LaurentPoly<S>& g) {
  return f * g;
}

template <class S>
LaurentPoly<S> lp_substar(const LaurentPoly<S>& f) {
  return f.substar();
}

template <class S>
S lp_eval(const LaurentPoly<S>& f, const S& z) {
  return f.eval(z);
}

}  // namespace cmvlab
