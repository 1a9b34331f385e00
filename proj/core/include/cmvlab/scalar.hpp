#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <sstream>
#include <string>

#include "cmvlab/rational.hpp"

namespace cmvlab {

// Default zero threshold of the float backend: |s| <= tol * scale.
// The exact backend ignores tolerances everywhere.
inline constexpr double kDefaultZeroTol = 1e-10;
inline constexpr double kDefaultRankTol = 1e-8;

// Complex number over the rationals. Arithmetic is exact.
//
// mpq_class construction from a numerator/denominator pair does not reduce
// the fraction, so the value constructors canonicalize; the arithmetic
// operators skip that step since GMP keeps canonical inputs canonical.
struct ExactComplex {
  Rational re{0};
  Rational im{0};

  ExactComplex() = default;
  ExactComplex(Rational r) : re(std::move(r)) { re.canonicalize(); }
  ExactComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {
    re.canonicalize();
    im.canonicalize();
  }
  ExactComplex(long r) : re(r) {}

  static ExactComplex unchecked(Rational r, Rational i) {
    ExactComplex s;
    s.re = std::move(r);
    s.im = std::move(i);
    return s;
  }

  friend ExactComplex operator+(const ExactComplex& a, const ExactComplex& b) {
    return unchecked(a.re + b.re, a.im + b.im);
  }
  friend ExactComplex operator-(const ExactComplex& a, const ExactComplex& b) {
    return unchecked(a.re - b.re, a.im - b.im);
  }
  friend ExactComplex operator-(const ExactComplex& a) {
    return unchecked(-a.re, -a.im);
  }
  friend ExactComplex operator*(const ExactComplex& a, const ExactComplex& b) {
    return unchecked(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
  }
  friend ExactComplex operator/(const ExactComplex& a, const ExactComplex& b) {
    Rational n = b.re * b.re + b.im * b.im;
    if (n == 0) throw ZeroArgument("division by zero");
    return unchecked((a.re * b.re + a.im * b.im) / n,
                     (a.im * b.re - a.re * b.im) / n);
  }
  ExactComplex& operator+=(const ExactComplex& b) { re += b.re; im += b.im; return *this; }
  ExactComplex& operator-=(const ExactComplex& b) { re -= b.re; im -= b.im; return *this; }
  ExactComplex& operator*=(const ExactComplex& b) { *this = *this * b; return *this; }

  friend bool operator==(const ExactComplex& a, const ExactComplex& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const ExactComplex& a, const ExactComplex& b) { return !(a == b); }
};

using FloatComplex = std::complex<double>;

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<ExactComplex> {
  using Real = Rational;
  static constexpr bool exact = true;

  static ExactComplex zero() { return {}; }
  static ExactComplex one() { return {Rational(1)}; }
  static ExactComplex imaginary_unit() { return {Rational(0), Rational(1)}; }
  static ExactComplex from_real(Real r) { return {std::move(r)}; }
  static ExactComplex from_parts(Real r, Real i) { return {std::move(r), std::move(i)}; }
  static ExactComplex from_int(long n) { return {Rational(n)}; }
  static ExactComplex conj(const ExactComplex& s) {
    return ExactComplex::unchecked(s.re, -s.im);
  }
  static Real re(const ExactComplex& s) { return s.re; }
  static Real im(const ExactComplex& s) { return s.im; }
  static Real abs_sq(const ExactComplex& s) { return s.re * s.re + s.im * s.im; }
  static double abs_approx(const ExactComplex& s) {
    return std::sqrt(abs_sq(s).get_d());
  }
  static bool is_zero(const ExactComplex& s, double /*tol*/ = kDefaultZeroTol,
                      double /*scale*/ = 1.0) {
    return s.re == 0 && s.im == 0;
  }
  static bool is_real(const ExactComplex& s, double /*tol*/ = kDefaultZeroTol,
                      double /*scale*/ = 1.0) {
    return s.im == 0;
  }
  static bool eq(const ExactComplex& a, const ExactComplex& b,
                 double /*tol*/ = kDefaultZeroTol, double /*scale*/ = 1.0) {
    return a == b;
  }
  static std::string to_string(const ExactComplex& s) {
    return s.re.get_str() + (s.im >= 0 ? "+" : "") + s.im.get_str() + "i";
  }
  static std::string real_to_string(const Real& r) { return r.get_str(); }
  static Real real_from_string(const std::string& t) { return parse_rational(t); }
  static double real_to_double(const Real& r) { return r.get_d(); }
  static double abs_real(const Real& r) { return std::abs(r.get_d()); }
  static bool real_is_zero(const Real& r, double /*tol*/ = kDefaultZeroTol,
                           double /*scale*/ = 1.0) {
    return r == 0;
  }
};

template <>
struct ScalarTraits<FloatComplex> {
  using Real = double;
  static constexpr bool exact = false;

  static FloatComplex zero() { return {0.0, 0.0}; }
  static FloatComplex one() { return {1.0, 0.0}; }
  static FloatComplex imaginary_unit() { return {0.0, 1.0}; }
  static FloatComplex from_real(Real r) { return {r, 0.0}; }
  static FloatComplex from_parts(Real r, Real i) { return {r, i}; }
  static FloatComplex from_int(long n) { return {double(n), 0.0}; }
  static FloatComplex conj(const FloatComplex& s) { return std::conj(s); }
  static Real re(const FloatComplex& s) { return s.real(); }
  static Real im(const FloatComplex& s) { return s.imag(); }
  static Real abs_sq(const FloatComplex& s) { return std::norm(s); }
  static double abs_approx(const FloatComplex& s) { return std::abs(s); }
  static bool is_zero(const FloatComplex& s, double tol = kDefaultZeroTol,
                      double scale = 1.0) {
    return std::abs(s) <= tol * scale;
  }
  static bool is_real(const FloatComplex& s, double tol = kDefaultZeroTol,
                      double scale = 1.0) {
    return std::abs(s.imag()) <= tol * scale;
  }
  static bool eq(const FloatComplex& a, const FloatComplex& b,
                 double tol = kDefaultZeroTol, double scale = 1.0) {
    return std::abs(a - b) <= tol * scale;
  }
  static std::string to_string(const FloatComplex& s) {
    std::ostringstream os;
    os.precision(17);
    os << s.real() << (s.imag() < 0 ? "" : "+") << s.imag() << "i";
    return os.str();
  }
  static std::string real_to_string(const Real& r) {
    std::ostringstream os;
    os.precision(17);
    os << r;
    return os.str();
  }
  static Real real_from_string(const std::string& t) { return std::stod(t); }
  static double real_to_double(const Real& r) { return r; }
  static double abs_real(const Real& r) { return std::abs(r); }
  static bool real_is_zero(const Real& r, double tol = kDefaultZeroTol,
                           double scale = 1.0) {
    return std::abs(r) <= tol * scale;
  }
};

template <class S>
S conj(const S& s) {
  return ScalarTraits<S>::conj(s);
}

// |s|^2 as the backend's real type; real and nonnegative by construction.
template <class S>
typename ScalarTraits<S>::Real abs_sq(const S& s) {
  return ScalarTraits<S>::abs_sq(s);
}

}  // namespace cmvlab
