#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

#include "cmvlab/errors.hpp"

namespace cmvlab {

using Rational = mpq_class;

// Exact square root of a nonnegative rational, if one exists.
// p/q in lowest terms has a rational root iff p and q are perfect squares.
inline std::optional<Rational> exact_sqrt(const Rational& x) {
  if (x < 0) return std::nullopt;
  Rational c = x;
  c.canonicalize();
  const mpz_class& num = c.get_num();
  const mpz_class& den = c.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) ||
      !mpz_perfect_square_p(den.get_mpz_t()))
    return std::nullopt;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  return Rational(rn, rd);
}

inline std::string rational_to_string(const Rational& x) {
  return x.get_str();
}

// Accepts "p", "-p", "p/q".
inline Rational parse_rational(const std::string& s) {
  mpq_class v;
  if (v.set_str(s, 10) != 0)
    throw ConfigInvalid("not a rational: '" + s + "'");
  if (v.get_den() == 0)
    throw ConfigInvalid("zero denominator: '" + s + "'");
  v.canonicalize();
  return v;
}

}  // namespace cmvlab
