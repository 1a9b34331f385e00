#pragma once

#include <random>
#include <vector>

#include "cmvlab/band.hpp"
#include "cmvlab/verblunsky.hpp"

namespace cmvlab {

using Rng = std::mt19937_64;

namespace detail {

// (a, b, c) with a^2 + b^2 = c^2; used for both magnitude and phase so that
// alpha and rho stay rational.
inline constexpr int kTriples[][3] = {
    {3, 4, 5},  {4, 3, 5},   {5, 12, 13}, {12, 5, 13},  {8, 15, 17},
    {15, 8, 17}, {7, 24, 25}, {20, 21, 29}, {9, 40, 41}, {28, 45, 53},
};
inline constexpr int kTripleCount = int(sizeof(kTriples) / sizeof(kTriples[0]));

}  // namespace detail

// A random coefficient with rational magnitude a/c and rational unit phase,
// so that rho = b/c is rational as well.
inline ExactComplex random_pythagorean_alpha(Rng& rng) {
  std::uniform_int_distribution<int> pick(0, detail::kTripleCount - 1);
  std::uniform_int_distribution<int> mode(0, 3);
  const auto& mag = detail::kTriples[pick(rng)];
  Rational r(mag[0], mag[2]);
  if (mode(rng) == 0) r = -r;
  switch (mode(rng)) {
    case 0:
      return ExactComplex(r);
    case 1:
      return ExactComplex(Rational(0), r);
    default: {
      const auto& ph = detail::kTriples[pick(rng)];
      return ExactComplex(r * Rational(ph[0], ph[2]), r * Rational(ph[1], ph[2]));
    }
  }
}

// Finite coefficient list with at least one nonzero entry.
inline std::vector<ExactComplex> random_pythagorean_list(Rng& rng, int length) {
  std::uniform_int_distribution<int> zero(0, 3);
  std::vector<ExactComplex> out(length);
  bool any = false;
  for (int k = 0; k < length; ++k) {
    if (zero(rng) == 0 && (any || k + 1 < length)) continue;
    out[k] = random_pythagorean_alpha(rng);
    any = any || !(out[k] == ExactComplex());
  }
  return out;
}

inline FloatComplex random_disk_alpha(Rng& rng) {
  std::uniform_real_distribution<double> radius(0.05, 0.85);
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  const double r = radius(rng), t = angle(rng);
  return {r * std::cos(t), r * std::sin(t)};
}

template <class S>
S random_small_scalar(Rng& rng) {
  using T = ScalarTraits<S>;
  if constexpr (T::exact) {
    std::uniform_int_distribution<int> num(-4, 4);
    std::uniform_int_distribution<int> den(1, 3);
    return S(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)));
  } else {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    return S(u(rng), u(rng));
  }
}

template <class S>
std::vector<S> random_alpha_list(Rng& rng, int length) {
  using T = ScalarTraits<S>;
  std::vector<S> out(length);
  if constexpr (T::exact) {
    auto ex = random_pythagorean_list(rng, length);
    for (int k = 0; k < length; ++k) out[k] = ex[k];
  } else {
    for (int k = 0; k < length; ++k) out[k] = random_disk_alpha(rng);
  }
  return out;
}

template <class S>
BandMatrix<S> random_hermitian_band(Rng& rng, int window, int bandwidth) {
  using T = ScalarTraits<S>;
  BandMatrix<S> out(window, bandwidth, bandwidth, window);
  for (int i = 0; i < window; ++i)
    for (int j = i; j <= std::min(window - 1, i + bandwidth); ++j) {
      S v = random_small_scalar<S>(rng);
      if (i == j) v = T::from_real(T::re(v));
      out.set(i, j, v);
      if (j > i) out.set(j, i, T::conj(v));
    }
  return out;
}

template <class S>
BandMatrix<S> random_real_diagonal(Rng& rng, int window) {
  using T = ScalarTraits<S>;
  std::vector<S> d(window);
  for (int k = 0; k < window; ++k)
    d[k] = T::from_real(T::re(random_small_scalar<S>(rng)));
  return BandMatrix<S>::diagonal(std::move(d));
}

}  // namespace cmvlab
