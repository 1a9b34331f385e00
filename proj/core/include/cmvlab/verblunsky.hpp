#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "cmvlab/scalar.hpp"

namespace cmvlab {

// Coefficient sequence alpha_n in the open unit disk with rho_n^2 = 1 - |alpha_n|^2.
//
// On the exact backend every alpha_n must be Pythagorean: both alpha_n and
// rho_n representable over the rationals (e.g. alpha = 3/5, rho = 4/5), so no
// square root ever leaves the field. Construction rejects anything else.
template <class S>
class VerblunskySeq {
 public:
  using Traits = ScalarTraits<S>;
  using Real = typename Traits::Real;

  enum class Kind { Zero, Constant, List, Geometric };

  static VerblunskySeq zero() { return VerblunskySeq(Kind::Zero, {}, 0.0, 0.0); }

  static VerblunskySeq constant(S alpha) {
    VerblunskySeq v(Kind::Constant, {std::move(alpha)}, 0.0, 0.0);
    v.validate(v.values_[0]);
    return v;
  }

  static VerblunskySeq list(std::vector<S> alphas) {
    VerblunskySeq v(Kind::List, std::move(alphas), 0.0, 0.0);
    for (const S& a : v.values_) v.validate(a);
    return v;
  }

  // alpha_n = c * r^n, |c| < 1, |r| <= 1. Float backend only: the decay is
  // not Pythagorean for n >= 1.
  static VerblunskySeq geometric(double c, double r) {
    if constexpr (Traits::exact)
      throw ConfigInvalid("geometric Verblunsky rule requires the float backend");
    if (std::abs(c) >= 1.0 || std::abs(r) > 1.0)
      throw ConfigInvalid("geometric rule needs |c| < 1 and |r| <= 1");
    return VerblunskySeq(Kind::Geometric, {}, c, r);
  }

  Kind kind() const { return kind_; }

  S alpha(int n) const {
    switch (kind_) {
      case Kind::Zero:
        return Traits::zero();
      case Kind::Constant:
        return values_[0];
      case Kind::List:
        // Lists extend with zeros: a finitely supported perturbation.
        return n < int(values_.size()) ? values_[n] : Traits::zero();
      case Kind::Geometric:
        if constexpr (!Traits::exact)
          return Traits::from_real(c_ * std::pow(r_, n));
        return Traits::zero();
    }
    return Traits::zero();
  }

  // rho_n as a scalar; real, positive, exact on the exact backend.
  S rho(int n) const { return Traits::from_real(rho_real(n)); }

  Real rho_real(int n) const {
    const S a = alpha(n);
    const Real one_minus = Real(1) - Traits::abs_sq(a);
    if constexpr (Traits::exact) {
      auto root = exact_sqrt(one_minus);
      if (!root) throw ConfigInvalid("alpha_" + std::to_string(n) + " is not Pythagorean");
      return *root;
    } else {
      return std::sqrt(one_minus);
    }
  }

  bool all_zero_up_to(int n) const {
    for (int k = 0; k < n; ++k)
      if (!Traits::is_zero(alpha(k))) return false;
    return true;
  }

 private:
  VerblunskySeq(Kind kind, std::vector<S> values, double c, double r)
      : kind_(kind), values_(std::move(values)), c_(c), r_(r) {}

  void validate(const S& a) const {
    if (!(Traits::abs_sq(a) < Real(1)))
      throw ConfigInvalid("Verblunsky coefficient outside the open unit disk");
    if constexpr (Traits::exact) {
      if (!exact_sqrt(Real(1) - Traits::abs_sq(a)))
        throw ConfigInvalid("exact backend requires Pythagorean alpha (rational rho)");
    }
  }

  Kind kind_;
  std::vector<S> values_;
  double c_ = 0.0;
  double r_ = 0.0;
};

}  // namespace cmvlab
