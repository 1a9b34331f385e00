#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "cmvlab/scalar.hpp"

namespace cmvlab {

// Finite window of a banded operator on the half-line, stored by diagonals.
//
// The window covers rows/columns 0..N-1. The trust horizon H <= N marks the
// indices inside which stored entries equal those of the represented
// infinite operator: every entry (i, j) with max(i, j) < H is exact.
// Entries outside the declared band are zero for the infinite operator at
// all indices, not just inside the window.
//
// Horizon propagation for products is conservative: a product entry (i, j)
// sums over k <= max(i, j) + min(q_A, p_B), so the result trusts
// min(H_A, H_B, N) - min(q_A, p_B) rows. Operations that would leave no
// trusted rows throw HorizonExhausted.
template <class S>
class BandMatrix {
 public:
  using Traits = ScalarTraits<S>;

  BandMatrix() : n_(0), p_(0), q_(0), h_(0) {}

  BandMatrix(int window, int lower, int upper, int horizon)
      : n_(window), p_(lower), q_(upper), h_(std::min(horizon, window)) {
    if (n_ <= 0) throw HorizonExhausted("empty window");
    if (h_ <= 0) throw HorizonExhausted("no trusted rows at window " + std::to_string(n_));
    diags_.resize(p_ + q_ + 1);
    for (int d = -p_; d <= q_; ++d)
      diags_[d + p_].assign(std::max(0, n_ - std::abs(d)), Traits::zero());
  }

  static BandMatrix zero(int window, int horizon = -1) {
    return BandMatrix(window, 0, 0, horizon < 0 ? window : horizon);
  }

  static BandMatrix identity(int window) {
    BandMatrix a(window, 0, 0, window);
    for (int t = 0; t < window; ++t) a.diags_[0][t] = Traits::one();
    return a;
  }

  static BandMatrix scalar(int window, const S& c) {
    BandMatrix a(window, 0, 0, window);
    for (int t = 0; t < window; ++t) a.diags_[0][t] = c;
    return a;
  }

  // The shift S with ones on the first upper diagonal.
  static BandMatrix shift(int window) {
    BandMatrix a(window, 0, 1, window);
    for (int t = 0; t + 1 < window; ++t) a.diags_[1][t] = Traits::one();
    return a;
  }

  static BandMatrix diagonal(std::vector<S> values) {
    const int n = int(values.size());
    BandMatrix a(n, 0, 0, n);
    a.diags_[0] = std::move(values);
    return a;
  }

  int window() const { return n_; }
  int lower_bandwidth() const { return p_; }
  int upper_bandwidth() const { return q_; }
  int horizon() const { return h_; }

  S at(int i, int j) const {
    const int d = j - i;
    if (d < -p_ || d > q_) return Traits::zero();
    const int t = std::min(i, j);
    if (i < 0 || j < 0 || i >= n_ || j >= n_) return Traits::zero();
    return diags_[d + p_][t];
  }

  void set(int i, int j, S value) {
    if (i < 0 || j < 0 || i >= n_ || j >= n_)
      throw Error("entry (" + std::to_string(i) + ", " + std::to_string(j) +
                  ") outside window " + std::to_string(n_));
    const int d = j - i;
    if (d < -p_ || d > q_) {
      if (Traits::is_zero(value)) return;
      widen(std::max(p_, -d), std::max(q_, d));
    }
    diags_[j - i + p_][std::min(i, j)] = std::move(value);
  }

  // Entries A_{t, t+d} (d >= 0) or A_{t+|d|, t} (d < 0) for all trusted t.
  std::vector<S> diagonal_entries(int d) const {
    std::vector<S> out;
    for (int t = 0; t < h_ - std::abs(d); ++t) {
      const int i = d >= 0 ? t : t - d;
      const int j = d >= 0 ? t + d : t;
      out.push_back(at(i, j));
    }
    return out;
  }

  double max_abs() const {
    double m = 0.0;
    for_each_trusted([&m](int, int, const S& v) {
      m = std::max(m, Traits::abs_approx(v));
    });
    return m;
  }

  // All trusted entries zero. On the float backend an entry counts as zero
  // when |entry| <= tol * scale; scale < 0 means max(1, max trusted |entry|).
  bool is_zero(double tol = kDefaultZeroTol, double scale = -1.0) const {
    if constexpr (!Traits::exact)
      if (scale < 0.0) scale = std::max(1.0, max_abs());
    bool ok = true;
    for_each_trusted([&](int, int, const S& v) {
      if (!Traits::is_zero(v, tol, scale)) ok = false;
    });
    return ok;
  }

  bool is_hermitian(double tol = kDefaultZeroTol, double scale = -1.0) const {
    if constexpr (!Traits::exact)
      if (scale < 0.0) scale = std::max(1.0, max_abs());
    for (int i = 0; i < h_; ++i)
      for (int j = i; j < h_; ++j)
        if (!Traits::eq(at(i, j), Traits::conj(at(j, i)), tol, scale)) return false;
    return true;
  }

  // Entries beyond |i-j| > width all zero inside the horizon.
  bool is_banded_within(int width, double tol = kDefaultZeroTol,
                        double scale = -1.0) const {
    if constexpr (!Traits::exact)
      if (scale < 0.0) scale = std::max(1.0, max_abs());
    bool ok = true;
    for_each_trusted([&](int i, int j, const S& v) {
      if (std::abs(i - j) > width && !Traits::is_zero(v, tol, scale)) ok = false;
    });
    return ok;
  }

  friend BandMatrix operator+(const BandMatrix& a, const BandMatrix& b) {
    BandMatrix out(std::min(a.n_, b.n_), std::max(a.p_, b.p_), std::max(a.q_, b.q_),
                   std::min(a.h_, b.h_));
    for (int d = -out.p_; d <= out.q_; ++d)
      for (int t = 0; t < int(out.diags_[d + out.p_].size()); ++t) {
        const int i = d >= 0 ? t : t - d;
        const int j = d >= 0 ? t + d : t;
        out.diags_[d + out.p_][t] = a.at(i, j) + b.at(i, j);
      }
    return out;
  }

  friend BandMatrix operator-(const BandMatrix& a, const BandMatrix& b) {
    return a + (-b);
  }

  friend BandMatrix operator-(const BandMatrix& a) {
    BandMatrix out = a;
    for (auto& diag : out.diags_)
      for (auto& v : diag) v = -v;
    return out;
  }

  friend BandMatrix operator*(const S& c, const BandMatrix& a) {
    BandMatrix out = a;
    for (auto& diag : out.diags_)
      for (auto& v : diag) v = c * v;
    return out;
  }

  friend BandMatrix operator*(const BandMatrix& a, const BandMatrix& b) {
    const int n = std::min(a.n_, b.n_);
    const int reach = std::min(a.q_, b.p_);
    const int h = std::min({a.h_, b.h_, n}) - reach;
    if (h <= 0)
      throw HorizonExhausted("product exhausts trust horizon (reach " +
                             std::to_string(reach) + ")");
    BandMatrix out(n, a.p_ + b.p_, a.q_ + b.q_, h);
    for (int d = -out.p_; d <= out.q_; ++d) {
      auto& diag = out.diags_[d + out.p_];
      for (int t = 0; t < int(diag.size()); ++t) {
        const int i = d >= 0 ? t : t - d;
        const int j = d >= 0 ? t + d : t;
        const int klo = std::max({0, i - a.p_, j - b.q_});
        const int khi = std::min({n - 1, i + a.q_, j + b.p_});
        S acc = Traits::zero();
        for (int k = klo; k <= khi; ++k) acc += a.at(i, k) * b.at(k, j);
        diag[t] = std::move(acc);
      }
    }
    return out;
  }

  // Conjugate transpose; bandwidths swap, horizon is preserved.
  BandMatrix dagger() const {
    BandMatrix out(n_, q_, p_, h_);
    for (int d = -p_; d <= q_; ++d)
      for (int t = 0; t < int(diags_[d + p_].size()); ++t)
        out.diags_[-d + out.p_][t] = Traits::conj(diags_[d + p_][t]);
    return out;
  }

  BandMatrix transpose() const {
    BandMatrix out(n_, q_, p_, h_);
    for (int d = -p_; d <= q_; ++d)
      for (int t = 0; t < int(diags_[d + p_].size()); ++t)
        out.diags_[-d + out.p_][t] = diags_[d + p_][t];
    return out;
  }

  BandMatrix conjugate() const { return dagger().transpose(); }

  // Submatrix with the first k rows and columns removed.
  BandMatrix delete_leading(int k) const {
    if (k < 0 || h_ - k <= 0)
      throw HorizonExhausted("deleting " + std::to_string(k) + " rows leaves no trust");
    BandMatrix out(n_ - k, p_, q_, h_ - k);
    for (int d = -p_; d <= q_; ++d)
      for (int t = 0; t < int(out.diags_[d + p_].size()); ++t)
        out.diags_[d + p_][t] = diags_[d + p_][t + k];
    return out;
  }

  // Reinterpret as a larger window, asserting the tail is exactly zero
  // (valid for finitely supported matrices such as solver candidates).
  BandMatrix embed_zero_tail(int window) const {
    if (window < n_) throw Error("embed_zero_tail cannot shrink the window");
    BandMatrix out(window, p_, q_, window);
    for (int d = -p_; d <= q_; ++d)
      for (int t = 0; t < int(diags_[d + p_].size()); ++t)
        out.diags_[d + p_][t] = diags_[d + p_][t];
    return out;
  }

  // A * v for the leading segment v of an infinite vector; returns the rows
  // whose full band is both available and trusted.
  std::vector<S> apply(const std::vector<S>& v) const {
    const int m = int(v.size()) - 1;
    const int rows = std::min(h_ - std::max(q_, 0), m + 1 - std::max(q_, 0));
    std::vector<S> out;
    for (int i = 0; i < rows; ++i) {
      S acc = Traits::zero();
      for (int j = std::max(0, i - p_); j <= std::min(m, i + q_); ++j)
        acc += at(i, j) * v[j];
      out.push_back(std::move(acc));
    }
    return out;
  }

  bool eq(const BandMatrix& b, double tol = kDefaultZeroTol,
          double scale = -1.0) const {
    if constexpr (!Traits::exact)
      if (scale < 0.0) scale = std::max({1.0, max_abs(), b.max_abs()});
    const int h = std::min(h_, b.h_);
    const int band = std::max({p_, q_, b.p_, b.q_});
    for (int i = 0; i < h; ++i)
      for (int j = std::max(0, i - band); j < std::min(h, i + band + 1); ++j)
        if (!Traits::eq(at(i, j), b.at(i, j), tol, scale)) return false;
    return true;
  }

  template <class Fn>
  void for_each_trusted(Fn&& fn) const {
    for (int d = -p_; d <= q_; ++d)
      for (int t = 0; t < std::min<int>(diags_[d + p_].size(), h_ - std::abs(d)); ++t) {
        const int i = d >= 0 ? t : t - d;
        const int j = d >= 0 ? t + d : t;
        fn(i, j, diags_[d + p_][t]);
      }
  }

 private:
  void widen(int p, int q) {
    std::vector<std::vector<S>> diags(p + q + 1);
    for (int d = -p; d <= q; ++d) {
      diags[d + p].assign(std::max(0, n_ - std::abs(d)), Traits::zero());
      if (d >= -p_ && d <= q_) diags[d + p] = std::move(diags_[d + p_]);
    }
    diags_ = std::move(diags);
    p_ = p;
    q_ = q;
  }

  int n_;  // window
  int p_;  // lower bandwidth
  int q_;  // upper bandwidth
  int h_;  // trust horizon
  std::vector<std::vector<S>> diags_;
};

template <class S>
BandMatrix<S> bm_mul(const BandMatrix<S>& a, const BandMatrix<S>& b) {
  return a * b;
}

template <class S>
BandMatrix<S> bm_add(const BandMatrix<S>& a, const BandMatrix<S>& b) {
  return a + b;
}

template <class S>
BandMatrix<S> bm_commutator(const BandMatrix<S>& a, const BandMatrix<S>& b) {
  return a * b - b * a;
}

template <class S>
BandMatrix<S> bm_dagger(const BandMatrix<S>& a) {
  return a.dagger();
}

template <class S>
std::vector<S> bm_diagonal(const BandMatrix<S>& a, int d) {
  return a.diagonal_entries(d);
}

template <class S>
bool bm_is_zero(const BandMatrix<S>& a, double tol = kDefaultZeroTol,
                double scale = -1.0) {
  return a.is_zero(tol, scale);
}

template <class S>
BandMatrix<S> bm_pow(const BandMatrix<S>& a, int k) {
  if (k < 0) throw Error("bm_pow expects k >= 0");
  BandMatrix<S> out = BandMatrix<S>::identity(a.window());
  for (int j = 0; j < k; ++j) out = out * a;
  return out;
}

}  // namespace cmvlab
