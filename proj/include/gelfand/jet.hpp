#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace gelfand {

/// Truncated Taylor series a_0 + a_1 h + ... + a_{N-1} h^{N-1} about a point.
/// Arithmetic on jets propagates exact derivatives of closed-form
/// expressions: the k-th derivative is k! * a_k.
template <class T, std::size_t N = 5>
struct Jet {
  std::array<T, N> a{};

  static Jet constant(T c) {
    Jet j;
    j.a[0] = c;
    return j;
  }
  static Jet variable(T x0) {
    Jet j;
    j.a[0] = x0;
    if constexpr (N > 1) j.a[1] = T(1);
    return j;
  }

  T derivative(std::size_t k) const {
    T fact = 1;
    for (std::size_t i = 2; i <= k; ++i) fact *= T(i);
    return a[k] * fact;
  }

  friend Jet operator+(Jet x, const Jet& y) {
    for (std::size_t k = 0; k < N; ++k) x.a[k] += y.a[k];
    return x;
  }
  friend Jet operator-(Jet x, const Jet& y) {
    for (std::size_t k = 0; k < N; ++k) x.a[k] -= y.a[k];
    return x;
  }
  friend Jet operator-(Jet x) {
    for (auto& v : x.a) v = -v;
    return x;
  }
  friend Jet operator+(Jet x, T c) {
    x.a[0] += c;
    return x;
  }
  friend Jet operator+(T c, Jet x) { return x + c; }
  friend Jet operator-(Jet x, T c) {
    x.a[0] -= c;
    return x;
  }
  friend Jet operator-(T c, const Jet& x) { return (-x) + c; }
  friend Jet operator*(Jet x, T c) {
    for (auto& v : x.a) v *= c;
    return x;
  }
  friend Jet operator*(T c, Jet x) { return x * c; }
  friend Jet operator/(Jet x, T c) {
    for (auto& v : x.a) v /= c;
    return x;
  }
  friend Jet operator*(const Jet& x, const Jet& y) {
    Jet z;
    for (std::size_t k = 0; k < N; ++k)
      for (std::size_t i = 0; i <= k; ++i) z.a[k] += x.a[i] * y.a[k - i];
    return z;
  }
  friend Jet operator/(const Jet& x, const Jet& y) {
    Jet z;
    for (std::size_t k = 0; k < N; ++k) {
      T s = x.a[k];
      for (std::size_t i = 1; i <= k; ++i) s -= y.a[i] * z.a[k - i];
      z.a[k] = s / y.a[0];
    }
    return z;
  }
  friend Jet operator/(T c, const Jet& y) { return constant(c) / y; }
};

template <class T, std::size_t N>
Jet<T, N> exp(const Jet<T, N>& x) {
  using std::exp;
  Jet<T, N> z;
  z.a[0] = exp(x.a[0]);
  // z' = x' z  =>  k z_k = sum_{i=1}^{k} i x_i z_{k-i}
  for (std::size_t k = 1; k < N; ++k) {
    T s = 0;
    for (std::size_t i = 1; i <= k; ++i) s += T(i) * x.a[i] * z.a[k - i];
    z.a[k] = s / T(k);
  }
  return z;
}

template <class T, std::size_t N>
Jet<T, N> log(const Jet<T, N>& x) {
  using std::log;
  Jet<T, N> z;
  z.a[0] = log(x.a[0]);
  // x z' = x'  =>  k x_0 z_k = k x_k - sum_{i=1}^{k-1} (k-i) x_i z_{k-i}
  for (std::size_t k = 1; k < N; ++k) {
    T s = T(k) * x.a[k];
    for (std::size_t i = 1; i < k; ++i) s -= T(k - i) * x.a[i] * z.a[k - i];
    z.a[k] = s / (T(k) * x.a[0]);
  }
  return z;
}

template <class T, std::size_t N>
Jet<T, N> pow(const Jet<T, N>& x, T alpha) {
  using std::pow;
  Jet<T, N> z;
  z.a[0] = pow(x.a[0], alpha);
  // x z' = alpha x' z  =>  k x_0 z_k = sum_{i=1}^{k} (alpha i - (k - i)) x_i z_{k-i}
  for (std::size_t k = 1; k < N; ++k) {
    T s = 0;
    for (std::size_t i = 1; i <= k; ++i) s += (alpha * T(i) - T(k - i)) * x.a[i] * z.a[k - i];
    z.a[k] = s / (T(k) * x.a[0]);
  }
  return z;
}

}  // namespace gelfand
