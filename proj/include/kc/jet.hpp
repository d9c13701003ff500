#pragma once

#include <cmath>
#include <complex>
#include <type_traits>

#include <Eigen/Core>

#include "kc/tracked.hpp"

namespace kc {

// value plus gradient in the six canonical variables (q1,q2,q3,p1,p2,p3).
// Nesting Jet<Jet<T>> carries exact second derivatives.
template <class S> struct Jet {
  using Scalar = S;
  using Grad = Eigen::Matrix<S, 6, 1>;

  S v;
  Grad g;

  Jet() : v(0.0), g(Grad::Constant(S(0.0))) {}
  template <class C>
    requires(std::is_constructible_v<S, const C &> && !std::is_same_v<std::remove_cvref_t<C>, Jet>)
  Jet(const C &c) : v(c), g(Grad::Constant(S(0.0))) {}
  Jet(const S &val, const Grad &grad) : v(val), g(grad) {}

  Jet &operator+=(const Jet &b) { v += b.v; g += b.g; return *this; }
  Jet &operator-=(const Jet &b) { v -= b.v; g -= b.g; return *this; }
  Jet &operator*=(const Jet &b) {
    g = b.v * g + v * b.g;
    v *= b.v;
    return *this;
  }
  Jet &operator/=(const Jet &b) { return *this *= reciprocal(b); }
};

template <class T> struct is_jet : std::false_type {};
template <class S> struct is_jet<Jet<S>> : std::true_type {};
template <class T> inline constexpr bool is_jet_v = is_jet<T>::value;

template <class S> Jet<S> operator+(Jet<S> a, const Jet<S> &b) { return a += b; }
template <class S> Jet<S> operator-(Jet<S> a, const Jet<S> &b) { return a -= b; }
template <class S> Jet<S> operator*(Jet<S> a, const Jet<S> &b) { return a *= b; }
template <class S> Jet<S> operator/(Jet<S> a, const Jet<S> &b) { return a /= b; }
template <class S> Jet<S> operator-(const Jet<S> &a) { return {-a.v, -a.g}; }
template <class S> Jet<S> operator+(const Jet<S> &a) { return a; }

template <class C> concept Number = std::is_arithmetic_v<C> || std::is_same_v<C, cplx>;

template <class S, Number C> Jet<S> operator+(Jet<S> a, const C &c) { a.v += S(c); return a; }
template <class S, Number C> Jet<S> operator+(const C &c, Jet<S> a) { a.v += S(c); return a; }
template <class S, Number C> Jet<S> operator-(Jet<S> a, const C &c) { a.v -= S(c); return a; }
template <class S, Number C> Jet<S> operator-(const C &c, const Jet<S> &a) { return Jet<S>(c) - a; }
template <class S, Number C> Jet<S> operator*(const Jet<S> &a, const C &c) { const S s(c); return {a.v * s, a.g * s}; }
template <class S, Number C> Jet<S> operator*(const C &c, const Jet<S> &a) { return a * c; }
template <class S, Number C> Jet<S> operator/(const Jet<S> &a, const C &c) {
  using R = std::conditional_t<std::is_same_v<C, cplx>, cplx, double>;
  return a * (R(1.0) / R(c));
}
template <class S, Number C> Jet<S> operator/(const C &c, const Jet<S> &a) { return reciprocal(a) * c; }

// Tracked mixes with plain numbers the same way
template <Number C> Tracked operator+(const Tracked &a, const C &c) { return a + Tracked(cplx(c)); }
template <Number C> Tracked operator+(const C &c, const Tracked &a) { return a + Tracked(cplx(c)); }
template <Number C> Tracked operator-(const Tracked &a, const C &c) { return a - Tracked(cplx(c)); }
template <Number C> Tracked operator-(const C &c, const Tracked &a) { return Tracked(cplx(c)) - a; }
template <Number C> Tracked operator*(const Tracked &a, const C &c) { return a * Tracked(cplx(c)); }
template <Number C> Tracked operator*(const C &c, const Tracked &a) { return a * Tracked(cplx(c)); }
template <Number C> Tracked operator/(const Tracked &a, const C &c) { return a * Tracked(1.0 / cplx(c)); }
template <Number C> Tracked operator/(const C &c, const Tracked &a) { return Tracked(cplx(c)) * reciprocal(a); }

template <class S> Jet<S> reciprocal(const Jet<S> &b) {
  const S r = S(1.0) / b.v;
  return {r, (-(r * r)) * b.g};
}

template <class S> Jet<S> sin(const Jet<S> &a) {
  using std::cos; using std::sin;
  return {sin(a.v), cos(a.v) * a.g};
}
template <class S> Jet<S> cos(const Jet<S> &a) {
  using std::cos; using std::sin;
  return {cos(a.v), (-sin(a.v)) * a.g};
}
template <class S> Jet<S> sqrt(const Jet<S> &a) {
  using std::sqrt;
  const S s = sqrt(a.v);
  return {s, (S(1.0) / (S(2.0) * s)) * a.g};
}
template <class S> Jet<S> exp(const Jet<S> &a) {
  using std::exp;
  const S e = exp(a.v);
  return {e, e * a.g};
}
template <class S> Jet<S> log(const Jet<S> &a) {
  using std::log;
  return {log(a.v), (S(1.0) / a.v) * a.g};
}

template <class S> S tan(const S &a) { using std::cos; using std::sin; return sin(a) / cos(a); }
template <class S> S cot(const S &a) { using std::cos; using std::sin; return cos(a) / sin(a); }
template <class S> S csc(const S &a) { using std::sin; return S(1.0) / sin(a); }

template <class S> S ipow(S x, int n) {
  S r(1.0);
  while (n > 0) {
    if (n & 1) r *= x;
    n >>= 1;
    if (n) x *= x;
  }
  return r;
}

template <class S> auto base_value(const Jet<S> &a) { return base_value(a.v); }
template <class S> double magnitude(const Jet<S> &a) { return magnitude(a.v); }

// coordinate lift: x_j with unit gradient at every nesting level
template <class S> S variable(double x, int j) {
  if constexpr (is_jet_v<S>) {
    using T = typename S::Scalar;
    typename S::Grad g = S::Grad::Constant(T(0.0));
    g[j] = T(1.0);
    return S(variable<T>(x, j), g);
  } else {
    return S(x);
  }
}

template <class S> using Point6 = Eigen::Matrix<S, 6, 1>;
using Vec6 = Eigen::Matrix<double, 6, 1>;

template <class S> Point6<S> lift_point(const Vec6 &x) {
  Point6<S> out;
  for (int j = 0; j < 6; ++j) out[j] = variable<S>(x[j], j);
  return out;
}

// {F,G} = sum_j dF/dq_j dG/dp_j - dF/dp_j dG/dq_j
template <class S> S poisson_bracket(const Jet<S> &f, const Jet<S> &g) {
  S s(0.0);
  for (int j = 0; j < 3; ++j) s += f.g[j] * g.g[j + 3] - f.g[j + 3] * g.g[j];
  return s;
}

// drop the innermost derivative level: Jet<Jet<T>> -> Jet<T> keeps (value, gradient)
template <class S> const S &lower(const Jet<S> &a) { return a.v; }

using J1t = Jet<Tracked>;
using J2t = Jet<J1t>;

} // namespace kc

namespace Eigen {
template <class S> struct NumTraits<kc::Jet<S>> : GenericNumTraits<double> {
  using Real = kc::Jet<S>;
  using NonInteger = kc::Jet<S>;
  using Nested = kc::Jet<S>;
  using Literal = kc::Jet<S>;
  enum { IsComplex = 0, IsInteger = 0, IsSigned = 1, RequireInitialization = 1, ReadCost = 7, AddCost = 7, MulCost = 20 };
};
} // namespace Eigen
