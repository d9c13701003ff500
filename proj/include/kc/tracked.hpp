#pragma once

#include <cmath>
#include <algorithm>
#include <complex>

#include <Eigen/Dense>

namespace kc {

using cplx = std::complex<double>;

// complex value plus the summed size of the terms that were added to form it.
// Products and elementary functions pass the ratio m/|v| through unchanged, so
// m == |v| unless something cancelled along the way.
struct Tracked {
  cplx v{};
  double m = 0.0;

  Tracked() = default;
  Tracked(double x) : v(x), m(std::abs(x)) {}
  Tracked(cplx z) : v(z), m(std::abs(z)) {}
  Tracked(cplx z, double mag) : v(z), m(mag) {}

  Tracked &operator+=(const Tracked &b) { v += b.v; m += b.m; return *this; }
  Tracked &operator-=(const Tracked &b) { v -= b.v; m += b.m; return *this; }
  Tracked &operator*=(const Tracked &b) { v *= b.v; m *= b.m; return *this; }
  Tracked &operator/=(const Tracked &b);
};

inline Tracked operator+(Tracked a, const Tracked &b) { return a += b; }
inline Tracked operator-(Tracked a, const Tracked &b) { return a -= b; }
inline Tracked operator*(Tracked a, const Tracked &b) { return a *= b; }
inline Tracked operator-(const Tracked &a) { return {-a.v, a.m}; }
inline Tracked operator+(const Tracked &a) { return a; }

inline double ratio(const Tracked &a) {
  const double av = std::abs(a.v);
  return av > 0.0 ? std::max(1.0, a.m / av) : 1.0;
}

inline Tracked reciprocal(const Tracked &b) {
  const cplx r = 1.0 / b.v;
  return {r, std::abs(r) * ratio(b)};
}
inline Tracked &Tracked::operator/=(const Tracked &b) { return *this *= reciprocal(b); }
inline Tracked operator/(Tracked a, const Tracked &b) { return a /= b; }

inline bool operator==(const Tracked &a, const Tracked &b) { return a.v == b.v; }
inline bool operator!=(const Tracked &a, const Tracked &b) { return a.v != b.v; }

inline Tracked sin(const Tracked &a) { const cplx f = std::sin(a.v); return {f, std::abs(f) * ratio(a)}; }
inline Tracked cos(const Tracked &a) { const cplx f = std::cos(a.v); return {f, std::abs(f) * ratio(a)}; }
inline Tracked sqrt(const Tracked &a) { const cplx f = std::sqrt(a.v); return {f, std::abs(f) * ratio(a)}; }
inline Tracked exp(const Tracked &a) { const cplx f = std::exp(a.v); return {f, std::abs(f) * ratio(a)}; }
inline Tracked log(const Tracked &a) { const cplx f = std::log(a.v); return {f, std::abs(f) * ratio(a)}; }

inline cplx base_value(const Tracked &a) { return a.v; }
inline double magnitude(const Tracked &a) { return a.m; }
inline cplx base_value(const cplx &a) { return a; }
inline double magnitude(const cplx &a) { return std::abs(a); }
inline cplx base_value(double a) { return a; }
inline double magnitude(double a) { return std::abs(a); }

} // namespace kc

namespace Eigen {
template <> struct NumTraits<kc::Tracked> : GenericNumTraits<double> {
  using Real = kc::Tracked;
  using NonInteger = kc::Tracked;
  using Nested = kc::Tracked;
  using Literal = kc::Tracked;
  enum { IsComplex = 0, IsInteger = 0, IsSigned = 1, RequireInitialization = 1, ReadCost = 3, AddCost = 3, MulCost = 8 };
};
} // namespace Eigen
