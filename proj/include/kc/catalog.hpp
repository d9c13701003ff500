#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "kc/system.hpp"

namespace kc {

struct UnsupportedParity : std::runtime_error { using std::runtime_error::runtime_error; };

template <class S> S imag_unit() { return S(cplx(0.0, 1.0)); }

inline int sign_pow(int e) { return (e % 2 == 0) ? 1 : -1; }

template <class S> S Qpoly(const S &l2, const S &l3, const SystemParams &p) {
  const S t = l3 - l2 - p.delta;
  return t * t - 4.0 * p.delta * l2;
}
template <class S> S dQ_dL2(const S &l2, const S &l3, const SystemParams &p) { return -2.0 * (l3 - l2 - p.delta) - 4.0 * p.delta; }
template <class S> S dQ_dL3(const S &l2, const S &l3, const SystemParams &p) { return 2.0 * (l3 - l2 - p.delta); }

template <class S> S Wpoly(const S &l3, const SystemParams &p) {
  const S t = p.beta - p.gamma - l3;
  return t * t - 4.0 * p.gamma * l3;
}
template <class S> S dW_dL3(const S &l3, const SystemParams &p) { return -2.0 * (p.beta - p.gamma - l3) - 4.0 * p.gamma; }

// d/dx of f^n g^m
template <class S> S d_product(const S &f, const S &df, int n, const S &g, const S &dg, int m) {
  return double(n) * ipow(f, n - 1) * df * ipow(g, m) + double(m) * ipow(f, n) * ipow(g, m - 1) * dg;
}

template <class S> S P1(const S &h, const S &l2, const S &l3, const SystemParams &p) {
  const S e = p.alpha * p.alpha + 4.0 * h * l2;
  if (p.kc3()) return ipow(S(l2 - l3), p.k1.q) * ipow(e, p.k1.p);
  return ipow(Qpoly(l2, l3, p), p.k1.q) * ipow(e, 2 * p.k1.p);
}

template <class S> S P2(const S &, const S &l2, const S &l3, const SystemParams &p) {
  const int a = p.k1.p * p.k2.q, b = p.k2.p * p.k1.q;
  if (p.kc3()) return ipow(S(l2 - l3), 2 * b) * ipow(Wpoly(l3, p), a);
  return ipow(Wpoly(l3, p), a) * ipow(Qpoly(l2, l3, p), b);
}

template <class S> S dP1_dL2(const S &h, const S &l2, const S &l3, const SystemParams &p) {
  const S e = p.alpha * p.alpha + 4.0 * h * l2;
  if (p.kc3()) return d_product(S(l2 - l3), S(1.0), p.k1.q, e, S(4.0 * h), p.k1.p);
  return d_product(Qpoly(l2, l3, p), dQ_dL2(l2, l3, p), p.k1.q, e, S(4.0 * h), 2 * p.k1.p);
}

template <class S> S dP2_dL3(const S &, const S &l2, const S &l3, const SystemParams &p) {
  const int a = p.k1.p * p.k2.q, b = p.k2.p * p.k1.q;
  if (p.kc3()) return d_product(S(l2 - l3), S(-1.0), 2 * b, Wpoly(l3, p), dW_dL3(l3, p), a);
  return d_product(Wpoly(l3, p), dW_dL3(l3, p), a, Qpoly(l2, l3, p), dQ_dL3(l2, l3, p), b);
}

inline double D1_const(const SystemParams &p) {
  return 2.0 * sign_pow((p.k1.q - 1) / 2) * std::pow(p.alpha, 2 * p.k1.p);
}

template <class S> S D1(const S &, const S &l3, const SystemParams &p) {
  return D1_const(p) * ipow(S(p.delta - l3), p.k1.q);
}
template <class S> S dD1_dL3(const S &, const S &l3, const SystemParams &p) {
  return -double(p.k1.q) * D1_const(p) * ipow(S(p.delta - l3), p.k1.q - 1);
}

template <class S> S D2(const S &l2, const S &, const SystemParams &p) {
  const int a = p.k1.p * p.k2.q, b = p.k2.p * p.k1.q;
  if (p.kc3()) return 2.0 * sign_pow((a + b) / 2 + 1) * std::pow(p.gamma - p.beta, a) * ipow(l2, b);
  return 2.0 * sign_pow((a + 1) / 2) * std::pow(p.gamma - p.beta, a) * ipow(S(l2 - p.delta), b);
}
template <class S> S dD2_dL2(const S &l2, const S &, const SystemParams &p) {
  const int a = p.k1.p * p.k2.q, b = p.k2.p * p.k1.q;
  if (p.kc3()) return 2.0 * b * sign_pow((a + b) / 2 + 1) * std::pow(p.gamma - p.beta, a) * ipow(l2, b - 1);
  return 2.0 * b * sign_pow((a + 1) / 2) * std::pow(p.gamma - p.beta, a) * ipow(S(l2 - p.delta), b - 1);
}

template <class S> struct Blocks {
  S X1, X1bar, X2, X2bar, Y1, Y1bar, Y2, Y2bar, U1, U2, S1, S2;
};

template <class S> Blocks<S> eval_blocks(const Point6<S> &x, const Core<S> &c, const SystemParams &p) {
  using std::cos; using std::sin; using std::sqrt;
  const S I = imag_unit<S>();
  const S s2 = sqrt(c.L2), s3 = sqrt(c.L3);
  const S u1 = x[1] * p.k1.value(), u2 = x[2] * p.k2.value();
  const S su1 = sin(u1), cu1 = cos(u1);
  const S cot1 = cu1 / su1;
  Blocks<S> b;
  if (p.kc3()) {
    const S re = su1 * x[4], im = s2 * cu1;
    b.X1 = re - I * im;
    b.X1bar = re + I * im;
    const S re2 = -2.0 * s3 * cot1 * x[4];
    const S im2 = 2.0 * c.L3 / (su1 * su1) - c.L2 - c.L3;
    b.Y2 = re2 + I * im2;
    b.Y2bar = re2 - I * im2;
    b.U1 = sqrt(c.L2 - c.L3);
    b.S2 = c.L3 - c.L2;
  } else {
    const S re = s2 * sin(2.0 * u1) * x[4];
    const S im = -c.L2 * cos(2.0 * u1) + p.delta - c.L3;
    b.X1 = re + I * im;
    b.X1bar = re - I * im;
    const S re2 = -2.0 * c.L3 * cot1 * cot1 + (c.L2 - c.L3 - p.delta);
    const S im2 = 2.0 * s3 * cot1 * x[4];
    b.Y2 = re2 - I * im2;
    b.Y2bar = re2 + I * im2;
    b.U1 = sqrt(Qpoly(c.L2, c.L3, p));
    b.S2 = b.U1;
  }
  const S re = -s3 * sin(2.0 * u2) * x[5], im = c.L3 * cos(2.0 * u2) + p.gamma - p.beta;
  b.X2 = re + I * im;
  b.X2bar = re - I * im;
  const S rey = 2.0 * s2 * x[3], imy = p.alpha + 2.0 * c.L2 / x[0];
  b.Y1 = rey - I * imy;
  b.Y1bar = rey + I * imy;
  b.U2 = sqrt(Wpoly(c.L3, p));
  b.S1 = sqrt(p.alpha * p.alpha + 4.0 * c.H * c.L2);
  return b;
}

template <class S> using Catalog = std::map<std::string, S>;

// every named quantity applicable to p, evaluated at the lifted point x
template <class S> Catalog<S> evaluate_catalog(const Point6<S> &x, const SystemParams &p) {
  using std::sqrt;
  if (p.system == System::OSC) throw ConfigError("catalog is defined for KC3/KC4 only");
  if (!p.odd()) throw UnsupportedParity("p1, q1, p2, q2 must all be odd");
  const S I = imag_unit<S>();
  const Core<S> c = eval_core(x, p);
  const Blocks<S> b = eval_blocks(x, c, p);
  const int p1 = p.k1.p, q1 = p.k1.q, p2 = p.k2.p, q2 = p.k2.q;
  const S s2 = sqrt(c.L2), s3 = sqrt(c.L3);

  Catalog<S> m;
  m["H"] = c.H;
  m["L2"] = c.L2;
  m["L3"] = c.L3;
  m["X1"] = b.X1; m["X1bar"] = b.X1bar; m["X2"] = b.X2; m["X2bar"] = b.X2bar;
  m["Y1"] = b.Y1; m["Y1bar"] = b.Y1bar; m["Y2"] = b.Y2; m["Y2bar"] = b.Y2bar;
  m["U1"] = b.U1; m["U2"] = b.U2; m["S1"] = b.S1; m["S2"] = b.S2;

  const int e1 = p.kc3() ? p1 : 2 * p1;
  const S Jp = ipow(b.X1, q1) * ipow(b.Y1bar, e1);
  const S Jm = ipow(b.X1bar, q1) * ipow(b.Y1, e1);
  const S Kp = ipow(b.X2, p1 * q2) * ipow(b.Y2bar, p2 * q1);
  const S Km = ipow(b.X2bar, p1 * q2) * ipow(b.Y2, p2 * q1);
  m["J_plus"] = Jp; m["J_minus"] = Jm; m["K_plus"] = Kp; m["K_minus"] = Km;
  m["J1"] = (Jm + Jp) / s2;
  m["J2"] = (Jm - Jp) / I;
  if (p.kc3()) {
    m["K1"] = (Km - Kp) / (I * s3);
    m["K2"] = Km + Kp;
    m["J_plus_ratio"] = Jp / (ipow(b.U1, q1) * ipow(b.S1, p1));
  } else {
    m["K1"] = (Km + Kp) / s3;
    m["K2"] = (Km - Kp) / I;
  }
  m["P1"] = P1(c.H, c.L2, c.L3, p);
  m["P2"] = P2(c.H, c.L2, c.L3, p);
  m["D2"] = D2(c.L2, c.L3, p);
  m["K0"] = (m["K2"] - m["D2"]) / c.L3;
  if (p.kc4()) {
    m["Q"] = Qpoly(c.L2, c.L3, p);
    m["D1"] = D1(c.L2, c.L3, p);
    m["J0"] = (m["J2"] - m["D1"]) / c.L2;
  }

  if (p.euclidean()) {
    const auto e = to_cartesian(x);
    const double be = p.beta, ga = p.gamma, de = p.delta, a2 = p.alpha * p.alpha;
    const S x2 = e.x * e.x, y2 = e.y * e.y, z2 = e.z * e.z;
    const S lxy = e.x * e.py - e.y * e.px, lxz = e.x * e.pz - e.z * e.px, lyz = e.y * e.pz - e.z * e.py;
    const S Ixy = lxy * lxy + be * (x2 + y2) / x2 + ga * (x2 + y2) / y2;
    const S Ixz = lxz * lxz + be * (x2 + z2) / x2 + de * (x2 + z2) / z2;
    const S Iyz = lyz * lyz + ga * (y2 + z2) / y2 + de * (y2 + z2) / z2;
    const S W = p.alpha / (2.0 * x[0]) + be / x2 + ga / y2 + de / z2;
    const S D = e.x * e.px + e.y * e.py + e.z * e.pz;
    const S M3 = lyz * e.py + lxz * e.px - e.z * W;
    const S M1 = -lxy * e.py - lxz * e.pz - e.x * W;
    const S M2 = -lyz * e.pz + lxy * e.px - e.y * W;
    m["I_xy"] = Ixy; m["I_xz"] = Ixz; m["I_yz"] = Iyz;
    m["M1"] = M1; m["M2"] = M2; m["M3"] = M3;
    m["J0_cart"] = -16.0 * (M3 * M3 + de * D * D / z2) + 8.0 * c.H * (Ixz + Iyz - be - ga) + 2.0 * a2;
    m["J0_prime"] = -16.0 * (M1 * M1 + be * D * D / x2) + 8.0 * c.H * (Ixy + Ixz - ga - de) + 2.0 * a2;
    m["J0_dprime_cart"] = -16.0 * (M2 * M2 + ga * D * D / y2) + 8.0 * c.H * (Ixy + Iyz - be - de) + 2.0 * a2;
    m["J0_dprime"] = 2.0 * a2 - m["J0"] - m["J0_prime"];
    const double sum = be + ga + de;
    m["L3_prime"] = m["K0"] / 4.0 + c.L2 / 2.0 - c.L3 / 2.0 + sum / 2.0;
    m["K0_prime"] = m["K0"] / 2.0 - c.L2 + 3.0 * c.L3 - sum;
    m["S_closure"] = -m["J0"] - 2.0 * m["J0_prime"] + 2.0 * a2;
  }
  return m;
}

struct ObservableInfo {
  std::string name;
  bool real = true;     // real-valued at real admissible points
  int degree = -1;      // claimed momentum degree, -1 if none
  bool constant = true; // a constant of the motion
};

std::vector<ObservableInfo> observables(const SystemParams &p);

} // namespace kc
