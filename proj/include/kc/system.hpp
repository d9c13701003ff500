#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "kc/jet.hpp"

namespace kc {

struct InadmissiblePoint : std::runtime_error { using std::runtime_error::runtime_error; };
struct ConfigError : std::runtime_error { using std::runtime_error::runtime_error; };

enum class System { KC3, KC4, OSC };

struct RationalK {
  int p = 1;
  int q = 1;

  double value() const { return double(p) / double(q); }
  bool odd() const { return (p % 2 != 0) && (q % 2 != 0); }
  bool operator==(const RationalK &) const = default;

  static RationalK parse(const std::string &s);
  std::string str() const { return std::to_string(p) + "/" + std::to_string(q); }
};

struct SystemParams {
  System system = System::KC4;
  double alpha = 1.0, beta = 2.0, gamma = 3.0, delta = 4.0;
  RationalK k1, k2;

  bool kc4() const { return system == System::KC4; }
  bool kc3() const { return system == System::KC3; }
  bool euclidean() const { return kc4() && k1 == RationalK{1, 1} && k2 == RationalK{1, 1}; }
  bool odd() const { return k1.odd() && k2.odd(); }
  // delta is structurally absent in KC3
  double d() const { return kc4() ? delta : 0.0; }
};

std::string to_string(System s);
System parse_system(const std::string &s);

enum class Chart { SphericalKC, SphericalOsc, Cartesian };

struct PhasePoint {
  Chart chart = Chart::SphericalKC;
  Vec6 x = Vec6::Zero();
};

// r, theta1, theta2, p_r, p_theta1, p_theta2 (or R, phi1, phi2, ... for the oscillator)
template <class S> S L3(const Point6<S> &x, const SystemParams &p) {
  using std::cos; using std::sin;
  const S u = x[2] * p.k2.value();
  const S c = cos(u), s = sin(u);
  return x[5] * x[5] + p.beta / (c * c) + p.gamma / (s * s);
}

template <class S> S L2_from(const Point6<S> &x, const S &l3, const SystemParams &p) {
  using std::cos; using std::sin;
  const S u = x[1] * p.k1.value();
  const S s = sin(u);
  S out = x[4] * x[4] + l3 / (s * s);
  if (p.system != System::KC3) {
    const S c = cos(u);
    out += p.delta / (c * c);
  }
  return out;
}

template <class S> S L2(const Point6<S> &x, const SystemParams &p) { return L2_from(x, L3(x, p), p); }

template <class S> S H_from(const Point6<S> &x, const S &l2, const SystemParams &p) {
  if (p.system == System::OSC) return x[3] * x[3] + p.alpha * x[0] * x[0] + l2 / (x[0] * x[0]);
  return x[3] * x[3] + p.alpha / x[0] + l2 / (x[0] * x[0]);
}

template <class S> S H(const Point6<S> &x, const SystemParams &p) { return H_from(x, L2(x, p), p); }

template <class S> struct Core {
  S H, L2, L3;
};

template <class S> Core<S> eval_core(const Point6<S> &x, const SystemParams &p) {
  Core<S> c;
  c.L3 = L3(x, p);
  c.L2 = L2_from(x, c.L3, p);
  c.H = H_from(x, c.L2, p);
  return c;
}

template <class S> struct Cartesian {
  S x, y, z, px, py, pz;
};

// canonical point transformation: momenta by the transpose-inverse Jacobian
template <class S> Cartesian<S> to_cartesian(const Point6<S> &s) {
  using std::cos; using std::sin;
  const S &r = s[0];
  const S st = sin(s[1]), ct = cos(s[1]), sp = sin(s[2]), cp = cos(s[2]);
  Cartesian<S> c;
  c.x = r * st * cp;
  c.y = r * st * sp;
  c.z = r * ct;
  c.px = s[3] * st * cp + s[4] * ct * cp / r - s[5] * sp / (r * st);
  c.py = s[3] * st * sp + s[4] * ct * sp / r + s[5] * cp / (r * st);
  c.pz = s[3] * ct - s[4] * st / r;
  return c;
}

PhasePoint cartesian_to_spherical(const PhasePoint &c);
PhasePoint spherical_to_cartesian(const PhasePoint &s);

// Cartesian form, valid where the spherical chart has k1 = k2 = 1
template <class S> S H_cartesian(const Point6<S> &c, const SystemParams &p) {
  using std::sqrt;
  const S r2 = c[0] * c[0] + c[1] * c[1] + c[2] * c[2];
  S h = c[3] * c[3] + c[4] * c[4] + c[5] * c[5] + p.beta / (c[0] * c[0]) + p.gamma / (c[1] * c[1]);
  if (p.d() != 0.0) h += p.d() / (c[2] * c[2]);
  if (p.system == System::OSC) return h + p.alpha * r2;
  if (p.alpha != 0.0) h += p.alpha / sqrt(r2);
  return h;
}

inline double hamiltonian_cartesian(const Vec6 &c, const SystemParams &p) { return H_cartesian<double>(c, p); }

struct StackelResult {
  SystemParams kc;
  double E = 0.0;
  PhasePoint y;
  bool odd_indices = true;  // false: k = j/2 is not a ratio of odd integers
};

StackelResult stackel_map(const SystemParams &osc, double Eprime, const PhasePoint &x);

} // namespace kc
