#include "kc/system.hpp"

#include <numeric>

namespace kc {

RationalK RationalK::parse(const std::string &s) {
  RationalK k;
  try {
    const auto slash = s.find('/');
    std::size_t used = 0;
    if (slash == std::string::npos) {
      k.p = std::stoi(s, &used);
      k.q = 1;
      if (used != s.size()) throw ConfigError("");
    } else {
      const std::string a = s.substr(0, slash), b = s.substr(slash + 1);
      k.p = std::stoi(a, &used);
      if (used != a.size()) throw ConfigError("");
      k.q = std::stoi(b, &used);
      if (used != b.size()) throw ConfigError("");
    }
  } catch (const std::exception &) {
    throw ConfigError("cannot parse rational index '" + s + "'");
  }
  if (k.p <= 0 || k.q <= 0) throw ConfigError("rational index must be positive: " + s);
  if (std::gcd(k.p, k.q) != 1) throw ConfigError("rational index must be in lowest terms: " + s);
  return k;
}

std::string to_string(System s) {
  switch (s) {
  case System::KC3: return "kc3";
  case System::KC4: return "kc4";
  case System::OSC: return "osc";
  }
  return "?";
}

System parse_system(const std::string &s) {
  if (s == "kc3") return System::KC3;
  if (s == "kc4") return System::KC4;
  if (s == "osc") return System::OSC;
  throw ConfigError("unknown system '" + s + "'");
}

PhasePoint cartesian_to_spherical(const PhasePoint &c) {
  if (c.chart != Chart::Cartesian) throw ConfigError("expected a Cartesian point");
  const double x = c.x[0], y = c.x[1], z = c.x[2];
  const double r = std::sqrt(x * x + y * y + z * z);
  const double rho = std::hypot(x, y);
  if (r == 0.0 || rho < 1e-12 * r) throw InadmissiblePoint("pole singularity (sin theta1 = 0)");
  const double t1 = std::atan2(rho, z), t2 = std::atan2(y, x);
  const double st = std::sin(t1), ct = std::cos(t1), sp = std::sin(t2), cp = std::cos(t2);
  const double px = c.x[3], py = c.x[4], pz = c.x[5];
  PhasePoint s;
  s.chart = Chart::SphericalKC;
  s.x << r, t1, t2, st * cp * px + st * sp * py + ct * pz,
      r * (ct * cp * px + ct * sp * py - st * pz), r * st * (-sp * px + cp * py);
  return s;
}

PhasePoint spherical_to_cartesian(const PhasePoint &s) {
  if (s.chart == Chart::Cartesian) throw ConfigError("expected a spherical point");
  const Point6<double> v = s.x;
  const auto c = to_cartesian(v);
  PhasePoint out;
  out.chart = Chart::Cartesian;
  out.x << c.x, c.y, c.z, c.px, c.py, c.pz;
  return out;
}

StackelResult stackel_map(const SystemParams &osc, double Eprime, const PhasePoint &x) {
  if (osc.system != System::OSC) throw ConfigError("stackel_map expects oscillator parameters");
  if (x.chart != Chart::SphericalOsc) throw ConfigError("stackel_map expects an oscillator chart point");
  StackelResult out;
  out.kc.system = System::KC4;
  out.E = -osc.alpha / 4.0;
  out.kc.alpha = -Eprime / 4.0;
  out.kc.beta = osc.beta / 4.0;
  out.kc.gamma = osc.gamma / 4.0;
  out.kc.delta = osc.delta / 4.0;
  auto halve = [&](const RationalK &j) {
    RationalK k{j.p, 2 * j.q};
    const int g = std::gcd(k.p, k.q);
    k.p /= g;
    k.q /= g;
    return k;
  };
  out.kc.k1 = halve(osc.k1);
  out.kc.k2 = halve(osc.k2);
  out.odd_indices = out.kc.odd();
  const double R = x.x[0];
  out.y.chart = Chart::SphericalKC;
  out.y.x << R * R, 2.0 * x.x[1], 2.0 * x.x[2], x.x[3] / (2.0 * R), x.x[4] / 2.0, x.x[5] / 2.0;
  return out;
}

} // namespace kc
