#include "kc/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

#include "kc/catalog.hpp"

namespace kc {

namespace {

using J1 = Jet<double>;

J1 hamiltonian_jet(const Vec6 &x, const SystemParams &p, Chart chart) {
  const auto v = lift_point<J1>(x);
  return chart == Chart::Cartesian ? H_cartesian(v, p) : H(v, p);
}

bool near_singularity(const Vec6 &x, const SystemParams &p, Chart chart, const OrbitFloors &f) {
  if (chart == Chart::Cartesian) {
    const double r = x.head<3>().norm();
    if (r < f.r_min && p.alpha != 0.0) return true;
    if (p.beta != 0.0 && std::abs(x[0]) < f.angle * r) return true;
    if (p.gamma != 0.0 && std::abs(x[1]) < f.angle * r) return true;
    return p.d() != 0.0 && std::abs(x[2]) < f.angle * r;
  }
  if (x[0] < f.r_min) return true;
  const double u1 = p.k1.value() * x[1], u2 = p.k2.value() * x[2];
  if (std::abs(std::sin(u1)) < f.angle) return true;
  if (p.d() != 0.0 && std::abs(std::cos(u1)) < f.angle) return true;
  if (p.beta != 0.0 && std::abs(std::cos(u2)) < f.angle) return true;
  return p.gamma != 0.0 && std::abs(std::sin(u2)) < f.angle;
}

// Dormand-Prince tableau
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

} // namespace

Vec6 hamilton_rhs(const Vec6 &x, const SystemParams &p, Chart chart) {
  const J1 h = hamiltonian_jet(x, p, chart);
  Vec6 f;
  f << h.g.tail<3>(), -h.g.head<3>();
  return f;
}

double hamiltonian(const Vec6 &x, const SystemParams &p, Chart chart) {
  const Point6<double> v = x;
  return chart == Chart::Cartesian ? H_cartesian(v, p) : H(v, p);
}

Trajectory integrate(const PhasePoint &x0, const SystemParams &p, double T, double tol, const OrbitFloors &floors) {
  if (!(tol >= 1e-13 && tol <= 1e-6)) throw ConfigError("integrator tolerance must lie in [1e-13, 1e-6]");
  if (!(T > 0.0)) throw ConfigError("integration time must be positive");
  const Chart chart = x0.chart;
  auto f = [&](const Vec6 &y) { return hamilton_rhs(y, p, chart); };

  Trajectory tr;
  tr.chart = chart;
  tr.tol = tol;
  double t = 0.0;
  Vec6 y = x0.x;
  tr.t.push_back(t);
  tr.x.push_back(y);
  if (near_singularity(y, p, chart, floors)) {
    tr.status = OrbitStatus::SingularityApproach;
    return tr;
  }

  Vec6 k1 = f(y);
  double h = std::min(T, 1e-2);
  while (t < T) {
    h = std::min(h, T - t);
    if (h < 1e-14 * std::max(1.0, t)) throw StepUnderflow("step size underflow at t = " + std::to_string(t));
    const Vec6 k2 = f(y + h * (a21 * k1));
    const Vec6 k3 = f(y + h * (a31 * k1 + a32 * k2));
    const Vec6 k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vec6 k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vec6 k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Vec6 yn = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Vec6 k7 = f(yn);
    const Vec6 err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double en = 0.0;
    for (int i = 0; i < 6; ++i)
      en = std::max(en, std::abs(err[i]) / (tol * (1.0 + std::max(std::abs(y[i]), std::abs(yn[i])))));
    if (!std::isfinite(en)) en = 1e10;

    if (en <= 1.0) {
      t = (T - t - h < 1e-14 * T) ? T : t + h;
      y = yn;
      k1 = k7;
      ++tr.steps;
      tr.t.push_back(t);
      tr.x.push_back(y);
      if (near_singularity(y, p, chart, floors)) {
        tr.status = OrbitStatus::SingularityApproach;
        return tr;
      }
    } else {
      ++tr.rejected;
    }
    const double fac = en > 0.0 ? 0.9 * std::pow(en, -0.2) : 5.0;
    h *= std::clamp(fac, 0.2, 5.0);
  }
  return tr;
}

double conservation_drift(const std::string &name, const Trajectory &traj, const SystemParams &p) {
  if (traj.chart == Chart::Cartesian) throw ConfigError("drift is measured in the spherical chart");
  const cplx s0 = evaluate_catalog(lift_point<Tracked>(traj.x.front()), p).at(name).v;
  double d = 0.0;
  for (std::size_t i = 1; i < traj.x.size(); ++i) {
    const cplx s = evaluate_catalog(lift_point<Tracked>(traj.x[i]), p).at(name).v;
    d = std::max(d, std::abs(s - s0) / std::max(std::abs(s0), 1.0));
  }
  return d;
}

std::map<std::string, double> drift_table(const Trajectory &traj, const SystemParams &p) {
  if (traj.chart == Chart::Cartesian) throw ConfigError("drift is measured in the spherical chart");
  std::vector<std::string> names;
  for (const auto &o : observables(p))
    if (o.constant) names.push_back(o.name);
  const auto c0 = evaluate_catalog(lift_point<Tracked>(traj.x.front()), p);
  std::map<std::string, double> out;
  for (const auto &n : names) out[n] = 0.0;
  for (std::size_t i = 1; i < traj.x.size(); ++i) {
    const auto c = evaluate_catalog(lift_point<Tracked>(traj.x[i]), p);
    for (const auto &n : names) {
      const cplx s0 = c0.at(n).v;
      out[n] = std::max(out[n], std::abs(c.at(n).v - s0) / std::max(std::abs(s0), 1.0));
    }
  }
  return out;
}

void write_csv(std::ostream &os, const Trajectory &traj) {
  os << (traj.chart == Chart::Cartesian ? "t,x,y,z,p_x,p_y,p_z\n" : "t,q1,q2,q3,p1,p2,p3\n");
  os << std::setprecision(17);
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    os << traj.t[i];
    for (int j = 0; j < 6; ++j) os << ',' << traj.x[i][j];
    os << '\n';
  }
}

} // namespace kc
