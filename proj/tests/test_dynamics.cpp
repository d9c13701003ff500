#include <numbers>
#include <sstream>

#include "doctest.h"
#include "support.hpp"

#include "kc/dynamics.hpp"

using namespace kc;
using namespace kc::test;

namespace {

// first sampled starts whose orbits run to T without touching a floor
std::vector<Trajectory> completed_orbits(const SystemParams &p, std::uint64_t seed, int want, double T, double tol) {
  std::vector<Trajectory> out;
  for (const Vec6 &x : sample_points(p, seed, 4 * want)) {
    Trajectory tr = integrate({Chart::SphericalKC, x}, p, T, tol);
    if (tr.status == OrbitStatus::Completed) out.push_back(std::move(tr));
    if (int(out.size()) == want) break;
  }
  return out;
}

} // namespace

TEST_CASE("free particle moves on a straight line") {
  SystemParams p = kc4();
  p.alpha = p.beta = p.gamma = p.delta = 0.0;
  PhasePoint x0{Chart::Cartesian, Vec6::Zero()};
  x0.x << 1.0, -0.5, 0.3, 0.2, 0.4, -0.1;
  const Trajectory tr = integrate(x0, p, 10.0, 1e-10);
  REQUIRE(tr.status == OrbitStatus::Completed);
  CHECK(tr.t.back() == 10.0);
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    const Vec6 expect = (Vec6() << x0.x.head<3>() + 2.0 * tr.t[i] * x0.x.tail<3>(), x0.x.tail<3>()).finished();
    CHECK((tr.x[i] - expect).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("circular Kepler orbit keeps its radius") {
  SystemParams p = kc3();
  p.alpha = -1.0;
  p.beta = p.gamma = 0.0;
  // dH/dr = 1/r^2 - 2 L2 / r^3 vanishes at r = 2 L2; with L2 = 1 the orbit lies in the equatorial plane
  Vec6 x;
  x << 2.0, std::numbers::pi / 2, 0.3, 0.0, 0.0, 1.0;
  const double L2v = 1.0, r = 2.0 * L2v;
  const double period = std::numbers::pi * r * r / std::sqrt(L2v);
  const Trajectory tr = integrate({Chart::SphericalKC, x}, p, period, 1e-12);
  REQUIRE(tr.status == OrbitStatus::Completed);
  for (const Vec6 &y : tr.x) CHECK(std::abs(y[0] - r) < 1e-8);
  // one full turn of the azimuth
  CHECK(std::abs(tr.x.back()[2] - x[2] - 2.0 * std::numbers::pi) < 1e-8);
}

TEST_CASE("energy drift stays within the tolerance budget") {
  const SystemParams p = kc4();
  const auto orbits = completed_orbits(p, 101, 3, 10.0, 1e-10);
  REQUIRE(orbits.size() == 3);
  for (const auto &tr : orbits) CHECK(conservation_drift("H", tr, p) < 1e-8);
}

TEST_CASE("constants of the motion along KC4 orbits with k1 = 3, k2 = 5/3") {
  const SystemParams p = kc4({3, 1}, {5, 3});
  const auto orbits = completed_orbits(p, 103, 2, 10.0, 1e-10);
  REQUIRE(orbits.size() == 2);
  for (const auto &tr : orbits) {
    CHECK(conservation_drift("J1", tr, p) < 1e-6);
    CHECK(conservation_drift("K1", tr, p) < 1e-6);
  }
}

TEST_CASE("the J+ ratio is conserved along KC3 orbits") {
  const SystemParams p = kc3({1, 3}, {1, 1});
  const auto orbits = completed_orbits(p, 107, 2, 10.0, 1e-10);
  REQUIRE(orbits.size() == 2);
  for (const auto &tr : orbits) CHECK(conservation_drift("J_plus_ratio", tr, p) < 1e-6);
}

TEST_CASE("time reversal returns to the start") {
  const SystemParams p = kc3({5, 3}, {3, 5});
  const auto orbits = completed_orbits(p, 109, 1, 5.0, 1e-12);
  REQUIRE(orbits.size() == 1);
  Vec6 back = orbits[0].x.back();
  back.tail<3>() *= -1.0;
  const Trajectory rev = integrate({Chart::SphericalKC, back}, p, 5.0, 1e-12);
  REQUIRE(rev.status == OrbitStatus::Completed);
  Vec6 end = rev.x.back();
  end.tail<3>() *= -1.0;
  CHECK((end - orbits[0].x.front()).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("singular approach is flagged") {
  SystemParams p = kc3();
  p.alpha = -1.0;
  p.beta = p.gamma = 0.0;
  Vec6 x;
  x << 1.0, std::numbers::pi / 2, 0.3, -1.0, 0.0, 0.0;  // radial infall
  const Trajectory tr = integrate({Chart::SphericalKC, x}, p, 10.0, 1e-10);
  CHECK(tr.status == OrbitStatus::SingularityApproach);
  CHECK(tr.t.back() < 10.0);
}

TEST_CASE("integrator preconditions and export") {
  const SystemParams p = kc4();
  const Vec6 x = sample_points(p, 113, 1).front();
  CHECK_THROWS_AS(integrate({Chart::SphericalKC, x}, p, 1.0, 1e-5), ConfigError);
  CHECK_THROWS_AS(integrate({Chart::SphericalKC, x}, p, 1.0, 1e-14), ConfigError);
  CHECK_THROWS_AS(integrate({Chart::SphericalKC, x}, p, -1.0, 1e-10), ConfigError);

  const Trajectory tr = integrate({Chart::SphericalKC, x}, p, 0.1, 1e-10);
  std::ostringstream os;
  write_csv(os, tr);
  const std::string s = os.str();
  CHECK(s.rfind("t,q1,q2,q3,p1,p2,p3\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == long(tr.t.size()) + 1);
}

TEST_CASE("Hamilton's equations from the jet gradient") {
  const SystemParams p = kc4({1, 3}, {5, 3});
  const Vec6 x = sample_points(p, 127, 1).front();
  const Vec6 f = hamilton_rhs(x, p, Chart::SphericalKC);
  for (int j = 0; j < 6; ++j) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
    Vec6 a = x, b = x;
    a[j] += h;
    b[j] -= h;
    const double d = (hamiltonian(a, p, Chart::SphericalKC) - hamiltonian(b, p, Chart::SphericalKC)) / (2.0 * h);
    const double expect = j < 3 ? -f[j + 3] : f[j - 3];
    CHECK(std::abs(d - expect) < 1e-6 * std::max(1.0, std::abs(expect)));
  }
}
