#include <numbers>

#include "doctest.h"
#include "support.hpp"

#include "kc/identities.hpp"

using namespace kc;
using namespace kc::test;

namespace {

Vec6 example_point() {
  Vec6 x;
  x << 2.0, 0.3, 0.7, 1.0, 0.0, 0.0;
  return x;
}

} // namespace

TEST_CASE("coordinate lift has unit gradients") {
  const auto v = lift_point<Jet<double>>(example_point());
  CHECK(v[0].v == 2.0);
  for (int j = 0; j < 6; ++j) {
    for (int i = 0; i < 6; ++i) CHECK(v[j].g[i] == (i == j ? 1.0 : 0.0));
  }
}

TEST_CASE("product and chain rules") {
  const auto v = lift_point<Jet<double>>(example_point());
  const auto rp = v[0] * v[3];
  CHECK(rp.v == 2.0);
  CHECK(rp.g[0] == 1.0);
  CHECK(rp.g[3] == 2.0);
  CHECK(rp.g[1] == 0.0);

  const auto s = sqrt(v[0]);
  CHECK(s.v == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(s.g[0] == doctest::Approx(1.0 / (2.0 * std::sqrt(2.0))).epsilon(1e-15));

  const Jet<double> c(std::numbers::pi / 2);
  const auto sc = sin(c);
  CHECK(sc.v == doctest::Approx(1.0));
  CHECK(sc.g.norm() == 0.0);

  Jet<cplx> four(cplx(4.0));
  four.g[0] = 2.0;
  const auto r = sqrt(four);
  CHECK(std::abs(r.v - 2.0) == 0.0);
  CHECK(std::abs(r.g[0] - 0.5) == 0.0);
}

TEST_CASE("cot matches central differences") {
  Rng rng(3);
  for (int n = 0; n < 20; ++n) {
    const double x = rng.uniform(0.2, 1.4);
    Jet<double> u(x);
    u.g[1] = 1.0;
    const auto c = cot(u);
    const double h = 1e-6;
    const double fdv = (1.0 / std::tan(x + h) - 1.0 / std::tan(x - h)) / (2.0 * h);
    CHECK(std::abs(c.g[1] - fdv) / std::abs(fdv) < 1e-8);
  }
}

TEST_CASE("integer powers by squaring") {
  Jet<double> x(1.1);
  x.g[0] = 1.0;
  const auto y = ipow(x, 7);
  CHECK(y.v == doctest::Approx(std::pow(1.1, 7)).epsilon(1e-14));
  CHECK(y.g[0] == doctest::Approx(7.0 * std::pow(1.1, 6)).epsilon(1e-14));
  CHECK(ipow(x, 0).v == 1.0);
}

TEST_CASE("canonical pair and antisymmetry") {
  const auto v = lift_point<Jet<double>>(example_point());
  CHECK(poisson_bracket(v[0], v[3]) == 1.0);
  CHECK(poisson_bracket(v[3], v[0]) == -1.0);
  const SystemParams p = kc3({1, 3}, {5, 3});
  Rng rng(5);
  const Vec6 x = sample_point(p, rng);
  const auto h = H(lift_point<Jet<double>>(x), p);
  CHECK(poisson_bracket(h, h) == 0.0);
}

TEST_CASE("H and L2 commute on the sampled KC3 configuration") {
  const SystemParams p = kc3({1, 3}, {5, 3});
  Rng rng(11);
  const Vec6 x = sample_point(p, rng);
  const auto c = eval_core(lift_point<Jet<double>>(x), p);
  CHECK(std::abs(poisson_bracket(c.H, c.L2)) < 1e-10 * std::max(1.0, std::abs(c.H.v * c.L2.v)));
}

TEST_CASE("bracket with p_theta1 matches a finite-difference bracket") {
  const SystemParams p = kc4({1, 3}, {1, 1});
  Rng rng(13);
  for (int n = 0; n < 10; ++n) {
    const Vec6 x = sample_point(p, rng);
    const auto h = H(lift_point<Jet<double>>(x), p);
    const auto pt = lift_point<Jet<double>>(x)[4];
    const double jet = poisson_bracket(h, pt);
    // {H, p_theta1} = dH/dtheta1
    auto Hat = [&](double d) {
      Vec6 y = x;
      y[1] += d;
      return H(Point6<double>(y), p);
    };
    const double step = 1e-6, fdv = (Hat(step) - Hat(-step)) / (2.0 * step);
    CHECK(std::abs(jet - fdv) / std::max(std::abs(jet), 1.0) < 1e-7);
  }
}

TEST_CASE("catalog gradients match central differences") {
  for (const auto &[k1, k2] : k_grid()) {
    for (const SystemParams &p : {kc3(k1, k2), kc4(k1, k2)}) {
      CAPTURE(to_string(p.system));
      CAPTURE(k1.str());
      CAPTURE(k2.str());
      for (const Vec6 &x : sample_points(p, 17, 25)) {
        const auto jets = evaluate_catalog(lift_point<Jet<cplx>>(x), p);
        const auto mags = evaluate_catalog(lift_point<Tracked>(x), p);
        for (const auto &[name, jet] : jets) {
          CAPTURE(name);
          for (int j = 0; j < 6; ++j) {
            const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
            const cplx f = fd(name, x, p, j, h);
            // rounding in the difference quotient is about eps * mag / h
            const double noise = 1e-15 * mags.at(name).m / h;
            CHECK(std::abs(jet.g[j] - f) <= 1e-6 * std::max(jet.g.cwiseAbs().maxCoeff(), 1.0) + 10.0 * noise);
          }
        }
      }
    }
  }
}

TEST_CASE("nested brackets agree with a Richardson-extrapolated difference of the inner bracket") {
  const SystemParams p = kc4();
  auto inner = [&](const Vec6 &y) {
    const auto c = evaluate_catalog(lift_point<Jet<cplx>>(y), p);
    return poisson_bracket(c.at("J0"), c.at("J0_prime"));
  };
  for (const Vec6 &x : sample_points(p, 21, 10)) {
    const Context ctx(x, p);
    const Tracked nested = ctx.pb("J0", ctx.pb1("J0", "J0_prime"));
    const auto outer = evaluate_catalog(lift_point<Jet<cplx>>(x), p).at("J0");
    auto dR = [&](int j, double h) {
      Vec6 a = x, b = x;
      a[j] += h;
      b[j] -= h;
      return (inner(a) - inner(b)) / (2.0 * h);
    };
    cplx fdb = 0.0;
    for (int j = 0; j < 3; ++j) {
      const double h = 1e-5 * std::max(1.0, std::abs(x[j])), hp = 1e-5 * std::max(1.0, std::abs(x[j + 3]));
      const cplx dq = (4.0 * dR(j, h / 2) - dR(j, h)) / 3.0;
      const cplx dp = (4.0 * dR(j + 3, hp / 2) - dR(j + 3, hp)) / 3.0;
      fdb += outer.g[j] * dp - outer.g[j + 3] * dq;
    }
    CHECK(std::abs(nested.v - fdb) / std::max(nested.m, 1.0) < 1e-6);
  }
}

TEST_CASE("magnitude records cancellation only") {
  const Tracked a(3.0), b(-2.0);
  CHECK((a * b).m == 6.0);
  CHECK((a + b).m == 5.0);
  CHECK((a / b).m == doctest::Approx(1.5));
  const Tracked d = a + b;  // value 1, magnitude 5
  CHECK(sqrt(d).m == doctest::Approx(5.0));
  CHECK(reciprocal(d).m == doctest::Approx(5.0));
}
