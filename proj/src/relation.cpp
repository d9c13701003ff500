#include "kc/relation.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "kc/catalog.hpp"
#include "kc/sampler.hpp"

namespace kc {

namespace {

struct Column {
  int index;        // 0..5 for A1..A6
  int e0p, e0;      // powers of J0' and J0
  Monomial m;
};

const std::array<std::array<int, 3>, 6> kGroups = {{{2, 0, 2}, {1, 1, 2}, {0, 2, 2}, {1, 0, 4}, {0, 1, 4}, {0, 0, 6}}};

std::vector<Monomial> monomials(int deg) {
  std::vector<Monomial> out;
  for (int a = 0; a <= deg; ++a)
    for (int b = 0; a + b <= deg; ++b)
      for (int c = 0; a + b + c <= deg; ++c)
        for (int d = 0; a + b + c + d <= deg; ++d) out.push_back({a, b, c, d});
  return out;
}

std::vector<Column> columns() {
  std::vector<Column> cols;
  for (int j = 0; j < 6; ++j)
    for (const auto &m : monomials(kGroups[j][2])) cols.push_back({j, kGroups[j][0], kGroups[j][1], m});
  return cols;
}

template <class S> S mono(const Monomial &m, const S &h, const S &l2, const S &l3, const S &k0) {
  return ipow(h, m[0]) * ipow(l2, m[1]) * ipow(l3, m[2]) * ipow(k0, m[3]);
}

using Gen = std::array<double, 6>;  // H, L2, L3, K0, J0, J0'

Gen draw_generators(Rng &rng) {
  Gen g;
  for (double &v : g) v = rng.uniform(-1.5, 1.5);
  return g;
}

double target(const SystemParams &p, const Gen &g) { return order12_target(p, g[0], g[1], g[2], g[3], g[4], g[5]); }

struct Term {
  double c;
  Monomial m;
};

Poly4 collect(const std::vector<Term> &ts) {
  Poly4 out;
  for (const auto &t : ts) out[t.m] += t.c;
  return out;
}

} // namespace

double eval_poly(const Poly4 &a, double h, double l2, double l3, double k0) {
  double s = 0.0;
  for (const auto &[m, c] : a) s += c * mono(m, h, l2, l3, k0);
  return s;
}

std::string monomial_str(const Monomial &m) {
  static const char *names[] = {"H", "L2", "L3", "K0"};
  std::string s;
  for (int i = 0; i < 4; ++i) {
    if (m[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += names[i];
    if (m[i] > 1) s += "^" + std::to_string(m[i]);
  }
  return s.empty() ? "1" : s;
}

double order12_target(const SystemParams &p, double h, double l2, double l3, double k0, double j0, double j0p) {
  const double a2 = p.alpha * p.alpha, b = p.beta, c = p.gamma, d = p.delta;
  const double Q = Qpoly(l2, l3, p);
  const double P1v = P1(h, l2, l3, p), P2v = P2(h, l2, l3, p);
  const double D1v = D1(l2, l3, p), D2v = D2(l2, l3, p);
  const double J1sq = -l2 * j0 * j0 - 2.0 * D1v * j0 + (4.0 * P1v - D1v * D1v) / l2;
  const double K1sq = -l3 * k0 * k0 - 2.0 * D2v * k0 + (4.0 * P2v - D2v * D2v) / l3;
  const double S = -j0 - 2.0 * j0p + 2.0 * a2;
  const double JK = (l2 + l3 - d) / 2.0 * j0 * k0 + a2 * (l2 - 3.0 * l3 - d) * k0 + (b - c) * (3.0 * l2 - l3 + d) * j0 +
                    2.0 * a2 * (c - b) * (l2 + l3 - 5.0 * d) + S * Q;
  return (J1sq * K1sq - JK * JK) / Q;
}

double relation_value(const Order12Relation &r, double h, double l2, double l3, double k0, double j0, double j0p) {
  const std::array<double, 6> w = {j0p * j0p, j0p * j0, j0 * j0, j0p, j0, 1.0};
  double s = 0.0;
  for (int j = 0; j < 6; ++j) s += w[j] * eval_poly(r.A[j], h, l2, l3, k0);
  return s;
}

Poly4 minus_four_q(const SystemParams &p) {
  // -4[(L3 - L2 - d)^2 - 4 d L2]
  const double d = p.delta;
  return collect({{-4.0, {0, 0, 2, 0}}, {-4.0, {0, 2, 0, 0}}, {8.0, {0, 1, 1, 0}}, {8.0 * d, {0, 0, 1, 0}},
                  {-8.0 * d, {0, 1, 0, 0}}, {-4.0 * d * d, {0, 0, 0, 0}}, {16.0 * d, {0, 1, 0, 0}}});
}

Order12Relation derive_order12_relation(const SystemParams &p, std::uint64_t seed, int fit_points, int holdout_points) {
  if (!p.euclidean()) throw ConfigError("the order-12 relation needs KC4 with k1 = k2 = 1");
  const auto cols = columns();
  const int n = int(cols.size());
  if (fit_points < n) throw ConfigError("need at least " + std::to_string(n) + " fitting points");

  auto row = [&](const Gen &g) {
    Eigen::RowVectorXd r(n);
    for (int i = 0; i < n; ++i) {
      const auto &c = cols[i];
      r[i] = ipow(g[5], c.e0p) * ipow(g[4], c.e0) * mono(c.m, g[0], g[1], g[2], g[3]);
    }
    return r;
  };

  Rng rng(seed);
  Eigen::MatrixXd A(fit_points, n);
  Eigen::VectorXd y(fit_points);
  for (int i = 0; i < fit_points; ++i) {
    Gen g;
    do g = draw_generators(rng);
    while (std::abs(Qpoly(g[1], g[2], p)) < 1e-3 || std::abs(g[1]) < 1e-3 || std::abs(g[2]) < 1e-3);
    A.row(i) = row(g);
    y[i] = target(p, g);
  }
  const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(y);

  Order12Relation r;
  r.params = p;
  r.unknowns = n;
  r.fit_points = fit_points;
  const double cmax = coef.cwiseAbs().maxCoeff();
  for (int i = 0; i < n; ++i)
    if (std::abs(coef[i]) > 1e-10 * cmax) r.A[cols[i].index][cols[i].m] = coef[i];

  const Eigen::VectorXd fitted = A * coef;
  for (int i = 0; i < fit_points; ++i)
    r.fit_residual = std::max(r.fit_residual, std::abs(fitted[i] - y[i]) / std::max(std::abs(y[i]), 1.0));
  if (!(r.fit_residual < 1e-8)) throw FitFailure("order-12 fit residual " + std::to_string(r.fit_residual));

  for (int i = 0; i < holdout_points; ++i) {
    Gen g;
    do g = draw_generators(rng);
    while (std::abs(Qpoly(g[1], g[2], p)) < 1e-3 || std::abs(g[1]) < 1e-3 || std::abs(g[2]) < 1e-3);
    const double t = target(p, g), scale = std::max(std::abs(t), 1.0);
    r.holdout_residual = std::max(r.holdout_residual, std::abs(relation_value(r, g[0], g[1], g[2], g[3], g[4], g[5]) - t) / scale);
    r.negative_control = std::max(r.negative_control, std::abs(t) / scale);
  }

  // at real phase points the relation itself must vanish
  const std::array<std::array<int, 2>, 6> jw = {{{2, 0}, {1, 1}, {0, 2}, {1, 0}, {0, 1}, {0, 0}}};
  for (const Vec6 &x : sample_points(p, seed + 1, holdout_points)) {
    const auto c = evaluate_catalog(lift_point<Tracked>(x), p);
    const Tracked h = c.at("H"), l2 = c.at("L2"), l3 = c.at("L3"), k0 = c.at("K0"), j0 = c.at("J0"), j0p = c.at("J0_prime");
    Tracked s(0.0);
    for (int j = 0; j < 6; ++j)
      for (const auto &[m, cf] : r.A[j]) s += cf * ipow(j0p, jw[j][0]) * ipow(j0, jw[j][1]) * mono(m, h, l2, l3, k0);
    r.phase_residual = std::max(r.phase_residual, std::abs(s.v) / std::max(s.m, 1.0));
  }

  const Poly4 q = minus_four_q(p);
  Poly4 all = q;
  for (const auto &[m, c] : r.A[0]) all[m];
  for (const auto &[m, unused] : all) {
    const double a = r.A[0].count(m) ? r.A[0].at(m) : 0.0, b = q.count(m) ? q.at(m) : 0.0;
    r.a1_mismatch = std::max(r.a1_mismatch, std::abs(a - b));
  }
  return r;
}

std::array<Poly4, 6> printed_order12_coefficients(const SystemParams &p) {
  const double a2 = p.alpha * p.alpha, a4 = a2 * a2, b = p.beta, c = p.gamma, d = p.delta;
  std::array<Poly4, 6> A;
  A[0] = minus_four_q(p);
  A[1] = collect({{8, {0, 1, 1, 0}}, {2, {0, 1, 0, 1}}, {2, {0, 0, 1, 1}}, {-4, {0, 2, 0, 0}}, {-4, {0, 0, 2, 0}},
                  {4 * (-b + c + 2 * d), {0, 0, 1, 0}}, {12 * b - 12 * c + 8 * d, {0, 1, 0, 0}}, {-2 * d, {0, 0, 0, 1}},
                  {-4 * c * d + 4 * b * d - 4 * d * d, {0, 0, 0, 0}}});
  A[2] = collect({{-2, {0, 1, 1, 0}}, {1, {0, 1, 0, 1}}, {-1, {0, 0, 2, 0}}, {-1, {0, 2, 0, 0}}, {1, {0, 0, 1, 1}},
                  {-0.25, {0, 0, 0, 2}}, {2 * (-b + c + d), {0, 0, 1, 0}}, {2 * (7 * b + c + d), {0, 1, 0, 0}},
                  {b - c - d, {0, 0, 0, 1}},
                  {-b * b - c * c - d * d + 2 * b * d + 2 * b * c - 2 * c * d, {0, 0, 0, 0}}});
  A[3] = collect({{8 * a2, {0, 2, 0, 0}}, {-12 * a2, {0, 0, 1, 1}}, {8 * a2, {0, 0, 2, 0}}, {-16 * a2, {0, 1, 1, 0}},
                  {4 * a2, {0, 1, 0, 1}}, {8 * a2 * (-b + c - 2 * d), {0, 1, 0, 0}}, {-4 * a2 * d, {0, 0, 0, 1}},
                  {8 * a2 * (-b + c - 2 * d), {0, 0, 1, 0}},
                  {8 * a2 * d * d - 40 * a2 * c * d + 40 * a2 * b * d, {0, 0, 0, 0}}});
  A[4] = collect({{4 * a2, {0, 2, 0, 0}}, {20 * a2, {0, 0, 2, 0}}, {-a2, {0, 0, 0, 2}}, {-8 * a2, {0, 1, 1, 0}},
                  {-8 * a2, {0, 0, 1, 1}}, {8 * a2 * (-2 * b + 2 * c - d), {0, 1, 0, 0}},
                  {-8 * a2 * (4 * b + 4 * c + 3 * d), {0, 0, 1, 0}}, {-4 * a2 * (b - c), {0, 0, 0, 1}},
                  {4 * a2 * d * d + 12 * a2 * b * b + 16 * a2 * c * d - 24 * a2 * b * c + 12 * a2 * c * c + 48 * a2 * b * d,
                   {0, 0, 0, 0}}});
  // garbled tokens read as: "H^22" -> H^2, "L^2 K0" -> L2^2 K0, "La^2d" -> a^2 d, "(+c)b" -> (b+c)
  const double bc = b + c, bmc2 = (b - c) * (b - c);
  A[5] = collect({
      {-4 * a4, {0, 2, 0, 0}},           {-36 * a4, {0, 0, 2, 0}},          {128 * a2, {1, 2, 1, 0}},
      {-256 * a2, {1, 1, 2, 0}},         {-512 * d, {2, 2, 1, 0}},          {-512, {2, 2, 2, 0}},
      {256, {2, 3, 1, 0}},               {-256 * a2 * d, {1, 1, 1, 0}},     {-4 * a4 * d * d, {0, 0, 0, 0}},
      {8 * a4 * d, {0, 1, 0, 0}},        {-24 * a4 * d, {0, 0, 1, 0}},      {24 * a4, {0, 1, 1, 0}},
      {-36 * a4 * d * d, {0, 0, 0, 0}},  {-36 * a4 * c * c, {0, 0, 0, 0}},  {-24 * a4 * b, {0, 1, 0, 0}},
      {-40 * a4 * c, {0, 1, 0, 0}},      {-256 * a2 * bc, {1, 2, 0, 0}},    {-512 * bc, {2, 3, 0, 0}},
      {72 * a4 * b, {0, 0, 1, 0}},       {56 * a4 * c, {0, 0, 1, 0}},       {72 * a4 * b * c, {0, 0, 0, 0}},
      {-512 * (b * b + c * c), {2, 2, 0, 0}}, {128 * a2, {1, 0, 3, 0}},     {512 * a2 * bc, {1, 1, 1, 0}},
      {1024 * bc, {2, 2, 1, 0}},         {-256 * a2 * (b * b + c * c), {1, 1, 0, 0}}, {512 * a2 * b * c, {1, 1, 0, 0}},
      {1024 * b * c, {2, 2, 0, 0}},      {-256 * a2 * bc, {1, 0, 2, 0}},    {256, {2, 1, 3, 0}},
      {-512 * bc, {2, 1, 2, 0}},         {128 * a2 * bmc2, {1, 0, 1, 0}},   {256 * bmc2, {2, 1, 1, 0}},
      {-a4, {0, 0, 0, 2}},               {24 * a4 * b * d, {0, 0, 0, 0}},   {104 * a4 * c * d, {0, 0, 0, 0}},
      {12 * a4 * (c - b), {0, 0, 0, 1}}, {-4 * a4, {0, 1, 0, 1}},           {512 * a2 * b * d, {1, 1, 0, 0}},
      {128 * a2 * c, {1, 1, 0, 1}},      {512 * a2 * b * c * d, {1, 0, 0, 0}}, {128 * a2 * b * d, {1, 0, 0, 1}},
      {-128 * a2 * b, {1, 1, 0, 1}},     {-128 * a2 * c * d, {1, 0, 0, 1}}, {1024 * b * c * d, {2, 1, 0, 0}},
      {256 * d * (b - c), {2, 1, 0, 1}}, {512 * a2 * c, {1, 1, 0, 0}},      {1024 * d * bc, {2, 2, 0, 0}},
      {-256 * a2 * d * (b * b + c * c + b * c + c * d), {1, 0, 0, 0}},      {256 * c, {2, 2, 0, 1}},
      {-512 * d * (b * b + c * c + b * d + c * d), {2, 1, 0, 0}},           {-256 * b, {2, 2, 0, 1}},
      {4 * a4 * d, {0, 0, 0, 1}},        {-256 * a2 * d, {1, 0, 2, 0}},     {-512 * d, {2, 1, 2, 0}},
      {128 * a2 * d * d, {1, 0, 1, 0}},  {256 * d * d, {2, 1, 1, 0}},       {-32 * a2, {1, 0, 1, 2}},
      {-64, {2, 1, 1, 2}},               {12 * a4, {0, 0, 1, 1}},           {512 * a2 * d * bc, {1, 0, 1, 0}},
      {1024 * d * bc, {2, 1, 1, 0}},
  });
  return A;
}

RelationDiff diff_printed(const Order12Relation &r, double tol) {
  const auto pr = printed_order12_coefficients(r.params);
  RelationDiff out;
  for (int j = 0; j < 6; ++j) {
    Poly4 all = pr[j];
    for (const auto &[m, c] : r.A[j]) all[m];
    out.match[j] = true;
    for (const auto &[m, unused] : all) {
      const double a = pr[j].count(m) ? pr[j].at(m) : 0.0, b = r.A[j].count(m) ? r.A[j].at(m) : 0.0;
      if (std::abs(a - b) > tol * std::max(1.0, std::abs(b))) {
        out.match[j] = false;
        out.entries.push_back({j + 1, m, a, b});
      }
    }
  }
  return out;
}

} // namespace kc
