#include "kc/sampler.hpp"

#include <numbers>

#include "kc/catalog.hpp"

namespace kc {

bool admissible(const Vec6 &x, const SystemParams &p, const SamplerConfig &cfg) {
  if (!x.allFinite()) return false;
  if (x[0] < cfg.r_min || x[0] > cfg.r_max) return false;
  const double u1 = p.k1.value() * x[1], u2 = p.k2.value() * x[2];
  for (double f : {std::sin(u1), std::cos(u1), std::sin(u2), std::cos(u2)})
    if (std::abs(f) < cfg.angle_floor) return false;
  const Point6<double> v = x;
  const double l3 = L3(v, p), l2 = L2(v, p);
  if (!(l2 > 0.0) || !(l3 > 0.0)) return false;
  if (std::abs(l2 - l3) < cfg.separation_floor * (std::abs(l2) + std::abs(l3))) return false;
  if (p.kc4()) {
    const double s = std::abs(l2) + std::abs(l3) + std::abs(p.delta);
    if (std::abs(Qpoly(l2, l3, p)) < cfg.q_floor * s * s) return false;
  }
  // high powers can overflow; such draws are simply not admissible
  const auto c = evaluate_catalog(lift_point<Tracked>(x), p);
  for (const auto &[name, t] : c)
    if (!std::isfinite(t.v.real()) || !std::isfinite(t.v.imag()) || !std::isfinite(t.m) || t.m > 1e250) return false;
  return true;
}

namespace {

Vec6 draw(const SystemParams &p, Rng &rng, const SamplerConfig &cfg) {
  Vec6 x;
  x[0] = rng.uniform(cfg.r_min, cfg.r_max);
  x[1] = rng.uniform(0.0, std::numbers::pi / (2.0 * p.k1.value()));
  x[2] = rng.uniform(0.0, std::numbers::pi / (2.0 * p.k2.value()));
  for (int j = 3; j < 6; ++j) x[j] = rng.uniform(-cfg.p_max, cfg.p_max);
  return x;
}

} // namespace

Vec6 sample_point(const SystemParams &p, Rng &rng, const SamplerConfig &cfg, long max_draws) {
  for (long i = 0; i < max_draws; ++i) {
    const Vec6 x = draw(p, rng, cfg);
    if (admissible(x, p, cfg)) return x;
  }
  throw SamplerExhausted("no admissible point in " + std::to_string(max_draws) + " draws");
}

std::vector<Vec6> sample_points(const SystemParams &p, std::uint64_t seed, int n, const SamplerConfig &cfg) {
  if (n < 1) throw ConfigError("point count must be at least 1");
  Rng rng(seed);
  std::vector<Vec6> out;
  out.reserve(n);
  for (long budget = 1000L * n; int(out.size()) < n; --budget) {
    if (budget <= 0) throw SamplerExhausted("no admissible points in " + std::to_string(1000L * n) + " draws");
    const Vec6 x = draw(p, rng, cfg);
    if (admissible(x, p, cfg)) out.push_back(x);
  }
  return out;
}

std::vector<PhasePoint> sample_shell_points(const SystemParams &osc, double Eprime, std::uint64_t seed, int n,
                                            const SamplerConfig &cfg) {
  if (osc.system != System::OSC) throw ConfigError("shell sampling expects oscillator parameters");
  if (n < 1) throw ConfigError("point count must be at least 1");
  Rng rng(seed);
  std::vector<PhasePoint> out;
  const double rmin = std::sqrt(cfg.r_min), rmax = std::sqrt(cfg.r_max);
  for (long budget = 1000L * n; int(out.size()) < n; --budget) {
    if (budget <= 0) throw SamplerExhausted("energy shell E' = " + std::to_string(Eprime) + " unreachable");
    Vec6 x = draw(osc, rng, cfg);
    x[0] = rng.uniform(rmin, rmax);
    x[3] = 0.0;
    const double u1 = osc.k1.value() * x[1], u2 = osc.k2.value() * x[2];
    bool ok = true;
    for (double f : {std::sin(u1), std::cos(u1), std::sin(u2), std::cos(u2)}) ok = ok && std::abs(f) >= cfg.angle_floor;
    if (!ok) continue;
    const Point6<double> v = x;
    const double pr2 = Eprime - H(v, osc);
    if (!(pr2 >= 0.0)) continue;
    x[3] = (rng.uniform() < 0.5 ? -1.0 : 1.0) * std::sqrt(pr2);
    out.push_back({Chart::SphericalOsc, x});
  }
  return out;
}

} // namespace kc
