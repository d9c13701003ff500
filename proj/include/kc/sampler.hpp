#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "kc/system.hpp"

namespace kc {

struct SamplerExhausted : std::runtime_error { using std::runtime_error::runtime_error; };

// 53-bit uniform doubles straight from mt19937_64, so streams agree across standard libraries
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  std::uint64_t next() { return eng_(); }

private:
  std::mt19937_64 eng_;
};

struct SamplerConfig {
  double r_min = 0.5, r_max = 5.0;
  double p_max = 2.0;
  double angle_floor = 0.05;
  double separation_floor = 1e-3;  // |L2-L3| >= floor*(|L2|+|L3|)
  double q_floor = 1e-3;           // |Q| >= floor*(|L2|+|L3|+|delta|)^2
};

bool admissible(const Vec6 &x, const SystemParams &p, const SamplerConfig &cfg = {});

Vec6 sample_point(const SystemParams &p, Rng &rng, const SamplerConfig &cfg = {}, long max_draws = 1000);

std::vector<Vec6> sample_points(const SystemParams &p, std::uint64_t seed, int n, const SamplerConfig &cfg = {});

// oscillator points with H'(x) = E' exactly up to rounding; p_R is solved for, the rest is drawn
std::vector<PhasePoint> sample_shell_points(const SystemParams &osc, double Eprime, std::uint64_t seed, int n,
                                            const SamplerConfig &cfg = {});

} // namespace kc
