#pragma once

#include <string>

#include "kc/catalog.hpp"
#include "kc/sampler.hpp"

namespace kc::test {

inline SystemParams kc3(RationalK k1 = {1, 1}, RationalK k2 = {1, 1}) {
  SystemParams p;
  p.system = System::KC3;
  p.k1 = k1;
  p.k2 = k2;
  p.delta = 0.0;
  return p;
}

inline SystemParams kc4(RationalK k1 = {1, 1}, RationalK k2 = {1, 1}) {
  SystemParams p;
  p.system = System::KC4;
  p.k1 = k1;
  p.k2 = k2;
  return p;
}

inline const std::vector<std::pair<RationalK, RationalK>> &k_grid() {
  static const std::vector<std::pair<RationalK, RationalK>> g = {
      {{1, 1}, {1, 1}}, {{1, 3}, {1, 1}}, {{3, 1}, {5, 3}}, {{5, 3}, {3, 5}}};
  return g;
}

inline cplx value(const std::string &name, const Vec6 &x, const SystemParams &p) {
  return evaluate_catalog(lift_point<cplx>(x), p).at(name);
}

// central difference of a catalog entry along coordinate j
inline cplx fd(const std::string &name, const Vec6 &x, const SystemParams &p, int j, double h) {
  Vec6 a = x, b = x;
  a[j] += h;
  b[j] -= h;
  return (value(name, a, p) - value(name, b, p)) / (2.0 * h);
}

} // namespace kc::test
