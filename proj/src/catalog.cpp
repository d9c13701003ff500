#include "kc/catalog.hpp"

namespace kc {

std::vector<ObservableInfo> observables(const SystemParams &p) {
  const bool k11 = p.k1 == RationalK{1, 1} && p.k2 == RationalK{1, 1};
  auto deg = [&](int d) { return k11 ? d : -1; };
  std::vector<ObservableInfo> v = {
      {"H", true, 2},
      {"L2", true, 2},
      {"L3", true, 2},
      {"J_plus", false},
      {"J_minus", false},
      {"K_plus", false},
      {"K_minus", false},
  };
  if (p.kc4()) {
    v.push_back({"J1", true, deg(5)});
    v.push_back({"J2", true, deg(6)});
    v.push_back({"K1", true, deg(3)});
    v.push_back({"K2", true, deg(4)});
    v.push_back({"K0", true, deg(2)});
    v.push_back({"J0", true, deg(4)});
  } else {
    v.push_back({"J1", true});
    v.push_back({"J2", true});
    v.push_back({"K1", true});
    v.push_back({"K2", true});
    v.push_back({"K0", true});
    v.push_back({"J_plus_ratio", false});
  }
  if (p.euclidean()) {
    for (const char *n : {"I_xy", "I_xz", "I_yz", "J0_prime", "J0_dprime", "L3_prime", "K0_prime", "S_closure"})
      v.push_back({n, true});
    v.push_back({"M3", true, -1, p.delta == 0.0});
  }
  return v;
}

} // namespace kc
