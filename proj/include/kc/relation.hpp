#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "kc/system.hpp"

namespace kc {

struct FitFailure : std::runtime_error { using std::runtime_error::runtime_error; };

// exponents of (H, L2, L3, K0)
using Monomial = std::array<int, 4>;
using Poly4 = std::map<Monomial, double>;

double eval_poly(const Poly4 &a, double h, double l2, double l3, double k0);
std::string monomial_str(const Monomial &m);

// A1 (J0')^2 + A2 J0' J0 + A3 J0^2 + A4 J0' + A5 J0 + A6 = 0, A_j polynomial in (H, L2, L3, K0)
struct Order12Relation {
  SystemParams params;
  std::array<Poly4, 6> A;
  int unknowns = 0;
  int fit_points = 0;
  double fit_residual = 0.0;        // max |fit - G| / max(|G|, 1) on the fitting set
  double holdout_residual = 0.0;    // same on fresh generator values
  double negative_control = 0.0;    // coefficients zeroed, fresh generator values
  double phase_residual = 0.0;      // relation at real phase points, cancellation-scaled
  double a1_mismatch = 0.0;         // max coefficient difference A1 + 4Q
};

// G = (J1^2 K1^2 - (J1 K1)^2) / Q with J1^2, K1^2, J1 K1 written through the generators
double order12_target(const SystemParams &p, double h, double l2, double l3, double k0, double j0, double j0p);

Order12Relation derive_order12_relation(const SystemParams &p, std::uint64_t seed = 7, int fit_points = 1200,
                                        int holdout_points = 100);

double relation_value(const Order12Relation &r, double h, double l2, double l3, double k0, double j0, double j0p);

Poly4 minus_four_q(const SystemParams &p);

// printed A2..A6 at the numeric parameters of p (index 0 = A1 = -4Q)
std::array<Poly4, 6> printed_order12_coefficients(const SystemParams &p);

struct CoefficientDiff {
  int index = 0;  // 1..6
  Monomial m{};
  double printed = 0.0, derived = 0.0;
};

struct RelationDiff {
  std::array<bool, 6> match{};
  std::vector<CoefficientDiff> entries;  // only monomials that disagree
};

RelationDiff diff_printed(const Order12Relation &r, double tol = 1e-8);

} // namespace kc
