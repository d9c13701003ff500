#pragma once

#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kc/system.hpp"

namespace kc {

struct StepUnderflow : std::runtime_error { using std::runtime_error::runtime_error; };

enum class OrbitStatus { Completed, SingularityApproach };

struct Trajectory {
  Chart chart = Chart::SphericalKC;
  std::vector<double> t;
  std::vector<Vec6> x;
  int steps = 0;
  int rejected = 0;
  double tol = 0.0;
  OrbitStatus status = OrbitStatus::Completed;
};

// stop early (flagged) when r or an angle factor falls below these
struct OrbitFloors {
  double r_min = 1e-3;
  double angle = 1e-4;
};

// dx/dt = (dH/dp, -dH/dq), the gradient taken from a jet of H
Vec6 hamilton_rhs(const Vec6 &x, const SystemParams &p, Chart chart);

double hamiltonian(const Vec6 &x, const SystemParams &p, Chart chart);

// Dormand-Prince 5(4), error per step below tol * (1 + |x|) componentwise
Trajectory integrate(const PhasePoint &x0, const SystemParams &p, double T, double tol, const OrbitFloors &floors = {});

// max over samples of |S(x(t)) - S(x0)| / max(|S(x0)|, 1); spherical chart
double conservation_drift(const std::string &name, const Trajectory &traj, const SystemParams &p);

// every real constant of the motion in the catalog
std::map<std::string, double> drift_table(const Trajectory &traj, const SystemParams &p);

void write_csv(std::ostream &os, const Trajectory &traj);

} // namespace kc
