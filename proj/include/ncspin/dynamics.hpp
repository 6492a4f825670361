// Hamiltonian flows of quadratic spin Hamiltonians H = q^T c2 q + c1 . q on
// the chart, integrated with an embedded Dormand-Prince 5(4) pair. Cartan
// Hamiltonians (c2 = 0, c1 supported on the labels 3 and 8) generate exact
// torus rotations xi_a(t) = xi_a(0) exp(-i w_a t) with
//   w_1 = (c_3 + sqrt(3) c_8) / 2,   w_2 = (-c_3 + sqrt(3) c_8) / 2,
// used as the reference solution.
#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "ncspin/liealg.hpp"
#include "ncspin/orbit.hpp"
#include "ncspin/spin.hpp"

namespace ncspin {

struct HamiltonianSpec {
  Mat8 c2 = Mat8::Zero();  // real symmetric, raised-label indices
  Vec8 c1 = Vec8::Zero();
  double J = 1.0;
  void validate() const;   // symmetry of c2, J > 0
  bool is_torus() const;   // c2 = 0 and c1 supported on {3, 8}
};

double eval_hamiltonian(const HamiltonianSpec& h, const Vec8& q);

// xidot_a = {xi_a, H}: closed form through the spin gradients.
Vec2 eom_rhs(const HamiltonianSpec& h, const OrbitPoint& p,
             const GeneratorBasis& basis);

std::pair<double, double> torus_frequencies(const Vec8& c1);
Vec2 exact_torus_solution(const Vec8& c1, const Vec2& xi0, double t);

struct TrajectoryPoint {
  double t;
  Vec2 xi;
  double energy;
  double casimir;
};
struct Trajectory {
  std::vector<TrajectoryPoint> points;
};

// Adaptive integration over [0, t_end] with atol = rtol = tol,
// tol in [1e-12, 1e-4]. Records every accepted step. Throws DomainExit when
// an accepted point reaches |xi|^2 >= 1 - 1e-10 and StepFailure when the
// controller underflows the step floor 1e-13 max(1, t_end).
Trajectory integrate(const HamiltonianSpec& h, const Vec2& xi0, double t_end,
                     double tol, const GeneratorBasis& basis);

// Header t,re_xi1,im_xi1,re_xi2,im_xi2,energy,casimir; 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& tr);

}  // namespace ncspin
