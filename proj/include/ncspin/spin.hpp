// Classical noncompact spin on the CP(1,1) chart: components Q^a of the
// moment map, their Wirtinger gradients, the chart Poisson bracket, and the
// matrix realization i g x g^-1 on the equal-weight orbit.
//
// Conventions fixed here and verified by verify_spin_algebra:
//   {F, G} = i sum g^{mu nu} (dbar_mu F d_nu G - dbar_mu G d_nu F)
// with g^{mu nu} the inverse chart metric, under which the components close
// as {Q^a, Q^b} = +f_ab^c Q^c (the verifier tries -f first and reports the
// matching sign). The quadratic invariant sum_a eta_a (Q^a)^2 equals
// 4 J^2 / 3 everywhere on the chart.
#pragma once

#include <cstdint>
#include <string>

#include "ncspin/liealg.hpp"
#include "ncspin/orbit.hpp"

namespace ncspin {

// Affine-chart blocks of the raised generator eta_a T_a: the 2x2 corner A,
// the third column b, the third row c and the corner entry d.
struct ChartBlocks {
  Mat2 A;
  Vec2 b;
  Vec2 c;
  Cplx d;
};
ChartBlocks chart_blocks(const GeneratorBasis& basis, int a);  // a in 1..8

// Q^a(xi) = -(2J/(1-s)) (d + c.xi - xibar.b - xibar^T A xi), s = |xi|^2.
Vec8 spin_components(const OrbitPoint& p, double J, const GeneratorBasis& basis);

// Wirtinger gradient of one component (holomorphic slot d, antiholomorphic
// slot dbar); closed forms, no differencing.
struct SpinGradient {
  Vec2 d = Vec2::Zero();
  Vec2 dbar = Vec2::Zero();
};
SpinGradient spin_gradient(const OrbitPoint& p, double J,
                           const GeneratorBasis& basis, int a);

// Chart Poisson bracket of two observables given their gradients at p.
Cplx poisson_bracket(const SpinGradient& F, const SpinGradient& G,
                     const OrbitPoint& p, double J);

// X^a_alpha = {xi_alpha, Q^a}: closed form of the Hamiltonian vector field
// of Q^a. Contraction with the symplectic form gives +dQ^a.
Vec2 hamiltonian_vector_field(int a, const OrbitPoint& p,
                              const GeneratorBasis& basis);

// sum_a eta_a q_a^2, the quadratic orbit invariant.
double casimir_quadratic(const Vec8& q, const GeneratorBasis& basis);

// Matrix realization i g x g^-1 through the reconstructed group element;
// defined on the equal-weight orbit (J = spec.J1()). The trace extraction
// Tr(Q T^a) returns the negative of spin_components (measured convention,
// offset zero); both gauges give the same matrix.
Mat3 spin_matrix(const OrbitPoint& p, const OrbitSpec& spec,
                 GaugeSeed seed = GaugeSeed::e1);
Vec8 spin_components_from_matrix(const Mat3& Q, const GeneratorBasis& basis);

struct ClosureReport {
  double max_residual = 0.0;
  int samples = 0;
  std::string sign_convention;  // "+f" or "-f"
  double casimir_value = 0.0;
};

// Samples random chart points, closes {Q^a, Q^b} against f_ab^c Q^c for a
// global sign (-f tried first), and checks the quadratic invariant. Throws
// ClosureFailure when neither sign closes to 1e-10.
ClosureReport verify_spin_algebra(const GeneratorBasis& basis,
                                  const StructureConstants& sc, double J,
                                  int samples = 100,
                                  std::uint64_t seed = kDefaultSeed);

}  // namespace ncspin
