// Antiholomorphic quantization on the chart: states are polynomials in
// (xibar_1, xibar_2) truncated at a total degree, operators are first-order
// differential operators assembled from the same chart blocks as the
// classical components, and the reproducing kernel (1 - xibar'.xi)^{-2J}
// carries the inner product weights h_mn = Gamma(2J) m! n! / Gamma(2J+m+n).
//
// The operator normalization is the doubled one: with it the commutators
// close as [Q_a, Q_b] = -2i f_ab^c Q_c (verify_operator_algebra measures the
// factor against the reference i f_ab^c Q_c and reports sign -1, scale 2),
// and the Cartan spectra are integral: Q_3 has eigenvalue (-m + n) and Q_8
// has -sqrt(3)(m + n) on the monomial xibar_1^m xibar_2^n.
//
// Truncation at the top degree is recorded in a non-fatal `truncated` flag,
// never thrown.
#pragma once

#include <Eigen/Dense>

#include "ncspin/liealg.hpp"

namespace ncspin {

// Total-degree graded monomial order: index of xibar_1^m xibar_2^n.
inline int monomial_index(int m, int n) { return (m + n) * (m + n + 1) / 2 + n; }
inline int basis_dim(int degree) { return (degree + 1) * (degree + 2) / 2; }

struct PolyState {
  double J = 1.0;
  int degree = 0;
  Eigen::VectorXcd coeffs;  // basis_dim(degree) entries, monomial_index order
  bool truncated = false;
};

struct OperatorMatrix {
  int a = 0;  // generator label 1..8
  double J = 1.0;
  int degree = 0;
  Eigen::MatrixXcd mat;
  bool truncated = false;  // a nonzero coefficient fell off the top degree
};

OperatorMatrix build_operator(int a, double J, int degree,
                              const GeneratorBasis& basis);

// Gram weight h_mn by the ratio recurrence (no special functions).
double gram_diagonal(double J, int m, int n);

// <psi|psi> = sum_mn h_mn |c_mn|^2.
double gram_norm_sq(const PolyState& psi);

// max |G H - (G H)^dag| with G the diagonal Gram matrix: zero exactly for
// operators hermitian in the kernel inner product (the compact block).
double gram_hermiticity_residual(const OperatorMatrix& op);

struct OperatorClosureReport {
  double max_residual = 0.0;
  int sign = 0;        // matched factor: [Q_a, Q_b] = sign * scale * i f_ab^c Q_c
  double scale = 0.0;  // from {1, 2, 1/2}
  int degree = 0;
  double J = 0.0;
};

// Closes every commutator pair on the structure constants over the interior
// columns (source degree <= degree - 2, where truncation cannot leak in).
// Throws ClosureFailure when no factor matches to 1e-10.
OperatorClosureReport verify_operator_algebra(const GeneratorBasis& basis,
                                              const StructureConstants& sc,
                                              double J, int degree);

// Reproducing kernel (1 - xibar'.xi)^{-2J}; xibar_prime is passed already
// conjugated and the pairing xibar'.xi is bilinear. Principal branch; throws
// BranchViolation on the cut (base <= 0 within tolerance).
Cplx kernel(const Vec2& xibar_prime, const Vec2& xi, double J);

struct QuantumHamiltonian {
  Mat8 c2 = Mat8::Zero();  // real symmetric, acts as sum c2_ab Q_a Q_b
  Vec8 c1 = Vec8::Zero();
  void validate() const;
  bool cartan_only() const;  // c2 = 0 and c1 supported on {3, 8}
};

// exp(-i H t) psi0. Cartan Hamiltonians evolve by exact diagonal phases read
// off the built operators; anything else goes through a dense matrix
// exponential on the truncated space.
PolyState evolve(const QuantumHamiltonian& h, const PolyState& psi0, double t,
                 const GeneratorBasis& basis);

// K_t(xibar', xi) = (1 - z_1 e^{i w_1 t} - z_2 e^{i w_2 t})^{-2J} with
// z_a = xibar'_a xi_a: the exact propagator of the Cartan flow. Satisfies
// i dK/dt = -(w_1 xibar'_1 d/dxibar'_1 + w_2 xibar'_2 d/dxibar'_2) K.
Cplx propagator_closed_form(const Vec2& xibar_prime, const Vec2& xi, double w1,
                            double w2, double t, double J);

// Same matrix element through the truncated evolution of the kernel
// expansion. Throws ConvergenceFailure when the degree cannot push the
// series tail below 1e-12 for the given points.
Cplx propagator_numeric(const Vec2& xibar_prime, const Vec2& xi, double w1,
                        double w2, double t, double J, int degree,
                        const GeneratorBasis& basis);

}  // namespace ncspin
