// su(2,1) generator basis, structure constants, and Casimir traces.
//
// Conventions: T_1, T_2, T_3, T_8 are the compact Gell-Mann generators
// lambda_a / 2; the coset directions are the antihermitian combinations
// T_4 = i lambda_5 / 2, T_5 = -i lambda_4 / 2, T_6 = i lambda_7 / 2 and
// T_7 = -i lambda_6 / 2. The index metric is
// eta = diag(1,1,1,-1,-1,-1,-1,1) and Tr(T_a T_b) = eta_ab / 2.
//
// Both signs of T_7 give a valid basis (all covariant invariants pass for
// either); what fixes the convention is the shifting-operator anchor: the
// raising combinations E = (T_4 + i T_5)/sqrt(2), (T_6 + i T_7)/sqrt(2)
// must shift the third frame vector so that
// exp(sqrt(2) xi . E) e_3 = (xi_1, xi_2, 1). Only T_7 = -i lambda_6 / 2
// does this; the opposite sign produces a lowering operator in the second
// slot and the chart column degenerates.
//
// Public API uses 1-based generator labels; storage is 0-based.
#pragma once

#include <array>
#include <utility>

#include "ncspin/common.hpp"

namespace ncspin {

enum class T7Sign { minus, plus };

struct GeneratorBasis {
  std::array<Mat3, 8> T;
  std::array<double, 8> eta;
  T7Sign t7;

  // T^a = eta^{aa} T_a (diagonal metric, no sum). 1-based label.
  Mat3 raised(int a) const { return eta[a - 1] * T[a - 1]; }
  const Mat3& gen(int a) const { return T[a - 1]; }

  // Indefinite sesquilinear metric m = diag(-1,-1,1) of the defining rep.
  static Mat3 rep_metric();
};

GeneratorBasis build_candidate(T7Sign sign);

// Residuals of the basis invariants plus the anchor that discriminates the
// two T_7 candidates.
struct BasisCheck {
  double trace_residual;        // Tr(T_a T_b) - eta_ab / 2
  double hermiticity_residual;  // T_1..3, T_8 hermitian; T_4..7 antihermitian
  double pseudoherm_residual;   // m T^dag m - T
  double closure_residual;      // [T_a, T_b] onto the real span of {i T_c}
  double ladder_residual;       // exp(sqrt(2) xi . E) e_3 vs (xi_1, xi_2, 1)
  bool ladder_ok;
};

BasisCheck check_basis(const GeneratorBasis& basis);

// Returns the anchored T_7 = -i lambda_6 / 2 basis after verifying that it,
// and only it, passes the full invariant set. Throws ClosureFailure if the
// selection is not unique (cannot happen for the hard-wired matrices; the
// check is kept as a guard against edits).
GeneratorBasis build_generators();

struct StructureConstants {
  double f[8][8][8];  // [T_a, T_b] = i f_ab^c T_c
  double d[8][8][8];  // {T_a, T_b} = (1/3) eta_ab I + d_ab^c T_c
};

// Trace extraction f_ab^c = -2i Tr([T_a,T_b] T_d) (eta^-1)_dc and the
// symmetric analogue. Throws ClosureFailure if either reconstruction
// misses 1e-10.
StructureConstants structure_constants(const GeneratorBasis& basis);

struct StructureCheck {
  double comm_residual;        // [T_a,T_b] - i f_ab^c T_c
  double anticomm_residual;    // {T_a,T_b} - eta_ab I / 3 - d_ab^c T_c
  double antisym_residual;     // total antisymmetry of eta-lowered f
  double jacobi_residual;      // f f cyclic sum
  double d_symmetry_residual;  // d_ab^c - d_ba^c
};

StructureCheck check_structure(const GeneratorBasis& basis,
                               const StructureConstants& sc);

// (Tr Q^2, Tr Q^3) of a traceless matrix; throws NonTraceless above 1e-10.
std::pair<double, double> casimirs(const Mat3& Q);

// Both-candidate verification summary for reports and the CLI.
struct AlgebraReport {
  BasisCheck minus_check;
  BasisCheck plus_check;
  T7Sign chosen;
  StructureCheck structure;
};

AlgebraReport verify_algebra();

}  // namespace ncspin
