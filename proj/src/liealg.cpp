#include "ncspin/liealg.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace ncspin {
namespace {

Mat3 unit(int r, int c) {
  Mat3 e = Mat3::Zero();
  e(r, c) = 1.0;
  return e;
}

std::array<Mat3, 8> gell_mann() {
  const double s3 = std::sqrt(3.0);
  std::array<Mat3, 8> lam;
  lam[0] = unit(0, 1) + unit(1, 0);
  lam[1] = -kI * unit(0, 1) + kI * unit(1, 0);
  lam[2] = unit(0, 0) - unit(1, 1);
  lam[3] = unit(0, 2) + unit(2, 0);
  lam[4] = -kI * unit(0, 2) + kI * unit(2, 0);
  lam[5] = unit(1, 2) + unit(2, 1);
  lam[6] = -kI * unit(1, 2) + kI * unit(2, 1);
  lam[7] = (unit(0, 0) + unit(1, 1) - 2.0 * unit(2, 2)) / s3;
  return lam;
}

double max_abs(const Mat3& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

Mat3 GeneratorBasis::rep_metric() {
  Mat3 m = Mat3::Zero();
  m(0, 0) = -1.0;
  m(1, 1) = -1.0;
  m(2, 2) = 1.0;
  return m;
}

GeneratorBasis build_candidate(T7Sign sign) {
  const auto lam = gell_mann();
  GeneratorBasis b;
  b.t7 = sign;
  b.eta = {1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0, 1.0};
  b.T[0] = 0.5 * lam[0];
  b.T[1] = 0.5 * lam[1];
  b.T[2] = 0.5 * lam[2];
  b.T[3] = 0.5 * kI * lam[4];   // T_4 = i lambda_5 / 2
  b.T[4] = -0.5 * kI * lam[3];  // T_5 = -i lambda_4 / 2
  b.T[5] = 0.5 * kI * lam[6];   // T_6 = i lambda_7 / 2
  const Cplx s = (sign == T7Sign::minus) ? -kI : kI;
  b.T[6] = 0.5 * s * lam[5];    // T_7 = -+ i lambda_6 / 2
  b.T[7] = 0.5 * lam[7];
  return b;
}

BasisCheck check_basis(const GeneratorBasis& basis) {
  BasisCheck out{};
  const Mat3 m = GeneratorBasis::rep_metric();

  for (int a = 0; a < 8; ++a) {
    for (int bb = 0; bb < 8; ++bb) {
      const Cplx tr = (basis.T[a] * basis.T[bb]).trace();
      const double want = (a == bb) ? 0.5 * basis.eta[a] : 0.0;
      out.trace_residual = std::max(out.trace_residual, std::abs(tr - want));
    }
    const bool herm = (a <= 2 || a == 7);
    const Mat3 h = basis.T[a].adjoint() - (herm ? 1.0 : -1.0) * basis.T[a];
    out.hermiticity_residual = std::max(out.hermiticity_residual, max_abs(h));
    out.pseudoherm_residual = std::max(
        out.pseudoherm_residual, max_abs(m * basis.T[a].adjoint() * m - basis.T[a]));
  }

  // Closure: every commutator must lie in the real span of {i T_c}.
  for (int a = 0; a < 8; ++a) {
    for (int bb = a + 1; bb < 8; ++bb) {
      const Mat3 comm = basis.T[a] * basis.T[bb] - basis.T[bb] * basis.T[a];
      Mat3 rec = Mat3::Zero();
      for (int c = 0; c < 8; ++c) {
        const Cplx coef = -2.0 * kI * basis.eta[c] * (comm * basis.T[c]).trace();
        out.closure_residual = std::max(out.closure_residual, std::abs(coef.imag()));
        rec += kI * coef.real() * basis.T[c];
      }
      out.closure_residual = std::max(out.closure_residual, max_abs(comm - rec));
    }
  }

  // Shifting anchor: exp(sqrt(2)(xi_1 E_(2) + xi_2 E_(3))) e_3 = (xi_1, xi_2, 1).
  const Mat3 e2 = (basis.T[3] + kI * basis.T[4]) / std::sqrt(2.0);
  const Mat3 e3 = (basis.T[5] + kI * basis.T[6]) / std::sqrt(2.0);
  const Vec2 probes[2] = {Vec2{Cplx(0.3, 0.0), Cplx(-0.2, 0.1)},
                          Vec2{Cplx(0.0, 0.1), Cplx(0.25, 0.0)}};
  for (const Vec2& xi : probes) {
    const Mat3 n = std::sqrt(2.0) * (xi[0] * e2 + xi[1] * e3);
    const Vec3 got = n.exp() * Vec3{0.0, 0.0, 1.0};
    const Vec3 want{xi[0], xi[1], 1.0};
    out.ladder_residual =
        std::max(out.ladder_residual, (got - want).cwiseAbs().maxCoeff());
  }
  out.ladder_ok = out.ladder_residual < 1e-10;
  return out;
}

GeneratorBasis build_generators() {
  GeneratorBasis minus = build_candidate(T7Sign::minus);
  const BasisCheck cm = check_basis(minus);
  const BasisCheck cp = check_basis(build_candidate(T7Sign::plus));
  if (!cm.ladder_ok || cp.ladder_ok)
    throw ClosureFailure("T_7 sign selection is not unique");
  return minus;
}

StructureConstants structure_constants(const GeneratorBasis& basis) {
  StructureConstants sc{};
  double residual = 0.0;
  for (int a = 0; a < 8; ++a) {
    for (int b = 0; b < 8; ++b) {
      const Mat3 comm = basis.T[a] * basis.T[b] - basis.T[b] * basis.T[a];
      const Mat3 anti = basis.T[a] * basis.T[b] + basis.T[b] * basis.T[a];
      Mat3 rec_f = Mat3::Zero();
      Mat3 rec_d = Mat3::Zero();
      for (int c = 0; c < 8; ++c) {
        const Cplx fc = -2.0 * kI * basis.eta[c] * (comm * basis.T[c]).trace();
        const Cplx dc = 2.0 * basis.eta[c] * (anti * basis.T[c]).trace();
        residual = std::max({residual, std::abs(fc.imag()), std::abs(dc.imag())});
        sc.f[a][b][c] = fc.real();
        sc.d[a][b][c] = dc.real();
        rec_f += kI * sc.f[a][b][c] * basis.T[c];
        rec_d += sc.d[a][b][c] * basis.T[c];
      }
      const double eta_ab = (a == b) ? basis.eta[a] : 0.0;
      rec_d += (eta_ab / 3.0) * Mat3::Identity();
      residual = std::max({residual, max_abs(comm - rec_f), max_abs(anti - rec_d)});
    }
  }
  if (residual > 1e-10)
    throw ClosureFailure("structure constant reconstruction residual " +
                         std::to_string(residual));
  return sc;
}

StructureCheck check_structure(const GeneratorBasis& basis,
                               const StructureConstants& sc) {
  StructureCheck out{};
  for (int a = 0; a < 8; ++a) {
    for (int b = 0; b < 8; ++b) {
      const Mat3 comm = basis.T[a] * basis.T[b] - basis.T[b] * basis.T[a];
      const Mat3 anti = basis.T[a] * basis.T[b] + basis.T[b] * basis.T[a];
      Mat3 rec_f = Mat3::Zero();
      Mat3 rec_d = Mat3::Zero();
      for (int c = 0; c < 8; ++c) {
        rec_f += kI * sc.f[a][b][c] * basis.T[c];
        rec_d += sc.d[a][b][c] * basis.T[c];
        out.d_symmetry_residual = std::max(out.d_symmetry_residual,
                                           std::abs(sc.d[a][b][c] - sc.d[b][a][c]));
        // eta-lowered f must be totally antisymmetric.
        const double fab = sc.f[a][b][c] * basis.eta[c];
        const double fba = sc.f[b][a][c] * basis.eta[c];
        const double fcb = sc.f[a][c][b] * basis.eta[b];
        out.antisym_residual = std::max({out.antisym_residual,
                                         std::abs(fab + fba), std::abs(fab + fcb)});
      }
      const double eta_ab = (a == b) ? basis.eta[a] : 0.0;
      rec_d += (eta_ab / 3.0) * Mat3::Identity();
      out.comm_residual = std::max(out.comm_residual, max_abs(comm - rec_f));
      out.anticomm_residual = std::max(out.anticomm_residual, max_abs(anti - rec_d));
    }
  }
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b)
      for (int c = 0; c < 8; ++c)
        for (int d = 0; d < 8; ++d) {
          double cyc = 0.0;
          for (int e = 0; e < 8; ++e)
            cyc += sc.f[a][b][e] * sc.f[e][c][d] + sc.f[b][c][e] * sc.f[e][a][d] +
                   sc.f[c][a][e] * sc.f[e][b][d];
          out.jacobi_residual = std::max(out.jacobi_residual, std::abs(cyc));
        }
  return out;
}

std::pair<double, double> casimirs(const Mat3& Q) {
  if (std::abs(Q.trace()) > 1e-10)
    throw NonTraceless("casimirs: |Tr Q| = " + std::to_string(std::abs(Q.trace())));
  const Mat3 Q2 = Q * Q;
  return {Q2.trace().real(), (Q2 * Q).trace().real()};
}

AlgebraReport verify_algebra() {
  AlgebraReport rep;
  const GeneratorBasis minus = build_candidate(T7Sign::minus);
  rep.minus_check = check_basis(minus);
  rep.plus_check = check_basis(build_candidate(T7Sign::plus));
  if (rep.minus_check.ladder_ok == rep.plus_check.ladder_ok)
    throw ClosureFailure("T_7 sign selection is not unique");
  rep.chosen = rep.minus_check.ladder_ok ? T7Sign::minus : T7Sign::plus;
  const GeneratorBasis chosen = build_candidate(rep.chosen);
  rep.structure = check_structure(chosen, structure_constants(chosen));
  return rep;
}

}  // namespace ncspin
