// Coadjoint-orbit geometry: SU(2,1) group elements, the constraint system
// and its first/second-class split, the CP(1,1) and flag coordinate charts,
// Kahler potential, metric and symplectic form.
//
// Column layout of a group element is (beta, gamma, alpha): the chart column
// alpha has m-norm +1 and therefore must occupy the +1 slot of
// m = diag(-1,-1,1). With that layout the identity matrix is the chart
// origin. The reference element is i diag(x_1, x_2, x_3) with
// x_3 = -(x_1 + x_2), so the distinguished weight x_3 pairs with alpha.
#pragma once

#include <array>
#include <tuple>
#include <vector>

#include "ncspin/common.hpp"

namespace ncspin {

enum class Chart { CP11, FLAG };

// Chart point. CP11 requires |xi_1|^2 + |xi_2|^2 < 1. FLAG carries the
// extra coordinate xi_3 and additionally requires
// 1 + |xi_3|^2 - |xi_1 + xi_2 xi_3|^2 > 0, which is exactly the condition
// that the associated beta column is normalizable (see kahler_potential).
struct OrbitPoint {
  Chart chart = Chart::CP11;
  Vec2 xi = Vec2::Zero();
  Cplx xi3{0.0, 0.0};

  static OrbitPoint cp11(const Vec2& xi);
  static OrbitPoint flag(const Vec2& xi, Cplx xi3);

  double s12() const { return std::norm(xi[0]) + std::norm(xi[1]); }
  double flag_arg2() const {
    return 1.0 + std::norm(xi3) - std::norm(xi[0] + xi[1] * xi3);
  }
  void validate() const;  // throws DomainViolation
};

// Antihermitian reference element i diag(x_1, x_2, x_3); x_3 is always
// computed from the zero-sum condition, never supplied.
struct ReferenceElement {
  double x1, x2, x3;
  static ReferenceElement from_pair(double x1, double x2) {
    return {x1, x2, -(x1 + x2)};
  }
  Mat3 matrix() const;
};

// Orbit data: reference weights plus the stabilizer block partition.
struct OrbitSpec {
  ReferenceElement x;
  std::vector<int> partition;
  double J1() const { return x.x1 + 0.5 * x.x2; }
  double J2() const { return x.x2 + 0.5 * x.x1; }
};

// Thin wrapper: no validation on construction (the constraint functions are
// meant to be evaluated off the group as well); residual accessors below.
struct GroupElement {
  Mat3 g;
  Vec3 beta() const { return g.col(0); }
  Vec3 gamma() const { return g.col(1); }
  Vec3 alpha() const { return g.col(2); }
  double unitarity_residual() const;  // max |g^dag m g - m|
  Cplx det() const { return g.determinant(); }
};

// (psi_1, psi_2, psi_3, phi_1, phi_2, phi_3): m-norm residuals of
// (alpha, beta, gamma) against (+1, -1, -1) followed by the pairings
// <alpha|beta>, <alpha|gamma>, <beta|gamma>. All six vanish iff
// g^dag m g = m.
std::array<Cplx, 6> constraint_residuals(const GroupElement& ge);

// Brackets of the embedded (alpha, beta) constraint system, evaluated with
// the flat bracket at a fixed point of the norm surface
// <alpha|alpha> = <beta|beta> = 1. (The full surface including phi = 0 is
// empty, the signature of m forbids two orthogonal positive columns, but
// the bracket values depend only on the norms.)
struct ConstraintBrackets {
  Cplx phi_phibar;  // -(i/2)(1/J1 - 1/J2) on the norm surface
  Cplx psi1_phi;    // ( i/2J1) phi
  Cplx psi2_phi;    // (-i/2J2) phi
  Cplx phi_value;
};
ConstraintBrackets constraint_brackets(const OrbitSpec& spec);

// (n_first, n_second, reduced phase-space dimension) for rank 2.
// Throws DegenerateWeights when the weights contradict the partition and
// DomainViolation for partitions outside rank 2.
std::tuple<int, int, int> classify_constraints(const OrbitSpec& spec);

enum class GaugeSeed { e1, e2 };

OrbitPoint coords_from_group(const GroupElement& ge, Chart chart);

// CP11 reconstruction: alpha from the chart column, beta by metric
// Gram-Schmidt from the gauge seed, gamma from the m-weighted conjugate
// cross product that makes det g = +1.
GroupElement group_from_coords(const OrbitPoint& p, const OrbitSpec& spec,
                               GaugeSeed seed = GaugeSeed::e1);

double kahler_potential(const OrbitPoint& p, const OrbitSpec& spec);

// CP11 chart tensors. metric is the holomorphic-first mixed Hessian of the
// potential; inverse satisfies metric * inverse = I exactly in exact
// arithmetic.
Mat2 metric(const OrbitPoint& p, double J);
Mat2 inverse_metric(const OrbitPoint& p, double J);
Mat2 symplectic_form(const OrbitPoint& p, double J);  // Omega_ab = i g_ab

}  // namespace ncspin
