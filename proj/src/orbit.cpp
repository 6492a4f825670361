#include "ncspin/orbit.hpp"

#include <cmath>

namespace ncspin {
namespace {

// <u|v> under m = diag(-1,-1,1).
Cplx mdot(const Vec3& u, const Vec3& v) {
  return -std::conj(u[0]) * v[0] - std::conj(u[1]) * v[1] + std::conj(u[2]) * v[2];
}

// Observable of the embedded (alpha, beta) system: gradients with respect to
// the independent variables (alpha_i, alphabar^i, beta_i, betabar^i), where
// the barred variables carry the raised (m-contracted) index.
struct FlatObs {
  Vec3 d_alpha = Vec3::Zero();
  Vec3 d_alphabar = Vec3::Zero();
  Vec3 d_beta = Vec3::Zero();
  Vec3 d_betabar = Vec3::Zero();
};

// Bilinear cross product. (Eigen's cross() conjugates complex components.)
Vec3 cross3(const Vec3& u, const Vec3& v) {
  return Vec3{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
              u[0] * v[1] - u[1] * v[0]};
}

// Flat bracket of the embedded system. The sector normalizations J1, J2 are
// the ones induced on the norm surface by the reduced chart bracket.
Cplx flat_bracket(const FlatObs& F, const FlatObs& G, double J1, double J2) {
  Cplx sa{}, sb{};
  for (int i = 0; i < 3; ++i) {
    sa += F.d_alphabar[i] * G.d_alpha[i] - G.d_alphabar[i] * F.d_alpha[i];
    sb += F.d_betabar[i] * G.d_beta[i] - G.d_betabar[i] * F.d_beta[i];
  }
  return -kI / (2.0 * J1) * sa - kI / (2.0 * J2) * sb;
}

}  // namespace

OrbitPoint OrbitPoint::cp11(const Vec2& xi) {
  OrbitPoint p;
  p.chart = Chart::CP11;
  p.xi = xi;
  p.validate();
  return p;
}

OrbitPoint OrbitPoint::flag(const Vec2& xi, Cplx xi3) {
  OrbitPoint p;
  p.chart = Chart::FLAG;
  p.xi = xi;
  p.xi3 = xi3;
  p.validate();
  return p;
}

void OrbitPoint::validate() const {
  if (!(s12() < 1.0))
    throw DomainViolation("chart ball: |xi_1|^2 + |xi_2|^2 = " +
                          std::to_string(s12()));
  if (chart == Chart::FLAG && !(flag_arg2() > 0.0))
    throw DomainViolation("flag chart: 1 + |xi_3|^2 - |xi_1 + xi_2 xi_3|^2 = " +
                          std::to_string(flag_arg2()));
}

Mat3 ReferenceElement::matrix() const {
  Mat3 m = Mat3::Zero();
  m(0, 0) = kI * x1;
  m(1, 1) = kI * x2;
  m(2, 2) = kI * x3;
  return m;
}

double GroupElement::unitarity_residual() const {
  Mat3 m = Mat3::Zero();
  m(0, 0) = -1.0;
  m(1, 1) = -1.0;
  m(2, 2) = 1.0;
  return (g.adjoint() * m * g - m).cwiseAbs().maxCoeff();
}

std::array<Cplx, 6> constraint_residuals(const GroupElement& ge) {
  const Vec3 a = ge.alpha(), b = ge.beta(), c = ge.gamma();
  return {mdot(a, a) - 1.0, mdot(b, b) + 1.0, mdot(c, c) + 1.0,
          mdot(a, b), mdot(a, c), mdot(b, c)};
}

ConstraintBrackets constraint_brackets(const OrbitSpec& spec) {
  const double J1 = spec.J1(), J2 = spec.J2();
  if (std::abs(J1) < 1e-12 || std::abs(J2) < 1e-12)
    throw DomainViolation("constraint brackets: vanishing weight J1 or J2");

  // Fixed point of the norm surface <alpha|alpha> = <beta|beta> = 1. phi
  // itself does not vanish here; no point has phi = 0 (signature), and the
  // bracket values depend only on the norms.
  const double tau = 0.7;
  const Vec3 alpha{0.0, 0.0, 1.0};
  const Vec3 beta{std::sinh(tau), 0.0, std::cosh(tau)};
  const Vec3 m{-1.0, -1.0, 1.0};
  const Vec3 alphabar_up = m.cwiseProduct(alpha.conjugate());
  const Vec3 betabar_up = m.cwiseProduct(beta.conjugate());

  // phi = alphabar^i beta_i, phibar = betabar^i alpha_i,
  // psi1 = alphabar^i alpha_i - 1, psi2 = betabar^i beta_i - 1.
  FlatObs phi, phibar, psi1, psi2;
  phi.d_alphabar = beta;
  phi.d_beta = alphabar_up;
  phibar.d_alpha = betabar_up;
  phibar.d_betabar = alpha;
  psi1.d_alpha = alphabar_up;
  psi1.d_alphabar = alpha;
  psi2.d_beta = betabar_up;
  psi2.d_betabar = beta;

  ConstraintBrackets out;
  out.phi_phibar = flat_bracket(phi, phibar, J1, J2);
  out.psi1_phi = flat_bracket(psi1, phi, J1, J2);
  out.psi2_phi = flat_bracket(psi2, phi, J1, J2);
  Cplx pv{};
  for (int i = 0; i < 3; ++i) pv += alphabar_up[i] * beta[i];
  out.phi_value = pv;
  return out;
}

std::tuple<int, int, int> classify_constraints(const OrbitSpec& spec) {
  int sum = 0;
  for (int n : spec.partition) {
    if (n < 1) throw DomainViolation("partition entries must be positive");
    sum += n;
  }
  if (sum != 2 || spec.partition.size() > 2)
    throw DomainViolation("partition outside rank 2");

  const bool equal_weights = std::abs(spec.x.x1 - spec.x.x2) <= 1e-10;
  const bool block = spec.partition.size() == 1;  // {2} vs {1,1}
  if (!block && equal_weights)
    throw DegenerateWeights("partition {1,1} needs x1 != x2");
  if (block && !equal_weights)
    throw DegenerateWeights("partition {2} needs x1 = x2");

  int shuffle = 0;  // sum of n_i (n_i - 1)
  for (int n : spec.partition) shuffle += n * (n - 1);
  const int n_first = 2 + shuffle;
  const int n_second = 2 - shuffle;
  const int dim = 12 - 2 * n_first - n_second;

  // Confirm the split numerically: the phi bracket carries the second-class
  // obstruction and must match its closed form on the norm surface.
  const ConstraintBrackets cb = constraint_brackets(spec);
  const Cplx expected =
      -kI / 2.0 * (1.0 / spec.J1() - 1.0 / spec.J2());
  if (std::abs(cb.phi_phibar - expected) >
      1e-10 * std::max(1.0, std::abs(expected)))
    throw NcspinError("constraint bracket disagrees with its closed form");
  // |{phi,phibar}| = |x1 - x2| / (4 |J1 J2|): the same separating threshold
  // as the degenerate-weights gate, in bracket units.
  const double split = 0.25e-10 / std::abs(spec.J1() * spec.J2());
  if ((std::abs(cb.phi_phibar) > split) != (n_second == 2))
    throw NcspinError("numeric class split disagrees with the counting");

  return {n_first, n_second, dim};
}

OrbitPoint coords_from_group(const GroupElement& ge, Chart chart) {
  const Vec3 a = ge.alpha();
  if (std::abs(a[2]) <= 1e-8)
    throw ChartSingularity("alpha_3 vanishes; point off the chart");
  const Vec2 xi{a[0] / a[2], a[1] / a[2]};
  if (chart == Chart::CP11) return OrbitPoint::cp11(xi);
  const Vec3 b = ge.beta();
  if (std::abs(b[0]) <= 1e-8)
    throw ChartSingularity("beta_1 vanishes; point off the flag chart");
  return OrbitPoint::flag(xi, std::conj(b[1] / b[0]));
}

GroupElement group_from_coords(const OrbitPoint& p, const OrbitSpec& spec,
                               GaugeSeed seed) {
  p.validate();
  if (p.chart != Chart::CP11)
    throw DomainViolation("group reconstruction is defined on the CP11 chart");
  if (!(spec.J1() > 0.0))
    throw DomainViolation("CP11 runs require J1 > 0");

  const double a3 = 1.0 / std::sqrt(1.0 - p.s12());
  const Vec3 alpha{p.xi[0] * a3, p.xi[1] * a3, a3};

  auto gram_schmidt = [&](const Vec3& sv) -> std::pair<Vec3, double> {
    const Vec3 u = sv - alpha * mdot(alpha, sv);
    return {u, mdot(u, u).real()};
  };
  const Vec3 seeds[2] = {Vec3{1.0, 0.0, 0.0}, Vec3{0.0, 1.0, 0.0}};
  const int first = (seed == GaugeSeed::e1) ? 0 : 1;
  auto [u, nu] = gram_schmidt(seeds[first]);
  if (std::abs(nu) < 1e-8) {
    // Unreachable for a valid alpha (the m-orthocomplement of a +1 column is
    // negative definite, |nu| >= 1); kept as a guard for degenerate input.
    std::tie(u, nu) = gram_schmidt(seeds[1 - first]);
  }
  const Vec3 beta = u / std::sqrt(-nu);

  // gamma_i = -m_i eps_ijk conj(alpha_j) conj(beta_k): the unique completion
  // with g^dag m g = m and det g = +1.
  const Vec3 m{-1.0, -1.0, 1.0};
  const Vec3 gamma = (-m.cwiseProduct(cross3(alpha, beta).conjugate())).eval();

  GroupElement ge;
  ge.g.col(0) = beta;
  ge.g.col(1) = gamma;
  ge.g.col(2) = alpha;
  return ge;
}

double kahler_potential(const OrbitPoint& p, const OrbitSpec& spec) {
  p.validate();
  if (p.chart == Chart::CP11) {
    if (!(spec.J1() > 0.0)) throw DomainViolation("CP11 potential needs J1 > 0");
    return -2.0 * spec.J1() * std::log(1.0 - p.s12());
  }
  return -2.0 * spec.J1() * std::log(1.0 - p.s12()) +
         2.0 * spec.J2() * std::log(p.flag_arg2());
}

Mat2 metric(const OrbitPoint& p, double J) {
  p.validate();
  if (!(J > 0.0)) throw DomainViolation("metric needs J > 0");
  const double oms = 1.0 - p.s12();
  Mat2 g;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const double delta = (a == b) ? 1.0 : 0.0;
      g(a, b) = 2.0 * J * (oms * delta + std::conj(p.xi[a]) * p.xi[b]) / (oms * oms);
    }
  return g;
}

Mat2 inverse_metric(const OrbitPoint& p, double J) {
  p.validate();
  if (!(J > 0.0)) throw DomainViolation("metric needs J > 0");
  const double oms = 1.0 - p.s12();
  Mat2 gi;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const double delta = (a == b) ? 1.0 : 0.0;
      gi(a, b) = oms * (delta - std::conj(p.xi[a]) * p.xi[b]) / (2.0 * J);
    }
  return gi;
}

Mat2 symplectic_form(const OrbitPoint& p, double J) { return kI * metric(p, J); }

}  // namespace ncspin
