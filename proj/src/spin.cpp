#include "ncspin/spin.hpp"

#include <cmath>

namespace ncspin {

ChartBlocks chart_blocks(const GeneratorBasis& basis, int a) {
  const Mat3 R = basis.raised(a);
  ChartBlocks cb;
  cb.A = R.topLeftCorner<2, 2>();
  cb.b = R.block<2, 1>(0, 2);
  cb.c = Vec2{R(2, 0), R(2, 1)};
  cb.d = R(2, 2);
  return cb;
}

namespace {

// N_a = d + c.xi - xibar.b - xibar^T A xi = <v|m T^a v> for v = (xi_1, xi_2, 1).
Cplx moment_numerator(const ChartBlocks& cb, const Vec2& xi) {
  Cplx n = cb.d;
  for (int v = 0; v < 2; ++v) {
    n += cb.c[v] * xi[v] - std::conj(xi[v]) * cb.b[v];
    for (int u = 0; u < 2; ++u) n -= std::conj(xi[u]) * cb.A(u, v) * xi[v];
  }
  return n;
}

}  // namespace

Vec8 spin_components(const OrbitPoint& p, double J, const GeneratorBasis& basis) {
  p.validate();
  if (!(J > 0.0)) throw DomainViolation("spin components need J > 0");
  const double C = 2.0 * J / (1.0 - p.s12());
  Vec8 q;
  for (int a = 1; a <= 8; ++a) {
    // m T^a is hermitian, so the numerator is real up to roundoff.
    q[a - 1] = -C * moment_numerator(chart_blocks(basis, a), p.xi).real();
  }
  return q;
}

SpinGradient spin_gradient(const OrbitPoint& p, double J,
                           const GeneratorBasis& basis, int a) {
  p.validate();
  if (!(J > 0.0)) throw DomainViolation("spin gradient needs J > 0");
  const ChartBlocks cb = chart_blocks(basis, a);
  const double oms = 1.0 - p.s12();
  const double C = 2.0 * J / oms;
  const double q = -C * moment_numerator(cb, p.xi).real();
  SpinGradient g;
  for (int v = 0; v < 2; ++v) {
    Cplx at = cb.c[v], abt = cb.b[v];
    for (int u = 0; u < 2; ++u) {
      at -= cb.A(u, v) * std::conj(p.xi[u]);  // (A^T xibar)_v: first index summed
      abt += cb.A(v, u) * p.xi[u];
    }
    g.d[v] = std::conj(p.xi[v]) / oms * q - C * at;
    g.dbar[v] = p.xi[v] / oms * q + C * abt;
  }
  return g;
}

Cplx poisson_bracket(const SpinGradient& F, const SpinGradient& G,
                     const OrbitPoint& p, double J) {
  const Mat2 gi = inverse_metric(p, J);
  Cplx acc{};
  for (int u = 0; u < 2; ++u)
    for (int v = 0; v < 2; ++v)
      acc += gi(u, v) * (F.dbar[u] * G.d[v] - G.dbar[u] * F.d[v]);
  return kI * acc;
}

Vec2 hamiltonian_vector_field(int a, const OrbitPoint& p,
                              const GeneratorBasis& basis) {
  p.validate();
  const ChartBlocks cb = chart_blocks(basis, a);
  const Cplx cdotxi = cb.c[0] * p.xi[0] + cb.c[1] * p.xi[1];
  Vec2 X;
  for (int v = 0; v < 2; ++v) {
    Cplx axi{};
    for (int u = 0; u < 2; ++u) axi += cb.A(v, u) * p.xi[u];
    X[v] = -kI * (cb.b[v] + axi - cb.d * p.xi[v] - cdotxi * p.xi[v]);
  }
  return X;
}

double casimir_quadratic(const Vec8& q, const GeneratorBasis& basis) {
  double acc = 0.0;
  for (int a = 0; a < 8; ++a) acc += basis.eta[a] * q[a] * q[a];
  return acc;
}

Mat3 spin_matrix(const OrbitPoint& p, const OrbitSpec& spec, GaugeSeed seed) {
  const GroupElement ge = group_from_coords(p, spec, seed);
  return kI * ge.g * spec.x.matrix() * ge.g.inverse();
}

Vec8 spin_components_from_matrix(const Mat3& Q, const GeneratorBasis& basis) {
  Vec8 q;
  for (int a = 1; a <= 8; ++a) q[a - 1] = (Q * basis.raised(a)).trace().real();
  return q;
}

ClosureReport verify_spin_algebra(const GeneratorBasis& basis,
                                  const StructureConstants& sc, double J,
                                  int samples, std::uint64_t seed) {
  auto rng = make_rng(seed);
  double worst_minus = 0.0, worst_plus = 0.0;
  double casimir = 0.0;
  const double target = 4.0 * J * J / 3.0;
  for (int n = 0; n < samples; ++n) {
    const OrbitPoint p = OrbitPoint::cp11(sample_chart_point(rng));
    const Vec8 q = spin_components(p, J, basis);
    casimir = casimir_quadratic(q, basis);
    if (std::abs(casimir - target) > 1e-10)
      throw ClosureFailure("quadratic invariant drifts off 4J^2/3");
    SpinGradient grad[8];
    for (int a = 0; a < 8; ++a) grad[a] = spin_gradient(p, J, basis, a + 1);
    for (int a = 0; a < 8; ++a)
      for (int b = a + 1; b < 8; ++b) {
        const Cplx lhs = poisson_bracket(grad[a], grad[b], p, J);
        double rhs = 0.0;
        for (int c = 0; c < 8; ++c) rhs += sc.f[a][b][c] * q[c];
        worst_minus = std::max(worst_minus, std::abs(lhs + rhs));
        worst_plus = std::max(worst_plus, std::abs(lhs - rhs));
      }
  }
  ClosureReport rep;
  rep.samples = samples;
  rep.casimir_value = casimir;
  if (worst_minus < 1e-10) {
    rep.sign_convention = "-f";
    rep.max_residual = worst_minus;
  } else if (worst_plus < 1e-10) {
    rep.sign_convention = "+f";
    rep.max_residual = worst_plus;
  } else {
    throw ClosureFailure("spin bracket does not close on f_ab^c for either sign");
  }
  return rep;
}

}  // namespace ncspin
