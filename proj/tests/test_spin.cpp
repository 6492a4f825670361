#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ncspin/liealg.hpp"
#include "ncspin/orbit.hpp"
#include "ncspin/spin.hpp"
#include "oracles.hpp"

using namespace ncspin;

namespace {

template <class F>
SpinGradient fd_grad(const F& f, const Vec2& xi) {
  SpinGradient g;
  for (int k = 0; k < 2; ++k) {
    g.d[k] = oracles::fd_dxi(f, xi, k);
    g.dbar[k] = oracles::fd_dxibar(f, xi, k);
  }
  return g;
}

}  // namespace

TEST_CASE("bracket engine: canonical pair values") {
  const double J = 0.8;
  auto xibar1 = [](const Vec2& x) { return std::conj(x[0]); };
  auto xi1 = [](const Vec2& x) { return x[0]; };

  const OrbitPoint origin = OrbitPoint::cp11(Vec2::Zero());
  const Cplx b0 = poisson_bracket(fd_grad(xibar1, origin.xi),
                                  fd_grad(xi1, origin.xi), origin, J);
  CHECK(std::abs(b0 - kI / (2.0 * J)) < 1e-10);

  auto rng = make_rng();
  for (int trial = 0; trial < 10; ++trial) {
    const OrbitPoint p = OrbitPoint::cp11(sample_chart_point(rng, 0.7));
    for (int alpha = 0; alpha < 2; ++alpha)
      for (int beta = 0; beta < 2; ++beta) {
        auto xibar = [&](const Vec2& x) { return std::conj(x[alpha]); };
        auto momentum = [&](const Vec2& x) {
          return 2.0 * J * x[beta] / (1.0 - std::norm(x[0]) - std::norm(x[1]));
        };
        const Cplx br = poisson_bracket(fd_grad(xibar, p.xi),
                                        fd_grad(momentum, p.xi), p, J);
        const Cplx want = (alpha == beta) ? kI : Cplx{};
        CHECK(std::abs(br - want) < 1e-8);
      }
    // The conformal factor C = 2J/(1-s) generates scaling: {C, xi_b} = i xi_b.
    auto cfactor = [&](const Vec2& x) {
      return Cplx(2.0 * J / (1.0 - std::norm(x[0]) - std::norm(x[1])), 0.0);
    };
    for (int beta = 0; beta < 2; ++beta) {
      auto xib = [&](const Vec2& x) { return x[beta]; };
      const Cplx br = poisson_bracket(fd_grad(cfactor, p.xi),
                                      fd_grad(xib, p.xi), p, J);
      CHECK(std::abs(br - kI * p.xi[beta]) < 1e-8);
    }
  }
}

TEST_CASE("spin component anchors at the origin") {
  const GeneratorBasis b = build_generators();
  for (double J : {0.5, 1.0, 1.5}) {
    const Vec8 q = spin_components(OrbitPoint::cp11(Vec2::Zero()), J, b);
    for (int a = 0; a < 7; ++a) CHECK(std::abs(q[a]) < 1e-15);
    CHECK(q[7] == doctest::Approx(2.0 * J / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(casimir_quadratic(q, b) ==
          doctest::Approx(4.0 * J * J / 3.0).epsilon(1e-13));
  }
}

TEST_CASE("analytic spin gradients match finite differences") {
  const GeneratorBasis b = build_generators();
  const double J = 1.0;
  auto rng = make_rng(2);
  for (int trial = 0; trial < 15; ++trial) {
    const OrbitPoint p = OrbitPoint::cp11(sample_chart_point(rng, 0.8));
    for (int a = 1; a <= 8; ++a) {
      auto qa = [&](const Vec2& x) {
        return Cplx(spin_components(OrbitPoint::cp11(x), J, b)[a - 1], 0.0);
      };
      const SpinGradient fd = fd_grad(qa, p.xi);
      const SpinGradient an = spin_gradient(p, J, b, a);
      for (int v = 0; v < 2; ++v) {
        CHECK(std::abs(fd.d[v] - an.d[v]) < 1e-7);
        CHECK(std::abs(fd.dbar[v] - an.dbar[v]) < 1e-7);
      }
    }
  }
}

TEST_CASE("spin algebra closes with the +f sign") {
  const GeneratorBasis b = build_generators();
  const StructureConstants sc = structure_constants(b);
  for (double J : {0.5, 1.0, 1.5}) {
    const ClosureReport rep = verify_spin_algebra(b, sc, J);
    CHECK(rep.sign_convention == "+f");
    CHECK(rep.max_residual < 1e-10);
    CHECK(rep.samples == 100);
    CHECK(rep.casimir_value ==
          doctest::Approx(4.0 * J * J / 3.0).epsilon(1e-12));
  }
}

TEST_CASE("closure fails for components built on the rejected basis") {
  const GeneratorBasis good = build_generators();
  const StructureConstants sc = structure_constants(good);
  GeneratorBasis bad = build_candidate(T7Sign::plus);
  CHECK_THROWS_AS(verify_spin_algebra(bad, sc, 1.0, 20), ClosureFailure);
}

TEST_CASE("hamiltonian vector field is the bracket with xi") {
  const GeneratorBasis b = build_generators();
  const double J = 1.25;
  auto rng = make_rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const OrbitPoint p = OrbitPoint::cp11(sample_chart_point(rng));
    for (int a = 1; a <= 8; ++a) {
      const Vec2 X = hamiltonian_vector_field(a, p, b);
      const SpinGradient qa = spin_gradient(p, J, b, a);
      for (int alpha = 0; alpha < 2; ++alpha) {
        SpinGradient coord;  // gradient of the observable xi_alpha
        coord.d[alpha] = 1.0;
        CHECK(std::abs(poisson_bracket(coord, qa, p, J) - X[alpha]) < 1e-12);
      }
    }
  }
}

TEST_CASE("field contracted with the symplectic form gives +dQ") {
  const GeneratorBasis b = build_generators();
  const double J = 1.0;
  auto rng = make_rng(6);
  for (int trial = 0; trial < 15; ++trial) {
    const OrbitPoint p = OrbitPoint::cp11(sample_chart_point(rng, 0.8));
    const Mat2 G = metric(p, J);
    for (int a = 1; a <= 8; ++a) {
      const Vec2 X = hamiltonian_vector_field(a, p, b);
      const SpinGradient an = spin_gradient(p, J, b, a);
      auto qa = [&](const Vec2& x) {
        return Cplx(spin_components(OrbitPoint::cp11(x), J, b)[a - 1], 0.0);
      };
      for (int beta = 0; beta < 2; ++beta) {
        Cplx dbar_slot{}, d_slot{};
        for (int u = 0; u < 2; ++u) {
          dbar_slot += kI * X[u] * G(u, beta);
          d_slot += -kI * G(beta, u) * std::conj(X[u]);
        }
        // analytic, then against the finite-difference gradient
        CHECK(std::abs(dbar_slot - an.dbar[beta]) < 1e-12);
        CHECK(std::abs(d_slot - an.d[beta]) < 1e-12);
        CHECK(std::abs(dbar_slot - oracles::fd_dxibar(qa, p.xi, beta)) < 1e-7);
        CHECK(std::abs(d_slot - oracles::fd_dxi(qa, p.xi, beta)) < 1e-7);
      }
    }
  }
}

TEST_CASE("Cartan fields preserve the moduli") {
  const GeneratorBasis b = build_generators();
  auto rng = make_rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const OrbitPoint p = OrbitPoint::cp11(sample_chart_point(rng));
    for (int a : {3, 8}) {
      const Vec2 X = hamiltonian_vector_field(a, p, b);
      for (int alpha = 0; alpha < 2; ++alpha)
        CHECK(std::abs((std::conj(p.xi[alpha]) * X[alpha]).real()) < 1e-15);
    }
  }
}

TEST_CASE("matrix realization: extraction convention and gauge independence") {
  const GeneratorBasis b = build_generators();
  const double J = 1.0;
  const double x = 2.0 * J / 3.0;  // J1 = 1.5 x = J
  const OrbitSpec spec{ReferenceElement::from_pair(x, x), {2}};
  REQUIRE(spec.J1() == doctest::Approx(J).epsilon(1e-15));

  // Measure the convention at the origin: sigma = -1, offset 0.
  const OrbitPoint origin = OrbitPoint::cp11(Vec2::Zero());
  const Vec8 q0 = spin_components(origin, J, b);
  const Vec8 m0 = spin_components_from_matrix(spin_matrix(origin, spec), b);
  CHECK(m0[7] == doctest::Approx(-2.0 * J / std::sqrt(3.0)).epsilon(1e-13));
  for (int a = 0; a < 8; ++a) CHECK(std::abs(m0[a] + q0[a]) < 1e-13);

  auto rng = make_rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    const OrbitPoint p = OrbitPoint::cp11(sample_chart_point(rng));
    const Mat3 Q1 = spin_matrix(p, spec, GaugeSeed::e1);
    const Mat3 Q2 = spin_matrix(p, spec, GaugeSeed::e2);
    CHECK((Q1 - Q2).cwiseAbs().maxCoeff() < 1e-10);
    const Vec8 qm = spin_components_from_matrix(Q1, b);
    const Vec8 qd = spin_components(p, J, b);
    for (int a = 0; a < 8; ++a) CHECK(std::abs(qm[a] + qd[a]) < 1e-10);

    const auto [c2, c3] = casimirs(Q1);
    CHECK(c2 == doctest::Approx(6.0 * x * x).epsilon(1e-10));
    CHECK(c3 == doctest::Approx(6.0 * x * x * x).epsilon(1e-10));
  }
}
