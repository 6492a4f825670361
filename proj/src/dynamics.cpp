#include "ncspin/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace ncspin {

void HamiltonianSpec::validate() const {
  if ((c2 - c2.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw DomainViolation("quadratic coefficient matrix must be symmetric");
  if (!(J > 0.0)) throw DomainViolation("hamiltonian needs J > 0");
}

bool HamiltonianSpec::is_torus() const {
  if (c2.cwiseAbs().maxCoeff() != 0.0) return false;
  for (int a = 0; a < 8; ++a)
    if (a != 2 && a != 7 && c1[a] != 0.0) return false;
  return true;
}

double eval_hamiltonian(const HamiltonianSpec& h, const Vec8& q) {
  return q.dot(h.c2 * q) + h.c1.dot(q);
}

Vec2 eom_rhs(const HamiltonianSpec& h, const OrbitPoint& p,
             const GeneratorBasis& basis) {
  const Vec8 q = spin_components(p, h.J, basis);
  const Vec8 eff = h.c1 + 2.0 * (h.c2 * q);
  Vec2 dbarH = Vec2::Zero();
  for (int a = 0; a < 8; ++a) {
    if (eff[a] == 0.0) continue;
    dbarH += eff[a] * spin_gradient(p, h.J, basis, a + 1).dbar;
  }
  const Mat2 gi = inverse_metric(p, h.J);
  Vec2 xidot;
  for (int al = 0; al < 2; ++al) {
    Cplx acc{};
    for (int mu = 0; mu < 2; ++mu) acc += gi(mu, al) * dbarH[mu];
    xidot[al] = -kI * acc;
  }
  return xidot;
}

std::pair<double, double> torus_frequencies(const Vec8& c1) {
  const double s3 = std::sqrt(3.0);
  return {0.5 * (c1[2] + s3 * c1[7]), 0.5 * (-c1[2] + s3 * c1[7])};
}

Vec2 exact_torus_solution(const Vec8& c1, const Vec2& xi0, double t) {
  const auto [w1, w2] = torus_frequencies(c1);
  return Vec2{xi0[0] * std::exp(-kI * w1 * t), xi0[1] * std::exp(-kI * w2 * t)};
}

namespace {

using Vec4 = Eigen::Vector4d;

Vec4 pack(const Vec2& xi) {
  return Vec4{xi[0].real(), xi[0].imag(), xi[1].real(), xi[1].imag()};
}

Vec2 unpack(const Vec4& y) {
  return Vec2{Cplx(y[0], y[1]), Cplx(y[2], y[3])};
}

// Dormand-Prince 5(4) tableau; row 7 doubles as the 5th-order weights
// (first-same-as-last).
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
// 5th-order minus 4th-order weights for the embedded error estimate.
constexpr double kE[7] = {71.0 / 57600,  0.0,          -71.0 / 16695,
                          71.0 / 1920,   -17253.0 / 339200,
                          22.0 / 525,    -1.0 / 40};

}  // namespace

Trajectory integrate(const HamiltonianSpec& spec, const Vec2& xi0, double t_end,
                     double tol, const GeneratorBasis& basis) {
  spec.validate();
  if (!(tol >= 1e-12 && tol <= 1e-4))
    throw DomainViolation("tolerance outside [1e-12, 1e-4]");
  if (!(t_end > 0.0)) throw DomainViolation("t_end must be positive");

  auto rhs = [&](const Vec4& y) {
    return pack(eom_rhs(spec, OrbitPoint::cp11(unpack(y)), basis));
  };
  auto record = [&](Trajectory& tr, double t, const Vec4& y) {
    const OrbitPoint p = OrbitPoint::cp11(unpack(y));
    const Vec8 q = spin_components(p, spec.J, basis);
    tr.points.push_back(
        {t, p.xi, eval_hamiltonian(spec, q), casimir_quadratic(q, basis)});
    return p.s12();
  };

  const double hmin = 1e-13 * std::max(1.0, t_end);
  const double exit_level = 1.0 - 1e-10;

  Trajectory tr;
  Vec4 y = pack(xi0);
  double t = 0.0;
  if (record(tr, t, y) >= exit_level)
    throw DomainExit("initial point at the chart boundary", t);

  double h = std::min(t_end, 1e-2);
  double errprev = 1e-4;
  Vec4 k[7];
  k[0] = rhs(y);

  while (t < t_end) {
    if (h < hmin)
      throw StepFailure("step size underflow at t = " + std::to_string(t), t);
    const bool last = t + h >= t_end;
    if (last) h = t_end - t;

    Vec4 y5;
    bool stage_ok = true;
    try {
      for (int i = 1; i < 7; ++i) {
        Vec4 yi = y;
        for (int j = 0; j < i; ++j) yi += h * kA[i][j] * k[j];
        if (i == 6) y5 = yi;  // row 7 arguments are the 5th-order solution
        k[i] = rhs(yi);
      }
    } catch (const DomainViolation&) {
      stage_ok = false;  // stage left the chart; retry shorter
    }
    if (!stage_ok) {
      h *= 0.5;
      continue;
    }

    Vec4 err = Vec4::Zero();
    for (int i = 0; i < 7; ++i) err += kE[i] * k[i];
    err *= h;
    double en = 0.0;
    for (int i = 0; i < 4; ++i) {
      const double sc = tol + tol * std::max(std::abs(y[i]), std::abs(y5[i]));
      en += (err[i] / sc) * (err[i] / sc);
    }
    en = std::sqrt(en / 4.0);

    const double safe = std::max(en, 1e-16);
    double fac = 0.9 * std::pow(safe, -0.7 / 5.0) * std::pow(errprev, 0.4 / 5.0);
    fac = std::clamp(fac, 0.2, 5.0);

    if (en <= 1.0) {
      t = last ? t_end : t + h;
      y = y5;
      k[0] = k[6];
      if (record(tr, t, y) >= exit_level)
        throw DomainExit("trajectory reached the chart boundary", t);
      errprev = std::max(en, 1e-4);
      if (last) break;
      h *= fac;
    } else {
      h *= std::min(1.0, fac);
    }
  }
  return tr;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
  os.precision(17);
  os << "t,re_xi1,im_xi1,re_xi2,im_xi2,energy,casimir\n";
  for (const TrajectoryPoint& p : tr.points) {
    os << p.t << ',' << p.xi[0].real() << ',' << p.xi[0].imag() << ','
       << p.xi[1].real() << ',' << p.xi[1].imag() << ',' << p.energy << ','
       << p.casimir << '\n';
  }
}

}  // namespace ncspin
