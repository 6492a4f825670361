#include "ncspin/quantum.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <vector>

#include "ncspin/spin.hpp"

namespace ncspin {

namespace {

void check_label(int a) {
  if (a < 1 || a > 8) throw DomainViolation("generator label out of range");
}

void check_degree(int degree) {
  if (degree < 1) throw DomainViolation("truncation degree must be positive");
}

void check_weight(double J) {
  if (!(J > 0.0)) throw DomainViolation("J must be positive");
}

// Principal power (base)^(-2J) with the branch cut excluded.
Cplx branch_power(Cplx base, double J) {
  if (std::abs(base) <= 1e-12 ||
      (base.real() < 0.0 && std::abs(base.imag()) < 1e-14)) {
    throw BranchViolation("kernel base on the branch cut");
  }
  return std::exp(-2.0 * J * std::log(base));
}

}  // namespace

// The operator is W_1 dbar_1 + W_2 dbar_2 with quadratic coefficients read
// off the chart blocks of the raised generator (doubled normalization):
//   W_1 = 2[c_1 + (d - A_11) u_1 - A_21 u_2 - b_1 u_1^2 - b_2 u_1 u_2]
//   W_2 = 2[c_2 - A_12 u_1 + (d - A_22) u_2 - b_1 u_1 u_2 - b_2 u_2^2]
// writing u for xibar. Degree can move by at most one either way; overflow
// past the truncation degree only raises the flag.
OperatorMatrix build_operator(int a, double J, int degree,
                              const GeneratorBasis& basis) {
  check_label(a);
  check_degree(degree);
  check_weight(J);
  const ChartBlocks cb = chart_blocks(basis, a);
  const int dim = basis_dim(degree);

  OperatorMatrix op;
  op.a = a;
  op.J = J;
  op.degree = degree;
  op.mat = Eigen::MatrixXcd::Zero(dim, dim);

  const Cplx w1d = 2.0 * (cb.d - cb.A(0, 0));
  const Cplx w2d = 2.0 * (cb.d - cb.A(1, 1));
  // Shared diagonal coefficient assembles as one product so the Cartan
  // spectra stay bit-reproducible.
  const bool common = (w1d == w2d);

  auto put = [&](int col, int m, int n, Cplx v) {
    if (v == 0.0) return;
    if (m + n > degree) {
      op.truncated = true;
      return;
    }
    op.mat(monomial_index(m, n), col) += v;
  };

  for (int deg = 0; deg <= degree; ++deg) {
    for (int n = 0; n <= deg; ++n) {
      const int m = deg - n;
      const int col = monomial_index(m, n);
      const double md = m, nd = n;
      if (common) {
        put(col, m, n, w1d * (md + nd));
      } else {
        put(col, m, n, w1d * md + w2d * nd);
      }
      if (m > 0) {
        put(col, m - 1, n, 2.0 * cb.c(0) * md);
        put(col, m - 1, n + 1, -2.0 * cb.A(1, 0) * md);
        put(col, m + 1, n, -2.0 * cb.b(0) * md);
        put(col, m, n + 1, -2.0 * cb.b(1) * md);
      }
      if (n > 0) {
        put(col, m, n - 1, 2.0 * cb.c(1) * nd);
        put(col, m + 1, n - 1, -2.0 * cb.A(0, 1) * nd);
        put(col, m + 1, n, -2.0 * cb.b(0) * nd);
        put(col, m, n + 1, -2.0 * cb.b(1) * nd);
      }
    }
  }
  return op;
}

double gram_diagonal(double J, int m, int n) {
  check_weight(J);
  if (m < 0 || n < 0) throw DomainViolation("negative monomial degree");
  double h = 1.0;
  for (int i = 1; i <= m; ++i) h *= i / (2.0 * J + i - 1.0);
  for (int j = 1; j <= n; ++j) h *= j / (2.0 * J + m + j - 1.0);
  return h;
}

double gram_norm_sq(const PolyState& psi) {
  check_weight(psi.J);
  double out = 0.0;
  for (int deg = 0; deg <= psi.degree; ++deg) {
    for (int n = 0; n <= deg; ++n) {
      const int m = deg - n;
      out += gram_diagonal(psi.J, m, n) *
             std::norm(psi.coeffs(monomial_index(m, n)));
    }
  }
  return out;
}

double gram_hermiticity_residual(const OperatorMatrix& op) {
  const int dim = basis_dim(op.degree);
  Eigen::VectorXd g(dim);
  for (int deg = 0; deg <= op.degree; ++deg) {
    for (int n = 0; n <= deg; ++n) {
      const int m = deg - n;
      g(monomial_index(m, n)) = gram_diagonal(op.J, m, n);
    }
  }
  const Eigen::MatrixXcd gh = g.asDiagonal() * op.mat;
  return (gh - gh.adjoint()).cwiseAbs().maxCoeff();
}

OperatorClosureReport verify_operator_algebra(const GeneratorBasis& basis,
                                              const StructureConstants& sc,
                                              double J, int degree) {
  check_degree(degree);
  check_weight(J);
  if (degree < 2) throw DomainViolation("need degree >= 2 for interior columns");

  std::array<OperatorMatrix, 8> ops;
  for (int a = 1; a <= 8; ++a) ops[a - 1] = build_operator(a, J, degree, basis);

  // Columns sourced at degree <= D-2 are immune to truncation: two operator
  // applications raise the degree by at most two.
  const int interior = basis_dim(degree - 2);
  const int dim = basis_dim(degree);

  // Candidate factors against the reference [Q_a, Q_b] = i f_ab^c Q_c.
  const double kappas[6] = {1.0, -1.0, 2.0, -2.0, 0.5, -0.5};
  double worst[6] = {0, 0, 0, 0, 0, 0};

  for (int a = 0; a < 8; ++a) {
    for (int b = a + 1; b < 8; ++b) {
      const Eigen::MatrixXcd comm =
          ops[a].mat * ops[b].mat - ops[b].mat * ops[a].mat;
      Eigen::MatrixXcd ref = Eigen::MatrixXcd::Zero(dim, dim);
      for (int c = 0; c < 8; ++c) {
        if (sc.f[a][b][c] != 0.0) ref += kI * sc.f[a][b][c] * ops[c].mat;
      }
      for (int k = 0; k < 6; ++k) {
        const double r = (comm.leftCols(interior) -
                          kappas[k] * ref.leftCols(interior))
                             .cwiseAbs()
                             .maxCoeff();
        worst[k] = std::max(worst[k], r);
      }
    }
  }

  int best = 0;
  for (int k = 1; k < 6; ++k) {
    if (worst[k] < worst[best]) best = k;
  }
  if (!(worst[best] < 1e-10)) {
    throw ClosureFailure("operator commutators match no tested factor");
  }
  OperatorClosureReport rep;
  rep.max_residual = worst[best];
  rep.sign = kappas[best] > 0 ? 1 : -1;
  rep.scale = std::abs(kappas[best]);
  rep.degree = degree;
  rep.J = J;
  return rep;
}

Cplx kernel(const Vec2& xibar_prime, const Vec2& xi, double J) {
  check_weight(J);
  // Bilinear pairing: the prime argument arrives conjugated already.
  const Cplx z = xibar_prime(0) * xi(0) + xibar_prime(1) * xi(1);
  return branch_power(1.0 - z, J);
}

void QuantumHamiltonian::validate() const {
  if (!c2.allFinite() || !c1.allFinite()) {
    throw DomainViolation("non-finite Hamiltonian coefficients");
  }
  if ((c2 - c2.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw DomainViolation("quadratic coefficients must be symmetric");
  }
}

bool QuantumHamiltonian::cartan_only() const {
  if (c2.cwiseAbs().maxCoeff() != 0.0) return false;
  for (int i = 0; i < 8; ++i) {
    if (i == 2 || i == 7) continue;
    if (c1[i] != 0.0) return false;
  }
  return true;
}

PolyState evolve(const QuantumHamiltonian& h, const PolyState& psi0, double t,
                 const GeneratorBasis& basis) {
  h.validate();
  check_weight(psi0.J);
  check_degree(psi0.degree);
  const int dim = basis_dim(psi0.degree);
  if (psi0.coeffs.size() != dim) {
    throw DomainViolation("state size does not match its degree");
  }

  PolyState out = psi0;
  if (h.cartan_only()) {
    // Both Cartan operators are diagonal on monomials; the phases come off
    // the assembled matrices so they agree bitwise with the spectra.
    const OperatorMatrix q3 = build_operator(3, psi0.J, psi0.degree, basis);
    const OperatorMatrix q8 = build_operator(8, psi0.J, psi0.degree, basis);
    for (int i = 0; i < dim; ++i) {
      const double lam =
          h.c1[2] * q3.mat(i, i).real() + h.c1[7] * q8.mat(i, i).real();
      out.coeffs(i) *= std::exp(Cplx(0.0, -lam * t));
    }
    return out;
  }

  std::array<OperatorMatrix, 8> ops;
  for (int a = 1; a <= 8; ++a) {
    ops[a - 1] = build_operator(a, psi0.J, psi0.degree, basis);
  }
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);
  bool trunc = psi0.truncated;
  for (int a = 0; a < 8; ++a) {
    if (h.c1[a] != 0.0) {
      H += h.c1[a] * ops[a].mat;
      trunc = trunc || ops[a].truncated;
    }
    for (int b = 0; b < 8; ++b) {
      if (h.c2(a, b) != 0.0) {
        H += h.c2(a, b) * (ops[a].mat * ops[b].mat);
        trunc = trunc || ops[a].truncated || ops[b].truncated;
      }
    }
  }
  const Eigen::MatrixXcd U = (Cplx(0.0, -t) * H).exp();
  out.coeffs = U * psi0.coeffs;
  out.truncated = trunc;
  return out;
}

Cplx propagator_closed_form(const Vec2& xibar_prime, const Vec2& xi, double w1,
                            double w2, double t, double J) {
  check_weight(J);
  const Cplx z1 = xibar_prime(0) * xi(0) * std::exp(Cplx(0.0, w1 * t));
  const Cplx z2 = xibar_prime(1) * xi(1) * std::exp(Cplx(0.0, w2 * t));
  return branch_power(1.0 - z1 - z2, J);
}

Cplx propagator_numeric(const Vec2& xibar_prime, const Vec2& xi, double w1,
                        double w2, double t, double J, int degree,
                        const GeneratorBasis& basis) {
  check_weight(J);
  check_degree(degree);

  // Layer k of the kernel series is bounded by (2J)_k r^k / k!; past the
  // truncation the ratio rho must sit below one for the geometric tail.
  const double r = std::abs(xibar_prime(0) * xi(0)) +
                   std::abs(xibar_prime(1) * xi(1));
  double term = 1.0;
  for (int k = 0; k <= degree; ++k) {
    term *= r * (2.0 * J + k) / (k + 1.0);
  }
  const double rho = r * (2.0 * J + degree + 1.0) / (degree + 2.0);
  if (!(rho < 1.0) || !(term / (1.0 - rho) < 1e-12)) {
    throw ConvergenceFailure("kernel series tail exceeds 1e-12 at this degree");
  }

  PolyState psi;
  psi.J = J;
  psi.degree = degree;
  psi.coeffs = Eigen::VectorXcd::Zero(basis_dim(degree));
  for (int deg = 0; deg <= degree; ++deg) {
    for (int n = 0; n <= deg; ++n) {
      const int m = deg - n;
      psi.coeffs(monomial_index(m, n)) = std::pow(xi(0), m) * std::pow(xi(1), n) /
                                         gram_diagonal(J, m, n);
    }
  }

  QuantumHamiltonian h;
  h.c1[2] = 0.5 * (w1 - w2);
  h.c1[7] = 0.5 * (w1 + w2) / std::sqrt(3.0);
  const PolyState psit = evolve(h, psi, t, basis);

  Cplx out = 0.0;
  for (int deg = 0; deg <= degree; ++deg) {
    for (int n = 0; n <= deg; ++n) {
      const int m = deg - n;
      out += psit.coeffs(monomial_index(m, n)) * std::pow(xibar_prime(0), m) *
             std::pow(xibar_prime(1), n);
    }
  }
  return out;
}

}  // namespace ncspin
