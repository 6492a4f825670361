// Shared scalar/matrix aliases, the library error taxonomy, and the random
// chart sampling used by the verification routines.
#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ncspin {

using Cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat3 = Eigen::Matrix3cd;
using Vec2 = Eigen::Vector2cd;
using Vec3 = Eigen::Vector3cd;
using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat8 = Eigen::Matrix<double, 8, 8>;

inline constexpr Cplx kI{0.0, 1.0};

// Base of everything thrown by the library. The CLI maps the concrete
// subtypes onto its process exit codes; tests catch them individually.
struct NcspinError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An algebra (generator or operator) failed to close on the expected span.
struct ClosureFailure : NcspinError { using NcspinError::NcspinError; };
// Casimir traces requested for a matrix that is not traceless.
struct NonTraceless : NcspinError { using NcspinError::NcspinError; };
// Constraint classification with weights inconsistent with the partition.
struct DegenerateWeights : NcspinError { using NcspinError::NcspinError; };
// Group element outside the coordinate chart (|alpha_3| ~ 0, or a flag
// column with vanishing leading entry).
struct ChartSingularity : NcspinError { using NcspinError::NcspinError; };
// Point or parameter violates a chart/domain inequality.
struct DomainViolation : NcspinError { using NcspinError::NcspinError; };
// Principal power branch undefined for the given base.
struct BranchViolation : NcspinError { using NcspinError::NcspinError; };
// Series truncation depth insufficient for the requested tolerance.
struct ConvergenceFailure : NcspinError { using NcspinError::NcspinError; };

// Integration reached the chart boundary: |xi|^2 >= 1 - 1e-10.
struct DomainExit : NcspinError {
  double t_exit;
  DomainExit(const std::string& msg, double t) : NcspinError(msg), t_exit(t) {}
};

// The step controller underflowed its minimum step size.
struct StepFailure : NcspinError {
  double t_fail;
  StepFailure(const std::string& msg, double t) : NcspinError(msg), t_fail(t) {}
};

// Fixed default seed: sampling entry points are deterministic unless the
// caller passes a seed of its own.
inline constexpr std::uint64_t kDefaultSeed = 20260816ull;

inline std::mt19937_64 make_rng(std::uint64_t seed = kDefaultSeed) {
  return std::mt19937_64{seed};
}

// Volume-uniform sample from the chart ball |xi_1|^2 + |xi_2|^2 < rmax^2.
inline Vec2 sample_chart_point(std::mt19937_64& rng, double rmax = 0.85) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif;
  Eigen::Vector4d u{gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
  const double nrm = u.norm();
  if (nrm < 1e-300) return Vec2::Zero();
  u /= nrm;
  const double r = rmax * std::pow(unif(rng), 0.25);
  return Vec2{Cplx(r * u[0], r * u[1]), Cplx(r * u[2], r * u[3])};
}

}  // namespace ncspin
