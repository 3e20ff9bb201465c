#include "ridgepois/mp_transforms.hpp"

#include <cmath>
#include <string>

#include "ridgepois/error.hpp"

namespace ridgepois {

namespace {

void require_negative(double z) {
  if (!(z < 0.0) || !std::isfinite(z)) {
    throw Error(ErrorCode::NonNegativeZ,
                "spectral point must be finite and strictly negative, got z=" + std::to_string(z));
  }
}

// Implicit derivative of z c m^2 - (1 - c - z) m + 1 = 0 with respect to z.
double derivative_from_m(double c, double z, double m) {
  const double denom = 2.0 * z * c * m + c + z - 1.0;
  if (std::abs(denom) < 1e-14) {
    throw Error(ErrorCode::SingularDerivativeDenominator,
                "implicit-derivative denominator vanished at z=" + std::to_string(z));
  }
  return -(c * m * m + m) / denom;
}

}  // namespace

AspectRatio::AspectRatio(double c) : c_(c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw Error(ErrorCode::InvalidArgument, "aspect ratio c must be positive and finite");
  }
}

double mp_stieltjes(AspectRatio ratio, double z) {
  require_negative(z);
  const double c = ratio.value();
  // m solves c z m^2 - a m + 1 = 0 with a = 1 - c - z. The root with m > 0 is
  // (a - sqrt(D)) / (2 c z). When a >= 0 the numerator cancels, so use the
  // rationalized form 2 / (a + sqrt(D)) there; this also covers |c z| -> 0.
  const double a = 1.0 - c - z;
  const double disc = a * a - 4.0 * c * z;
  const double root = std::sqrt(disc);
  const double m = (a >= 0.0) ? 2.0 / (a + root) : (a - root) / (2.0 * c * z);
  if (!(m > 0.0) || !std::isfinite(m)) {
    throw Error(ErrorCode::NumericalBranchFailure,
                "Stieltjes transform left the positive branch at z=" + std::to_string(z));
  }
  return m;
}

double mp_companion(AspectRatio ratio, double z) {
  const double c = ratio.value();
  return c * mp_stieltjes(ratio, z) - (1.0 - c) / z;
}

double mp_stieltjes_derivative(AspectRatio ratio, double z) {
  const double m = mp_stieltjes(ratio, z);
  return derivative_from_m(ratio.value(), z, m);
}

double mp_companion_derivative(AspectRatio ratio, double z) {
  const double c = ratio.value();
  return c * mp_stieltjes_derivative(ratio, z) + (1.0 - c) / (z * z);
}

TransformValues mp_transform_values(AspectRatio ratio, double z) {
  const double c = ratio.value();
  TransformValues t;
  t.m = mp_stieltjes(ratio, z);
  t.m_prime = derivative_from_m(c, z, t.m);
  t.m_tilde = c * t.m - (1.0 - c) / z;
  t.m_tilde_prime = c * t.m_prime + (1.0 - c) / (z * z);
  return t;
}

double mp_self_consistency_residual(AspectRatio ratio, double z, double m) {
  const double c = ratio.value();
  return std::abs(z * c * m * m - (1.0 - c - z) * m + 1.0);
}

}  // namespace ridgepois
