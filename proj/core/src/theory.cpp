#include "ridgepois/theory.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ridgepois/error.hpp"

namespace ridgepois {

namespace {

constexpr double kVarianceClampTolerance = 1e-10;

void require_positive_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::InvalidLambda,
                "lambda must be positive and finite, got " + std::to_string(lambda) +
                    " (use the ridgeless prediction for lambda = 0)");
  }
}

// Bracketed poison correction shared by the finite-lambda and ridgeless
// variances: (1 - theta^2) + (ratio - 1) theta (1 - theta)^2 / (2 - theta).
double variance_bracket(double theta, double spike_ratio) {
  return (1.0 - theta * theta) +
         (spike_ratio - 1.0) * theta * (1.0 - theta) * (1.0 - theta) / (2.0 - theta);
}

double tau_squared(double theta, double v_norm) {
  return v_norm * v_norm * (theta / 2.0) * (1.0 - theta / 2.0);
}

double checked_variance(double raw, bool& clamped) {
  clamped = false;
  if (raw >= 0.0) return raw;
  if (raw >= -kVarianceClampTolerance) {
    clamped = true;
    return 0.0;
  }
  throw Error(ErrorCode::NegativeVariance,
              "predicted variance is negative: " + std::to_string(raw));
}

TheoryPrediction finish(double mu, double raw_sigma_sq, double v_norm) {
  TheoryPrediction out;
  out.mu = mu;
  out.sigma_sq = checked_variance(raw_sigma_sq, out.variance_clamped);
  out.eta = efficacy(out.mu, out.sigma_sq);
  out.C_align = v_norm > 0.0 ? mu / (v_norm * v_norm) : 0.0;
  return out;
}

}  // namespace

void ModelParams::validate() const {
  AspectRatio{c};
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw Error(ErrorCode::ThetaOutOfRange, "theta must lie in [0, 1], got " + std::to_string(theta));
  }
  if (!(v_norm >= 0.0) || !std::isfinite(v_norm)) {
    throw Error(ErrorCode::InvalidArgument, "|v| must be finite and nonnegative");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::InvalidLambda, "lambda must be finite and nonnegative");
  }
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double efficacy(double mu, double sigma_sq) {
  if (sigma_sq <= 0.0) {
    if (mu > 0.0) return 1.0;
    if (mu < 0.0) return 0.0;
    return 0.5;
  }
  return normal_cdf(mu / std::sqrt(sigma_sq));
}

double clean_variance_factor(AspectRatio c, double lambda) {
  require_positive_lambda(lambda);
  const TransformValues t = mp_transform_values(c, -lambda);
  return t.m_tilde - lambda * t.m_tilde_prime;
}

double alignment_coefficient(const ModelParams& params) {
  params.validate();
  require_positive_lambda(params.lambda);
  const double c = params.c;
  const double lambda = params.lambda;
  const double theta = params.theta;
  const double v2 = params.v_norm * params.v_norm;
  const double m = mp_stieltjes(AspectRatio{c}, -lambda);
  return theta * (1.0 - theta) * m /
         ((1.0 + c * m) * (2.0 + v2 * theta * (1.0 - theta / 2.0) * (1.0 - lambda * m)));
}

TheoryPrediction predict(const ModelParams& params) {
  params.validate();
  require_positive_lambda(params.lambda);
  const double c = params.c;
  const double lambda = params.lambda;
  const double theta = params.theta;
  const double v2 = params.v_norm * params.v_norm;

  const TransformValues t = mp_transform_values(AspectRatio{c}, -lambda);
  const double mu = alignment_coefficient(params) * v2;

  const double k = tau_squared(theta, params.v_norm) / c;
  const double B = 1.0 + k * (1.0 - lambda * t.m_tilde);
  const double spike_ratio = (1.0 + k) / (B * B);
  const double sigma_sq =
      (t.m_tilde - lambda * t.m_tilde_prime) * variance_bracket(theta, spike_ratio);
  return finish(mu, sigma_sq, params.v_norm);
}

TheoryPrediction predict_ridgeless(const ModelParams& params) {
  ModelParams p = params;
  p.lambda = 0.0;
  p.validate();
  const double c = p.c;
  if (c >= 1.0) {
    throw Error(ErrorCode::InterpolationThreshold,
                "ridgeless variance diverges for c >= 1, got c=" + std::to_string(c));
  }
  const double theta = p.theta;
  const double v2 = p.v_norm * p.v_norm;
  const double tau2 = tau_squared(theta, p.v_norm);

  const double mu = v2 * theta * (1.0 - theta) / (2.0 + v2 * theta * (1.0 - theta / 2.0));
  const double spike_ratio = (1.0 + tau2 / c) / ((1.0 + tau2) * (1.0 + tau2));
  const double sigma_sq = (c / (1.0 - c)) * variance_bracket(theta, spike_ratio);
  return finish(mu, sigma_sq, p.v_norm);
}

SpikeAuxiliary spike_auxiliary(const ModelParams& params, double z) {
  params.validate();
  const TransformValues t = mp_transform_values(AspectRatio{params.c}, z);
  SpikeAuxiliary aux;
  aux.tau_sq = tau_squared(params.theta, params.v_norm);
  const double k = aux.tau_sq / params.c;
  aux.B = 1.0 + k * (1.0 + z * t.m_tilde);
  aux.S = t.m_tilde + z * t.m_tilde_prime;
  aux.T = ((k + 1.0) * t.m_tilde_prime - k * t.m_tilde * t.m_tilde) / (aux.B * aux.B);
  return aux;
}

PopulationMoments population_moments(double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw Error(ErrorCode::ThetaOutOfRange, "theta must lie in [0, 1], got " + std::to_string(theta));
  }
  PopulationMoments pm;
  pm.s = (theta / 2.0) * (1.0 - theta / 2.0);
  pm.r_dot_y = -theta / 2.0;
  pm.r_dot_w = theta * (1.0 - theta) / 2.0;
  pm.w_norm_sq = 1.0 - theta * theta;
  pm.w_dot_bhat_sq = theta * (1.0 - theta) * (1.0 - theta) / (2.0 - theta);
  pm.x_bar_coeff = theta / 2.0;
  pm.w_bar = theta;
  return pm;
}

}  // namespace ridgepois
