#pragma once

#include "ridgepois/mp_transforms.hpp"

namespace ridgepois {

/// Inputs to every closed-form prediction.
///
/// lambda = 0 is only meaningful for predict_ridgeless(); the finite-lambda
/// functions reject it.
struct ModelParams {
  double c = 0.1;
  double lambda = 0.1;
  double theta = 0.1;
  double v_norm = 1.0;

  /// Throws InvalidArgument / ThetaOutOfRange on out-of-domain fields.
  void validate() const;
};

/// Asymptotic law of the poisoned score beta^T (x0 + v) ~ N(mu, sigma_sq),
/// the resulting efficacy, and the alignment coefficient C = mu / |v|^2.
struct TheoryPrediction {
  double mu = 0.0;
  double sigma_sq = 0.0;
  double eta = 0.5;
  double C_align = 0.0;
  // Set when a slightly negative variance (>= -1e-10) was clamped to zero.
  bool variance_clamped = false;
};

/// Rank-one spike scalars on the Gram side.
struct SpikeAuxiliary {
  double tau_sq = 0.0;  // |v|^2 (theta/2)(1 - theta/2)
  double B = 1.0;       // 1 + tau^2/c (1 + z m~)
  double S = 0.0;       // m~ + z m~'
  double T = 0.0;       // b^T Q~^2 b equivalent
};

/// Almost-sure limits of the label/poison statistics used by the theory.
struct PopulationMoments {
  double s = 0.0;              // (1/n)|r|^2
  double r_dot_y = 0.0;        // (1/n) y^T r
  double r_dot_w = 0.0;        // (1/n) r^T w~
  double w_norm_sq = 1.0;      // (1/n)|w~|^2
  double w_dot_bhat_sq = 0.0;  // (1/n)(w~^T r/|r|)^2
  double x_bar_coeff = 0.0;    // x_bar = x_bar_coeff * v
  double w_bar = 0.0;
};

TheoryPrediction predict(const ModelParams& params);

/// lambda -> 0 limit; valid only below the interpolation threshold (c < 1).
TheoryPrediction predict_ridgeless(const ModelParams& params);

double alignment_coefficient(const ModelParams& params);

SpikeAuxiliary spike_auxiliary(const ModelParams& params, double z);

PopulationMoments population_moments(double theta);

/// Standard normal CDF.
double normal_cdf(double x);

/// 1 - Phi(-mu/sigma), with the degenerate sigma = 0 cases resolved to 1
/// (mu > 0), 0.5 (mu = 0) or 0 (mu < 0).
double efficacy(double mu, double sigma_sq);

/// m~(-lambda) - lambda m~'(-lambda): the clean-ridge variance factor.
double clean_variance_factor(AspectRatio c, double lambda);

}  // namespace ridgepois
