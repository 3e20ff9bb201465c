#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "ridgepois/record.hpp"
#include "ridgepois/theory.hpp"

namespace ridgepois {

struct SimShape {
  std::uint64_t p = 500;
  std::uint64_t n = 5000;
  std::uint64_t seed = 0;

  double c_effective() const { return static_cast<double>(p) / static_cast<double>(n); }
};

/// n = round(p / c), at least 1.
std::uint64_t sample_count_for(std::uint64_t p, double c);

struct CleanData {
  Eigen::MatrixXd X;  // p x n, one sample per column
  Eigen::VectorXd y;  // +-1
};

/// Post-poison training set.
struct PoisonedDataset {
  Eigen::MatrixXd X;  // p x n, poisoned columns already shifted by v
  Eigen::VectorXd y;  // labels after flipping
  Eigen::VectorXd u;  // 1 where the sample was poisoned
  Eigen::VectorXd v;
  double theta = 0.0;
  Centering centering = Centering::Population;
};

struct CenteredData {
  Eigen::MatrixXd X_tilde;
  Eigen::VectorXd w_tilde;
  Eigen::VectorXd x_bar;
  double w_bar = 0.0;
};

struct RidgeSolution {
  Eigen::VectorXd beta;
  double b0 = 0.0;
  double mu_emp = 0.0;        // beta^T v
  double sigma_sq_emp = 0.0;  // |beta|^2
};

/// i.i.d. N(0,1) features and uniform +-1 labels, fixed by shape.seed.
CleanData generate_clean(const SimShape& shape);

/// Each y = -1 sample is independently shifted by v and relabelled +1 with
/// probability theta.
PoisonedDataset apply_poison(Eigen::MatrixXd X, Eigen::VectorXd y, double theta,
                             const Eigen::VectorXd& v, std::uint64_t seed,
                             Centering centering = Centering::Population);

/// Population mode uses x_bar = (theta/2) v and w_bar = theta; Empirical
/// mode uses the sample means.
CenteredData center(const PoisonedDataset& data, double theta);

/// beta = (1/n) ((1/n) X X^T + lambda I)^{-1} X w via a p x p Cholesky.
Eigen::VectorXd ridge_weights_primal(const Eigen::MatrixXd& X_tilde, const Eigen::VectorXd& w_tilde,
                                     double lambda);
/// Same estimator through the n x n system (1/n) X ((1/n) X^T X + lambda I)^{-1} w.
Eigen::VectorXd ridge_weights_dual(const Eigen::MatrixXd& X_tilde, const Eigen::VectorXd& w_tilde,
                                   double lambda);

/// Picks the primal system when p <= n, the dual otherwise. b0 = w_bar - beta^T x_bar.
/// mu_emp is filled against `trigger` when one is given (same length as beta).
RidgeSolution solve_ridge(const Eigen::MatrixXd& X_tilde, const Eigen::VectorXd& w_tilde,
                          double lambda, const Eigen::VectorXd& x_bar, double w_bar,
                          const Eigen::VectorXd* trigger = nullptr);

/// Fraction of m_test fresh x0 ~ N(0, I) whose score beta^T (x0 + v)
/// (+ b0 if include_intercept) is strictly positive.
double empirical_efficacy(const RidgeSolution& solution, const Eigen::VectorXd& v,
                          std::uint64_t m_test, std::uint64_t seed, bool include_intercept);

enum class TriggerDirection { FirstAxis, Random };

/// v = |v| e_1, or |v| times a seeded uniform unit vector.
Eigen::VectorXd make_trigger(std::uint64_t p, double v_norm, TriggerDirection direction,
                             std::uint64_t seed);

struct TrialOptions {
  Centering centering = Centering::Population;
  TriggerDirection trigger = TriggerDirection::FirstAxis;
  std::uint64_t m_test = 10000;
  bool include_intercept = false;
  bool record_timing = false;
};

/// "" when the solve is well conditioned, otherwise a short tag.
std::string conditioning_warning(double c, double lambda);

/// generate -> poison -> center -> solve -> empirical statistics, joined
/// with predict(params). Errors propagate as exceptions.
SweepRecord run_trial(const ModelParams& params, const SimShape& shape,
                      const TrialOptions& options = {});

}  // namespace ridgepois
