#pragma once

// Monte Carlo checks of the deterministic equivalents for the rank-one
// spiked resolvent Q1(z) = ((1/n) Z Z^T - z I_p)^{-1}, Z = X + tau sqrt(n) a b^T,
// its square, and the Gram-side resolvent Q~1(z) = ((1/n) Z^T Z - z I_n)^{-1}.
//
// Equivalents are compared only through scalar functionals (quadratic
// forms against probe vectors and normalized traces).

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ridgepois/theory.hpp"

namespace ridgepois {

/// Dense inversions above this dimension are refused.
inline constexpr std::uint64_t kMaxDenseDim = 800;

struct ResolventExperiment {
  std::uint64_t p = 100;
  std::uint64_t n = 200;
  double tau = 1.0;
  Eigen::VectorXd a;  // unit, length p
  Eigen::VectorXd b;  // unit, length n
  double z = -0.5;
  std::uint64_t seed = 0;

  void validate() const;
};

enum class SpikeSide { FeatureSide_aaT, GramSide_bbT };

/// iso * I + spike * (unit direction)(unit direction)^T.
struct EquivalentCoefficients {
  double iso = 0.0;
  double spike = 0.0;
  SpikeSide direction = SpikeSide::FeatureSide_aaT;

  double along_spike() const { return iso + spike; }
};

/// Z = X + tau sqrt(n) a b^T with X i.i.d. N(0,1) from the seed.
Eigen::MatrixXd build_spiked(const ResolventExperiment& experiment);

Eigen::MatrixXd feature_resolvent(const Eigen::MatrixXd& Z, double z);
Eigen::MatrixXd gram_resolvent(const Eigen::MatrixXd& Z, double z);

EquivalentCoefficients det_equiv_feature(double c, double tau, double z);
EquivalentCoefficients det_equiv_feature_squared(double c, double tau, double z);
EquivalentCoefficients det_equiv_gram(double c, double tau, double z);
EquivalentCoefficients det_equiv_gram_squared(double c, double tau, double z);

/// Low-rank factors with (1/n) Z Z^T = (1/n) X X^T + U V^T:
///   U = [tau a, X b / sqrt(n), tau a],  V = [X b / sqrt(n), tau a, tau a].
struct SpikeFactors {
  Eigen::MatrixXd U;
  Eigen::MatrixXd V;
};
SpikeFactors spike_factors(const Eigen::MatrixXd& X, const Eigen::VectorXd& a,
                           const Eigen::VectorXd& b, double tau);

/// (1/n) w^T (z Q~^2 + Q~) w with Q~ the Gram resolvent of X at z. At
/// z = -lambda this equals |beta|^2 for the ridge weights of (X, w).
double gram_norm_form(const Eigen::MatrixXd& X, const Eigen::VectorXd& w, double z);

struct ResolventCheckRow {
  std::string check_name;
  std::uint64_t p = 0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  double observed = 0.0;
  double predicted = 0.0;
  double abs_error = 0.0;
};

struct ResolventCheckConfig {
  double c = 0.5;
  double tau = 1.0;
  double z = -0.5;
  std::vector<std::uint64_t> p_values{100, 200, 400};
  std::uint64_t seeds = 20;
  std::uint64_t master_seed = 0;
  unsigned threads = 1;
};

/// Check names emitted by run_resolvent_checks, in output order.
const std::vector<std::string>& resolvent_check_names();

/// All checks for every (p, seed); rows sorted by (check order, p, seed index).
std::vector<ResolventCheckRow> run_resolvent_checks(const ResolventCheckConfig& config);

struct ConvergencePoint {
  std::string check_name;
  std::uint64_t p = 0;
  double median_abs_error = 0.0;
};

std::vector<ConvergencePoint> median_errors(const std::vector<ResolventCheckRow>& rows);

/// Strictly decreasing medians across increasing p, and
/// err(first p) / err(last p) >= min_ratio.
bool converges(const std::vector<ConvergencePoint>& points, const std::string& check_name,
               double min_ratio = 1.5);

/// Variance assembly on one simulated poisoned dataset (population
/// centering, trigger on the first axis): observed is
/// (1/n) w~^T (z Q~^2 + Q~) w~ at z = -lambda, predicted is
/// S [ (1/n)|w~|^2 + ((1 + tau^2/c)/B^2 - 1) (w~^T b)^2 / (n |b|^2) ] from the
/// sample moments of that draw, with b = u - theta/2 and tau^2 = |v|^2 |b|^2 / n.
struct AssemblyCheck {
  double observed = 0.0;
  double predicted = 0.0;
  double relative_error = 0.0;
};
AssemblyCheck variance_assembly_check(const ModelParams& params, std::uint64_t p, std::uint64_t seed);

}  // namespace ridgepois
