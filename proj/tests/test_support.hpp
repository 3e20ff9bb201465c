#pragma once

// Helpers shared by the unit and acceptance suites. Nothing in here calls
// into the code under test except where noted.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace ridgepois::test {

inline constexpr double kTable1C[] = {0.1, 0.3, 0.5, 0.75, 1.25, 1.5, 2.0};
inline constexpr double kTable1Lambda[] = {0.001, 0.005, 0.01, 0.05, 0.1, 1.0};
inline constexpr double kTable1Theta[] = {0.01, 0.05, 0.1, 0.2};
inline constexpr double kTable1VNorm[] = {0.1, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0};

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

inline double mean(const std::vector<double>& x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

/// Standard error of the mean (sample standard deviation / sqrt(N)).
inline double std_error(const std::vector<double>& x) {
  const double mu = mean(x);
  double ss = 0.0;
  for (const double v : x) ss += (v - mu) * (v - mu);
  return std::sqrt(ss / static_cast<double>(x.size() - 1)) / std::sqrt(static_cast<double>(x.size()));
}

/// Gaussian matrix from the standard library generator, independent of the
/// project's RNG.
inline Eigen::MatrixXd std_gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd X(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) X(i, j) = normal(gen);
  return X;
}

/// (1/p) sum_i 1/(eig_i(W) + lambda) for one Wishart draw W = (1/n) X X^T.
inline double wishart_resolvent_trace(std::uint64_t p, double c, double lambda, std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(std::llround(static_cast<double>(p) / c));
  const Eigen::MatrixXd X = std_gaussian(static_cast<Eigen::Index>(p), n, seed);
  const Eigen::MatrixXd W = X * X.transpose() / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(W, Eigen::EigenvaluesOnly);
  return (eig.eigenvalues().array() + lambda).inverse().mean();
}

}  // namespace ridgepois::test
