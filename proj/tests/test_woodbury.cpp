#include <cmath>

#include <gtest/gtest.h>

#include "ridgepois/error.hpp"
#include "ridgepois/woodbury.hpp"
#include "test_support.hpp"

namespace ridgepois {
namespace {

Eigen::MatrixXd spd(Eigen::Index p, std::uint64_t seed) {
  const Eigen::MatrixXd G = test::std_gaussian(p, 2 * p, seed);
  return G * G.transpose() / double(2 * p) + 0.5 * Eigen::MatrixXd::Identity(p, p);
}

TEST(Woodbury, ShermanMorrisonRankOne) {
  const Eigen::MatrixXd A = spd(5, 1);
  const Eigen::VectorXd u = test::std_gaussian(5, 1, 2);
  const Eigen::VectorXd v = test::std_gaussian(5, 1, 3);
  const Eigen::MatrixXd Ainv = A.inverse();
  const Eigen::MatrixXd sm = Ainv - (Ainv * u * v.transpose() * Ainv) / (1.0 + v.dot(Ainv * u));

  const InverseAction updated = woodbury_update(InverseAction::from_matrix(Ainv), u, v);
  EXPECT_LE((updated.dense() - sm).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Woodbury, RankThreeSpikeReconstruction) {
  const Eigen::Index p = 100, n = 200;
  const double tau = 1.0;
  const Eigen::MatrixXd X = test::std_gaussian(p, n, 10);
  Eigen::VectorXd a = test::std_gaussian(p, 1, 11);
  a.normalize();
  Eigen::VectorXd b = test::std_gaussian(n, 1, 12);
  b.normalize();
  const double z = -0.5;

  const Eigen::MatrixXd W = X * X.transpose() / double(n);
  const Eigen::MatrixXd base = (W - z * Eigen::MatrixXd::Identity(p, p)).inverse();

  const Eigen::VectorXd xb = X * b / std::sqrt(double(n));
  Eigen::MatrixXd U(p, 3), V(p, 3);
  U << tau * a, xb, tau * a;
  V << xb, tau * a, tau * a;

  const Eigen::MatrixXd Xs = X + tau * std::sqrt(double(n)) * a * b.transpose();
  const Eigen::MatrixXd direct =
      (Xs * Xs.transpose() / double(n) - z * Eigen::MatrixXd::Identity(p, p)).inverse();
  const InverseAction updated = woodbury_update(InverseAction::from_matrix(base), U, V);
  EXPECT_LE((updated.dense() - direct).norm() / direct.norm(), 1e-10);

  const Eigen::VectorXd r = test::std_gaussian(p, 1, 13);
  EXPECT_LE((updated.apply(r) - direct * r).norm() / (direct * r).norm(), 1e-10);
}

TEST(Woodbury, ZeroUpdateIsIdentity) {
  const Eigen::MatrixXd A = spd(8, 4);
  const Eigen::MatrixXd Ainv = A.inverse();
  const Eigen::MatrixXd U = Eigen::MatrixXd::Zero(8, 2);
  const Eigen::MatrixXd V = test::std_gaussian(8, 2, 5);
  EXPECT_LE((woodbury_update(InverseAction::from_matrix(Ainv), U, V).dense() - Ainv).cwiseAbs().maxCoeff(),
            1e-15);
}

TEST(Woodbury, SingularCapacitance) {
  // A = I, U = e1, V = -e1: I + V^T U = 0.
  Eigen::MatrixXd U = Eigen::MatrixXd::Zero(4, 1);
  U(0, 0) = 1.0;
  try {
    woodbury_update(InverseAction::from_matrix(Eigen::MatrixXd::Identity(4, 4)), U, -U);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InnerSingular);
  }
}

TEST(Woodbury, RejectsBadShapes) {
  const InverseAction I = InverseAction::from_matrix(Eigen::MatrixXd::Identity(4, 4));
  EXPECT_THROW(woodbury_update(I, Eigen::MatrixXd::Zero(3, 1), Eigen::MatrixXd::Zero(3, 1)), Error);
  EXPECT_THROW(woodbury_update(I, Eigen::MatrixXd::Zero(4, 2), Eigen::MatrixXd::Zero(4, 1)), Error);
  EXPECT_THROW(woodbury_update(I, Eigen::MatrixXd::Zero(4, 9), Eigen::MatrixXd::Zero(4, 9)), Error);
  EXPECT_THROW(InverseAction::from_matrix(Eigen::MatrixXd::Zero(3, 4)), Error);
}

}  // namespace
}  // namespace ridgepois
