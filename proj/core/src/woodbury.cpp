#include "ridgepois/woodbury.hpp"

#include <memory>

#include "ridgepois/error.hpp"

namespace ridgepois {

InverseAction InverseAction::from_matrix(Eigen::MatrixXd inverse) {
  if (inverse.rows() != inverse.cols()) {
    throw Error(ErrorCode::InvalidArgument, "inverse matrix must be square");
  }
  const Eigen::Index dim = inverse.rows();
  auto shared = std::make_shared<const Eigen::MatrixXd>(std::move(inverse));
  return InverseAction(dim, [shared](const Eigen::MatrixXd& rhs) -> Eigen::MatrixXd {
    return (*shared) * rhs;
  });
}

Eigen::MatrixXd InverseAction::dense() const {
  return apply_(Eigen::MatrixXd::Identity(dim_, dim_));
}

InverseAction woodbury_update(const InverseAction& inverse_of_a, const Eigen::MatrixXd& U,
                              const Eigen::MatrixXd& V) {
  const Eigen::Index p = inverse_of_a.dim();
  const Eigen::Index k = U.cols();
  if (U.rows() != p || V.rows() != p || V.cols() != k) {
    throw Error(ErrorCode::InvalidArgument, "U and V must both be p x k");
  }
  if (k == 0 || k > kMaxWoodburyRank) {
    throw Error(ErrorCode::InvalidArgument, "update rank must be in [1, 8]");
  }

  Eigen::MatrixXd a_inv_u = inverse_of_a(U);
  Eigen::MatrixXd capacitance = Eigen::MatrixXd::Identity(k, k) + V.transpose() * a_inv_u;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(capacitance);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) {
    throw Error(ErrorCode::InnerSingular, "I + V^T A^{-1} U is numerically singular");
  }
  auto correction = std::make_shared<const Eigen::MatrixXd>(a_inv_u * lu.inverse());
  auto v_t = std::make_shared<const Eigen::MatrixXd>(V.transpose());

  return InverseAction(p, [inverse_of_a, correction, v_t](const Eigen::MatrixXd& rhs) -> Eigen::MatrixXd {
    Eigen::MatrixXd base = inverse_of_a(rhs);
    return base - (*correction) * ((*v_t) * base);
  });
}

}  // namespace ridgepois
