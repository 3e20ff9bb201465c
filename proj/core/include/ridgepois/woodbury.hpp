#pragma once

#include <functional>

#include <Eigen/Dense>

namespace ridgepois {

/// A linear operator known only through its action X -> A^{-1} X on blocks
/// of column vectors.
class InverseAction {
 public:
  using Apply = std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>;

  InverseAction(Eigen::Index dim, Apply apply) : dim_(dim), apply_(std::move(apply)) {}

  /// Wraps an explicit inverse matrix.
  static InverseAction from_matrix(Eigen::MatrixXd inverse);

  Eigen::Index dim() const noexcept { return dim_; }
  Eigen::MatrixXd operator()(const Eigen::MatrixXd& rhs) const { return apply_(rhs); }
  Eigen::VectorXd apply(const Eigen::VectorXd& rhs) const { return apply_(rhs); }

  /// Materializes the operator by applying it to the identity.
  Eigen::MatrixXd dense() const;

 private:
  Eigen::Index dim_;
  Apply apply_;
};

/// Largest update rank accepted by woodbury_update.
inline constexpr Eigen::Index kMaxWoodburyRank = 8;

/// Inverse action of A + U V^T from that of A:
///   (A + U V^T)^{-1} = A^{-1} - A^{-1} U (I_k + V^T A^{-1} U)^{-1} V^T A^{-1}.
/// Throws InnerSingular when the k x k capacitance matrix is numerically singular.
InverseAction woodbury_update(const InverseAction& inverse_of_a, const Eigen::MatrixXd& U,
                              const Eigen::MatrixXd& V);

}  // namespace ridgepois
