#pragma once

// Marcenko-Pastur Stieltjes transforms on the negative real axis.
//
// All functions take the aspect ratio c = p/n and a spectral point z < 0.
// m(z) is the limiting (1/p) tr (W - z I)^{-1} of the Wishart matrix
// W = (1/n) X X^T; the companion m~(z) is the same limit for the n x n Gram
// matrix (1/n) X^T X.

namespace ridgepois {

/// Aspect ratio p/n. Constructing one validates c > 0 and finite.
class AspectRatio {
 public:
  explicit AspectRatio(double c);
  double value() const noexcept { return c_; }

 private:
  double c_;
};

/// m and m~ together with their z-derivatives at a single point.
struct TransformValues {
  double m = 0.0;
  double m_tilde = 0.0;
  double m_prime = 0.0;
  double m_tilde_prime = 0.0;
};

double mp_stieltjes(AspectRatio c, double z);
double mp_companion(AspectRatio c, double z);
double mp_stieltjes_derivative(AspectRatio c, double z);
double mp_companion_derivative(AspectRatio c, double z);

TransformValues mp_transform_values(AspectRatio c, double z);

/// |z c m^2 - (1 - c - z) m + 1|, zero for the exact transform.
double mp_self_consistency_residual(AspectRatio c, double z, double m);

}  // namespace ridgepois
