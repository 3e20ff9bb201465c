#include "ridgepois/simulator.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "ridgepois/error.hpp"
#include "ridgepois/rng.hpp"

namespace ridgepois {

std::uint64_t sample_count_for(std::uint64_t p, double c) {
  AspectRatio{c};
  const double n = std::round(static_cast<double>(p) / c);
  return n < 1.0 ? 1 : static_cast<std::uint64_t>(n);
}

CleanData generate_clean(const SimShape& shape) {
  if (shape.p == 0 || shape.n == 0) {
    throw Error(ErrorCode::InvalidArgument, "shape needs p >= 1 and n >= 1");
  }
  const auto p = static_cast<Eigen::Index>(shape.p);
  const auto n = static_cast<Eigen::Index>(shape.n);
  CleanData out{Eigen::MatrixXd(p, n), Eigen::VectorXd(n)};

  CounterRng features(derive_seed(shape.seed, Stream::Features));
  double* data = out.X.data();
  for (Eigen::Index k = 0; k < p * n; ++k) data[k] = features.normal();

  CounterRng labels(derive_seed(shape.seed, Stream::Labels));
  for (Eigen::Index i = 0; i < n; ++i) out.y[i] = labels.sign();
  return out;
}

PoisonedDataset apply_poison(Eigen::MatrixXd X, Eigen::VectorXd y, double theta,
                             const Eigen::VectorXd& v, std::uint64_t seed, Centering centering) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw Error(ErrorCode::ThetaOutOfRange, "theta must lie in [0, 1]");
  }
  if (v.size() != X.rows() || y.size() != X.cols()) {
    throw Error(ErrorCode::InvalidArgument, "trigger/label dimensions do not match X");
  }
  if (!v.allFinite()) throw Error(ErrorCode::InvalidArgument, "trigger must be finite");

  PoisonedDataset out;
  out.u = Eigen::VectorXd::Zero(X.cols());
  CounterRng rng(derive_seed(seed, Stream::Poison));
  for (Eigen::Index i = 0; i < X.cols(); ++i) {
    if (y[i] != -1.0) continue;
    if (rng.uniform() < theta) {
      out.u[i] = 1.0;
      X.col(i) += v;
      y[i] = 1.0;
    }
  }
  out.X = std::move(X);
  out.y = std::move(y);
  out.v = v;
  out.theta = theta;
  out.centering = centering;
  return out;
}

CenteredData center(const PoisonedDataset& data, double theta) {
  CenteredData out;
  if (data.centering == Centering::Population) {
    out.x_bar = (theta / 2.0) * data.v;
    out.w_bar = theta;
  } else {
    out.x_bar = data.X.rowwise().mean();
    out.w_bar = data.y.mean();
  }
  out.X_tilde = data.X.colwise() - out.x_bar;
  out.w_tilde = data.y.array() - out.w_bar;
  return out;
}

namespace {

void require_positive_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::NonPositiveLambda, "ridge solve needs lambda > 0");
  }
}

void require_matching(const Eigen::MatrixXd& X, const Eigen::VectorXd& w) {
  if (X.cols() != w.size()) {
    throw Error(ErrorCode::InvalidArgument, "label vector length must equal the number of columns");
  }
}

}  // namespace

Eigen::VectorXd ridge_weights_primal(const Eigen::MatrixXd& X_tilde, const Eigen::VectorXd& w_tilde,
                                     double lambda) {
  require_positive_lambda(lambda);
  require_matching(X_tilde, w_tilde);
  const double inv_n = 1.0 / static_cast<double>(X_tilde.cols());
  const Eigen::Index p = X_tilde.rows();

  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(p, p);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(X_tilde, inv_n);
  gram.diagonal().array() += lambda;

  Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> llt(gram);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::SolveFailure, "Cholesky of the p x p ridge system failed");
  }
  return llt.solve(inv_n * (X_tilde * w_tilde));
}

Eigen::VectorXd ridge_weights_dual(const Eigen::MatrixXd& X_tilde, const Eigen::VectorXd& w_tilde,
                                   double lambda) {
  require_positive_lambda(lambda);
  require_matching(X_tilde, w_tilde);
  const double inv_n = 1.0 / static_cast<double>(X_tilde.cols());
  const Eigen::Index n = X_tilde.cols();

  Eigen::MatrixXd kernel = Eigen::MatrixXd::Zero(n, n);
  kernel.selfadjointView<Eigen::Lower>().rankUpdate(X_tilde.transpose(), inv_n);
  kernel.diagonal().array() += lambda;

  Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> llt(kernel);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::SolveFailure, "Cholesky of the n x n ridge system failed");
  }
  return inv_n * (X_tilde * llt.solve(w_tilde));
}

RidgeSolution solve_ridge(const Eigen::MatrixXd& X_tilde, const Eigen::VectorXd& w_tilde,
                          double lambda, const Eigen::VectorXd& x_bar, double w_bar,
                          const Eigen::VectorXd* trigger) {
  if (x_bar.size() != X_tilde.rows()) {
    throw Error(ErrorCode::InvalidArgument, "x_bar length must equal the feature dimension");
  }
  RidgeSolution out;
  out.beta = X_tilde.rows() <= X_tilde.cols() ? ridge_weights_primal(X_tilde, w_tilde, lambda)
                                              : ridge_weights_dual(X_tilde, w_tilde, lambda);
  out.b0 = w_bar - out.beta.dot(x_bar);
  out.sigma_sq_emp = out.beta.squaredNorm();
  if (trigger != nullptr) {
    if (trigger->size() != out.beta.size()) {
      throw Error(ErrorCode::InvalidArgument, "trigger length must equal the feature dimension");
    }
    out.mu_emp = out.beta.dot(*trigger);
  }
  return out;
}

double empirical_efficacy(const RidgeSolution& solution, const Eigen::VectorXd& v,
                          std::uint64_t m_test, std::uint64_t seed, bool include_intercept) {
  if (m_test == 0) throw Error(ErrorCode::InvalidArgument, "m_test must be at least 1");
  if (v.size() != solution.beta.size()) {
    throw Error(ErrorCode::InvalidArgument, "trigger length must equal the feature dimension");
  }
  const double offset = solution.beta.dot(v) + (include_intercept ? solution.b0 : 0.0);
  const Eigen::Index p = solution.beta.size();
  const double* beta = solution.beta.data();

  CounterRng rng(derive_seed(seed, Stream::TestPoints));
  std::uint64_t flipped = 0;
  for (std::uint64_t t = 0; t < m_test; ++t) {
    double score = offset;
    for (Eigen::Index j = 0; j < p; ++j) score += beta[j] * rng.normal();
    if (score > 0.0) ++flipped;
  }
  return static_cast<double>(flipped) / static_cast<double>(m_test);
}

Eigen::VectorXd make_trigger(std::uint64_t p, double v_norm, TriggerDirection direction,
                             std::uint64_t seed) {
  if (p == 0) throw Error(ErrorCode::InvalidArgument, "trigger dimension must be positive");
  const auto dim = static_cast<Eigen::Index>(p);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  if (direction == TriggerDirection::FirstAxis) {
    v[0] = v_norm;
    return v;
  }
  CounterRng rng(derive_seed(seed, Stream::Trigger));
  for (Eigen::Index j = 0; j < dim; ++j) v[j] = rng.normal();
  return v * (v_norm / v.norm());
}

std::string conditioning_warning(double c, double lambda) {
  if (lambda < 1e-6) return "tiny_lambda";
  if (std::abs(c - 1.0) <= 0.25 && lambda < 0.01) return "near_interpolation_threshold";
  return "";
}

SweepRecord run_trial(const ModelParams& params, const SimShape& shape,
                      const TrialOptions& options) {
  params.validate();
  const auto start = std::chrono::steady_clock::now();

  SweepRecord rec;
  rec.c_target = params.c;
  rec.c_effective = shape.c_effective();
  rec.lambda = params.lambda;
  rec.theta = params.theta;
  rec.v_norm = params.v_norm;
  rec.p = shape.p;
  rec.n = shape.n;
  rec.seed = shape.seed;
  rec.centering_mode = options.centering;

  ModelParams at_effective = params;
  at_effective.c = rec.c_effective;
  const TheoryPrediction theory = predict(at_effective);
  rec.mu_theory = theory.mu;
  rec.sigma2_theory = theory.sigma_sq;
  rec.eta_theory = theory.eta;
  rec.C_theory = theory.C_align;

  const Eigen::VectorXd v = make_trigger(shape.p, params.v_norm, options.trigger, shape.seed);
  CleanData clean = generate_clean(shape);
  const PoisonedDataset data = apply_poison(std::move(clean.X), std::move(clean.y), params.theta,
                                            v, shape.seed, options.centering);
  const CenteredData centered = center(data, params.theta);
  const RidgeSolution sol = solve_ridge(centered.X_tilde, centered.w_tilde, params.lambda,
                                        centered.x_bar, centered.w_bar, &v);

  rec.mu_emp = sol.mu_emp;
  rec.sigma2_emp = sol.sigma_sq_emp;
  rec.eta_emp_plugin = efficacy(sol.mu_emp, sol.sigma_sq_emp);
  rec.eta_emp_mc = empirical_efficacy(sol, v, options.m_test, shape.seed, options.include_intercept);

  rec.warning = conditioning_warning(rec.c_effective, params.lambda);
  if (theory.variance_clamped) {
    rec.warning += rec.warning.empty() ? "variance_clamped" : ";variance_clamped";
  }
  if (options.record_timing) {
    rec.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return rec;
}

}  // namespace ridgepois
