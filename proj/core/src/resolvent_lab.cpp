#include "ridgepois/resolvent_lab.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ridgepois/error.hpp"
#include "ridgepois/parallel.hpp"
#include "ridgepois/rng.hpp"
#include "ridgepois/simulator.hpp"

namespace ridgepois {

namespace {

void require_negative_z(double z) {
  if (!(z < 0.0) || !std::isfinite(z)) {
    throw Error(ErrorCode::NonNegativeZ, "resolvents are evaluated at z < 0 only");
  }
}

void require_dense_dim(Eigen::Index dim) {
  if (static_cast<std::uint64_t>(dim) > kMaxDenseDim) {
    throw Error(ErrorCode::DimensionTooLarge,
                "dense inversion capped at " + std::to_string(kMaxDenseDim) + ", got " +
                    std::to_string(dim));
  }
}

// (G - z I)^{-1} for symmetric G, symmetrized.
Eigen::MatrixXd shifted_inverse(Eigen::MatrixXd G, double z) {
  require_negative_z(z);
  require_dense_dim(G.rows());
  G.diagonal().array() -= z;
  Eigen::LLT<Eigen::MatrixXd> llt(G);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::SolveFailure, "resolvent factorization failed");
  }
  Eigen::MatrixXd Q = llt.solve(Eigen::MatrixXd::Identity(G.rows(), G.cols()));
  return 0.5 * (Q + Q.transpose());
}

Eigen::VectorXd random_unit(CounterRng& rng, Eigen::Index dim) {
  Eigen::VectorXd x(dim);
  for (Eigen::Index i = 0; i < dim; ++i) x[i] = rng.normal();
  return x / x.norm();
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace

void ResolventExperiment::validate() const {
  if (p == 0 || n == 0) throw Error(ErrorCode::InvalidArgument, "p and n must be positive");
  if (a.size() != static_cast<Eigen::Index>(p) || b.size() != static_cast<Eigen::Index>(n)) {
    throw Error(ErrorCode::InvalidArgument, "probe vectors must have lengths p and n");
  }
  if (std::abs(a.norm() - 1.0) > 1e-12 || std::abs(b.norm() - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "spike directions a and b must be unit vectors");
  }
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw Error(ErrorCode::InvalidArgument, "spike strength tau must be finite and nonnegative");
  }
  require_negative_z(z);
}

Eigen::MatrixXd build_spiked(const ResolventExperiment& experiment) {
  experiment.validate();
  const CleanData base = generate_clean(SimShape{experiment.p, experiment.n, experiment.seed});
  const double scale = experiment.tau * std::sqrt(static_cast<double>(experiment.n));
  return base.X + scale * experiment.a * experiment.b.transpose();
}

Eigen::MatrixXd feature_resolvent(const Eigen::MatrixXd& Z, double z) {
  require_dense_dim(Z.rows());
  const double inv_n = 1.0 / static_cast<double>(Z.cols());
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(Z.rows(), Z.rows());
  G.selfadjointView<Eigen::Lower>().rankUpdate(Z, inv_n);
  G.triangularView<Eigen::StrictlyUpper>() = G.transpose();
  return shifted_inverse(std::move(G), z);
}

Eigen::MatrixXd gram_resolvent(const Eigen::MatrixXd& Z, double z) {
  require_dense_dim(Z.cols());
  const double inv_n = 1.0 / static_cast<double>(Z.cols());
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(Z.cols(), Z.cols());
  G.selfadjointView<Eigen::Lower>().rankUpdate(Z.transpose(), inv_n);
  G.triangularView<Eigen::StrictlyUpper>() = G.transpose();
  return shifted_inverse(std::move(G), z);
}

EquivalentCoefficients det_equiv_feature(double c, double tau, double z) {
  const double m = mp_stieltjes(AspectRatio{c}, z);
  const double denom = 1.0 + tau * tau * (1.0 + z * m);
  return {m, -m * (1.0 - 1.0 / denom), SpikeSide::FeatureSide_aaT};
}

EquivalentCoefficients det_equiv_feature_squared(double c, double tau, double z) {
  const TransformValues t = mp_transform_values(AspectRatio{c}, z);
  const double tau2 = tau * tau;
  const double denom = 1.0 + tau2 * (1.0 + z * t.m);
  const double along = (t.m_prime * (tau2 + 1.0) - t.m * t.m * tau2) / (denom * denom);
  return {t.m_prime, along - t.m_prime, SpikeSide::FeatureSide_aaT};
}

EquivalentCoefficients det_equiv_gram(double c, double tau, double z) {
  const double mt = mp_companion(AspectRatio{c}, z);
  const double B = 1.0 + (tau * tau / c) * (1.0 + z * mt);
  return {mt, -mt * (1.0 - 1.0 / B), SpikeSide::GramSide_bbT};
}

EquivalentCoefficients det_equiv_gram_squared(double c, double tau, double z) {
  const TransformValues t = mp_transform_values(AspectRatio{c}, z);
  const double k = tau * tau / c;
  const double B = 1.0 + k * (1.0 + z * t.m_tilde);
  const double T = ((k + 1.0) * t.m_tilde_prime - k * t.m_tilde * t.m_tilde) / (B * B);
  return {t.m_tilde_prime, T - t.m_tilde_prime, SpikeSide::GramSide_bbT};
}

SpikeFactors spike_factors(const Eigen::MatrixXd& X, const Eigen::VectorXd& a,
                           const Eigen::VectorXd& b, double tau) {
  if (a.size() != X.rows() || b.size() != X.cols()) {
    throw Error(ErrorCode::InvalidArgument, "spike directions must match X");
  }
  const Eigen::VectorXd xb = X * b / std::sqrt(static_cast<double>(X.cols()));
  SpikeFactors f{Eigen::MatrixXd(X.rows(), 3), Eigen::MatrixXd(X.rows(), 3)};
  f.U << tau * a, xb, tau * a;
  f.V << xb, tau * a, tau * a;
  return f;
}

double gram_norm_form(const Eigen::MatrixXd& X, const Eigen::VectorXd& w, double z) {
  if (w.size() != X.cols()) throw Error(ErrorCode::InvalidArgument, "w must have length n");
  const Eigen::MatrixXd Qt = gram_resolvent(X, z);
  const Eigen::VectorXd qw = Qt * w;
  return (z * qw.squaredNorm() + w.dot(qw)) / static_cast<double>(X.cols());
}

const std::vector<std::string>& resolvent_check_names() {
  static const std::vector<std::string> names{
      "feature_quadratic",         "feature_orthogonal",     "feature_trace",
      "feature_squared_quadratic", "feature_squared_trace",  "gram_quadratic",
      "gram_squared_quadratic",    "gram_trace",             "side_consistency",
  };
  return names;
}

std::vector<ResolventCheckRow> run_resolvent_checks(const ResolventCheckConfig& config) {
  AspectRatio{config.c};
  require_negative_z(config.z);
  if (config.seeds == 0 || config.p_values.empty()) {
    throw Error(ErrorCode::InvalidArgument, "need at least one p value and one seed");
  }
  for (const std::uint64_t p : config.p_values) {
    const std::uint64_t n = sample_count_for(p, config.c);
    require_dense_dim(static_cast<Eigen::Index>(std::max(p, n)));
  }

  const std::size_t n_checks = resolvent_check_names().size();
  const std::size_t jobs = config.p_values.size() * config.seeds;
  std::vector<std::vector<ResolventCheckRow>> per_job(jobs);

  parallel_for(jobs, config.threads, [&](std::size_t job) {
    const std::size_t p_index = job / config.seeds;
    const std::uint64_t seed_index = job % config.seeds;
    const std::uint64_t p = config.p_values[p_index];
    const std::uint64_t n = sample_count_for(p, config.c);
    const double c = static_cast<double>(p) / static_cast<double>(n);
    const double z = config.z;
    const std::uint64_t seed = derive_seed(config.master_seed, p, seed_index);

    CounterRng probes(derive_seed(seed, Stream::Probe));
    ResolventExperiment exp;
    exp.p = p;
    exp.n = n;
    exp.tau = config.tau;
    exp.z = z;
    exp.seed = seed;
    exp.a = random_unit(probes, static_cast<Eigen::Index>(p));
    exp.b = random_unit(probes, static_cast<Eigen::Index>(n));
    Eigen::VectorXd g = random_unit(probes, static_cast<Eigen::Index>(p));
    g -= g.dot(exp.a) * exp.a;
    g.normalize();

    const Eigen::MatrixXd Z = build_spiked(exp);
    const Eigen::MatrixXd Q = feature_resolvent(Z, z);
    const Eigen::MatrixXd Qt = gram_resolvent(Z, z);
    const Eigen::VectorXd Qa = Q * exp.a;
    const Eigen::VectorXd Qtb = Qt * exp.b;

    const TransformValues t = mp_transform_values(AspectRatio{c}, z);
    const EquivalentCoefficients feat = det_equiv_feature(c, config.tau, z);
    const EquivalentCoefficients feat_sq = det_equiv_feature_squared(c, config.tau, z);
    const EquivalentCoefficients gram = det_equiv_gram(c, config.tau, z);
    const EquivalentCoefficients gram_sq = det_equiv_gram_squared(c, config.tau, z);

    const double pd = static_cast<double>(p);
    const double nd = static_cast<double>(n);
    const double trace_q = Q.trace() / pd;
    const double trace_qt = Qt.trace() / nd;

    const double observed[] = {
        exp.a.dot(Qa),
        g.dot(Q * g),
        trace_q,
        Qa.squaredNorm(),
        Q.squaredNorm() / pd,
        exp.b.dot(Qtb),
        Qtb.squaredNorm(),
        trace_qt,
        trace_qt,
    };
    const double predicted[] = {
        feat.along_spike(),
        feat.iso,
        t.m,
        feat_sq.along_spike(),
        t.m_prime,
        gram.along_spike(),
        gram_sq.along_spike(),
        t.m_tilde,
        c * trace_q - (1.0 - c) / z,
    };

    auto& rows = per_job[job];
    rows.reserve(n_checks);
    for (std::size_t k = 0; k < n_checks; ++k) {
      rows.push_back({resolvent_check_names()[k], p, n, seed, observed[k], predicted[k],
                      std::abs(observed[k] - predicted[k])});
    }
  });

  std::vector<ResolventCheckRow> out;
  out.reserve(jobs * n_checks);
  for (std::size_t k = 0; k < n_checks; ++k) {
    for (const auto& rows : per_job) out.push_back(rows[k]);
  }
  return out;
}

std::vector<ConvergencePoint> median_errors(const std::vector<ResolventCheckRow>& rows) {
  std::vector<ConvergencePoint> out;
  std::vector<double> bucket;
  for (std::size_t i = 0; i < rows.size();) {
    std::size_t j = i;
    bucket.clear();
    while (j < rows.size() && rows[j].check_name == rows[i].check_name && rows[j].p == rows[i].p) {
      bucket.push_back(rows[j].abs_error);
      ++j;
    }
    out.push_back({rows[i].check_name, rows[i].p, median(bucket)});
    i = j;
  }
  return out;
}

bool converges(const std::vector<ConvergencePoint>& points, const std::string& check_name,
               double min_ratio) {
  std::vector<ConvergencePoint> mine;
  for (const auto& pt : points) {
    if (pt.check_name == check_name) mine.push_back(pt);
  }
  if (mine.size() < 2) return false;
  std::sort(mine.begin(), mine.end(), [](const auto& l, const auto& r) { return l.p < r.p; });
  for (std::size_t i = 1; i < mine.size(); ++i) {
    if (!(mine[i].median_abs_error < mine[i - 1].median_abs_error)) return false;
  }
  return mine.front().median_abs_error >= min_ratio * mine.back().median_abs_error;
}

AssemblyCheck variance_assembly_check(const ModelParams& params, std::uint64_t p, std::uint64_t seed) {
  params.validate();
  if (!(params.lambda > 0.0)) throw Error(ErrorCode::InvalidLambda, "assembly check needs lambda > 0");
  const SimShape shape{p, sample_count_for(p, params.c), seed};
  const Eigen::VectorXd v = make_trigger(p, params.v_norm, TriggerDirection::FirstAxis, seed);
  CleanData clean = generate_clean(shape);
  const PoisonedDataset data =
      apply_poison(std::move(clean.X), std::move(clean.y), params.theta, v, seed);
  const CenteredData centered = center(data, params.theta);

  const double z = -params.lambda;
  const double n = static_cast<double>(shape.n);
  const Eigen::VectorXd r = data.u.array() - params.theta / 2.0;
  const double r_sq = r.squaredNorm();
  const double w_norm_sq = centered.w_tilde.squaredNorm() / n;
  const double w_dot_bhat_sq = r_sq > 0.0 ? std::pow(centered.w_tilde.dot(r), 2) / (n * r_sq) : 0.0;

  const double c = shape.c_effective();
  const TransformValues t = mp_transform_values(AspectRatio{c}, z);
  const double k = params.v_norm * params.v_norm * (r_sq / n) / c;
  const double B = 1.0 + k * (1.0 + z * t.m_tilde);
  const double S = t.m_tilde + z * t.m_tilde_prime;

  AssemblyCheck out;
  out.observed = gram_norm_form(centered.X_tilde, centered.w_tilde, z);
  out.predicted = S * (w_norm_sq + ((k + 1.0) / (B * B) - 1.0) * w_dot_bhat_sq);
  out.relative_error = std::abs(out.observed - out.predicted) / std::abs(out.predicted);
  return out;
}

}  // namespace ridgepois
