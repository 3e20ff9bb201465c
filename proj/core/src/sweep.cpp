#include "ridgepois/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <numeric>
#include <thread>

#include "ridgepois/error.hpp"
#include "ridgepois/parallel.hpp"
#include "ridgepois/rng.hpp"

namespace ridgepois {

unsigned default_thread_count() {
  if (const char* env = std::getenv("RIDGEPOIS_THREADS")) {
    const long value = std::strtol(env, nullptr, 10);
    if (value > 0) return static_cast<unsigned>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SweepGrid SweepGrid::table1() {
  SweepGrid g;
  g.c_values = {0.1, 0.3, 0.5, 0.75, 1.25, 1.5, 2.0};
  g.lambda_values = {0.001, 0.005, 0.01, 0.05, 0.1, 1.0};
  g.theta_values = {0.01, 0.05, 0.1, 0.2};
  g.vnorm_values = {0.1, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0};
  g.defaults = ModelParams{0.1, 0.1, 0.1, 1.0};
  g.p = 500;
  g.trials = 100;
  return g;
}

void SweepGrid::validate() const {
  if (p == 0) throw Error(ErrorCode::InvalidArgument, "sweep needs p >= 1");
  if (trials == 0) throw Error(ErrorCode::InvalidArgument, "sweep needs trials >= 1");
  defaults.validate();
  auto check_axis = [this](const std::vector<double>& values, auto apply) {
    for (const double x : values) {
      ModelParams probe = defaults;
      apply(probe, x);
      probe.validate();
    }
  };
  check_axis(c_values, [](ModelParams& m, double x) { m.c = x; });
  check_axis(lambda_values, [](ModelParams& m, double x) { m.lambda = x; });
  for (const double x : lambda_values) {
    if (!(x > 0.0)) throw Error(ErrorCode::InvalidLambda, "sweep lambda values must be positive");
  }
  if (!(defaults.lambda > 0.0)) throw Error(ErrorCode::InvalidLambda, "default lambda must be positive");
  check_axis(theta_values, [](ModelParams& m, double x) { m.theta = x; });
  check_axis(vnorm_values, [](ModelParams& m, double x) { m.v_norm = x; });
}

std::string to_string(AxisMode mode) { return mode == AxisMode::Full ? "full" : "one-at-a-time"; }

AxisMode parse_axis_mode(const std::string& text) {
  if (text == "full") return AxisMode::Full;
  if (text == "one-at-a-time" || text == "oaat") return AxisMode::OneAtATime;
  throw Error(ErrorCode::InvalidArgument, "unknown axis mode '" + text + "'");
}

std::vector<GridPoint> enumerate_grid(const SweepGrid& grid, AxisMode mode) {
  grid.validate();
  std::vector<GridPoint> points;
  auto push = [&points](ModelParams params, std::string axis) {
    points.push_back({points.size(), params, std::move(axis)});
  };
  if (mode == AxisMode::OneAtATime) {
    for (const double x : grid.c_values) {
      ModelParams m = grid.defaults;
      m.c = x;
      push(m, "c");
    }
    for (const double x : grid.lambda_values) {
      ModelParams m = grid.defaults;
      m.lambda = x;
      push(m, "lambda");
    }
    for (const double x : grid.theta_values) {
      ModelParams m = grid.defaults;
      m.theta = x;
      push(m, "theta");
    }
    for (const double x : grid.vnorm_values) {
      ModelParams m = grid.defaults;
      m.v_norm = x;
      push(m, "vnorm");
    }
    return points;
  }
  for (const double c : grid.c_values)
    for (const double lambda : grid.lambda_values)
      for (const double theta : grid.theta_values)
        for (const double vn : grid.vnorm_values) push(ModelParams{c, lambda, theta, vn}, "full");
  return points;
}

std::vector<SweepRecord> run_sweep(const SweepGrid& grid, AxisMode mode, const SweepOptions& options) {
  const std::vector<GridPoint> points = enumerate_grid(grid, mode);
  const std::size_t total = points.size() * grid.trials;
  std::vector<SweepRecord> records(total);
  std::atomic<std::size_t> done{0};

  parallel_for(total, options.threads, [&](std::size_t job) {
    const GridPoint& gp = points[job / grid.trials];
    const std::uint64_t trial = job % grid.trials;
    const SimShape shape{grid.p, sample_count_for(grid.p, gp.params.c),
                         derive_seed(grid.master_seed, gp.grid_index, trial)};
    SweepRecord rec;
    try {
      rec = run_trial(gp.params, shape, options.trial);
    } catch (const std::exception& e) {
      constexpr double nan = std::numeric_limits<double>::quiet_NaN();
      rec = SweepRecord{};
      rec.c_target = gp.params.c;
      rec.c_effective = shape.c_effective();
      rec.lambda = gp.params.lambda;
      rec.theta = gp.params.theta;
      rec.v_norm = gp.params.v_norm;
      rec.p = shape.p;
      rec.n = shape.n;
      rec.seed = shape.seed;
      rec.mu_emp = rec.sigma2_emp = rec.eta_emp_mc = rec.eta_emp_plugin = nan;
      rec.mu_theory = rec.sigma2_theory = rec.eta_theory = rec.C_theory = nan;
      try {
        ModelParams at_effective = gp.params;
        at_effective.c = rec.c_effective;
        const TheoryPrediction t = predict(at_effective);
        rec.mu_theory = t.mu;
        rec.sigma2_theory = t.sigma_sq;
        rec.eta_theory = t.eta;
        rec.C_theory = t.C_align;
      } catch (const Error&) {
        // theory columns stay NaN
      }
      rec.centering_mode = options.trial.centering;
      rec.status = std::string("error: ") + e.what();
    }
    rec.grid_index = gp.grid_index;
    rec.trial_index = trial;
    records[job] = std::move(rec);
    const std::size_t finished = done.fetch_add(1) + 1;
    if (options.progress) options.progress(finished, total);
  });

  // Jobs are already laid out in (grid, trial) order; keep the sort as the
  // canonical ordering contract.
  std::stable_sort(records.begin(), records.end(), [](const SweepRecord& l, const SweepRecord& r) {
    return std::tie(l.grid_index, l.trial_index) < std::tie(r.grid_index, r.trial_index);
  });
  return records;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::EmptyGroup, "quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorCode::InvalidArgument, "quantile level outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = static_cast<double>(values.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

Summary summarize(const std::vector<double>& values) {
  if (values.empty()) throw Error(ErrorCode::EmptyGroup, "summary of an empty sample");
  Summary s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  s.median = quantile(values, 0.5);
  s.q25 = quantile(values, 0.25);
  s.q75 = quantile(values, 0.75);
  return s;
}

std::vector<AggregateRow> aggregate(const std::vector<SweepRecord>& records) {
  if (records.empty()) throw Error(ErrorCode::EmptyGroup, "no records to aggregate");
  std::map<std::uint64_t, std::vector<const SweepRecord*>> groups;
  for (const auto& r : records) groups[r.grid_index].push_back(&r);

  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  const Summary empty{nan, nan, nan, nan};

  std::vector<AggregateRow> out;
  out.reserve(groups.size());
  for (const auto& [index, members] : groups) {
    AggregateRow row;
    row.grid_index = index;
    const SweepRecord* first_ok = nullptr;
    std::vector<double> mu, s2, eta_mc, eta_plugin;
    for (const SweepRecord* r : members) {
      if (r->is_error()) {
        ++row.trials_error;
        continue;
      }
      if (first_ok == nullptr) first_ok = r;
      ++row.trials_ok;
      mu.push_back(r->mu_emp);
      s2.push_back(r->sigma2_emp);
      eta_mc.push_back(r->eta_emp_mc);
      eta_plugin.push_back(r->eta_emp_plugin);
    }
    const SweepRecord& ref = first_ok != nullptr ? *first_ok : *members.front();
    row.c_target = ref.c_target;
    row.c_effective = ref.c_effective;
    row.lambda = ref.lambda;
    row.theta = ref.theta;
    row.v_norm = ref.v_norm;
    row.p = ref.p;
    row.n = ref.n;
    row.mu_theory = ref.mu_theory;
    row.sigma2_theory = ref.sigma2_theory;
    row.eta_theory = ref.eta_theory;
    row.C_theory = ref.C_theory;
    row.dataset = ref.dataset;
    row.mu_emp = mu.empty() ? empty : summarize(mu);
    row.sigma2_emp = s2.empty() ? empty : summarize(s2);
    row.eta_emp_mc = eta_mc.empty() ? empty : summarize(eta_mc);
    row.eta_emp_plugin = eta_plugin.empty() ? empty : summarize(eta_plugin);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace ridgepois
