#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ridgepois/record.hpp"
#include "ridgepois/simulator.hpp"
#include "ridgepois/theory.hpp"

namespace ridgepois {

struct SweepGrid {
  std::vector<double> c_values;
  std::vector<double> lambda_values;
  std::vector<double> theta_values;
  std::vector<double> vnorm_values;
  // Values held fixed while another axis varies in OneAtATime mode.
  ModelParams defaults{};
  std::uint64_t p = 500;
  std::uint64_t trials = 100;
  std::uint64_t master_seed = 0;

  /// The published sweep: 7 c values, 6 lambdas, 4 thetas, 9 trigger norms,
  /// p = 500, 100 trials, defaults c = 0.1, lambda = 0.1, theta = 0.1, |v| = 1.
  static SweepGrid table1();

  void validate() const;
};

enum class AxisMode { Full, OneAtATime };

std::string to_string(AxisMode mode);
AxisMode parse_axis_mode(const std::string& text);

struct GridPoint {
  std::uint64_t grid_index = 0;
  ModelParams params;
  std::string axis;  // "c", "lambda", "theta", "vnorm" or "full"
};

/// OneAtATime: the c axis, then lambda, theta and |v|, each with the other
/// parameters at grid.defaults. Full: the Cartesian product, c outermost.
std::vector<GridPoint> enumerate_grid(const SweepGrid& grid, AxisMode mode);

struct SweepOptions {
  TrialOptions trial{};
  unsigned threads = 1;
  // Called after each finished trial with (completed, total); may be empty.
  std::function<void(std::size_t, std::size_t)> progress;
};

/// Every (grid point, trial) pair, trial seed = derive_seed(master, grid, trial).
/// A failing trial becomes a row with status "error: ..." and NaN empirical
/// columns; the sweep continues. Output is sorted by (grid_index, trial_index).
std::vector<SweepRecord> run_sweep(const SweepGrid& grid, AxisMode mode,
                                   const SweepOptions& options = {});

/// Quantile by linear interpolation between closest ranks:
/// h = (N - 1) q, x[floor h] + (h - floor h)(x[floor h + 1] - x[floor h]).
double quantile(std::vector<double> values, double q);

struct Summary {
  double mean = 0.0;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
};

Summary summarize(const std::vector<double>& values);

struct AggregateRow {
  std::uint64_t grid_index = 0;
  double c_target = 0.0;
  double c_effective = 0.0;
  double lambda = 0.0;
  double theta = 0.0;
  double v_norm = 0.0;
  std::uint64_t p = 0;
  std::uint64_t n = 0;
  std::uint64_t trials_ok = 0;
  std::uint64_t trials_error = 0;
  Summary mu_emp;
  Summary sigma2_emp;
  Summary eta_emp_mc;
  Summary eta_emp_plugin;
  double mu_theory = 0.0;
  double sigma2_theory = 0.0;
  double eta_theory = 0.0;
  double C_theory = 0.0;
  std::string dataset;
};

/// One row per grid_index in ascending order; error rows are excluded from
/// the statistics (a group with no valid rows gets NaN statistics).
/// Throws EmptyGroup on empty input.
std::vector<AggregateRow> aggregate(const std::vector<SweepRecord>& records);

}  // namespace ridgepois
