#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "ridgepois/error.hpp"
#include "ridgepois/record_io.hpp"
#include "ridgepois/rng.hpp"
#include "ridgepois/sweep.hpp"
#include "test_support.hpp"

namespace ridgepois {
namespace {

SweepGrid tiny_grid() {
  SweepGrid g;
  g.c_values = {0.5, 2.0};
  g.lambda_values = {0.1};
  g.theta_values = {0.0, 0.2};
  g.vnorm_values = {1.0};
  g.defaults = {0.5, 0.1, 0.1, 1.0};
  g.p = 12;
  g.trials = 3;
  g.master_seed = 9;
  return g;
}

SweepOptions fast_options(unsigned threads) {
  SweepOptions o;
  o.trial.m_test = 50;
  o.threads = threads;
  return o;
}

TEST(Quantile, LinearInterpolation) {
  EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile({4, 3, 2, 1}, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4}, 0.75), 3.25);
  EXPECT_DOUBLE_EQ(quantile({7}, 0.3), 7.0);
  EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4}, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4}, 1.0), 4.0);
  EXPECT_THROW(quantile({}, 0.5), Error);
  EXPECT_THROW(quantile({1.0}, 1.5), Error);

  const Summary s = summarize({1, 2, 3, 4});
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_DOUBLE_EQ(s.median, 2.5);
  EXPECT_DOUBLE_EQ(s.q25, 1.75);
  EXPECT_DOUBLE_EQ(s.q75, 3.25);
}

TEST(Grid, Table1OneAtATimeHas26Points) {
  const auto pts = enumerate_grid(SweepGrid::table1(), AxisMode::OneAtATime);
  ASSERT_EQ(pts.size(), 26u);
  for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_EQ(pts[i].grid_index, i);
  EXPECT_EQ(pts[0].axis, "c");
  EXPECT_EQ(pts[0].params.c, 0.1);
  EXPECT_EQ(pts[7].axis, "lambda");
  EXPECT_EQ(pts[7].params.lambda, 0.001);
  EXPECT_EQ(pts[7].params.c, 0.1);
  EXPECT_EQ(pts[13].axis, "theta");
  EXPECT_EQ(pts[17].axis, "vnorm");
  EXPECT_EQ(pts[25].params.v_norm, 4.0);
  EXPECT_EQ(pts[25].params.theta, 0.1);
  EXPECT_EQ(enumerate_grid(SweepGrid::table1(), AxisMode::Full).size(), 7u * 6u * 4u * 9u);
}

TEST(Grid, ValidationAndModes) {
  SweepGrid g = tiny_grid();
  g.lambda_values = {0.0};
  EXPECT_THROW(enumerate_grid(g, AxisMode::OneAtATime), Error);
  EXPECT_EQ(parse_axis_mode("oaat"), AxisMode::OneAtATime);
  EXPECT_EQ(parse_axis_mode(to_string(AxisMode::Full)), AxisMode::Full);
  EXPECT_THROW(parse_axis_mode("diagonal"), Error);
}

std::string to_csv(const std::vector<SweepRecord>& rows) {
  std::ostringstream out;
  write_sweep_csv(out, rows);
  return out.str();
}

TEST(Sweep, DeterministicAcrossThreadCounts) {
  const auto one = run_sweep(tiny_grid(), AxisMode::Full, fast_options(1));
  const auto four = run_sweep(tiny_grid(), AxisMode::Full, fast_options(4));
  ASSERT_EQ(one.size(), 4u * 3u);
  EXPECT_EQ(to_csv(one), to_csv(four));
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].grid_index, i / 3);
    EXPECT_EQ(one[i].trial_index, i % 3);
    EXPECT_EQ(one[i].seed, derive_seed(9, i / 3, i % 3));
  }
  EXPECT_NE(to_csv(one), to_csv(run_sweep([] { auto g = tiny_grid(); g.master_seed = 10; return g; }(),
                                           AxisMode::Full, fast_options(1))));
}

TEST(Sweep, ProgressCallback) {
  SweepOptions o = fast_options(2);
  std::size_t calls = 0, last_total = 0;
  o.progress = [&](std::size_t, std::size_t total) {
    ++calls;
    last_total = total;
  };
  run_sweep(tiny_grid(), AxisMode::OneAtATime, o);
  EXPECT_EQ(calls, last_total);
  EXPECT_EQ(last_total, enumerate_grid(tiny_grid(), AxisMode::OneAtATime).size() * 3);
}

TEST(Sweep, FailingTrialsBecomeErrorRows) {
  SweepOptions o = fast_options(1);
  o.trial.m_test = 0;
  const auto rows = run_sweep(tiny_grid(), AxisMode::Full, o);
  ASSERT_EQ(rows.size(), 12u);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.is_error());
    EXPECT_EQ(r.status.rfind("error: ", 0), 0u);
    EXPECT_TRUE(std::isnan(r.mu_emp));
    EXPECT_FALSE(std::isnan(r.mu_theory));
  }
  const auto agg = aggregate(rows);
  ASSERT_EQ(agg.size(), 4u);
  EXPECT_EQ(agg[0].trials_ok, 0u);
  EXPECT_EQ(agg[0].trials_error, 3u);
  EXPECT_TRUE(std::isnan(agg[0].mu_emp.mean));
}

SweepRecord record(std::uint64_t grid, std::uint64_t trial, double mu) {
  SweepRecord r;
  r.grid_index = grid;
  r.trial_index = trial;
  r.c_target = 0.5;
  r.mu_emp = mu;
  r.sigma2_emp = 2 * mu;
  r.eta_emp_mc = 0.5;
  r.eta_emp_plugin = 0.5;
  r.mu_theory = 1.0;
  return r;
}

TEST(Aggregate, ExcludesErrorRows) {
  std::vector<SweepRecord> rows{record(1, 0, 4.0), record(0, 0, 1.0), record(0, 1, 2.0), record(0, 2, 3.0),
                                record(0, 3, 4.0), record(0, 4, 1000.0)};
  rows.back().status = "error: SolveFailure";
  const auto agg = aggregate(rows);
  ASSERT_EQ(agg.size(), 2u);
  EXPECT_EQ(agg[0].grid_index, 0u);
  EXPECT_EQ(agg[0].trials_ok, 4u);
  EXPECT_EQ(agg[0].trials_error, 1u);
  EXPECT_DOUBLE_EQ(agg[0].mu_emp.mean, 2.5);
  EXPECT_DOUBLE_EQ(agg[0].mu_emp.q25, 1.75);
  EXPECT_DOUBLE_EQ(agg[0].mu_emp.q75, 3.25);
  EXPECT_DOUBLE_EQ(agg[0].sigma2_emp.median, 5.0);
  EXPECT_EQ(agg[0].mu_theory, 1.0);
  EXPECT_EQ(agg[1].trials_ok, 1u);
  try {
    aggregate({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyGroup);
  }
}

TEST(RecordIo, FormatDoubleRoundTrips) {
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<std::uint64_t> bits;
  for (int i = 0; i < 10000; ++i) {
    double x;
    const std::uint64_t b = bits(gen);
    std::memcpy(&x, &b, sizeof x);
    if (std::isnan(x)) continue;
    EXPECT_EQ(parse_double(format_double(x)), x);
  }
  EXPECT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(format_double(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_TRUE(std::isnan(parse_double("nan")));
  EXPECT_EQ(parse_double("inf"), std::numeric_limits<double>::infinity());
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_THROW(parse_double("1.5x"), Error);
}

TEST(RecordIo, SplitCsvQuoting) {
  EXPECT_EQ(split_csv_line("a,\"b,c\",\"d\"\"e\","), (std::vector<std::string>{"a", "b,c", "d\"e", ""}));
}

TEST(RecordIo, SweepCsvRoundTripProperty) {
  std::mt19937_64 gen(17);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> coin(0, 9);
  const char* texts[] = {"", "tiny_lambda", "a,b", "quote\"d", "mnist:0v1:unit:patch3@2,2"};
  std::vector<SweepRecord> rows;
  for (std::uint64_t i = 0; i < 300; ++i) {
    SweepRecord r;
    r.grid_index = i / 7;
    r.trial_index = i % 7;
    r.c_target = std::abs(normal(gen));
    r.c_effective = r.c_target * (1 + 1e-3 * normal(gen));
    r.lambda = std::exp(normal(gen));
    r.theta = std::abs(normal(gen)) / 10;
    r.v_norm = std::abs(normal(gen));
    r.p = gen() % 1000;
    r.n = gen() % 100000;
    r.seed = gen();
    r.mu_emp = coin(gen) == 0 ? std::numeric_limits<double>::quiet_NaN() : normal(gen);
    r.sigma2_emp = coin(gen) == 0 ? std::numeric_limits<double>::infinity() : normal(gen) * 1e-300;
    r.eta_emp_mc = normal(gen);
    r.eta_emp_plugin = normal(gen);
    r.mu_theory = normal(gen) * 1e200;
    r.sigma2_theory = normal(gen);
    r.eta_theory = normal(gen);
    r.C_theory = normal(gen);
    r.centering_mode = coin(gen) < 5 ? Centering::Population : Centering::Empirical;
    r.wall_time_ms = std::abs(normal(gen));
    r.status = coin(gen) == 0 ? "error: SolveFailure, \"bad\"" : "ok";
    r.warning = texts[coin(gen) % 5];
    r.dataset = texts[coin(gen) % 5];
    rows.push_back(r);
  }
  const std::string text = to_csv(rows);
  std::istringstream in(text);
  const auto back = read_sweep_csv(in);
  ASSERT_EQ(back.size(), rows.size());
  EXPECT_EQ(to_csv(back), text);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].seed, rows[i].seed);
    EXPECT_EQ(back[i].status, rows[i].status);
    EXPECT_EQ(back[i].dataset, rows[i].dataset);
    if (!std::isnan(rows[i].mu_emp)) EXPECT_EQ(back[i].mu_emp, rows[i].mu_emp);
  }
  EXPECT_EQ(text.find('\r'), std::string::npos);
  EXPECT_EQ(text.substr(0, text.find('\n')).rfind("grid_index,trial_index,c_target", 0), 0u);
}

TEST(RecordIo, SchemaMismatch) {
  for (const std::string bad : {std::string(""), std::string("x,y\n1,2\n"),
                                [] {
                                  std::ostringstream o;
                                  write_sweep_csv(o, {record(0, 0, 1.0)});
                                  return o.str() + "1,2,3\n";
                                }()}) {
    std::istringstream in(bad);
    try {
      read_sweep_csv(in);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::SchemaMismatch);
    }
  }
}

TEST(RecordIo, AggregatePath) {
  EXPECT_EQ(aggregate_path_for("out/results.csv"), "out/results_agg.csv");
  EXPECT_EQ(aggregate_path_for("results"), "results_agg");
}

TEST(RecordIo, ResolventAndAggregateHeaders) {
  std::ostringstream res;
  write_resolvent_csv(res, {{"feature_trace", 100, 200, 7, 1.0, 1.5, 0.5}});
  EXPECT_EQ(res.str(), "check_name,p,n,seed,observed,predicted,abs_error\nfeature_trace,100,200,7,1,1.5,0.5\n");
  std::ostringstream agg;
  write_aggregate_csv(agg, aggregate({record(0, 0, 1.0)}));
  const std::string text = agg.str();
  EXPECT_EQ(text.rfind("grid_index,", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
}

}  // namespace
}  // namespace ridgepois
