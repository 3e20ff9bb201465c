#include <algorithm>
#include <string>

#include <gtest/gtest.h>

#include "ridgepois/error.hpp"
#include "ridgepois/report.hpp"

namespace ridgepois {
namespace {

AggregateRow row(std::uint64_t idx, double c, double lambda, double theta, double vn, double mu) {
  AggregateRow r;
  r.grid_index = idx;
  r.c_target = c;
  r.lambda = lambda;
  r.theta = theta;
  r.v_norm = vn;
  r.mu_emp = {mu, mu + 0.01, mu - 0.1, mu + 0.1};
  r.sigma2_emp = {2 * mu, 2 * mu, mu, 3 * mu};
  r.eta_emp_mc = {0.6, 0.6, 0.55, 0.65};
  r.mu_theory = mu + 0.02;
  r.sigma2_theory = 2 * mu;
  r.eta_theory = 0.61;
  return r;
}

std::vector<AggregateRow> oaat_rows() {
  // Defaults c = 0.1, lambda = 0.1, theta = 0.1, |v| = 1; two theta values and two c values.
  return {row(0, 0.1, 0.1, 0.1, 1.0, 1.0), row(1, 0.5, 0.1, 0.1, 1.0, 2.0), row(2, 0.1, 0.1, 0.2, 1.0, 3.0),
          row(3, 0.1, 0.1, 0.05, 1.0, 0.5)};
}

TEST(Report, PanelSelectsAxisSlice) {
  const Panel theta = build_panel(oaat_rows(), ReportKind::Mu, "theta");
  ASSERT_EQ(theta.points.size(), 3u);
  EXPECT_EQ(theta.points[0].x, 0.05);
  EXPECT_EQ(theta.points[1].x, 0.1);
  EXPECT_EQ(theta.points[2].x, 0.2);
  EXPECT_EQ(theta.points[2].median, 3.01);
  EXPECT_EQ(theta.points[2].q25, 2.9);
  EXPECT_EQ(theta.points[2].theory, 3.02);

  const Panel c = build_panel(oaat_rows(), ReportKind::Sigma, "c");
  ASSERT_EQ(c.points.size(), 2u);
  EXPECT_EQ(c.points[1].x, 0.5);
  EXPECT_EQ(c.points[1].theory, 4.0);

  EXPECT_EQ(build_panel(oaat_rows(), ReportKind::Eta, "vnorm").points.size(), 1u);
  EXPECT_THROW(build_panel(oaat_rows(), ReportKind::Mu, "gamma"), Error);
}

TEST(Report, SvgContainsBandTheoryAndMedians) {
  std::vector<Panel> panels;
  for (const auto& axis : report_axes()) panels.push_back(build_panel(oaat_rows(), ReportKind::Mu, axis));
  const std::string svg = render_svg(panels, ReportKind::Mu);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("class=\"iqr\""), std::string::npos);
  EXPECT_NE(svg.find("class=\"theory\""), std::string::npos);
  std::size_t medians = 0;
  for (std::size_t pos = 0; (pos = svg.find("class=\"median\"", pos)) != std::string::npos; ++pos) ++medians;
  EXPECT_EQ(medians, 3u + 2u + 1u + 1u);
  EXPECT_EQ(svg.find("nan"), std::string::npos);
}

TEST(Report, KindNames) {
  for (const ReportKind k : {ReportKind::Mu, ReportKind::Sigma, ReportKind::Eta})
    EXPECT_EQ(parse_report_kind(to_string(k)), k);
  EXPECT_THROW(parse_report_kind("beta"), Error);
  EXPECT_EQ(report_axes(), (std::vector<std::string>{"theta", "c", "lambda", "vnorm"}));
}

}  // namespace
}  // namespace ridgepois
