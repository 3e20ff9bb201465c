#pragma once

#include <string>
#include <vector>

#include "ridgepois/sweep.hpp"

namespace ridgepois {

enum class ReportKind { Mu, Sigma, Eta };

std::string to_string(ReportKind kind);
ReportKind parse_report_kind(const std::string& text);

/// Sweep axes a report panel can run along: "c", "lambda", "theta", "vnorm".
const std::vector<std::string>& report_axes();

struct PanelPoint {
  double x = 0.0;
  double theory = 0.0;
  double mean = 0.0;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
};

struct Panel {
  std::string axis;
  std::vector<PanelPoint> points;  // ascending x
};

/// Rows whose other three parameters sit at their most frequent values,
/// ordered by the axis parameter (first row wins on duplicate x).
Panel build_panel(const std::vector<AggregateRow>& rows, ReportKind kind, const std::string& axis);

/// Self-contained SVG: theory line, empirical medians and the q25-q75 band,
/// one panel per entry laid out left to right.
std::string render_svg(const std::vector<Panel>& panels, ReportKind kind);

}  // namespace ridgepois
