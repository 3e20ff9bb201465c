#include "ridgepois/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "ridgepois/error.hpp"

namespace ridgepois {

std::string to_string(ReportKind kind) {
  switch (kind) {
    case ReportKind::Mu: return "mu";
    case ReportKind::Sigma: return "sigma";
    case ReportKind::Eta: return "eta";
  }
  return "mu";
}

ReportKind parse_report_kind(const std::string& text) {
  if (text == "mu") return ReportKind::Mu;
  if (text == "sigma") return ReportKind::Sigma;
  if (text == "eta") return ReportKind::Eta;
  throw Error(ErrorCode::InvalidArgument, "unknown report kind '" + text + "'");
}

const std::vector<std::string>& report_axes() {
  static const std::vector<std::string> axes{"theta", "c", "lambda", "vnorm"};
  return axes;
}

namespace {

double axis_value(const AggregateRow& row, const std::string& axis) {
  if (axis == "c") return row.c_target;
  if (axis == "lambda") return row.lambda;
  if (axis == "theta") return row.theta;
  if (axis == "vnorm") return row.v_norm;
  throw Error(ErrorCode::InvalidArgument, "unknown axis '" + axis + "'");
}

double most_frequent(const std::vector<AggregateRow>& rows, const std::string& axis) {
  std::map<double, std::size_t> counts;
  for (const auto& r : rows) ++counts[axis_value(r, axis)];
  double best = 0.0;
  std::size_t best_count = 0;
  for (const auto& [value, count] : counts) {
    if (count > best_count) {
      best = value;
      best_count = count;
    }
  }
  return best;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

std::string fmt_px(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

}  // namespace

Panel build_panel(const std::vector<AggregateRow>& rows, ReportKind kind, const std::string& axis) {
  if (rows.empty()) throw Error(ErrorCode::SchemaMismatch, "no aggregate rows to plot");
  std::map<std::string, double> fixed;
  for (const auto& other : report_axes()) {
    if (other != axis) fixed[other] = most_frequent(rows, other);
  }

  Panel panel;
  panel.axis = axis;
  for (const auto& r : rows) {
    bool on_axis = true;
    for (const auto& [name, value] : fixed) on_axis = on_axis && axis_value(r, name) == value;
    if (!on_axis) continue;
    const double x = axis_value(r, axis);
    const bool duplicate = std::any_of(panel.points.begin(), panel.points.end(),
                                       [x](const PanelPoint& pt) { return pt.x == x; });
    if (duplicate) continue;

    PanelPoint pt;
    pt.x = x;
    const Summary* s = nullptr;
    switch (kind) {
      case ReportKind::Mu:
        pt.theory = r.mu_theory;
        s = &r.mu_emp;
        break;
      case ReportKind::Sigma:
        pt.theory = r.sigma2_theory;
        s = &r.sigma2_emp;
        break;
      case ReportKind::Eta:
        pt.theory = r.eta_theory;
        s = &r.eta_emp_mc;
        break;
    }
    pt.mean = s->mean;
    pt.median = s->median;
    pt.q25 = s->q25;
    pt.q75 = s->q75;
    panel.points.push_back(pt);
  }
  std::sort(panel.points.begin(), panel.points.end(),
            [](const PanelPoint& l, const PanelPoint& r) { return l.x < r.x; });
  return panel;
}

std::string render_svg(const std::vector<Panel>& panels, ReportKind kind) {
  constexpr double kWidth = 320.0;
  constexpr double kHeight = 260.0;
  constexpr double kLeft = 58.0;
  constexpr double kRight = 12.0;
  constexpr double kTop = 28.0;
  constexpr double kBottom = 40.0;
  const double total_width = kWidth * static_cast<double>(std::max<std::size_t>(panels.size(), 1));
  const std::string y_label = kind == ReportKind::Mu      ? "mu"
                              : kind == ReportKind::Sigma ? "sigma^2"
                                                          : "eta";

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt_px(total_width)
      << "\" height=\"" << fmt_px(kHeight) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (std::size_t k = 0; k < panels.size(); ++k) {
    const Panel& panel = panels[k];
    const double x0 = kWidth * static_cast<double>(k);
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;

    double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    bool first = true;
    for (const auto& pt : panel.points) {
      for (const double y : {pt.theory, pt.median, pt.q25, pt.q75}) {
        if (!std::isfinite(y)) continue;
        if (first) {
          ymin = ymax = y;
          first = false;
        }
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
      }
    }
    if (!panel.points.empty()) {
      xmin = panel.points.front().x;
      xmax = panel.points.back().x;
    }
    if (xmax == xmin) {
      xmin -= 0.5;
      xmax += 0.5;
    }
    if (ymax == ymin) {
      const double pad = ymin == 0.0 ? 1.0 : 0.1 * std::abs(ymin);
      ymin -= pad;
      ymax += pad;
    } else {
      const double pad = 0.05 * (ymax - ymin);
      ymin -= pad;
      ymax += pad;
    }
    auto sx = [&](double x) { return x0 + kLeft + (x - xmin) / (xmax - xmin) * plot_w; };
    auto sy = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * plot_h; };

    svg << "<g id=\"panel-" << panel.axis << "\">\n";
    svg << "<rect x=\"" << fmt_px(x0 + kLeft) << "\" y=\"" << fmt_px(kTop) << "\" width=\""
        << fmt_px(plot_w) << "\" height=\"" << fmt_px(plot_h)
        << "\" fill=\"none\" stroke=\"#444\"/>\n";
    svg << "<text x=\"" << fmt_px(x0 + kLeft + plot_w / 2) << "\" y=\"" << fmt_px(kTop - 10)
        << "\" text-anchor=\"middle\">" << y_label << " vs " << panel.axis << "</text>\n";
    svg << "<text x=\"" << fmt_px(x0 + kLeft + plot_w / 2) << "\" y=\"" << fmt_px(kHeight - 8)
        << "\" text-anchor=\"middle\">" << panel.axis << "</text>\n";
    for (int t = 0; t <= 4; ++t) {
      const double yv = ymin + (ymax - ymin) * t / 4.0;
      svg << "<text x=\"" << fmt_px(x0 + kLeft - 4) << "\" y=\"" << fmt_px(sy(yv) + 4)
          << "\" text-anchor=\"end\">" << fmt(yv) << "</text>\n";
    }
    for (const auto& pt : panel.points) {
      svg << "<text x=\"" << fmt_px(sx(pt.x)) << "\" y=\"" << fmt_px(kTop + plot_h + 14)
          << "\" text-anchor=\"middle\">" << fmt(pt.x) << "</text>\n";
    }

    if (!panel.points.empty()) {
      // IQR band: q75 forwards, q25 backwards.
      svg << "<polygon class=\"iqr\" fill=\"#1f77b4\" fill-opacity=\"0.25\" stroke=\"none\" points=\"";
      for (const auto& pt : panel.points) svg << fmt_px(sx(pt.x)) << ',' << fmt_px(sy(pt.q75)) << ' ';
      for (auto it = panel.points.rbegin(); it != panel.points.rend(); ++it) {
        svg << fmt_px(sx(it->x)) << ',' << fmt_px(sy(it->q25)) << ' ';
      }
      svg << "\"/>\n";

      svg << "<polyline class=\"theory\" fill=\"none\" stroke=\"#ff7f0e\" stroke-width=\"2\" points=\"";
      for (const auto& pt : panel.points) svg << fmt_px(sx(pt.x)) << ',' << fmt_px(sy(pt.theory)) << ' ';
      svg << "\"/>\n";

      for (const auto& pt : panel.points) {
        svg << "<circle class=\"median\" cx=\"" << fmt_px(sx(pt.x)) << "\" cy=\"" << fmt_px(sy(pt.median))
            << "\" r=\"3.5\" fill=\"#1f77b4\"/>\n";
      }
    }
    svg << "</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace ridgepois
