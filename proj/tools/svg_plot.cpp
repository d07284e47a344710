#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

namespace repday::svgplot {
namespace {

// Fixed-precision formatting keeps the output byte-deterministic across
// platforms; %.2f for coordinates, %.6g for tick and value labels.
std::string f2(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string g6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 84.0;
constexpr double kRight = 652.0;
constexpr double kTop = 48.0;
constexpr double kBottom = 372.0;

constexpr const char* kBlue = "#4878a8";
constexpr const char* kGrey = "#9aa5b1";
constexpr const char* kOrange = "#e49444";
constexpr const char* kGreen = "#5ba053";
constexpr const char* kRed = "#c44e52";

/// A tick spacing of 1, 2 or 5 times a power of ten that yields roughly
/// `target` intervals over `range`.
double nice_step(double range, int target) {
  if (range <= 0.0) return 1.0;
  const double raw = range / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double n = raw / mag;
  const double unit = n < 1.5 ? 1.0 : n < 3.5 ? 2.0 : n < 7.5 ? 5.0 : 10.0;
  return unit * mag;
}

class Canvas {
 public:
  explicit Canvas(const std::string& title) {
    s_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << g6(kWidth) << "\" height=\""
       << g6(kHeight) << "\" viewBox=\"0 0 " << g6(kWidth) << ' ' << g6(kHeight) << "\">\n";
    s_ << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    text(kWidth / 2, 24.0, title, "middle", 15);
  }

  void line(double x1, double y1, double x2, double y2, const char* stroke, double width,
            bool dashed = false) {
    s_ << "<line x1=\"" << f2(x1) << "\" y1=\"" << f2(y1) << "\" x2=\"" << f2(x2) << "\" y2=\""
       << f2(y2) << "\" stroke=\"" << stroke << "\" stroke-width=\"" << f2(width) << '"';
    if (dashed) s_ << " stroke-dasharray=\"6 4\"";
    s_ << "/>\n";
  }

  void rect(double x, double y, double w, double h, const char* fill) {
    s_ << "<rect x=\"" << f2(x) << "\" y=\"" << f2(y) << "\" width=\"" << f2(w) << "\" height=\""
       << f2(h) << "\" fill=\"" << fill << "\"/>\n";
  }

  void circle(double x, double y, double r, const char* fill) {
    s_ << "<circle cx=\"" << f2(x) << "\" cy=\"" << f2(y) << "\" r=\"" << f2(r) << "\" fill=\""
       << fill << "\"/>\n";
  }

  void text(double x, double y, const std::string& content, const char* anchor = "start",
            int size = 12, const char* fill = "#333333") {
    s_ << "<text x=\"" << f2(x) << "\" y=\"" << f2(y) << "\" font-family=\"Helvetica,sans-serif\""
       << " font-size=\"" << size << "\" fill=\"" << fill << "\" text-anchor=\"" << anchor
       << "\">" << content << "</text>\n";
  }

  void polyline(const std::vector<std::pair<double, double>>& pts, const char* stroke) {
    if (pts.empty()) return;
    s_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"2.00\" points=\"";
    for (size_t i = 0; i < pts.size(); ++i) {
      if (i) s_ << ' ';
      s_ << f2(pts[i].first) << ',' << f2(pts[i].second);
    }
    s_ << "\"/>\n";
  }

  /// Left y axis with ticks at `step` intervals from 0 to `y_max`, mapping
  /// values via the returned lambda. Also draws light horizontal gridlines.
  void frame() {
    line(kLeft, kTop, kLeft, kBottom, "#333333", 1.0);
    line(kLeft, kBottom, kRight, kBottom, "#333333", 1.0);
  }

  void legend_swatch(double x, double y, const char* color, const std::string& label,
                     bool as_line = false) {
    if (as_line) {
      line(x, y - 4.0, x + 18.0, y - 4.0, color, 2.0, true);
    } else {
      rect(x, y - 11.0, 18.0, 11.0, color);
    }
    text(x + 24.0, y, label, "start", 12);
  }

  std::string finish() {
    s_ << "</svg>\n";
    return s_.str();
  }

 private:
  std::ostringstream s_;
};

struct YScale {
  double y_max;
  double step;
  double map(double v) const { return kBottom - (v / y_max) * (kBottom - kTop); }
};

YScale y_scale_for(double max_value) {
  double top = max_value > 0.0 ? max_value * 1.08 : 1.0;
  const double step = nice_step(top, 5);
  top = std::ceil(top / step) * step;
  return {top, step};
}

void draw_y_axis(Canvas& c, const YScale& sc, const std::string& label) {
  for (double v = 0.0; v <= sc.y_max + 1e-9 * sc.y_max; v += sc.step) {
    const double y = sc.map(v);
    c.line(kLeft, y, kRight, y, "#e4e4e4", 1.0);
    c.line(kLeft - 4.0, y, kLeft, y, "#333333", 1.0);
    c.text(kLeft - 8.0, y + 4.0, g6(v), "end", 11);
  }
  c.text(kLeft - 64.0, kTop - 12.0, label, "start", 12);
}

}  // namespace

std::string design_chart(const pipeline::RunReport& report) {
  Canvas c("Design variables" +
           std::string(report.has_reference ? ": representative vs reference" : ""));

  struct Var {
    const char* label;
    double repr;
    double ref;
  };
  const Var vars[] = {
      {"p_hp [kW]", report.dv_repr.p_hp, report.dv_ref.p_hp},
      {"p_eh [kW]", report.dv_repr.p_eh, report.dv_ref.p_eh},
      {"p_pv [kW]", report.dv_repr.p_pv, report.dv_ref.p_pv},
      {"p_bat [kW]", report.dv_repr.p_bat, report.dv_ref.p_bat},
      {"e_bat [kWh]", report.dv_repr.e_bat, report.dv_ref.e_bat},
  };

  double max_v = 0.0;
  for (const auto& v : vars) {
    if (report.design_feasible) max_v = std::max(max_v, v.repr);
    if (report.has_reference) max_v = std::max(max_v, v.ref);
  }
  const YScale sc = y_scale_for(max_v);
  draw_y_axis(c, sc, "capacity");

  const int n_series = report.has_reference ? 2 : 1;
  const double slot = (kRight - kLeft) / 5.0;
  const double bar_w = slot * 0.7 / n_series;
  for (int i = 0; i < 5; ++i) {
    const double x0 = kLeft + i * slot + slot * 0.15;
    int series = 0;
    if (report.has_reference) {
      c.rect(x0, sc.map(vars[i].ref), bar_w, kBottom - sc.map(vars[i].ref), kGrey);
      ++series;
    }
    if (report.design_feasible) {
      const double x = x0 + series * bar_w;
      c.rect(x, sc.map(vars[i].repr), bar_w, kBottom - sc.map(vars[i].repr), kBlue);
      c.text(x + bar_w / 2.0, sc.map(vars[i].repr) - 5.0, g6(vars[i].repr), "middle", 10);
    }
    c.text(kLeft + i * slot + slot / 2.0, kBottom + 18.0, vars[i].label, "middle", 12);
  }

  double lx = kLeft;
  if (report.has_reference) {
    c.legend_swatch(lx, kBottom + 44.0, kGrey, "reference (full data)");
    lx += 190.0;
  }
  c.legend_swatch(lx, kBottom + 44.0, kBlue,
                  report.design_feasible ? "representative days" : "representative days (infeasible)");
  c.frame();
  return c.finish();
}

std::string sweep_chart(const pipeline::SweepResult& sweep) {
  Canvas c("Total cost and cost shares vs grid fraction");

  double max_cost = 0.0, min_x = 0.0, max_x = 1.0;
  bool first = true;
  for (const auto& p : sweep.points) {
    if (std::isfinite(p.report.f_clustered)) max_cost = std::max(max_cost, p.report.f_clustered);
    if (first) {
      min_x = max_x = p.fraction;
      first = false;
    } else {
      min_x = std::min(min_x, p.fraction);
      max_x = std::max(max_x, p.fraction);
    }
  }
  if (max_x <= min_x) max_x = min_x + 1.0;
  const YScale cost_sc = y_scale_for(max_cost);
  draw_y_axis(c, cost_sc, "cost [EUR/a]");

  // Right-hand axis: shares on a fixed [0, 1] scale.
  const auto share_y = [](double v) { return kBottom - v * (kBottom - kTop); };
  for (int i = 0; i <= 4; ++i) {
    const double v = i / 4.0;
    c.line(kRight, share_y(v), kRight + 4.0, share_y(v), "#333333", 1.0);
    c.text(kRight + 8.0, share_y(v) + 4.0, g6(v), "start", 11);
  }
  c.text(kRight + 8.0, kTop - 12.0, "share", "start", 12);
  c.line(kRight, kTop, kRight, kBottom, "#333333", 1.0);

  const auto x_of = [&](double fraction) {
    return kLeft + (fraction - min_x) / (max_x - min_x) * (kRight - kLeft);
  };
  const double x_step = nice_step(max_x - min_x, 6);
  for (double v = std::ceil(min_x / x_step) * x_step; v <= max_x + 1e-9; v += x_step) {
    c.line(x_of(v), kBottom, x_of(v), kBottom + 4.0, "#333333", 1.0);
    c.text(x_of(v), kBottom + 18.0, g6(v), "middle", 11);
  }
  c.text((kLeft + kRight) / 2.0, kBottom + 36.0, "grid fraction (share of reference peak draw)",
         "middle", 12);

  std::vector<std::pair<double, double>> cost, capex, opex;
  for (const auto& p : sweep.points) {
    const auto& r = p.report;
    if (std::isfinite(r.f_clustered)) cost.emplace_back(x_of(p.fraction), cost_sc.map(r.f_clustered));
    if (std::isfinite(r.capex_share)) capex.emplace_back(x_of(p.fraction), share_y(r.capex_share));
    if (std::isfinite(r.opex_share)) opex.emplace_back(x_of(p.fraction), share_y(r.opex_share));
  }
  const auto sort_x = [](std::vector<std::pair<double, double>>& v) {
    std::sort(v.begin(), v.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  };
  sort_x(cost);
  sort_x(capex);
  sort_x(opex);
  c.polyline(cost, kBlue);
  c.polyline(capex, kOrange);
  c.polyline(opex, kGreen);
  for (const auto& pt : cost) c.circle(pt.first, pt.second, 3.0, kBlue);
  for (const auto& pt : capex) c.circle(pt.first, pt.second, 3.0, kOrange);
  for (const auto& pt : opex) c.circle(pt.first, pt.second, 3.0, kGreen);

  c.legend_swatch(kLeft, kBottom + 60.0, kBlue, "total cost");
  c.legend_swatch(kLeft + 150.0, kBottom + 60.0, kOrange, "capex share");
  c.legend_swatch(kLeft + 300.0, kBottom + 60.0, kGreen, "opex share");
  c.frame();
  return c.finish();
}

std::string compare_chart(const pipeline::ClusterCountReport& report) {
  Canvas c("Cost vs cluster count");

  double max_v = report.f_ref;
  for (const auto& e : report.entries) {
    if (std::isfinite(e.without_extremes.f_clustered))
      max_v = std::max(max_v, e.without_extremes.f_clustered);
    if (std::isfinite(e.with_extremes.f_operations))
      max_v = std::max(max_v, e.with_extremes.f_operations);
  }
  const YScale sc = y_scale_for(max_v);
  draw_y_axis(c, sc, "cost [EUR/a]");

  const size_t n = report.entries.size();
  const double slot = (kRight - kLeft) / static_cast<double>(n == 0 ? 1 : n);
  const double bar_w = slot * 0.7 / 2.0;
  for (size_t i = 0; i < n; ++i) {
    const auto& e = report.entries[i];
    const double x0 = kLeft + static_cast<double>(i) * slot + slot * 0.15;
    if (std::isfinite(e.without_extremes.f_clustered)) {
      const double y = sc.map(e.without_extremes.f_clustered);
      c.rect(x0, y, bar_w, kBottom - y, kGrey);
    }
    if (std::isfinite(e.with_extremes.f_operations)) {
      const double y = sc.map(e.with_extremes.f_operations);
      c.rect(x0 + bar_w, y, bar_w, kBottom - y, kBlue);
      c.text(x0 + bar_w * 1.5, y - 5.0, g6(e.with_extremes.f_operations), "middle", 10);
    }
    c.text(kLeft + static_cast<double>(i) * slot + slot / 2.0, kBottom + 18.0,
           "k=" + std::to_string(e.k), "middle", 12);
  }

  if (std::isfinite(report.f_ref)) {
    const double y = sc.map(report.f_ref);
    c.line(kLeft, y, kRight, y, kRed, 2.0, true);
    c.text(kRight - 4.0, y - 6.0, "reference " + g6(report.f_ref), "end", 11, kRed);
  }

  c.legend_swatch(kLeft, kBottom + 44.0, kGrey, "periods only, no extremes");
  c.legend_swatch(kLeft + 230.0, kBottom + 44.0, kBlue, "full year, with extremes");
  c.legend_swatch(kLeft + 460.0, kBottom + 44.0, kRed, "reference cost", true);
  c.frame();
  return c.finish();
}

}  // namespace repday::svgplot
