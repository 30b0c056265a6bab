#include "stresskit/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "stresskit/rng.hpp"

namespace stresskit {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 120.0;
constexpr double kMarginRight = 30.0;
constexpr double kMarginTop = 60.0;
constexpr double kMarginBottom = 60.0;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// Linear map from [lo, hi] to pixel range [a, b]; collapses to the
// midpoint when the data range is degenerate.
struct Scale {
  double lo = 0.0;
  double hi = 1.0;
  double a = 0.0;
  double b = 1.0;

  double operator()(double v) const {
    if (hi == lo) return (a + b) / 2.0;
    return a + (v - lo) / (hi - lo) * (b - a);
  }
};

std::string header(const std::string& title, const std::string& subtitle) {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << fmt(kWidth / 2)
      << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\" fill=\"#222\">"
      << title << "</text>\n";
  if (!subtitle.empty()) {
    out << "<text x=\"" << fmt(kWidth / 2)
        << "\" y=\"44\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\" fill=\"#555\">"
        << subtitle << "</text>\n";
  }
  return out.str();
}

void axis_box(std::ostringstream& out) {
  out << "<rect x=\"" << fmt(kMarginLeft) << "\" y=\"" << fmt(kMarginTop)
      << "\" width=\"" << fmt(kWidth - kMarginLeft - kMarginRight)
      << "\" height=\"" << fmt(kHeight - kMarginTop - kMarginBottom)
      << "\" fill=\"none\" stroke=\"#999\" stroke-width=\"1\"/>\n";
}

void x_label(std::ostringstream& out, const std::string& text) {
  out << "<text x=\"" << fmt((kMarginLeft + kWidth - kMarginRight) / 2)
      << "\" y=\"" << fmt(kHeight - 16)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" fill=\"#222\">"
      << text << "</text>\n";
}

void y_label(std::ostringstream& out, const std::string& text) {
  const double x = 28.0;
  const double y = (kMarginTop + kHeight - kMarginBottom) / 2;
  out << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" fill=\"#222\" transform=\"rotate(-90 " << fmt(x)
      << " " << fmt(y) << ")\">" << text << "</text>\n";
}

void x_ticks(std::ostringstream& out, const Scale& sx, int n) {
  const double y0 = kHeight - kMarginBottom;
  for (int i = 0; i <= n; ++i) {
    const double v = sx.lo + (sx.hi - sx.lo) * i / n;
    const double x = sx(v);
    out << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(y0) << "\" x2=\""
        << fmt(x) << "\" y2=\"" << fmt(y0 + 5)
        << "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y0 + 20)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\" fill=\"#444\">"
        << fmt_tick(v) << "</text>\n";
  }
}

void y_ticks(std::ostringstream& out, const Scale& sy, int n) {
  for (int i = 0; i <= n; ++i) {
    const double v = sy.lo + (sy.hi - sy.lo) * i / n;
    const double y = sy(v);
    out << "<line x1=\"" << fmt(kMarginLeft - 5) << "\" y1=\"" << fmt(y)
        << "\" x2=\"" << fmt(kMarginLeft) << "\" y2=\"" << fmt(y)
        << "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << fmt(kMarginLeft - 9) << "\" y=\"" << fmt(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\" fill=\"#444\">"
        << fmt_tick(v) << "</text>\n";
  }
}

// Blue -> purple -> red gradient position t in [0, 1].
std::string heat_color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(40 + t * (220 - 40)));
  const int g = static_cast<int>(std::lround(60 + t * (40 - 60)));
  const int b = static_cast<int>(std::lround(200 + t * (60 - 200)));
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

std::string roc_svg(const std::vector<RocPoint>& roc,
                    const std::string& title,
                    const std::string& subtitle) {
  std::ostringstream out;
  out << header(title, subtitle);
  axis_box(out);
  const Scale sx{0.0, 1.0, kMarginLeft, kWidth - kMarginRight};
  const Scale sy{0.0, 1.0, kHeight - kMarginBottom, kMarginTop};
  out << "<line x1=\"" << fmt(sx(0)) << "\" y1=\"" << fmt(sy(0)) << "\" x2=\""
      << fmt(sx(1)) << "\" y2=\"" << fmt(sy(1))
      << "\" stroke=\"#bbb\" stroke-width=\"1\" stroke-dasharray=\"6 4\"/>\n";
  out << "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"2\" "
         "points=\"";
  for (std::size_t i = 0; i < roc.size(); ++i) {
    if (i) out << " ";
    out << fmt(sx(roc[i].fpr)) << "," << fmt(sy(roc[i].tpr));
  }
  out << "\"/>\n";
  x_ticks(out, sx, 5);
  y_ticks(out, sy, 5);
  x_label(out, "false positive rate");
  y_label(out, "true positive rate");
  out << "</svg>\n";
  return out.str();
}

std::string shap_beeswarm_svg(const ShapSummary& summary) {
  std::ostringstream out;
  out << header("attribution summary",
                "one point per window; color tracks the feature value");
  axis_box(out);

  double max_abs = 0.0;
  for (const auto& row : summary.rows) {
    for (double v : row.shap) max_abs = std::max(max_abs, std::fabs(v));
  }
  if (max_abs == 0.0) max_abs = 1.0;
  const Scale sx{-max_abs, max_abs, kMarginLeft, kWidth - kMarginRight};

  const std::size_t n_features = summary.entries.size();
  const double band =
      (kHeight - kMarginTop - kMarginBottom) / static_cast<double>(n_features);

  // Observed per-feature value ranges for the color scale.
  std::vector<double> lo(n_features, std::numeric_limits<double>::infinity());
  std::vector<double> hi(n_features, -std::numeric_limits<double>::infinity());
  for (const auto& row : summary.rows) {
    for (std::size_t f = 0; f < n_features; ++f) {
      lo[f] = std::min(lo[f], row.x[f]);
      hi[f] = std::max(hi[f], row.x[f]);
    }
  }

  // Zero line.
  out << "<line x1=\"" << fmt(sx(0)) << "\" y1=\"" << fmt(kMarginTop)
      << "\" x2=\"" << fmt(sx(0)) << "\" y2=\""
      << fmt(kHeight - kMarginBottom)
      << "\" stroke=\"#bbb\" stroke-width=\"1\"/>\n";

  for (std::size_t slot = 0; slot < n_features; ++slot) {
    const auto& entry = summary.entries[slot];
    const std::size_t f = entry.feature_index;
    const double y_center = kMarginTop + band * (static_cast<double>(slot) + 0.5);
    out << "<text x=\"" << fmt(kMarginLeft - 9) << "\" y=\""
        << fmt(y_center + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"12\" fill=\"#222\">"
        << entry.feature << "</text>\n";
    for (std::size_t i = 0; i < summary.rows.size(); ++i) {
      const auto& row = summary.rows[i];
      // Deterministic vertical jitter from the row index alone.
      std::uint64_t jitter_state =
          static_cast<std::uint64_t>(i) * 1315423911ULL + f;
      const std::uint64_t h = splitmix64(jitter_state);
      const double unit = static_cast<double>(h >> 11) * 0x1.0p-53;
      const double jitter = (unit - 0.5) * band * 0.7;
      const double t =
          hi[f] == lo[f] ? 0.5 : (row.x[f] - lo[f]) / (hi[f] - lo[f]);
      out << "<circle cx=\"" << fmt(sx(row.shap[f])) << "\" cy=\""
          << fmt(y_center + jitter) << "\" r=\"2.2\" fill=\""
          << heat_color(t) << "\" fill-opacity=\"0.75\"/>\n";
    }
  }
  x_ticks(out, sx, 4);
  x_label(out, "attribution (log-odds)");
  out << "</svg>\n";
  return out.str();
}

std::string shap_dependence_svg(const std::string& feature,
                                const std::vector<DependencePoint>& points) {
  std::ostringstream out;
  out << header("dependence: " + feature, "");
  axis_box(out);
  double xlo = std::numeric_limits<double>::infinity();
  double xhi = -xlo;
  double ylo = xlo;
  double yhi = -xlo;
  for (const auto& p : points) {
    xlo = std::min(xlo, p.feature_value);
    xhi = std::max(xhi, p.feature_value);
    ylo = std::min(ylo, p.shap_value);
    yhi = std::max(yhi, p.shap_value);
  }
  if (points.empty()) {
    xlo = 0.0;
    xhi = 1.0;
    ylo = 0.0;
    yhi = 1.0;
  }
  if (xlo == xhi) {
    xlo -= 0.5;
    xhi += 0.5;
  }
  if (ylo == yhi) {
    ylo -= 0.5;
    yhi += 0.5;
  }
  const Scale sx{xlo, xhi, kMarginLeft, kWidth - kMarginRight};
  const Scale sy{ylo, yhi, kHeight - kMarginBottom, kMarginTop};
  if (ylo < 0.0 && yhi > 0.0) {
    out << "<line x1=\"" << fmt(kMarginLeft) << "\" y1=\"" << fmt(sy(0))
        << "\" x2=\"" << fmt(kWidth - kMarginRight) << "\" y2=\""
        << fmt(sy(0))
        << "\" stroke=\"#bbb\" stroke-width=\"1\" stroke-dasharray=\"6 4\"/>\n";
  }
  for (const auto& p : points) {
    out << "<circle cx=\"" << fmt(sx(p.feature_value)) << "\" cy=\""
        << fmt(sy(p.shap_value))
        << "\" r=\"2.5\" fill=\"#2e6da4\" fill-opacity=\"0.7\"/>\n";
  }
  x_ticks(out, sx, 5);
  y_ticks(out, sy, 5);
  x_label(out, feature);
  y_label(out, "attribution (log-odds)");
  out << "</svg>\n";
  return out.str();
}

}  // namespace stresskit
