#include "sicnn/output.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

#include "sicnn/errors.hpp"

namespace sicnn {

namespace {

constexpr std::array<const char*, 10> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                               "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    default: out += c;
    }
  }
  return out;
}

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

// Tick spacing from {1, 2, 5} x 10^k giving roughly `target` ticks.
double nice_step(double span, int target) {
  const double raw = span / double(target);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  const double f = r < 1.5 ? 1.0 : r < 3.5 ? 2.0 : r < 7.5 ? 5.0 : 10.0;
  return f * mag;
}

std::string tick_label(double v, double step) {
  if (std::abs(v) < step * 1e-9) v = 0.0;
  const int digits = std::max(0, int(-std::floor(std::log10(step) + 1e-9)));
  if (digits > 6 || std::abs(v) >= 1e6) return format_number(v);
  return fixed(v, digits);
}

} // namespace

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  // snprintf follows LC_NUMERIC; force '.'
  for (char* p = buf; *p; ++p)
    if (*p == ',') *p = '.';
  return buf;
}

std::vector<double> sample_times(double t0, double t1, double stride) {
  if (!(stride > 0.0)) throw ArgumentError("sample_times: stride must be positive");
  if (!(t1 >= t0)) throw ArgumentError("sample_times: t1 must not be below t0");
  std::vector<double> out;
  const auto n = std::size_t(std::floor((t1 - t0) / stride + 1e-9));
  if (n > 50000000) throw ArgumentError("sample_times: too many samples");
  out.reserve(n + 2);
  for (std::size_t k = 0; k <= n; ++k) out.push_back(std::min(t0 + double(k) * stride, t1));
  if (t1 - out.back() > 1e-9 * stride) out.push_back(t1);
  return out;
}

std::string trajectory_csv(const Trajectory& traj, const std::vector<std::string>& names, double t0, double t1,
                           double stride) {
  if (names.size() != traj.cells()) throw ArgumentError("trajectory_csv: one name per cell required");
  std::string out = "t";
  for (const auto& n : names) out += "," + n;
  out += "\n";
  std::vector<double> x(traj.cells());
  for (double t : sample_times(t0, t1, stride)) {
    traj.values(t, x);
    out += format_number(t);
    for (double v : x) out += "," + format_number(v);
    out += "\n";
  }
  return out;
}

Plot trajectory_plot(const Trajectory& traj, const std::vector<std::string>& names, double t0, double t1, double stride,
                     std::string title) {
  if (names.size() != traj.cells()) throw ArgumentError("trajectory_plot: one name per cell required");
  Plot p;
  p.title = std::move(title);
  p.x_label = "t";
  p.y_label = "x(t)";
  const auto times = sample_times(t0, t1, stride);
  for (std::size_t i = 0; i < traj.cells(); ++i) {
    Series s{names[i], times, {}};
    s.y.reserve(times.size());
    for (double t : times) s.y.push_back(traj.value(t, i));
    p.series.push_back(std::move(s));
  }
  return p;
}

std::string render_svg(const Plot& plot) {
  const double W = plot.width, Hh = plot.height;
  const double left = 70, right = 130, top = 40, bottom = 55;
  const double pw = W - left - right, ph = Hh - top - bottom;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& s : plot.series) {
    for (double x : s.x) xmin = std::min(xmin, x), xmax = std::max(xmax, x);
    for (double y : s.y)
      if (std::isfinite(y)) ymin = std::min(ymin, y), ymax = std::max(ymax, y);
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1;
  if (!std::isfinite(ymin)) ymin = 0, ymax = 1;
  if (xmax - xmin <= 0) xmax = xmin + 1;
  if (ymax - ymin <= 1e-300) {
    const double pad = std::max(1e-3, std::abs(ymin) * 0.1);
    ymin -= pad;
    ymax += pad;
  } else {
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
  }
  auto X = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto Y = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

  std::string o;
  o += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fixed(W, 0) + "\" height=\"" +
       fixed(Hh, 0) + "\" viewBox=\"0 0 " + fixed(W, 0) + " " + fixed(Hh, 0) + "\">\n";
  o += "<rect x=\"0\" y=\"0\" width=\"" + fixed(W, 0) + "\" height=\"" + fixed(Hh, 0) + "\" fill=\"white\"/>\n";
  o += "<text x=\"" + fixed(left + pw / 2, 1) + "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\">" +
       escape(plot.title) + "</text>\n";

  // ticks and grid
  o += "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
  const double xs = nice_step(xmax - xmin, 8), ys = nice_step(ymax - ymin, 6);
  for (double v = std::ceil(xmin / xs) * xs; v <= xmax + 1e-9 * xs; v += xs) {
    const double px = X(v);
    o += "<line x1=\"" + fixed(px, 2) + "\" y1=\"" + fixed(top, 2) + "\" x2=\"" + fixed(px, 2) + "\" y2=\"" +
         fixed(top + ph, 2) + "\" stroke=\"#e6e6e6\"/>\n";
    o += "<line x1=\"" + fixed(px, 2) + "\" y1=\"" + fixed(top + ph, 2) + "\" x2=\"" + fixed(px, 2) + "\" y2=\"" +
         fixed(top + ph + 5, 2) + "\" stroke=\"black\"/>\n";
    o += "<text x=\"" + fixed(px, 2) + "\" y=\"" + fixed(top + ph + 18, 2) + "\" text-anchor=\"middle\">" +
         tick_label(v, xs) + "</text>\n";
  }
  for (double v = std::ceil(ymin / ys) * ys; v <= ymax + 1e-9 * ys; v += ys) {
    const double py = Y(v);
    o += "<line x1=\"" + fixed(left, 2) + "\" y1=\"" + fixed(py, 2) + "\" x2=\"" + fixed(left + pw, 2) + "\" y2=\"" +
         fixed(py, 2) + "\" stroke=\"#e6e6e6\"/>\n";
    o += "<line x1=\"" + fixed(left - 5, 2) + "\" y1=\"" + fixed(py, 2) + "\" x2=\"" + fixed(left, 2) + "\" y2=\"" +
         fixed(py, 2) + "\" stroke=\"black\"/>\n";
    o += "<text x=\"" + fixed(left - 8, 2) + "\" y=\"" + fixed(py + 4, 2) + "\" text-anchor=\"end\">" + tick_label(v, ys) +
         "</text>\n";
  }
  o += "</g>\n";
  o += "<rect x=\"" + fixed(left, 2) + "\" y=\"" + fixed(top, 2) + "\" width=\"" + fixed(pw, 2) + "\" height=\"" +
       fixed(ph, 2) + "\" fill=\"none\" stroke=\"black\"/>\n";
  o += "<text x=\"" + fixed(left + pw / 2, 1) + "\" y=\"" + fixed(Hh - 12, 1) +
       "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">" + escape(plot.x_label) + "</text>\n";
  o += "<text x=\"18\" y=\"" + fixed(top + ph / 2, 1) + "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
       fixed(top + ph / 2, 1) + ")\">" + escape(plot.y_label) + "</text>\n";

  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const auto& s = plot.series[k];
    const char* color = kPalette[k % kPalette.size()];
    o += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.3\" points=\"";
    const std::size_t n = std::min(s.x.size(), s.y.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(s.y[i])) continue;
      o += fixed(X(s.x[i]), 2) + "," + fixed(Y(s.y[i]), 2);
      if (i + 1 < n) o += " ";
    }
    o += "\"/>\n";
    const double ly = top + 14 + 18 * double(k);
    o += "<line x1=\"" + fixed(left + pw + 12, 2) + "\" y1=\"" + fixed(ly, 2) + "\" x2=\"" + fixed(left + pw + 36, 2) +
         "\" y2=\"" + fixed(ly, 2) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    o += "<text x=\"" + fixed(left + pw + 42, 2) + "\" y=\"" + fixed(ly + 4, 2) +
         "\" font-family=\"sans-serif\" font-size=\"12\">" + escape(s.name) + "</text>\n";
  }
  o += "</svg>\n";
  return o;
}

} // namespace sicnn
