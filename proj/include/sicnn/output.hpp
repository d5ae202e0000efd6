#pragma once

#include <string>
#include <vector>

#include "sicnn/trajectory.hpp"

namespace sicnn {

/// %.12g with '.' as decimal separator whatever the locale.
[[nodiscard]] std::string format_number(double x);

/// t0, t0 + stride, ... up to t1 (t1 itself is appended when the grid misses it).
[[nodiscard]] std::vector<double> sample_times(double t0, double t1, double stride);

/// Header "t,<names...>", one row per sample time.
[[nodiscard]] std::string trajectory_csv(const Trajectory& traj, const std::vector<std::string>& names, double t0,
                                         double t1, double stride);

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  int width = 900;
  int height = 520;
};

[[nodiscard]] Plot trajectory_plot(const Trajectory& traj, const std::vector<std::string>& names, double t0, double t1,
                                   double stride, std::string title);

/// SVG 1.1 line chart: one polyline per series, fixed palette, ticked axes, legend.
[[nodiscard]] std::string render_svg(const Plot& plot);

} // namespace sicnn
