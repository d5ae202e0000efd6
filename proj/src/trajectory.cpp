#include "sicnn/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "sicnn/errors.hpp"

namespace sicnn {

namespace {

// Tolerance for lookups that land a rounding error outside a window.
double slack(double t) { return 1e-12 * std::max(1.0, std::abs(t)); }

} // namespace

InitialSegment InitialSegment::constant(std::vector<double> values) {
  auto shared = std::make_shared<const std::vector<double>>(values);
  InitialSegment seg([shared](std::size_t cell, double) { return (*shared)[cell]; });
  seg.constants_ = std::move(values);
  return seg;
}

InitialSegment InitialSegment::shifted(double offset) const {
  if (constants_) {
    std::vector<double> v = *constants_;
    for (auto& x : v) x += offset;
    return constant(std::move(v));
  }
  Fn base = fn_;
  return InitialSegment([base, offset](std::size_t cell, double s) { return base(cell, s) + offset; });
}

double IntervalRecord::max_ratio() const {
  double r = 0.0;
  for (std::size_t i = 1; i < picard_distances.size(); ++i)
    if (picard_distances[i - 1] > 0.0) r = std::max(r, picard_distances[i] / picard_distances[i - 1]);
  return r;
}

Trajectory::Trajectory(std::size_t cells, double sigma, double tau, InitialSegment phi,
                       std::optional<InitialSegment> psi, double gamma_sigma)
    : cells_(cells), tau_(tau), gamma_sigma_(gamma_sigma), phi_(std::move(phi)), psi_(std::move(psi)) {
  times_.push_back(sigma);
  x_.resize(cells_);
  for (std::size_t i = 0; i < cells_; ++i) x_[i] = phi_(i, 0.0);
}

double Trajectory::history_start() const {
  double h = start() - tau_;
  if (psi_) h = std::min(h, gamma_sigma_ - tau_);
  return h;
}

double Trajectory::initial_value(double t, std::size_t cell) const {
  if (psi_ && t >= gamma_sigma_ - tau_ - slack(t) && t <= gamma_sigma_ + slack(t))
    return (*psi_)(cell, std::clamp(t - gamma_sigma_, -tau_, 0.0));
  const double sigma = start();
  if (t >= sigma - tau_ - slack(t) && t <= sigma + slack(t)) return phi_(cell, std::clamp(t - sigma, -tau_, 0.0));
  std::ostringstream os;
  os.precision(17);
  os << "trajectory: history lookup at t = " << t << " outside the initial data (record starts at " << sigma
     << ", tau = " << tau_ << ")";
  throw RangeError(os.str());
}

std::size_t Trajectory::locate(double t) const {
  // Step k covers [times_[k], times_[k+1]].
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t k = static_cast<std::size_t>(it - times_.begin());
  k = k == 0 ? 0 : k - 1;
  return std::min(k, times_.size() - 2);
}

double Trajectory::value(double t, std::size_t cell) const {
  if (t < start()) return initial_value(t, cell);
  if (t > end()) {
    if (t <= end() + slack(t)) return x_[(times_.size() - 1) * cells_ + cell];
    std::ostringstream os;
    os.precision(17);
    os << "trajectory: lookup at t = " << t << " beyond the record end " << end();
    throw RangeError(os.str());
  }
  if (times_.size() == 1) return x_[cell];
  const std::size_t k = locate(t);
  return hermite(times_[k], times_[k + 1], x_[k * cells_ + cell], x_[(k + 1) * cells_ + cell],
                 d_start_[k * cells_ + cell], d_end_[k * cells_ + cell], t);
}

void Trajectory::values(double t, std::span<double> out) const {
  if (out.size() != cells_) throw ArgumentError("trajectory: output span has wrong size");
  for (std::size_t i = 0; i < cells_; ++i) out[i] = value(t, i);
}

void Trajectory::append(std::span<const double> times, std::span<const double> values,
                        std::span<const double> d_start, std::span<const double> d_end, IntervalRecord record) {
  const std::size_t n = times.size();
  if (values.size() != n * cells_ || d_start.size() != n * cells_ || d_end.size() != n * cells_)
    throw ArgumentError("trajectory: append arrays have inconsistent sizes");
  if (n == 0) return;
  if (!(times.front() > end())) throw ArgumentError("trajectory: appended times must continue the record");
  record.first_step = times_.size() - 1;
  record.steps = n;
  times_.insert(times_.end(), times.begin(), times.end());
  x_.insert(x_.end(), values.begin(), values.end());
  d_start_.insert(d_start_.end(), d_start.begin(), d_start.end());
  d_end_.insert(d_end_.end(), d_end.begin(), d_end.end());
  intervals_.push_back(std::move(record));
}

Trajectory Trajectory::with_offset(std::size_t cell, double delta) const {
  if (cell >= cells_) throw ArgumentError("trajectory: cell index out of range");
  Trajectory out = *this;
  for (std::size_t k = 0; k < out.times_.size(); ++k) out.x_[k * cells_ + cell] += delta;
  return out;
}

double Trajectory::sup_norm(double t0, double t1) const {
  double m = 0.0;
  for (std::size_t k = 0; k < times_.size(); ++k) {
    if (times_[k] < t0 || times_[k] > t1) continue;
    for (std::size_t i = 0; i < cells_; ++i) m = std::max(m, std::abs(x_[k * cells_ + i]));
  }
  return m;
}

} // namespace sicnn
