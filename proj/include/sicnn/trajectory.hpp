#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sicnn/schedule.hpp"

namespace sicnn {

/// An initial segment on [-tau, 0] for every cell: value(cell, s).
class InitialSegment {
public:
  using Fn = std::function<double(std::size_t cell, double s)>;

  InitialSegment() = default;
  explicit InitialSegment(Fn fn) : fn_(std::move(fn)) {}
  static InitialSegment constant(std::vector<double> values);
  static InitialSegment zero(std::size_t cells) { return constant(std::vector<double>(cells, 0.0)); }

  [[nodiscard]] double operator()(std::size_t cell, double s) const { return fn_(cell, s); }
  [[nodiscard]] const std::optional<std::vector<double>>& constant_values() const { return constants_; }
  /// Same segment plus a uniform offset on every cell.
  [[nodiscard]] InitialSegment shifted(double offset) const;

private:
  Fn fn_;
  std::optional<std::vector<double>> constants_;
};

/// Bookkeeping for one committed interval [left, right] inside [theta_p, theta_{p+1}].
struct IntervalRecord {
  Index p = 0;
  double left = 0.0;
  double right = 0.0;
  double zeta = 0.0;
  std::size_t first_step = 0;  // index of the first substep
  std::size_t steps = 0;
  std::vector<double> picard_distances;  // sup-norm change after each pass
  double contraction_bound = 0.0;        // a-priori mu theta_bar (M + 2 K0 L); 0 when unavailable

  [[nodiscard]] std::size_t passes() const { return picard_distances.size(); }
  /// Largest ratio between successive non-zero distances (0 if fewer than two).
  [[nodiscard]] double max_ratio() const;
};

/// Dense-output solution record.
///
/// Node values are shared between adjacent substeps, so the record is
/// continuous; each substep keeps its own end-point derivatives, so the
/// derivative may jump at the theta_p. Before `start()` the record answers
/// from the initial data: psi on [gamma(sigma) - tau, gamma(sigma)] when
/// present, phi on [sigma - tau, sigma] otherwise.
class Trajectory {
public:
  Trajectory(std::size_t cells, double sigma, double tau, InitialSegment phi, std::optional<InitialSegment> psi = {},
             double gamma_sigma = 0.0);

  [[nodiscard]] std::size_t cells() const { return cells_; }
  [[nodiscard]] double start() const { return times_.front(); }
  [[nodiscard]] double end() const { return times_.back(); }
  [[nodiscard]] double tau() const { return tau_; }
  [[nodiscard]] std::size_t steps() const { return times_.size() - 1; }
  /// Earliest time answerable from the initial data.
  [[nodiscard]] double history_start() const;

  [[nodiscard]] double value(double t, std::size_t cell) const;
  void values(double t, std::span<double> out) const;
  [[nodiscard]] double initial_value(double t, std::size_t cell) const;

  [[nodiscard]] std::span<const double> times() const { return times_; }
  [[nodiscard]] double node(std::size_t k, std::size_t cell) const { return x_[k * cells_ + cell]; }
  /// Right derivative at the start of substep k and left derivative at its end.
  [[nodiscard]] double derivative_start(std::size_t k, std::size_t cell) const { return d_start_[k * cells_ + cell]; }
  [[nodiscard]] double derivative_end(std::size_t k, std::size_t cell) const { return d_end_[k * cells_ + cell]; }

  [[nodiscard]] const std::vector<IntervalRecord>& intervals() const { return intervals_; }
  [[nodiscard]] const InitialSegment& phi() const { return phi_; }
  [[nodiscard]] const std::optional<InitialSegment>& psi() const { return psi_; }

  /// Appends substeps ending at `times` (the first start is the current end).
  /// Arrays are node-major: entry k*cells + i.
  void append(std::span<const double> times, std::span<const double> values, std::span<const double> d_start,
              std::span<const double> d_end, IntervalRecord record);

  /// Copy with `delta` added to every committed node value of one cell.
  [[nodiscard]] Trajectory with_offset(std::size_t cell, double delta) const;

  /// Max over cells of |x(t)| at all nodes in [t0, t1].
  [[nodiscard]] double sup_norm(double t0, double t1) const;

private:
  [[nodiscard]] std::size_t locate(double t) const;

  std::size_t cells_;
  double tau_;
  double gamma_sigma_;
  InitialSegment phi_;
  std::optional<InitialSegment> psi_;
  std::vector<double> times_;
  std::vector<double> x_;
  std::vector<double> d_start_;
  std::vector<double> d_end_;
  std::vector<IntervalRecord> intervals_;
};

/// Cubic Hermite interpolation on [t0, t1].
[[nodiscard]] inline double hermite(double t0, double t1, double x0, double x1, double d0, double d1, double t) {
  const double h = t1 - t0;
  const double u = (t - t0) / h;
  const double u2 = u * u;
  const double u3 = u2 * u;
  const double h00 = 2 * u3 - 3 * u2 + 1;
  const double h10 = u3 - 2 * u2 + u;
  const double h01 = -2 * u3 + 3 * u2;
  const double h11 = u3 - u2;
  return h00 * x0 + h10 * h * d0 + h01 * x1 + h11 * h * d1;
}

} // namespace sicnn
