#pragma once

#include <array>
#include <limits>
#include <vector>

#include "sicnn/integrator.hpp"
#include "sicnn/model.hpp"
#include "sicnn/trajectory.hpp"

namespace sicnn {

struct BoundedSolution {
  Trajectory trajectory;  // includes the discarded transient [t0 - t_back, t0]
  double t0 = 0.0;
  double t1 = 0.0;
  double t_back = 0.0;
  double H = 0.0;
  double envelope_at_t0 = 0.0;  // K(H) e^{-gamma0 t_back / 2}
  double sup_norm = 0.0;        // over [t0, t1]
};

/// Approximates the unique bounded solution on [t0, t1].
///
/// Integrates from sigma = t0 - t_back with zero initial data and discards the
/// transient; t_back is the smallest value with K(H) e^{-gamma0 t_back/2} <= accuracy / 2,
/// since the zero start is within H of the bounded solution. Throws
/// CertificationError unless C5, C6 and C7 hold.
[[nodiscard]] BoundedSolution bounded_solution(const Model& model, double t0, double t1, double accuracy,
                                               const SolverOptions& opts = {});

struct PiResidual {
  double max_defect = 0.0;
  double at_time = 0.0;
  std::size_t cell = 0;
  double tail_bound = 0.0;  // H e^{-gamma0 (t_from - start)} for the truncated history
};

/// Defect of x(t) = -int_{-inf}^t e^{-a(t-s)}[sum C f x - L] ds on [t_from, t_to],
/// truncating the integral at traj.start(). Throws ArgumentError when the
/// truncation bound at t_from exceeds tail_tol, naming the earliest admissible t_from.
[[nodiscard]] PiResidual pi_residual(const Model& model, const Trajectory& traj, double t_from, double t_to,
                                     double tail_tol);

struct EnvelopeViolation {
  double t = 0.0;
  double norm = 0.0;
  double bound = 0.0;
};

struct StabilityReport {
  double delta = 0.0;
  double K_delta = 0.0;
  double rate = 0.0;  // gamma0 / 2
  double sigma = 0.0;
  double horizon = 0.0;
  double fitted_rate = 0.0;  // -slope of log ||w|| against t; informational
  std::vector<EnvelopeViolation> envelope_violations;
  bool pass = false;
  // Samples of (t, ||w(t)||, envelope) for plotting.
  std::vector<std::array<double, 3>> samples;
};

/// Compares the trajectory from `base` with the one from base + delta (uniform
/// offset on every cell) against K(delta) e^{-gamma0 (t - sigma)/2}. Throws
/// CertificationError when C7 fails.
[[nodiscard]] StabilityReport stability_envelope(const Model& model, const IvpSetup& base, double delta, double horizon,
                                                 const SolverOptions& opts = {});

struct TranslationReport {
  double eps = 0.0;
  std::vector<double> accepted;
  double max_gap = std::numeric_limits<double>::infinity();
  double window_start = 0.0;
  double window_end = 0.0;
  double alpha_min = 0.0;
  double alpha_max = 0.0;
  double alpha_step = 0.0;
  double sample_step = 0.0;
  // every scanned alpha with max_t ||x(t + alpha) - x(t)|| over the window samples
  std::vector<double> alphas;
  std::vector<double> deviation;
};

/// Grid search for eps-translation numbers: alpha is accepted when
/// max_t ||x(t + alpha) - x(t)|| < eps over window samples spaced alpha_step / refine.
[[nodiscard]] TranslationReport translation_scan(const Trajectory& traj, double eps, double alpha_min,
                                                 double alpha_max, double alpha_step, double window_start,
                                                 double window_end, int refine = 4);

} // namespace sicnn
