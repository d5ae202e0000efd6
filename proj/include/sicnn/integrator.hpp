#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "sicnn/model.hpp"
#include "sicnn/trajectory.hpp"

namespace sicnn {

enum class Quadrature { trapezoid, simpson };

struct SolverOptions {
  double h = 0.0;  // substep; 0 selects min(theta_under, tau, 1) / 50
  double picard_tol = 1e-10;
  int picard_max_iters = 100;
  Quadrature quadrature = Quadrature::trapezoid;

  /// Fills the default step and checks h <= theta_under / 4.
  [[nodiscard]] SolverOptions resolved(const Model& model) const;
};

enum class InitialRegime { ic1, ic2 };

/// Initial data: sigma, phi on [-tau, 0], and psi for the gamma(sigma) window when sigma > zeta_p.
struct IvpSetup {
  double sigma = 0.0;
  InitialSegment phi;
  std::optional<InitialSegment> psi;

  /// IC1 when theta_p <= sigma <= zeta_p, IC2 when zeta_p < sigma < theta_{p+1}.
  [[nodiscard]] InitialRegime regime(const GammaSchedule& schedule) const;
  /// Regime-specific requirements, including phi(s) = psi(s + sigma - gamma(sigma)) on the
  /// overlap when the two windows are connected. Throws ConfigError.
  void validate(const Model& model) const;
  [[nodiscard]] IvpSetup shifted(double offset) const;
};

/// Extends `traj` over [left, right] (inside one [theta_p, theta_{p+1}], with
/// left == traj.end()) by Picard iteration of the interval integral operator.
///
/// Each pass samples the integrand on the substep grid from the previous
/// iterate (committed history before `left`), integrates it against the exact
/// kernel e^{-a(t-s)}, and stops when the sup-norm change drops below
/// picard_tol. Throws SolverError when the iteration does not settle.
void solve_interval(const Model& model, double left, double right, Trajectory& traj, const SolverOptions& opts);

/// Chains solve_interval from sigma over whole intervals until t_end is covered.
/// The record ends at the first theta_q >= t_end.
[[nodiscard]] Trajectory solve_ivp(const Model& model, const IvpSetup& setup, double t_end,
                                   const SolverOptions& opts = {});

struct ResidualReport {
  double max_defect = 0.0;
  double at_time = 0.0;
  std::size_t cell = 0;
};

namespace detail {
/// Max |x(t_k) - R(t_k)| over nodes in [t_from, t_to], where R follows the
/// variation-of-constants recursion from R(start) = x(start) (or 0 when
/// include_initial is false, which truncates an infinite-history integral).
[[nodiscard]] ResidualReport integral_defect(const Model& model, const Trajectory& traj, double t_from, double t_to,
                                             bool include_initial);
} // namespace detail

/// Defect of the variation-of-constants identity
///   x(t) = e^{-a(t-sigma)} x(sigma) - int_sigma^t e^{-a(t-s)} [sum C f x - L] ds
/// at every node in [t_from, t_to], the integral being recomputed from the dense
/// output with 5-point Gauss-Legendre per substep.
[[nodiscard]] inline ResidualReport residual(const Model& model, const Trajectory& traj, double t_from, double t_to) {
  return detail::integral_defect(model, traj, t_from, t_to, true);
}
[[nodiscard]] inline ResidualReport residual(const Model& model, const Trajectory& traj) {
  return residual(model, traj, traj.start(), traj.end());
}


/// Right-hand side of the equation at time t with the given gamma value, read from `traj`.
void rhs(const Model& model, const Trajectory& traj, double t, double gamma_value, std::span<double> out);

} // namespace sicnn
