#pragma once

#include <cmath>
#include <vector>

#include "sicnn/model.hpp"

namespace testing_support {

using namespace sicnn;

inline InputSignal constant_input(double c) { return InputSignal(std::vector<InputTerm>{InputTerm{c, 0.0, 0.0, Wave::cosine}}); }

inline InputSignal sine_input(double amplitude, double omega) {
  return InputSignal(std::vector<InputTerm>{InputTerm{amplitude, omega, 0.0, Wave::sine}});
}

/// m = n = 1 network: dx/dt = -a x - C f x + L.
inline Model scalar_model(double a, double c, InputSignal input, Activation act, GammaSchedule schedule, double tau) {
  return Model{NetworkSpec::with_cell_weights(1, 1, 1, {a}, {c}, {std::move(input)}, tau), std::move(schedule),
               std::move(act), {}};
}

/// f(phi, psi) = clamp(psi(0), -1, 1), read at gamma(t).
inline Activation clipped_at_gamma() {
  return Activation::pointwise(ActivationKind::pointwise_on_gamma, ScalarRule::clipped_linear(1.0, 1.0), 1.0, 1.0);
}

/// Explicit Euler with micro-step h; on each [theta_p, theta_{p+1}) the value
/// x(zeta_p) is guessed, the interval integrated, and the guess replaced by the
/// computed value until it stops changing. Returns samples on the micro grid.
struct EulerOracle {
  std::vector<double> t;
  std::vector<double> x;

  double at(double time) const {
    const double h = t[1] - t[0];
    const auto k = std::size_t(std::floor((time - t.front()) / h));
    if (k + 1 >= t.size()) return x.back();
    const double u = (time - t[k]) / h;
    return x[k] + u * (x[k + 1] - x[k]);
  }
};

inline EulerOracle euler_oracle(double a, double c, double L, double (*g)(double), const GammaSchedule& s, double x0,
                                double t0, double t1, double h) {
  EulerOracle o;
  const auto n = std::size_t(std::llround((t1 - t0) / h));
  o.t.resize(n + 1);
  o.x.assign(n + 1, 0.0);
  for (std::size_t k = 0; k <= n; ++k) o.t[k] = t0 + double(k) * h;
  o.x[0] = x0;
  std::size_t k = 0;
  while (k < n) {
    const Index p = s.interval_index(o.t[k] + 0.5 * h);
    const double right = std::min(s.theta(p + 1), t1);
    const double zeta = s.zeta(p);
    std::size_t k_end = k;
    while (k_end < n && o.t[k_end + 1] <= right + 1e-12) ++k_end;
    double guess = o.x[k];
    for (int it = 0; it < 200; ++it) {
      const double f = g(guess);
      double v = o.x[k];
      double at_zeta = zeta <= o.t[k] ? o.x[k] : v;
      for (std::size_t j = k; j < k_end; ++j) {
        v += h * (-a * v - c * f * v + L);
        o.x[j + 1] = v;
        if (o.t[j + 1] <= zeta + 1e-12) at_zeta = v;
      }
      if (std::abs(at_zeta - guess) < 1e-15) break;
      guess = at_zeta;
    }
    k = k_end;
  }
  return o;
}

} // namespace testing_support
