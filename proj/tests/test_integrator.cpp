#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "sicnn/config.hpp"
#include "sicnn/errors.hpp"
#include "sicnn/integrator.hpp"

using namespace sicnn;
using namespace testing_support;

namespace {

double clip1(double s) { return std::clamp(s, -1.0, 1.0); }

// Piecewise closed form of the scalar model: on [theta_p, theta_{p+1}] the
// equation is linear with rate k = a + C clip(x(zeta_p)).
struct ScalarExact {
  double a, c, L;
  const GammaSchedule& s;

  double run(double x0, double t0, double t1) const {
    double x = x0, t = t0;
    while (t < t1 - 1e-14) {
      const Index p = s.interval_index(t);
      const double right = std::min(s.theta(p + 1), t1);
      const double zeta = s.zeta(p);
      auto flow = [&](double y0, double k, double dt) {
        const double xs = L / k;
        return xs + (y0 - xs) * std::exp(-k * dt);
      };
      // x(zeta) solves y = flow(x, a + c clip(y), zeta - t)
      double y = x;
      for (int it = 0; it < 500; ++it) y = flow(x, a + c * clip1(y), zeta - t);
      x = flow(x, a + c * clip1(y), right - t);
      t = right;
    }
    return x;
  }
};

Model example6_zero_inputs() {
  Model m = Model::example6(200);
  std::vector<double> a(m.network.decays().begin(), m.network.decays().end());
  std::vector<double> w = {0.08, 0.01, 0.02, 0.05, 0.03, 0.06, 0.04, 0.07, 0.02};
  m.network = NetworkSpec::with_cell_weights(3, 3, 1, a, w, std::vector<InputSignal>(9, InputSignal(std::vector<InputTerm>{})), 0.3);
  return m;
}

IvpSetup constant_setup(double sigma, std::vector<double> phi) {
  IvpSetup s;
  s.sigma = sigma;
  s.phi = InitialSegment::constant(std::move(phi));
  return s;
}

} // namespace

TEST_CASE("zero inputs and zero initial data give the zero solution") {
  const Model m = example6_zero_inputs();
  const auto traj = solve_ivp(m, constant_setup(0.25, std::vector<double>(9, 0.0)), 20.0);
  CHECK(traj.sup_norm(traj.start(), traj.end()) <= 1e-12);
  CHECK(traj.end() >= 20.0);
}

TEST_CASE("scalar model against the piecewise closed form") {
  for (double advance : {0.0, 0.5}) {
    CAPTURE(advance);
    const auto s = GammaSchedule::affine(1.0, 0.0, advance, {-5, 20});
    const Model m = scalar_model(1.0, 0.05, constant_input(0.1), clipped_at_gamma(), s, 0.0);
    SolverOptions o;
    o.h = 1e-3;
    const auto traj = solve_ivp(m, constant_setup(0.0, {0.5}), 10.0, o);
    const ScalarExact exact{1.0, 0.05, 0.1, s};
    double err = 0.0;
    for (double t = 0.0; t <= 10.0; t += 0.25) err = std::max(err, std::abs(traj.value(t, 0) - exact.run(0.5, 0.0, t)));
    CHECK(err < 1e-8);
  }
}

TEST_CASE("scalar model against the Euler micro-step oracle with an advanced argument") {
  const auto s = GammaSchedule::affine(1.0, 0.0, 0.5, {-5, 20});
  const Model m = scalar_model(1.0, 0.05, constant_input(0.1), clipped_at_gamma(), s, 0.0);
  const auto traj = solve_ivp(m, constant_setup(0.0, {0.5}), 10.0);
  const auto oracle = euler_oracle(1.0, 0.05, 0.1, clip1, s, 0.5, 0.0, 10.0, 1e-5);
  double err = 0.0;
  for (double t = 0.0; t <= 10.0; t += 0.01) err = std::max(err, std::abs(traj.value(t, 0) - oracle.at(t)));
  CHECK(err < 1e-3);
  CHECK(err < 1e-5);
}

TEST_CASE("decoupled network matches the linear closed form at second order") {
  // dx/dt = -a x + A sin(w t), C = 0
  const double a1 = 2.0, a2 = 0.7, A = 0.3, w = 1.7;
  auto exact = [&](double a, double x0, double t) {
    auto part = [&](double s) { return A * (a * std::sin(w * s) - w * std::cos(w * s)) / (a * a + w * w); };
    return part(t) + (x0 - part(0.0)) * std::exp(-a * t);
  };
  const auto s = GammaSchedule::affine(1.0, 0.0, 0.0, {-5, 30});
  auto error_at = [&](double h, Quadrature q) {
    Model m{NetworkSpec::with_cell_weights(1, 2, 1, {a1, a2}, {0.0, 0.0}, {sine_input(A, w), sine_input(A, w)}, 0.0), s,
            clipped_at_gamma(), {}};
    SolverOptions o;
    o.h = h;
    o.quadrature = q;
    const auto traj = solve_ivp(m, constant_setup(0.0, {0.1, -0.2}), 20.0, o);
    double err = 0.0;
    for (double t = 0.0; t <= 20.0; t += 0.05) {
      err = std::max(err, std::abs(traj.value(t, 0) - exact(a1, 0.1, t)));
      err = std::max(err, std::abs(traj.value(t, 1) - exact(a2, -0.2, t)));
    }
    return err;
  };
  const double e1 = error_at(0.02, Quadrature::trapezoid);
  const double e2 = error_at(0.01, Quadrature::trapezoid);
  CHECK(e1 < 1e-4);
  CHECK(e1 / e2 > 3.0);
  CHECK(e1 / e2 < 5.0);
  const double s1 = error_at(0.02, Quadrature::simpson);
  CHECK(s1 < e1 / 10.0);
}

TEST_CASE("the derivative may jump at theta_p but the record is continuous") {
  const auto s = GammaSchedule::affine(1.0, 0.0, 0.0, {-5, 20});
  const Model m = scalar_model(1.0, 0.5, constant_input(0.1), clipped_at_gamma(), s, 0.0);
  const auto traj = solve_ivp(m, constant_setup(0.0, {0.8}), 3.0);
  REQUIRE(traj.intervals().size() == 3);
  const auto& second = traj.intervals()[1];
  const std::size_t k = second.first_step;  // first substep of [1, 2]
  CHECK(traj.times()[k] == doctest::Approx(1.0));
  const double left = traj.derivative_end(k - 1, 0);
  const double right = traj.derivative_start(k, 0);
  CHECK(std::abs(left - right) > 1e-3);
  CHECK(traj.value(1.0 - 1e-12, 0) == doctest::Approx(traj.value(1.0 + 1e-12, 0)).epsilon(1e-9));
}

TEST_CASE("initial data regimes") {
  const auto s = GammaSchedule::affine(1.0, 0.0, 0.5, {-5, 20});
  const Activation delayed =
      Activation::pointwise(ActivationKind::pointwise_on_gamma_delayed, ScalarRule::clipped_linear(1.0, 1.0), 1.0, 1.0);
  const Model m = scalar_model(1.0, 0.05, constant_input(0.1), delayed, s, 0.3);

  IvpSetup ic1 = constant_setup(0.3, {0.2});
  CHECK(ic1.regime(s) == InitialRegime::ic1);
  CHECK_NOTHROW(ic1.validate(m));
  ic1.psi = InitialSegment::constant({0.2});
  CHECK_THROWS_AS(ic1.validate(m), ConfigError);

  IvpSetup ic2 = constant_setup(0.7, {0.2});
  CHECK(ic2.regime(s) == InitialRegime::ic2);
  CHECK_THROWS_AS(ic2.validate(m), ConfigError);
  ic2.psi = InitialSegment::constant({0.4});  // phi window [0.4, 0.7] meets psi window [0.2, 0.5]
  CHECK_THROWS_AS(ic2.validate(m), ConfigError);
  ic2.psi = InitialSegment::constant({0.2});
  CHECK_NOTHROW(ic2.validate(m));
  const auto traj = solve_ivp(m, ic2, 5.0);
  CHECK(traj.value(0.7, 0) == doctest::Approx(0.2));
  CHECK(traj.value(0.25, 0) == doctest::Approx(0.2));  // psi window
  CHECK_THROWS_AS((void)traj.value(0.1, 0), RangeError);

  // disconnected windows carry no compatibility requirement
  const auto far = GammaSchedule::table({0.0, 2.0, 4.0}, {0.1, 4.0, 4.0}, 0);
  const Model mf = scalar_model(1.0, 0.05, constant_input(0.1), delayed, far, 0.3);
  IvpSetup ic2f = constant_setup(1.5, {0.2});
  ic2f.psi = InitialSegment::constant({-0.4});
  CHECK(ic2f.regime(far) == InitialRegime::ic2);
  CHECK_NOTHROW(ic2f.validate(mf));
}

TEST_CASE("solver options and failures") {
  const Model m = Model::example6(200);
  const auto setup = constant_setup(0.25, std::vector<double>(9, 0.01));
  SolverOptions big;
  big.h = 0.2;  // above theta_under / 4
  CHECK_THROWS_AS(solve_ivp(m, setup, 5.0, big), ConfigError);
  SolverOptions capped;
  capped.picard_max_iters = 1;
  CHECK_THROWS_AS(solve_ivp(m, setup, 5.0, capped), SolverError);
  CHECK_THROWS_AS(solve_ivp(m, setup, 0.1), ArgumentError);
  CHECK(SolverOptions{}.resolved(m).h == doctest::Approx(0.3 / 50));

  auto traj = solve_ivp(m, setup, 2.0);
  const double end = traj.end();
  CHECK_THROWS_AS(solve_interval(m, end + 0.1, end + 0.2, traj, {}), SolverError);
  const Index p = m.schedule.interval_index(end);
  CHECK_THROWS_AS(solve_interval(m, end, m.schedule.theta(p + 1) + 0.1, traj, {}), ArgumentError);
  CHECK_NOTHROW(solve_interval(m, end, m.schedule.theta(p + 1), traj, {}));
  CHECK(traj.end() == m.schedule.theta(p + 1));
}

TEST_CASE("Picard iteration on the example network contracts quickly") {
  const RunConfig cfg = parse_config(preset("example6"));
  const auto traj = solve_ivp(cfg.model, cfg.initial, 20.0, cfg.solver);
  for (const auto& iv : traj.intervals()) {
    CHECK(iv.passes() <= 10);
    CHECK(iv.max_ratio() <= 0.15);
    CHECK(iv.contraction_bound < 0.1);
    for (std::size_t i = 1; i < iv.picard_distances.size(); ++i)
      CHECK(iv.picard_distances[i] <= iv.picard_distances[i - 1]);
  }
  // bounded, amplitude of the order of the figure
  CHECK(traj.sup_norm(5.0, 20.0) < 0.12);
  CHECK(traj.sup_norm(5.0, 20.0) > 0.03);
}

TEST_CASE("residual decays at second order") {
  const RunConfig cfg = parse_config(preset("example6"));
  SolverOptions o = cfg.solver;
  o.h = 4e-3;
  const double r1 = residual(cfg.model, solve_ivp(cfg.model, cfg.initial, 10.0, o)).max_defect;
  o.h = 2e-3;
  const double r2 = residual(cfg.model, solve_ivp(cfg.model, cfg.initial, 10.0, o)).max_defect;
  CHECK(r1 / r2 > 3.0);
  CHECK(r2 < 1e-6);
}

TEST_CASE("rhs matches a difference quotient of the record") {
  const RunConfig cfg = parse_config(preset("example6"));
  SolverOptions o = cfg.solver;
  o.h = 1e-3;
  const auto traj = solve_ivp(cfg.model, cfg.initial, 3.0, o);
  const double t = 2.1234;
  std::vector<double> d(9);
  rhs(cfg.model, traj, t, cfg.model.schedule.gamma(t), d);
  const double e = 1e-5;
  for (std::size_t i = 0; i < 9; ++i) {
    const double fd = (traj.value(t + e, i) - traj.value(t - e, i)) / (2 * e);
    CHECK(d[i] == doctest::Approx(fd).epsilon(1e-4).scale(1e-3));
  }
}
