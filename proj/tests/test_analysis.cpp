#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "sicnn/analysis.hpp"
#include "sicnn/config.hpp"
#include "sicnn/errors.hpp"

using namespace sicnn;
using namespace testing_support;

namespace {

Model inflated_example6() {
  Model m = Model::example6(400);
  m.activation = Activation::pointwise(ActivationKind::pointwise_on_gamma_delayed, ScalarRule::capped_quadratic(0.1), 15.0, 0.1);
  return m;
}

Model sinusoid_model() {
  return scalar_model(1.0, 0.0, sine_input(1.0, 1.0), clipped_at_gamma(), GammaSchedule::affine(1.0, 0.0, 0.0, {-200, 400}), 0.0);
}

} // namespace

TEST_CASE("bounded solution stays inside the certified ball") {
  const Model m = Model::example6(400);
  const auto H = *m.constants().H;
  const auto b = bounded_solution(m, 0.0, 30.0, 1e-6);
  CHECK(b.t0 == 0.0);
  CHECK(b.t1 == 30.0);
  CHECK(b.H == doctest::Approx(H));
  CHECK(b.sup_norm <= H + 1e-6);
  CHECK(b.sup_norm > 0.05);
  CHECK(b.envelope_at_t0 <= 0.5e-6 * (1 + 1e-9));
  CHECK(b.trajectory.start() <= -b.t_back);
  // t_back from K(H) e^{-3 t/2} = accuracy / 2
  CHECK(b.t_back == doctest::Approx(std::log(2 * 0.117118386447048240098836543588 / 1e-6) / 1.5).epsilon(1e-9));

  // two starts further back agree to the requested accuracy
  const auto tighter = bounded_solution(m, 0.0, 30.0, 1e-9);
  double diff = 0.0;
  for (double t = 0.0; t <= 30.0; t += 0.1)
    for (std::size_t i = 0; i < 9; ++i) diff = std::max(diff, std::abs(b.trajectory.value(t, i) - tighter.trajectory.value(t, i)));
  CHECK(diff < 1e-6);

  CHECK_THROWS_AS(bounded_solution(inflated_example6(), 0.0, 30.0, 1e-6), CertificationError);
}

TEST_CASE("truncated history residual") {
  const Model m = Model::example6(400);
  const auto b = bounded_solution(m, 0.0, 20.0, 1e-6);
  const auto r = pi_residual(m, b.trajectory, 0.0, 20.0, 1e-6);
  CHECK(r.tail_bound <= 1e-6);
  CHECK(r.max_defect < 1e-5);
  CHECK_THROWS_AS(pi_residual(m, b.trajectory, b.trajectory.start() + 0.5, 20.0, 1e-6), ArgumentError);
}

TEST_CASE("stability envelope holds for the example network") {
  const RunConfig cfg = parse_config(preset("example6"));
  for (double delta : {1e-3, 1e-2, 5e-2}) {
    CAPTURE(delta);
    const auto r = stability_envelope(cfg.model, cfg.initial, delta, 10.0, cfg.solver);
    CHECK(r.pass);
    CHECK(r.envelope_violations.empty());
    CHECK(r.rate == 1.5);
    CHECK(r.K_delta == doctest::Approx(delta / (1.0 - 0.0319148113354087591709685788524)).epsilon(1e-12));
    REQUIRE_FALSE(r.samples.empty());
    CHECK(r.samples.front()[1] == doctest::Approx(delta).epsilon(1e-9));
    CHECK(r.fitted_rate > r.rate);
    for (const auto& s : r.samples) CHECK(s[1] <= s[2]);
  }
  CHECK_THROWS_AS(stability_envelope(inflated_example6(), cfg.initial, 0.01, 10.0), CertificationError);
}

TEST_CASE("translation scan finds the period of a sinusoidal response") {
  const Model m = sinusoid_model();
  const auto b = bounded_solution(m, 0.0, 40.0, 1e-8);
  const double step = 0.01;
  const auto scan = translation_scan(b.trajectory, 0.02, 5.0, 7.0, step, 0.0, 20.0, 4);
  REQUIRE_FALSE(scan.accepted.empty());
  bool near_period = false;
  for (double a : scan.accepted) {
    CHECK(std::abs(a - 2 * std::numbers::pi) < 0.02 / 0.7 + step);
    near_period = near_period || std::abs(a - 2 * std::numbers::pi) <= step;
  }
  CHECK(near_period);
  // accepted exactly where the recorded deviation is below eps
  std::size_t below = 0;
  for (double d : scan.deviation) below += d < 0.02 ? 1 : 0;
  CHECK(below == scan.accepted.size());
  CHECK(scan.alphas.size() == 201);
  CHECK_THROWS_AS(translation_scan(b.trajectory, 0.02, 5.0, 30.0, step, 0.0, 20.0, 4), RangeError);
  CHECK_THROWS_AS(translation_scan(b.trajectory, -1.0, 5.0, 7.0, step, 0.0, 20.0, 4), ArgumentError);
}

TEST_CASE("a constant response is translated by every shift") {
  const Model m = scalar_model(2.0, 0.0, constant_input(0.4), clipped_at_gamma(), GammaSchedule::affine(1.0, 0.0, 0.0, {-200, 200}), 0.0);
  const auto b = bounded_solution(m, 0.0, 20.0, 1e-9);
  CHECK(b.trajectory.value(5.0, 0) == doctest::Approx(0.2).epsilon(1e-8));
  const auto scan = translation_scan(b.trajectory, 1e-6, 0.0, 10.0, 0.5, 0.0, 10.0, 2);
  CHECK(scan.accepted.size() == 21);
  CHECK(scan.max_gap == doctest::Approx(0.5));
  REQUIRE(scan.alphas.size() == 21);
  CHECK(scan.deviation.size() == 21);
  for (double d : scan.deviation) CHECK(d < 1e-6);
}
