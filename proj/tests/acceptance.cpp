// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "helpers.hpp"
#include "sicnn/analysis.hpp"
#include "sicnn/config.hpp"
#include "sicnn/integrator.hpp"

using namespace sicnn;
using namespace testing_support;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int n, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool pass = o.pass && secs < limit_s;
  if (!pass) ++failures;
  std::printf("%s criterion %d: %s (%s; %.2fs, limit %.0fs)\n", pass ? "PASS" : "FAIL", n, name, o.detail.c_str(), secs,
              limit_s);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

bool rel_close(double x, double ref, double tol) { return std::abs(x - ref) <= tol * std::max(std::abs(ref), 1e-300); }

RunConfig example6() { return parse_config(preset("example6")); }

// Independent recomputation of the example constants in long double, straight
// from the published coefficients.
struct Reference {
  long double mu = 0, c_bar = 0, d_bar = 0, gamma0 = 1e300L, L_bar = 0, l_bar = 0, H = 0, c5 = 0, c6 = 0, c7 = 0;
  long double sums[9]{};
  long double max_gap = 0, min_gap = 1e300L;
};

Reference reference() {
  const long double a[9] = {9, 3, 5, 6, 5, 4, 3, 12, 9};
  const long double C[9] = {.08L, .01L, .02L, .05L, .03L, .06L, .04L, .07L, .02L};
  // sup of the inputs: sum of absolute amplitudes per cell
  const long double Lb[9] = {.3L, .3L, .27L, .25L, .35L, .3L, .34L, .3L, .28L};
  const long double M = 0.005L, L = 0.1L, tau = 0.3L, theta_bar = 1.5L;
  Reference r;
  for (int k = 0; k < 9; ++k) r.gamma0 = std::min(r.gamma0, a[k]);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      long double s = 0;
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          if (std::abs(k - i) <= 1 && std::abs(l - j) <= 1) s += C[3 * k + l];
      const int c = 3 * i + j;
      r.sums[c] = s;
      r.mu = std::max(r.mu, s);
      r.c_bar = std::max(r.c_bar, s / a[c]);
      r.d_bar = std::max(r.d_bar, s / (2 * a[c] - r.gamma0));
      r.L_bar = std::max(r.L_bar, Lb[c]);
      r.l_bar = std::max(r.l_bar, Lb[c] / a[c]);
    }
  r.H = r.l_bar / (1 - M * r.c_bar);
  r.c5 = r.mu * theta_bar * (M + 2 * L * (r.H + theta_bar * r.L_bar) / (1 - r.mu * theta_bar * M));
  r.c6 = (M + 2 * L * r.H) * r.c_bar;
  r.c7 = 2 * r.d_bar * (M + L * r.H * std::exp(r.gamma0 * tau / 2) * (1 + std::exp(r.gamma0 * theta_bar / 2)));
  auto theta = [](long double p) { return p + 0.25L * std::fabs(std::sin(p) - std::cos(p * std::sqrt(2.0L))); };
  for (long p = -10000; p < 10000; ++p) {
    const long double g = theta(p + 1) - theta(p);
    r.max_gap = std::max(r.max_gap, g);
    r.min_gap = std::min(r.min_gap, g);
  }
  return r;
}

} // namespace

int main() {
  criterion(1, "example constants", 1.0, [] {
    const auto k = example6().model.constants();
    const double listed[9] = {0.17, 0.25, 0.12, 0.28, 0.38, 0.21, 0.19, 0.27, 0.18};
    bool ok = k.mu == 0.38 && rel_close(k.c_bar, 0.25 / 3, 1e-15) && rel_close(k.d_bar, 0.25 / 3, 1e-15) &&
              k.gamma0 == 3.0 && rel_close(k.L_bar, 0.35, 1e-15) && rel_close(k.l_bar, 0.34 / 3, 1e-15);
    for (int i = 0; i < 9; ++i) ok = ok && rel_close(k.coupling_sums[std::size_t(i)], listed[i], 4e-16);
    return Outcome{ok, fmt("mu=%.17g c_bar=%.17g l_bar=%.17g", k.mu, k.c_bar, k.l_bar)};
  });

  criterion(2, "certification of the example", 1.0, [] {
    const auto rep = example6().model.conditions();
    const Reference ref = reference();
    bool ok = rep.all_pass() && rep.mu_theta_M_ok && rep.M_c_bar_ok;
    for (const char* c : {"C3", "C5", "C6", "C7", "C9"}) ok = ok && rep.entry(c).pass && rep.entry(c).margin > 0;
    ok = ok && rel_close(rep.entry("C5").lhs, double(ref.c5), 1e-12) && rel_close(rep.entry("C6").lhs, double(ref.c6), 1e-12) &&
         rel_close(rep.entry("C7").lhs, double(ref.c7), 1e-12) && rel_close(*rep.constants.H, double(ref.H), 1e-12) &&
         rel_close(rep.entry("C3").lhs, double(ref.max_gap), 1e-12) && rel_close(rep.entry("C9").lhs, double(ref.min_gap), 1e-12);
    for (int i = 0; i < 9; ++i) ok = ok && rel_close(rep.constants.coupling_sums[std::size_t(i)], double(ref.sums[i]), 1e-12);
    return Outcome{ok, fmt("C5=%.12g C6=%.12g C7=%.12g", rep.entry("C5").lhs, rep.entry("C6").lhs, rep.entry("C7").lhs)};
  });

  criterion(3, "scalar instance against the Euler oracle", 30.0, [] {
    const auto s = GammaSchedule::affine(1.0, 0.0, 0.0, {-5, 20});
    const Model m = scalar_model(1.0, 0.05, constant_input(0.1), clipped_at_gamma(), s, 0.0);
    IvpSetup setup;
    setup.sigma = 0.0;
    setup.phi = InitialSegment::constant({0.5});
    const auto traj = solve_ivp(m, setup, 10.0);
    const auto oracle = euler_oracle(1.0, 0.05, 0.1, [](double x) { return std::clamp(x, -1.0, 1.0); }, s, 0.5, 0.0, 10.0, 1e-5);
    double err = 0.0;
    for (std::size_t k = 0; k < oracle.t.size(); k += 10) err = std::max(err, std::abs(traj.value(oracle.t[k], 0) - oracle.x[k]));
    return Outcome{err <= 1e-3, fmt("sup error %.3g", err)};
  });

  criterion(4, "Picard contraction on the example", 10.0, [] {
    const RunConfig cfg = example6();
    const auto traj = solve_ivp(cfg.model, cfg.initial, 30.0, cfg.solver);
    double ratio = 0.0;
    std::size_t passes = 0;
    bool monotone = true;
    for (const auto& iv : traj.intervals()) {
      ratio = std::max(ratio, iv.max_ratio());
      passes = std::max(passes, iv.passes());
      for (std::size_t i = 1; i < iv.picard_distances.size(); ++i)
        monotone = monotone && iv.picard_distances[i] <= iv.picard_distances[i - 1];
    }
    return Outcome{monotone && ratio <= 0.15 && passes <= 10 && cfg.solver.picard_tol == 1e-10,
                   fmt("max ratio %.3g, max passes %.0f, monotone %.0f", ratio, double(passes), monotone)};
  });

  criterion(5, "bounded solution stays within H", 60.0, [] {
    const RunConfig cfg = example6();
    const double H = *cfg.model.constants().H;
    const auto b = bounded_solution(cfg.model, 0.0, 30.0, cfg.ap.accuracy, cfg.solver);
    return Outcome{b.t1 - b.t0 >= 30.0 && b.sup_norm <= H + 1e-4, fmt("sup %.6g, H %.6g", b.sup_norm, H)};
  });

  criterion(6, "exponential envelope", 60.0, [] {
    const RunConfig cfg = example6();
    const double c7 = cfg.model.conditions().entry("C7").lhs;
    std::size_t violations = 0, samples = 0;
    bool k_ok = true;
    double worst = 0.0;
    for (double delta : {1e-3, 1e-2, 5e-2}) {
      const auto r = stability_envelope(cfg.model, cfg.initial, delta, 10.0, cfg.solver);
      violations += r.envelope_violations.size();
      samples += r.samples.size();
      k_ok = k_ok && rel_close(r.K_delta, delta / (1 - c7), 1e-14) && r.rate == 1.5;
      for (const auto& s : r.samples) {
        worst = std::max(worst, s[1] / s[2]);
        if (s[1] > s[2]) ++violations;
      }
    }
    return Outcome{violations == 0 && k_ok && samples > 0,
                   fmt("%.0f violations over %.0f samples, max norm/envelope %.3g", double(violations), double(samples), worst)};
  });

  criterion(7, "integral-equation residual", 60.0, [] {
    const RunConfig cfg = example6();
    SolverOptions o = cfg.solver;
    o.h = 1e-3;
    const double r1 = residual(cfg.model, solve_ivp(cfg.model, cfg.initial, 20.0, o)).max_defect;
    o.h = 5e-4;
    const double r2 = residual(cfg.model, solve_ivp(cfg.model, cfg.initial, 20.0, o)).max_defect;
    return Outcome{r1 <= 1e-5 && r1 / r2 >= 3.0, fmt("h=1e-3: %.3g, h=5e-4: %.3g, ratio %.3g", r1, r2, r1 / r2)};
  });

  criterion(8, "translation scan", 120.0, [] {
    const RunConfig cfg = example6();
    const auto& p = cfg.scan;
    const auto b = bounded_solution(cfg.model, p.window_start + std::min(0.0, p.alpha_min),
                                    p.window_end + std::max(0.0, p.alpha_max), p.accuracy, cfg.solver);
    const auto scan = translation_scan(b.trajectory, 0.05, 0.0, 100.0, p.alpha_step, p.window_start, p.window_end, p.refine);
    double largest = 0.0;
    for (double a : scan.accepted) largest = std::max(largest, a);

    // control: x' = -x + sin t has period 2 pi
    const Model ctl = scalar_model(1.0, 0.0, sine_input(1.0, 1.0), clipped_at_gamma(),
                                   GammaSchedule::affine(1.0, 0.0, 0.0, {-100, 200}), 0.0);
    const auto cb = bounded_solution(ctl, 0.0, 40.0, 1e-8);
    const double step = 0.01;
    const auto cs = translation_scan(cb.trajectory, 0.02, 4.0, 8.0, step, 0.0, 20.0, 4);
    bool clustered = !cs.accepted.empty();
    bool hit = false;
    for (double a : cs.accepted) {
      clustered = clustered && std::abs(a - 2 * std::numbers::pi) < 0.05;
      hit = hit || std::abs(a - 2 * std::numbers::pi) <= step;
    }
    const bool ok = !scan.accepted.empty() && std::isfinite(scan.max_gap) && largest >= 10.0 && clustered && hit;
    return Outcome{ok, fmt("%.0f accepted, max_gap %.4g, largest alpha %.4g", double(scan.accepted.size()), scan.max_gap, largest) +
                           fmt(", control accepted %.0f near 2pi", double(cs.accepted.size()))};
  });

  criterion(9, "trivial suite", 60.0, [] {
    // zero inputs and zero data
    Model m = example6().model;
    std::vector<double> a(m.network.decays().begin(), m.network.decays().end());
    std::vector<double> w = {0.08, 0.01, 0.02, 0.05, 0.03, 0.06, 0.04, 0.07, 0.02};
    m.network = NetworkSpec::with_cell_weights(3, 3, 1, a, w, std::vector<InputSignal>(9, InputSignal(std::vector<InputTerm>{})), 0.3);
    IvpSetup zero;
    zero.sigma = 0.25;
    zero.phi = InitialSegment::zero(9);
    const auto z = solve_ivp(m, zero, 20.0);
    const double zsup = z.sup_norm(z.start(), z.end());

    // decoupled sinusoidal forcing against the closed form
    const double A = 0.3, om = 1.7, ac = 2.0;
    auto exact = [&](double t) {
      auto part = [&](double s) { return A * (ac * std::sin(om * s) - om * std::cos(om * s)) / (ac * ac + om * om); };
      return part(t) + (0.1 - part(0.0)) * std::exp(-ac * t);
    };
    auto err_at = [&](double h) {
      const Model d = scalar_model(ac, 0.0, sine_input(A, om), clipped_at_gamma(), GammaSchedule::affine(1.0, 0.0, 0.0, {-5, 30}), 0.0);
      IvpSetup s;
      s.phi = InitialSegment::constant({0.1});
      SolverOptions o;
      o.h = h;
      const auto traj = solve_ivp(d, s, 20.0, o);
      double e = 0.0;
      for (double t = 0.0; t <= 20.0; t += 0.01) e = std::max(e, std::abs(traj.value(t, 0) - exact(t)));
      return e;
    };
    const double e1 = err_at(0.02), e2 = err_at(0.01);

    // gamma against a linear search
    const auto sched = GammaSchedule::example6({-300, 300});
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(sched.t_min(), sched.t_max());
    auto theta = [](double p) { return p + 0.25 * std::abs(std::sin(p) - std::cos(p * std::sqrt(2.0))); };
    int mismatches = 0;
    for (int n = 0; n < 100000; ++n) {
      const double t = u(rng);
      long p = -300;
      while (!(theta(double(p + 1)) > t)) ++p;
      if (sched.gamma(t) != theta(double(p))) ++mismatches;
    }
    const bool ok = zsup <= 1e-12 && e1 < 1e-4 && e1 / e2 >= 3.0 && mismatches == 0;
    return Outcome{ok, fmt("zero sup %.3g, closed-form error %.3g (ratio %.3g)", zsup, e2, e1 / e2) +
                           fmt(", gamma mismatches %.0f", double(mismatches))};
  });

  return failures == 0 ? 0 : 1;
}
