#include "sicnn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sicnn/errors.hpp"

namespace sicnn {

namespace {

const ConditionEntry& require_entry(const ConditionReport& rep, const std::string& name, const char* who) {
  const ConditionEntry& e = rep.entry(name);
  if (!e.pass) {
    std::ostringstream os;
    os << who << ": condition " << name << " fails (lhs = " << e.lhs << ")";
    if (!e.note.empty()) os << "; " << e.note;
    throw CertificationError(os.str());
  }
  return e;
}

} // namespace

BoundedSolution bounded_solution(const Model& model, double t0, double t1, double accuracy, const SolverOptions& opts) {
  if (!(t1 > t0)) throw ArgumentError("bounded_solution: t1 must exceed t0");
  if (!(accuracy > 0.0)) throw ArgumentError("bounded_solution: accuracy must be positive");
  const ConditionReport rep = model.conditions();
  require_entry(rep, "C5", "bounded_solution");
  require_entry(rep, "C6", "bounded_solution");
  const ConditionEntry& c7 = require_entry(rep, "C7", "bounded_solution");
  const DerivedConstants& k = rep.constants;
  const double H = *k.H;
  const double rate = 0.5 * k.gamma0;
  const double amp = formulas::envelope_amplitude(H, c7.lhs);

  // K(H) e^{-rate T} <= accuracy / 2
  double t_back = amp > 0.5 * accuracy ? std::log(2.0 * amp / accuracy) / rate : 0.0;
  t_back = std::max(t_back, model.network.tau());

  IvpSetup setup;
  setup.sigma = t0 - t_back;
  const std::size_t cells = model.network.size();
  setup.phi = InitialSegment::zero(cells);
  if (setup.regime(model.schedule) == InitialRegime::ic2) setup.psi = InitialSegment::zero(cells);

  BoundedSolution out{solve_ivp(model, setup, t1, opts), t0, t1, t_back, H, amp * std::exp(-rate * t_back), 0.0};
  out.sup_norm = out.trajectory.sup_norm(t0, t1);
  return out;
}

PiResidual pi_residual(const Model& model, const Trajectory& traj, double t_from, double t_to, double tail_tol) {
  const DerivedConstants k = model.constants();
  if (!k.H) throw CertificationError("pi_residual: H is undefined since M c_bar >= 1");
  const double H = *k.H;
  const double start = traj.start();
  const double tail = H * std::exp(-k.gamma0 * (t_from - start));
  if (tail > tail_tol) {
    const double earliest = start + std::log(H / tail_tol) / k.gamma0;
    std::ostringstream os;
    os.precision(10);
    os << "pi_residual: truncating the history at " << start << " leaves a tail of " << tail << " at t = " << t_from
       << "; the earliest admissible start of the window is " << earliest;
    throw ArgumentError(os.str());
  }
  const ResidualReport r = detail::integral_defect(model, traj, t_from, t_to, false);
  return {r.max_defect, r.at_time, r.cell, tail};
}

StabilityReport stability_envelope(const Model& model, const IvpSetup& base, double delta, double horizon,
                                   const SolverOptions& opts) {
  if (!(horizon > 0.0)) throw ArgumentError("stability: horizon must be positive");
  if (!(delta > 0.0)) throw ArgumentError("stability: delta must be positive");
  const ConditionReport rep = model.conditions();
  const ConditionEntry& c7 = require_entry(rep, "C7", "stability");

  StabilityReport out;
  out.delta = delta;
  out.K_delta = formulas::envelope_amplitude(delta, c7.lhs);
  out.rate = 0.5 * rep.constants.gamma0;
  out.sigma = base.sigma;
  out.horizon = horizon;

  const double t_end = base.sigma + horizon;
  const Trajectory u = solve_ivp(model, base, t_end, opts);
  const Trajectory v = solve_ivp(model, base.shifted(delta), t_end, opts);

  const std::size_t cells = u.cells();
  const auto times = u.times();
  const auto vtimes = v.times();
  const bool same_grid = vtimes.size() == times.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    if (t > t_end) break;
    double w = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
      const double vi = same_grid ? v.node(k, i) : v.value(t, i);
      w = std::max(w, std::abs(u.node(k, i) - vi));
    }
    const double bound = out.K_delta * std::exp(-out.rate * (t - base.sigma));
    out.samples.push_back({t, w, bound});
    if (w > bound) out.envelope_violations.push_back({t, w, bound});
    if (w > 1e-12) {
      sx += t;
      sy += std::log(w);
      sxx += t * t;
      sxy += t * std::log(w);
      ++n;
    }
  }
  if (n >= 2) {
    const double denom = double(n) * sxx - sx * sx;
    if (denom > 0.0) out.fitted_rate = -(double(n) * sxy - sx * sy) / denom;
  }
  out.pass = out.envelope_violations.empty();
  return out;
}

TranslationReport translation_scan(const Trajectory& traj, double eps, double alpha_min, double alpha_max,
                                   double alpha_step, double window_start, double window_end, int refine) {
  if (!(eps > 0.0)) throw ArgumentError("scan: eps must be positive");
  if (!(alpha_step > 0.0) || !(alpha_max >= alpha_min)) throw ArgumentError("scan: bad alpha range");
  if (!(window_end > window_start)) throw ArgumentError("scan: window_end must exceed window_start");
  if (refine < 1) throw ArgumentError("scan: refine must be at least 1");

  const double lo = std::min(window_start, window_start + alpha_min);
  const double hi = window_end + alpha_max;
  if (lo < traj.start() || hi > traj.end()) {
    std::ostringstream os;
    os.precision(10);
    os << "scan: coverage shortfall, the scan needs [" << lo << ", " << hi << "] but the record covers ["
       << traj.start() << ", " << traj.end() << "]";
    throw RangeError(os.str());
  }

  TranslationReport out;
  out.eps = eps;
  out.window_start = window_start;
  out.window_end = window_end;
  out.alpha_min = alpha_min;
  out.alpha_max = alpha_max;
  out.alpha_step = alpha_step;
  out.sample_step = alpha_step / double(refine);

  const double ds = out.sample_step;
  const std::size_t cells = traj.cells();
  const auto n_window = std::size_t(std::floor((window_end - window_start) / ds + 1e-9)) + 1;
  const auto n_alpha = std::size_t(std::floor((alpha_max - alpha_min) / alpha_step + 1e-9)) + 1;
  const std::size_t n_shifted = n_window + (n_alpha - 1) * std::size_t(refine);

  auto sample = [&](double t0, std::size_t count) {
    std::vector<double> s(count * cells);
    for (std::size_t m = 0; m < count; ++m) {
      const double t = std::min(t0 + double(m) * ds, traj.end());
      for (std::size_t i = 0; i < cells; ++i) s[m * cells + i] = traj.value(t, i);
    }
    return s;
  };
  const std::vector<double> base = sample(window_start, n_window);
  const std::vector<double> shifted = sample(window_start + alpha_min, n_shifted);

  for (std::size_t j = 0; j < n_alpha; ++j) {
    const std::size_t off = j * std::size_t(refine) * cells;
    double dev = 0.0;
    for (std::size_t m = 0; m < n_window * cells; ++m) dev = std::max(dev, std::abs(shifted[off + m] - base[m]));
    const double alpha = alpha_min + double(j) * alpha_step;
    out.alphas.push_back(alpha);
    out.deviation.push_back(dev);
    if (dev < eps) out.accepted.push_back(alpha);
  }
  if (out.accepted.size() >= 2) {
    out.max_gap = 0.0;
    for (std::size_t j = 1; j < out.accepted.size(); ++j)
      out.max_gap = std::max(out.max_gap, out.accepted[j] - out.accepted[j - 1]);
  }
  return out;
}

} // namespace sicnn
