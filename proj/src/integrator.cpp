#include "sicnn/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "sicnn/errors.hpp"

namespace sicnn {

namespace {

double slack(double t) { return 1e-12 * std::max(1.0, std::abs(t)); }

// mu_n = int_0^h q^n e^{-a q} dq for n = 0, 1, 2.
std::array<double, 3> kernel_moments(double a, double h) {
  const double z = a * h;
  std::array<double, 3> mu{};
  if (z < 1.0) {
    // h^{n+1} sum_k (-z)^k / (k! (n + k + 1))
    for (int n = 0; n < 3; ++n) {
      double term = 1.0;
      double sum = 0.0;
      for (int k = 0; k < 40; ++k) {
        sum += term / double(n + k + 1);
        term *= -z / double(k + 1);
      }
      mu[std::size_t(n)] = std::pow(h, n + 1) * sum;
    }
  } else {
    const double e = std::exp(-z);
    mu[0] = -std::expm1(-z) / a;
    mu[1] = (mu[0] - h * e) / a;
    mu[2] = (2.0 * mu[1] - h * h * e) / a;
  }
  return mu;
}

// Weights of the exact-kernel quadrature over one substep of length h:
//   int_{t_k}^{t_{k+1}} e^{-a(t_{k+1}-s)} g(s) ds ~ w_start g_k + w_mid g_{k+1/2} + w_end g_{k+1}
struct StepWeights {
  double decay = 0.0;  // e^{-a h}
  double w_start = 0.0;
  double w_mid = 0.0;
  double w_end = 0.0;
};

StepWeights step_weights(double a, double h, Quadrature q) {
  const auto mu = kernel_moments(a, h);
  StepWeights w;
  w.decay = std::exp(-a * h);
  if (q == Quadrature::trapezoid) {
    w.w_end = mu[0] - mu[1] / h;
    w.w_start = mu[1] / h;
  } else {
    const double h2 = h * h;
    w.w_end = 2.0 / h2 * (mu[2] - 1.5 * h * mu[1] + 0.5 * h2 * mu[0]);
    w.w_mid = -4.0 / h2 * (mu[2] - h * mu[1]);
    w.w_start = 2.0 / h2 * (mu[2] - 0.5 * h * mu[1]);
  }
  return w;
}

// Values plus derivatives on the substep grid of the interval being iterated.
struct IterateGrid {
  std::vector<double> t;
  std::vector<double> x;
  std::vector<double> d;
  std::size_t cells = 0;

  double value(double time, std::size_t cell) const {
    const double tc = std::clamp(time, t.front(), t.back());
    auto it = std::upper_bound(t.begin(), t.end(), tc);
    std::size_t k = static_cast<std::size_t>(it - t.begin());
    k = k == 0 ? 0 : std::min(k - 1, t.size() - 2);
    return hermite(t[k], t[k + 1], x[k * cells + cell], x[(k + 1) * cells + cell], d[k * cells + cell],
                   d[(k + 1) * cells + cell], tc);
  }
};

// Reads the iterate on [left, right] and committed history before it.
struct StateSource {
  const Trajectory& history;
  const IterateGrid* iterate = nullptr;
  double left = 0.0;

  double operator()(double time, std::size_t cell) const {
    if (iterate && time >= left - slack(left)) return iterate->value(time, cell);
    return history.value(time, cell);
  }
};

// f(x_kl,t, x_kl,gamma) for every cell kl at one time.
template <class Source>
void activation_values(const Model& model, const Source& src, double t, double gamma_value, std::span<double> out) {
  const double tau = model.network.tau();
  for (std::size_t j = 0; j < out.size(); ++j) {
    auto seg_t = [&](double s) { return src(t + s, j); };
    auto seg_g = [&](double s) { return src(gamma_value + s, j); };
    out[j] = model.activation(SegmentView::of(seg_t, tau), SegmentView::of(seg_g, tau));
  }
}

// sum_kl C_ij^kl f_kl * x_ij - L_ij(t) for every cell ij.
void integrand(const NetworkSpec& net, std::span<const double> f, std::span<const double> x, double t,
               std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    double coupling = 0.0;
    for (const auto& c : net.couplings(i)) coupling += c.weight * f[c.source];
    out[i] = coupling * x[i] - net.input(i)(t);
  }
}

class IntervalSolver {
public:
  IntervalSolver(const Model& model, const SolverOptions& opts)
      : model_(model), opts_(opts.resolved(model)), constants_(model.constants()) {}

  void note_history_bound(double h0) { history_bound_ = std::max(history_bound_, h0); }

  void solve(double left, double right, Trajectory& traj) {
    const auto& sched = model_.schedule;
    const Index p = sched.interval_index(left);
    const double theta_next = sched.theta(p + 1);
    if (!(right > left)) throw ArgumentError("solve_interval: right must exceed left");
    if (right > theta_next + slack(theta_next))
      throw ArgumentError("solve_interval: [left, right] crosses theta_{p+1}");
    right = std::min(right, theta_next);
    if (std::abs(traj.end() - left) > slack(left)) {
      std::ostringstream os;
      os.precision(17);
      os << "solve_interval: history gap, record ends at " << traj.end() << " but interval starts at " << left;
      throw SolverError(os.str());
    }
    const double zeta = sched.zeta(p);
    if (model_.activation.reads_gamma() && zeta > right + slack(right))
      throw ArgumentError("solve_interval: gamma(t) = zeta_p lies beyond the interval end");

    const std::size_t cells = model_.network.size();
    const std::size_t n = std::max<std::size_t>(1, std::size_t(std::ceil((right - left) / opts_.h - 1e-9)));
    const double hs = (right - left) / double(n);

    IterateGrid u;
    u.cells = cells;
    u.t.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) u.t[k] = left + double(k) * hs;
    u.t[n] = right;
    u.x.resize((n + 1) * cells);
    u.d.assign((n + 1) * cells, 0.0);
    std::vector<double> x_left(cells);
    for (std::size_t i = 0; i < cells; ++i) x_left[i] = traj.node(traj.steps(), i);
    for (std::size_t k = 0; k <= n; ++k) std::copy(x_left.begin(), x_left.end(), u.x.begin() + std::ptrdiff_t(k * cells));
    for (double v : x_left) history_bound_ = std::max(history_bound_, std::abs(v));

    std::vector<StepWeights> weights(cells);
    for (std::size_t i = 0; i < cells; ++i) weights[i] = step_weights(model_.network.decay(i), hs, opts_.quadrature);

    IntervalRecord rec;
    rec.p = p;
    rec.left = left;
    rec.right = right;
    rec.zeta = zeta;
    if (model_.activation.M() * constants_.c_bar < 1.0 && constants_.mu * constants_.theta_bar * model_.activation.M() < 1.0)
      rec.contraction_bound =
          formulas::picard_contraction_bound(constants_, model_.activation.M(), model_.activation.L(), history_bound_);

    const bool simpson = opts_.quadrature == Quadrature::simpson;
    std::vector<double> g((n + 1) * cells), g_mid(simpson ? n * cells : 0);
    std::vector<double> f(cells), x_mid(cells);
    IterateGrid next = u;

    auto sample_integrand = [&](const IterateGrid& it) {
      StateSource src{traj, &it, left};
      for (std::size_t k = 0; k <= n; ++k) {
        activation_values(model_, src, it.t[k], zeta, f);
        integrand(model_.network, f, std::span<const double>(it.x).subspan(k * cells, cells), it.t[k],
                  std::span<double>(g).subspan(k * cells, cells));
      }
      if (simpson) {
        for (std::size_t k = 0; k < n; ++k) {
          const double tm = 0.5 * (it.t[k] + it.t[k + 1]);
          for (std::size_t i = 0; i < cells; ++i) x_mid[i] = it.value(tm, i);
          activation_values(model_, src, tm, zeta, f);
          integrand(model_.network, f, x_mid, tm, std::span<double>(g_mid).subspan(k * cells, cells));
        }
      }
    };

    bool converged = false;
    try {
      for (int pass = 0; pass < opts_.picard_max_iters; ++pass) {
        sample_integrand(u);
        double dist = 0.0;
        for (std::size_t i = 0; i < cells; ++i) {
          const double a = model_.network.decay(i);
          const StepWeights& w = weights[i];
          double v = x_left[i];
          next.x[i] = v;
          next.d[i] = -a * v - g[i];
          for (std::size_t k = 0; k < n; ++k) {
            double integral = w.w_start * g[k * cells + i] + w.w_end * g[(k + 1) * cells + i];
            if (simpson) integral += w.w_mid * g_mid[k * cells + i];
            v = w.decay * v - integral;
            const std::size_t at = (k + 1) * cells + i;
            next.x[at] = v;
            next.d[at] = -a * v - g[at];
            dist = std::max(dist, std::abs(v - u.x[at]));
          }
        }
        rec.picard_distances.push_back(dist);
        std::swap(u, next);
        if (!std::isfinite(dist)) break;
        if (dist < opts_.picard_tol) {
          converged = true;
          break;
        }
      }
      if (converged) {
        // Derivatives from the converged iterate itself.
        sample_integrand(u);
        for (std::size_t k = 0; k <= n; ++k)
          for (std::size_t i = 0; i < cells; ++i)
            u.d[k * cells + i] = -model_.network.decay(i) * u.x[k * cells + i] - g[k * cells + i];
      }
    } catch (const RangeError& e) {
      throw SolverError(std::string("solve_interval: history gap: ") + e.what());
    }
    if (!converged) {
      std::ostringstream os;
      os << "solve_interval: Picard iteration on [" << left << ", " << right << "] did not reach tolerance "
         << opts_.picard_tol << " in " << rec.picard_distances.size() << " passes; last contraction ratio "
         << rec.max_ratio() << " (smallness condition mu theta_bar (M + 2 K0 L) < 1 likely violated)";
      throw SolverError(os.str());
    }

    for (std::size_t k = 1; k <= n; ++k)
      for (std::size_t i = 0; i < cells; ++i) history_bound_ = std::max(history_bound_, std::abs(u.x[k * cells + i]));

    std::vector<double> d_start(n * cells), d_end(n * cells);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < cells; ++i) {
        d_start[k * cells + i] = u.d[k * cells + i];
        d_end[k * cells + i] = u.d[(k + 1) * cells + i];
      }
    traj.append(std::span<const double>(u.t).subspan(1), std::span<const double>(u.x).subspan(cells), d_start, d_end,
                std::move(rec));
  }

private:
  const Model& model_;
  SolverOptions opts_;
  DerivedConstants constants_;
  double history_bound_ = 0.0;
};

double initial_sup(const InitialSegment& seg, std::size_t cells, double tau) {
  double m = 0.0;
  constexpr int kSamples = 16;
  for (std::size_t i = 0; i < cells; ++i)
    for (int k = 0; k <= kSamples; ++k) m = std::max(m, std::abs(seg(i, -tau * double(k) / kSamples)));
  return m;
}

} // namespace

SolverOptions SolverOptions::resolved(const Model& model) const {
  SolverOptions out = *this;
  const ScheduleBounds b = model.bounds();
  if (out.h <= 0.0) {
    double base = std::min(b.scan.theta_under, 1.0);
    if (model.network.tau() > 0.0) base = std::min(base, model.network.tau());
    out.h = base / 50.0;
  }
  if (out.h > b.scan.theta_under / 4.0 * (1.0 + 1e-12))
    throw ConfigError("solver: step h = " + std::to_string(out.h) + " exceeds theta_under / 4 = " +
                      std::to_string(b.scan.theta_under / 4.0));
  if (!(out.picard_tol > 0.0)) throw ConfigError("solver: picard_tol must be positive");
  if (out.picard_max_iters < 1) throw ConfigError("solver: picard_max_iters must be positive");
  return out;
}

InitialRegime IvpSetup::regime(const GammaSchedule& schedule) const {
  const Index p = schedule.interval_index(sigma);
  return sigma <= schedule.zeta(p) ? InitialRegime::ic1 : InitialRegime::ic2;
}

void IvpSetup::validate(const Model& model) const {
  const auto& sched = model.schedule;
  const double tau = model.network.tau();
  const InitialRegime r = regime(sched);
  if (r == InitialRegime::ic1) {
    if (psi) throw ConfigError("initial: psi is only meaningful when sigma lies after zeta_p (IC2)");
    return;
  }
  if (!psi) throw ConfigError("initial: sigma lies after zeta_p, so psi on the gamma(sigma) window is required");
  const double gs = sched.gamma(sigma);
  if (gs < sigma - tau) return;  // disconnected windows: no compatibility requirement
  // phi(s) = psi(s + sigma - gamma(sigma)) for s in [-tau, gamma(sigma) - sigma]
  constexpr int kSamples = 32;
  const double hi = gs - sigma;
  for (std::size_t i = 0; i < model.network.size(); ++i) {
    for (int k = 0; k <= kSamples; ++k) {
      const double s = -tau + (hi + tau) * double(k) / kSamples;
      const double a = phi(i, s);
      const double b = (*psi)(i, s + sigma - gs);
      if (std::abs(a - b) > 1e-9 * std::max(1.0, std::max(std::abs(a), std::abs(b)))) {
        std::ostringstream os;
        os << "initial: phi and psi disagree on the overlapping window at cell " << model.network.cell_name(i)
           << ", s = " << s << " (" << a << " vs " << b << ")";
        throw ConfigError(os.str());
      }
    }
  }
}

IvpSetup IvpSetup::shifted(double offset) const {
  IvpSetup out{sigma, phi.shifted(offset), std::nullopt};
  if (psi) out.psi = psi->shifted(offset);
  return out;
}

void solve_interval(const Model& model, double left, double right, Trajectory& traj, const SolverOptions& opts) {
  IntervalSolver solver(model, opts);
  solver.note_history_bound(initial_sup(traj.phi(), traj.cells(), traj.tau()));
  if (traj.psi()) solver.note_history_bound(initial_sup(*traj.psi(), traj.cells(), traj.tau()));
  solver.note_history_bound(traj.sup_norm(traj.start(), traj.end()));
  solver.solve(left, right, traj);
}

Trajectory solve_ivp(const Model& model, const IvpSetup& setup, double t_end, const SolverOptions& opts) {
  if (!(t_end > setup.sigma)) throw ArgumentError("solve_ivp: t_end must exceed sigma");
  setup.validate(model);
  const auto& sched = model.schedule;
  const std::size_t cells = model.network.size();
  const bool ic2 = setup.regime(sched) == InitialRegime::ic2;
  Trajectory traj(cells, setup.sigma, model.network.tau(), setup.phi, ic2 ? setup.psi : std::nullopt,
                  ic2 ? sched.gamma(setup.sigma) : 0.0);

  IntervalSolver solver(model, opts);
  solver.note_history_bound(initial_sup(setup.phi, cells, model.network.tau()));
  if (ic2) solver.note_history_bound(initial_sup(*setup.psi, cells, model.network.tau()));

  double left = setup.sigma;
  Index p = sched.interval_index(left);
  while (left < t_end) {
    const double right = sched.theta(p + 1);
    solver.solve(left, right, traj);
    left = right;
    ++p;
  }
  return traj;
}

void rhs(const Model& model, const Trajectory& traj, double t, double gamma_value, std::span<double> out) {
  const std::size_t cells = model.network.size();
  if (out.size() != cells) throw ArgumentError("rhs: output span has wrong size");
  std::vector<double> f(cells), x(cells), g(cells);
  auto src = [&traj](double time, std::size_t cell) { return traj.value(time, cell); };
  activation_values(model, src, t, gamma_value, f);
  traj.values(t, x);
  integrand(model.network, f, x, t, g);
  for (std::size_t i = 0; i < cells; ++i) out[i] = -model.network.decay(i) * x[i] - g[i];
}

namespace {

constexpr std::array<double, 5> kGl5Nodes{-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                          0.9061798459386640};
constexpr std::array<double, 5> kGl5Weights{0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                            0.4786286704993665, 0.2369268850561891};

} // namespace

namespace detail {

ResidualReport integral_defect(const Model& model, const Trajectory& traj, double t_from, double t_to,
                               bool include_initial) {
  const std::size_t cells = model.network.size();
  const auto times = traj.times();
  std::vector<double> R(cells), f(cells), x(cells), g(cells);
  for (std::size_t i = 0; i < cells; ++i) R[i] = include_initial ? traj.node(0, i) : 0.0;
  auto src = [&traj](double time, std::size_t cell) { return traj.value(time, cell); };

  ResidualReport rep;
  auto record = [&](std::size_t k) {
    if (times[k] < t_from || times[k] > t_to) return;
    for (std::size_t i = 0; i < cells; ++i) {
      const double defect = std::abs(traj.node(k, i) - R[i]);
      if (defect > rep.max_defect) rep = {defect, times[k], i};
    }
  };
  record(0);
  ScheduleCursor cursor;
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const double t0 = times[k], t1 = times[k + 1];
    if (t0 > t_to) break;
    const double h = t1 - t0;
    const double zeta = model.schedule.gamma(0.5 * (t0 + t1), cursor);
    std::array<std::vector<double>, 5> gq;
    for (std::size_t q = 0; q < kGl5Nodes.size(); ++q) {
      const double s = t0 + 0.5 * h * (1.0 + kGl5Nodes[q]);
      activation_values(model, src, s, zeta, f);
      for (std::size_t i = 0; i < cells; ++i) x[i] = traj.value(s, i);
      integrand(model.network, f, x, s, g);
      gq[q] = g;
    }
    for (std::size_t i = 0; i < cells; ++i) {
      const double a = model.network.decay(i);
      double integral = 0.0;
      for (std::size_t q = 0; q < kGl5Nodes.size(); ++q) {
        const double s = t0 + 0.5 * h * (1.0 + kGl5Nodes[q]);
        integral += kGl5Weights[q] * std::exp(-a * (t1 - s)) * gq[q][i];
      }
      R[i] = std::exp(-a * h) * R[i] - 0.5 * h * integral;
    }
    record(k + 1);
  }
  return rep;
}

} // namespace detail

} // namespace sicnn
