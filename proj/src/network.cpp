#include "sicnn/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sicnn/errors.hpp"

namespace sicnn {

double InputTerm::operator()(double t) const {
  const double arg = angular_frequency * t + phase;
  return amplitude * (wave == Wave::sine ? std::sin(arg) : std::cos(arg));
}

InputSignal::InputSignal(std::vector<InputTerm> terms, std::optional<double> declared_bound)
    : terms_(std::move(terms)) {
  double sum = 0.0;
  for (const auto& term : terms_) {
    if (!std::isfinite(term.amplitude) || !std::isfinite(term.angular_frequency) || !std::isfinite(term.phase))
      throw ConfigError("input: non-finite term parameter");
    sum += std::abs(term.amplitude);
  }
  if (declared_bound) {
    // Small relative slack so that a bound written as the decimal sum is accepted.
    if (*declared_bound < sum * (1.0 - 1e-12))
      throw ConfigError("input: declared bound " + std::to_string(*declared_bound) +
                        " is below the sum of amplitudes " + std::to_string(sum));
    bound_ = *declared_bound;
  } else {
    bound_ = sum;
  }
}

InputSignal InputSignal::unchecked(std::function<double(double)> fn, double declared_bound) {
  if (!(declared_bound >= 0.0)) throw ConfigError("input: declared bound must be non-negative");
  InputSignal s;
  s.custom_ = std::move(fn);
  s.bound_ = declared_bound;
  return s;
}

double InputSignal::operator()(double t) const {
  if (custom_) return custom_(t);
  double v = 0.0;
  for (const auto& term : terms_) v += term(t);
  return v;
}

NetworkSpec::NetworkSpec(int rows, int cols, int radius, std::vector<double> decay, const CouplingRule& coupling,
                         std::vector<InputSignal> inputs, double tau)
    : rows_(rows), cols_(cols), radius_(radius), decay_(std::move(decay)), inputs_(std::move(inputs)), tau_(tau) {
  if (rows_ <= 0 || cols_ <= 0) throw ConfigError("network: grid dimensions must be positive");
  if (radius_ < 0) throw ConfigError("network: radius must be non-negative");
  const std::size_t n = std::size_t(rows_) * std::size_t(cols_);
  if (decay_.size() != n) throw ConfigError("network: decay matrix must have rows*cols entries");
  if (inputs_.size() != n) throw ConfigError("network: inputs must have rows*cols entries");
  couplings_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (Cell src : neighborhood(cell(i))) {
      const double w = coupling(cell(i), src);
      if (!std::isfinite(w) || w < 0.0)
        throw ConfigError("network: coupling into " + cell_name(i) + " from " + cell_name(flat(src)) +
                          " must be finite and non-negative");
      if (w != 0.0) couplings_[i].push_back({flat(src), w});
    }
  }
  validate();
}

NetworkSpec NetworkSpec::with_cell_weights(int rows, int cols, int radius, std::vector<double> decay,
                                           std::vector<double> weights, std::vector<InputSignal> inputs, double tau) {
  if (rows <= 0 || cols <= 0 || weights.size() != std::size_t(rows) * std::size_t(cols))
    throw ConfigError("network: coupling matrix must have rows*cols entries");
  auto rule = [&weights, cols](Cell, Cell src) { return weights[std::size_t(src.row) * std::size_t(cols) + std::size_t(src.col)]; };
  return NetworkSpec(rows, cols, radius, std::move(decay), rule, std::move(inputs), tau);
}

void NetworkSpec::validate() const {
  for (std::size_t i = 0; i < decay_.size(); ++i)
    if (!(decay_[i] > 0.0) || !std::isfinite(decay_[i]))
      throw ConfigError("network: decay rate a at " + cell_name(i) + " must be positive");
  if (!(tau_ >= 0.0) || !std::isfinite(tau_)) throw ConfigError("network: tau must be non-negative");
}

std::string NetworkSpec::cell_name(std::size_t flat) const {
  const Cell c = cell(flat);
  if (rows_ < 10 && cols_ < 10) return "x" + std::to_string(c.row + 1) + std::to_string(c.col + 1);
  return "x" + std::to_string(c.row + 1) + "_" + std::to_string(c.col + 1);
}

std::vector<Cell> NetworkSpec::neighborhood(Cell c) const {
  if (c.row < 0 || c.row >= rows_ || c.col < 0 || c.col >= cols_)
    throw RangeError("network: cell (" + std::to_string(c.row) + ", " + std::to_string(c.col) + ") outside " +
                     std::to_string(rows_) + "x" + std::to_string(cols_) + " grid");
  std::vector<Cell> out;
  for (int k = std::max(0, c.row - radius_); k <= std::min(rows_ - 1, c.row + radius_); ++k)
    for (int l = std::max(0, c.col - radius_); l <= std::min(cols_ - 1, c.col + radius_); ++l) out.push_back({k, l});
  return out;
}

double NetworkSpec::coupling_sum(std::size_t i) const {
  double s = 0.0;
  for (const auto& c : couplings_[i]) s += c.weight;
  return s;
}

bool NetworkSpec::inputs_trigonometric() const {
  return std::all_of(inputs_.begin(), inputs_.end(), [](const InputSignal& s) { return s.trigonometric(); });
}

NetworkSpec NetworkSpec::scaled_couplings(double factor) const {
  if (!(factor >= 0.0)) throw ArgumentError("network: coupling scale must be non-negative");
  NetworkSpec out = *this;
  for (auto& row : out.couplings_)
    for (auto& c : row) c.weight *= factor;
  return out;
}

ScheduleBounds schedule_bounds(const GammaSchedule& schedule, const DeclaredSpacing& declared) {
  const IndexRange r = schedule.index_range();
  ScheduleBounds b;
  b.scan = schedule.spacing_report(r.first, r.last, declared.theta_bar, declared.theta_under, declared.zeta_under);
  b.theta_bar = declared.theta_bar.value_or(b.scan.theta_bar);
  b.theta_under = declared.theta_under.value_or(b.scan.theta_under);
  b.zeta_under = declared.zeta_under.value_or(b.scan.zeta_under);
  return b;
}

DerivedConstants derived_constants(const NetworkSpec& net, const ScheduleBounds& bounds, double M, double L) {
  (void)L;
  DerivedConstants k;
  k.gamma0 = std::numeric_limits<double>::infinity();
  for (double a : net.decays()) k.gamma0 = std::min(k.gamma0, a);
  k.coupling_sums.resize(net.size());
  for (std::size_t i = 0; i < net.size(); ++i) {
    const double s = net.coupling_sum(i);
    const double a = net.decay(i);
    const double bound = net.input(i).bound();
    k.coupling_sums[i] = s;
    k.mu = std::max(k.mu, s);
    k.c_bar = std::max(k.c_bar, s / a);
    k.d_bar = std::max(k.d_bar, s / (2.0 * a - k.gamma0));
    k.L_bar = std::max(k.L_bar, bound);
    k.l_bar = std::max(k.l_bar, bound / a);
  }
  if (M * k.c_bar < 1.0) k.H = k.l_bar / (1.0 - M * k.c_bar);
  k.theta_bar = bounds.theta_bar;
  k.theta_under = bounds.theta_under;
  k.zeta_under = bounds.zeta_under;
  return k;
}

namespace formulas {

double c5(double mu, double theta_bar, double M, double L, double H, double L_bar) {
  const double mtm = mu * theta_bar * M;
  return mu * theta_bar * (M + 2.0 * L * (H + theta_bar * L_bar) / (1.0 - mtm));
}

double c6(double M, double L, double H, double c_bar) { return (M + 2.0 * L * H) * c_bar; }

double c7(double d_bar, double M, double L, double H, double gamma0, double tau, double theta_bar) {
  return 2.0 * d_bar *
         (M + L * H * std::exp(gamma0 * tau / 2.0) * (1.0 + std::exp(gamma0 * theta_bar / 2.0)));
}

double envelope_amplitude(double delta, double c7_lhs) { return delta / (1.0 - c7_lhs); }

double picard_contraction_bound(const DerivedConstants& k, double M, double L, double H0) {
  const double mtm = k.mu * k.theta_bar * M;
  const double K0 = (H0 + k.theta_bar * k.L_bar) / (1.0 - mtm);
  return k.mu * k.theta_bar * (M + 2.0 * K0 * L);
}

} // namespace formulas

const ConditionEntry& ConditionReport::entry(std::string_view name) const {
  for (const auto& e : entries)
    if (e.name == name) return e;
  throw ArgumentError("condition report: no entry named " + std::string(name));
}

bool ConditionReport::all_pass() const {
  return mu_theta_M_ok && M_c_bar_ok &&
         std::all_of(entries.begin(), entries.end(), [](const ConditionEntry& e) { return e.pass; });
}

bool ConditionReport::stability_certified() const {
  return mu_theta_M_ok && M_c_bar_ok && passes("C5") && passes("C6") && passes("C7");
}

ConditionReport check_conditions(const NetworkSpec& net, const ScheduleBounds& bounds, double M, double L) {
  ConditionReport rep;
  rep.constants = derived_constants(net, bounds, M, L);
  rep.M = M;
  rep.L = L;
  rep.tau = net.tau();
  rep.spacing = bounds.scan;
  const DerivedConstants& k = rep.constants;

  const double mtm = k.mu * k.theta_bar * M;
  rep.mu_theta_M_ok = mtm < 1.0;
  rep.M_c_bar_ok = M * k.c_bar < 1.0;

  {
    ConditionEntry c3{"C3", bounds.scan.theta_bar, k.theta_bar, 0.0, false, Relation::less_equal, {}};
    c3.margin = c3.threshold - c3.lhs;
    c3.pass = c3.lhs <= c3.threshold;
    c3.note = "max theta gap over the scanned index range";
    rep.entries.push_back(c3);
  }

  auto strict = [](std::string name, double lhs, std::string note) {
    ConditionEntry e{std::move(name), lhs, 1.0, 1.0 - lhs, lhs < 1.0, Relation::less, std::move(note)};
    return e;
  };
  auto blocked = [](std::string name, std::string why) {
    return ConditionEntry{std::move(name), std::numeric_limits<double>::infinity(), 1.0,
                          -std::numeric_limits<double>::infinity(), false, Relation::less, std::move(why)};
  };

  if (!k.H) {
    const std::string why = "H undefined: M c_bar = " + std::to_string(M * k.c_bar) + " >= 1";
    rep.entries.push_back(blocked("C5", why));
    rep.entries.push_back(blocked("C6", why));
    rep.entries.push_back(blocked("C7", why));
  } else {
    const double H = *k.H;
    if (rep.mu_theta_M_ok)
      rep.entries.push_back(strict("C5", formulas::c5(k.mu, k.theta_bar, M, L, H, k.L_bar), ""));
    else
      rep.entries.push_back(blocked("C5", "mu theta_bar M = " + std::to_string(mtm) + " >= 1"));
    rep.entries.push_back(strict("C6", formulas::c6(M, L, H, k.c_bar), ""));
    rep.entries.push_back(strict("C7", formulas::c7(k.d_bar, M, L, H, k.gamma0, net.tau(), k.theta_bar), ""));
  }

  {
    // Both sequences must keep a positive minimal spacing.
    const double observed = std::min(bounds.scan.theta_under, bounds.scan.zeta_under);
    const double declared = std::min(k.theta_under, k.zeta_under);
    ConditionEntry c9{"C9", observed, declared, observed - declared, false, Relation::greater_equal, {}};
    c9.pass = declared > 0.0 && observed >= declared;
    c9.note = "min of theta and zeta gaps; required only for the almost-periodic analysis";
    rep.entries.push_back(c9);
  }
  return rep;
}

} // namespace sicnn
