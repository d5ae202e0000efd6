#include "sicnn/activation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include "sicnn/errors.hpp"

namespace sicnn {

namespace {

// 4-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 4> kGaussNodes{-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                            0.8611363115940526};
constexpr std::array<double, 4> kGaussWeights{0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                              0.3478548451374538};
constexpr int kPanels = 8;

// int_{-tau}^0 e^{decay s} y(s) ds by composite Gauss-Legendre.
double weighted_integral(SegmentView y, double decay) {
  const double tau = y.tau();
  if (tau == 0.0) return 0.0;
  const double h = tau / kPanels;
  double sum = 0.0;
  for (int panel = 0; panel < kPanels; ++panel) {
    const double mid = -tau + (panel + 0.5) * h;
    for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
      const double s = mid + 0.5 * h * kGaussNodes[q];
      sum += kGaussWeights[q] * std::exp(decay * s) * y(s);
    }
  }
  return 0.5 * h * sum;
}

void check_window(SegmentView a, SegmentView b, double lag) {
  if (a.tau() != b.tau()) throw ArgumentError("activation: segments have different windows");
  if (lag > a.tau()) throw ArgumentError("activation: lag exceeds the segment window");
}

} // namespace

double ScalarRule::operator()(double s) const {
  switch (kind) {
  case Kind::capped_quadratic:
    return std::abs(s) <= p1 ? 0.5 * s * s : 0.5 * p1 * p1;
  case Kind::clipped_linear:
    return std::clamp(p1 * s, -p2, p2);
  case Kind::constant:
    return p1;
  case Kind::tanh:
    return p1 * std::tanh(p2 * s);
  }
  return 0.0;
}

std::string ScalarRule::describe() const {
  std::ostringstream os;
  switch (kind) {
  case Kind::capped_quadratic:
    os << "capped_quadratic(threshold=" << p1 << ")";
    break;
  case Kind::clipped_linear:
    os << "clipped_linear(slope=" << p1 << ", cap=" << p2 << ")";
    break;
  case Kind::constant:
    os << "constant(" << p1 << ")";
    break;
  case Kind::tanh:
    os << "tanh(amplitude=" << p1 << ", gain=" << p2 << ")";
    break;
  }
  return os.str();
}

std::string to_string(ActivationKind kind) {
  switch (kind) {
  case ActivationKind::pointwise_on_gamma_delayed: return "pointwise_on_gamma_delayed";
  case ActivationKind::pointwise_on_gamma: return "pointwise_on_gamma";
  case ActivationKind::pointwise_on_delay: return "pointwise_on_delay";
  case ActivationKind::two_point: return "two_point";
  case ActivationKind::segment_integral: return "segment_integral";
  case ActivationKind::custom: return "custom";
  }
  return "unknown";
}

std::optional<ActivationKind> activation_kind_from_string(const std::string& name) {
  for (auto k : {ActivationKind::pointwise_on_gamma_delayed, ActivationKind::pointwise_on_gamma,
                 ActivationKind::pointwise_on_delay, ActivationKind::two_point, ActivationKind::segment_integral,
                 ActivationKind::custom})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

namespace {

void require_declarations(double M, double L) {
  if (!(M > 0.0) || !std::isfinite(M)) throw ConfigError("activation: declared bound M must be positive");
  if (!(L > 0.0) || !std::isfinite(L)) throw ConfigError("activation: declared Lipschitz constant L must be positive");
}

} // namespace

Activation Activation::example6() {
  return pointwise(ActivationKind::pointwise_on_gamma_delayed, ScalarRule::capped_quadratic(0.1), 0.005, 0.1);
}

Activation Activation::pointwise(ActivationKind kind, ScalarRule rule, double M, double L, double lag) {
  if (kind != ActivationKind::pointwise_on_gamma_delayed && kind != ActivationKind::pointwise_on_gamma &&
      kind != ActivationKind::pointwise_on_delay)
    throw ConfigError("activation: " + to_string(kind) + " is not a pointwise kind");
  require_declarations(M, L);
  Activation a;
  a.kind_ = kind;
  a.rule_ = rule;
  a.rule_gamma_ = rule;
  a.lag_ = lag;
  a.M_ = M;
  a.L_ = L;
  return a;
}

Activation Activation::two_point(ScalarRule rule_t, ScalarRule rule_gamma, double M, double L, double lag) {
  require_declarations(M, L);
  Activation a;
  a.kind_ = ActivationKind::two_point;
  a.rule_ = rule_t;
  a.rule_gamma_ = rule_gamma;
  a.lag_ = lag;
  a.M_ = M;
  a.L_ = L;
  return a;
}

Activation Activation::segment_integral(ScalarRule rule, double weight_t, double weight_gamma, double decay, double M,
                                        double L) {
  require_declarations(M, L);
  Activation a;
  a.kind_ = ActivationKind::segment_integral;
  a.rule_ = rule;
  a.rule_gamma_ = rule;
  a.weight_t_ = weight_t;
  a.weight_gamma_ = weight_gamma;
  a.kernel_decay_ = decay;
  a.M_ = M;
  a.L_ = L;
  return a;
}

Activation Activation::custom(CustomFn fn, double M, double L, std::string description) {
  require_declarations(M, L);
  if (!fn) throw ConfigError("activation: custom rule is empty");
  Activation a;
  a.kind_ = ActivationKind::custom;
  a.custom_ = std::move(fn);
  a.custom_description_ = std::move(description);
  a.M_ = M;
  a.L_ = L;
  return a;
}

bool Activation::reads_current() const {
  switch (kind_) {
  case ActivationKind::pointwise_on_delay:
  case ActivationKind::two_point:
  case ActivationKind::custom: return true;
  case ActivationKind::segment_integral: return weight_t_ != 0.0;
  default: return false;
  }
}

bool Activation::reads_gamma() const {
  switch (kind_) {
  case ActivationKind::pointwise_on_gamma_delayed:
  case ActivationKind::pointwise_on_gamma:
  case ActivationKind::two_point:
  case ActivationKind::custom: return true;
  case ActivationKind::segment_integral: return weight_gamma_ != 0.0;
  default: return false;
  }
}

std::string Activation::describe() const {
  std::ostringstream os;
  os << to_string(kind_);
  switch (kind_) {
  case ActivationKind::two_point:
    os << " " << rule_.describe() << " + " << rule_gamma_.describe();
    break;
  case ActivationKind::segment_integral:
    os << " " << rule_.describe() << " weights (" << weight_t_ << ", " << weight_gamma_ << ") decay " << kernel_decay_;
    break;
  case ActivationKind::custom:
    os << " " << custom_description_;
    break;
  default:
    os << " " << rule_.describe();
  }
  os << " M=" << M_ << " L=" << L_;
  return os.str();
}

double Activation::operator()(SegmentView seg_t, SegmentView seg_gamma) const {
  const double tau = seg_t.tau();
  switch (kind_) {
  case ActivationKind::pointwise_on_gamma_delayed:
    check_window(seg_t, seg_gamma, 0.0);
    return rule_(seg_gamma(-tau));
  case ActivationKind::pointwise_on_gamma:
    check_window(seg_t, seg_gamma, 0.0);
    return rule_(seg_gamma(0.0));
  case ActivationKind::pointwise_on_delay: {
    const double lag = this->lag(tau);
    check_window(seg_t, seg_gamma, lag);
    return rule_(seg_t(-lag));
  }
  case ActivationKind::two_point: {
    const double lag = this->lag(tau);
    check_window(seg_t, seg_gamma, lag);
    return rule_(seg_t(-lag)) + rule_gamma_(seg_gamma(-lag));
  }
  case ActivationKind::segment_integral: {
    check_window(seg_t, seg_gamma, 0.0);
    double arg = 0.0;
    if (weight_t_ != 0.0) arg += weight_t_ * weighted_integral(seg_t, kernel_decay_);
    if (weight_gamma_ != 0.0) arg += weight_gamma_ * weighted_integral(seg_gamma, kernel_decay_);
    return rule_(arg);
  }
  case ActivationKind::custom:
    check_window(seg_t, seg_gamma, 0.0);
    return custom_(seg_t, seg_gamma);
  }
  return 0.0;
}

namespace {

constexpr std::size_t kKnots = 9;

struct PiecewiseLinear {
  const std::vector<double>* knots;
  double tau;

  double operator()(double s) const {
    const auto& v = *knots;
    if (tau == 0.0) return v.back();
    const double u = std::clamp((s + tau) / tau, 0.0, 1.0) * double(v.size() - 1);
    const std::size_t k = std::min(static_cast<std::size_t>(u), v.size() - 2);
    const double frac = u - double(k);
    return v[k] + frac * (v[k + 1] - v[k]);
  }
};

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

} // namespace

BoundsReport validate_bounds(const Activation& act, std::size_t samples, double amplitude, double tau,
                             std::uint64_t seed) {
  if (!(amplitude > 0.0)) throw ArgumentError("validate_bounds: amplitude must be positive");
  if (!(tau >= 0.0)) throw ArgumentError("validate_bounds: tau must be non-negative");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-amplitude, amplitude);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto random_segment = [&](std::vector<double>& v) {
    v.resize(kKnots);
    // Mix of constant segments and rough ones; constants exercise plateaus and kinks.
    if (unit(rng) < 0.25) {
      std::fill(v.begin(), v.end(), uni(rng));
    } else {
      for (auto& x : v) x = uni(rng);
    }
  };
  auto eval = [&](const std::vector<double>& phi, const std::vector<double>& psi) {
    PiecewiseLinear a{&phi, tau}, b{&psi, tau};
    return act(SegmentView::of(a, tau), SegmentView::of(b, tau));
  };

  // Rounding in f1 - f2 can push an exact quotient a few ulps past L.
  const double M_limit = act.M() * (1.0 + 1e-12);
  const double L_limit = act.L() * (1.0 + 1e-12);
  BoundsReport rep;
  rep.samples = samples;
  std::vector<double> phi1, psi1, phi2, psi2;
  for (std::size_t i = 0; i < samples; ++i) {
    random_segment(phi1);
    random_segment(psi1);
    if (i % 2 == 0) {
      random_segment(phi2);
      random_segment(psi2);
    } else {
      const double scale = amplitude * std::pow(10.0, -1.0 - 4.0 * unit(rng));
      phi2 = phi1;
      psi2 = psi1;
      for (auto& x : phi2) x = std::clamp(x + scale * (2.0 * unit(rng) - 1.0), -amplitude, amplitude);
      for (auto& x : psi2) x = std::clamp(x + scale * (2.0 * unit(rng) - 1.0), -amplitude, amplitude);
    }
    const double f1 = eval(phi1, psi1);
    const double f2 = eval(phi2, psi2);
    const double biggest = std::max(std::abs(f1), std::abs(f2));
    if (biggest > rep.max_abs) {
      rep.max_abs = biggest;
      if (biggest > M_limit) rep.bound_witness = BoundsWitness{phi1, psi1, phi2, psi2, f1, f2};
    }
    const double dist = sup_diff(phi1, phi2) + sup_diff(psi1, psi2);
    if (dist > 0.0) {
      const double q = std::abs(f1 - f2) / dist;
      if (q > rep.max_lipschitz_quotient) {
        rep.max_lipschitz_quotient = q;
        if (q > L_limit) rep.lipschitz_witness = BoundsWitness{phi1, psi1, phi2, psi2, f1, f2};
      }
    }
  }
  rep.pass = rep.max_abs <= M_limit && rep.max_lipschitz_quotient <= L_limit;
  return rep;
}

} // namespace sicnn
