#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sicnn {

/// Non-owning view of one cell's history segment: s -> x(base + s), s in [-tau, 0].
class SegmentView {
public:
  using Fn = double (*)(const void* ctx, double s);

  SegmentView(const void* ctx, Fn fn, double tau) : ctx_(ctx), fn_(fn), tau_(tau) {}

  /// Wraps any callable double(double); the callable must outlive the view.
  template <class F>
  static SegmentView of(const F& f, double tau) {
    return SegmentView(&f, [](const void* c, double s) { return (*static_cast<const F*>(c))(s); }, tau);
  }

  [[nodiscard]] double tau() const { return tau_; }
  [[nodiscard]] double operator()(double s) const { return fn_(ctx_, s); }

private:
  const void* ctx_;
  Fn fn_;
  double tau_;
};

/// Scalar building block g: R -> R for the pointwise kinds.
struct ScalarRule {
  enum class Kind {
    capped_quadratic,  // s^2/2 for |s| <= threshold, threshold^2/2 beyond
    clipped_linear,    // clamp(slope * s, -cap, cap)
    constant,          // value
    tanh,              // amplitude * tanh(gain * s)
  };

  Kind kind = Kind::capped_quadratic;
  double p1 = 0.1;  // threshold | slope | value | amplitude
  double p2 = 0.0;  // unused    | cap   | unused | gain

  static ScalarRule capped_quadratic(double threshold) { return {Kind::capped_quadratic, threshold, 0.0}; }
  static ScalarRule clipped_linear(double slope, double cap) { return {Kind::clipped_linear, slope, cap}; }
  static ScalarRule constant(double value) { return {Kind::constant, value, 0.0}; }
  static ScalarRule hyperbolic(double amplitude, double gain) { return {Kind::tanh, amplitude, gain}; }

  [[nodiscard]] double operator()(double s) const;
  [[nodiscard]] std::string describe() const;
};

enum class ActivationKind {
  pointwise_on_gamma_delayed,  // g(x(gamma(t) - tau))
  pointwise_on_gamma,          // g(x(gamma(t)))
  pointwise_on_delay,          // g(x(t - lag))
  two_point,                   // g(x(t - lag)) + g_gamma(x(gamma(t) - lag))
  segment_integral,            // g(w_t I[x_t] + w_gamma I[x_gamma(t)]), I[y] = int e^{lambda s} y(s) ds
  custom,
};

[[nodiscard]] std::string to_string(ActivationKind kind);
[[nodiscard]] std::optional<ActivationKind> activation_kind_from_string(const std::string& name);

/// The functional f(x_kl t, x_kl gamma(t)) with declared bound M and Lipschitz constant L.
///
/// The declarations are hypotheses; validate_bounds() tries to falsify them by sampling.
class Activation {
public:
  using CustomFn = std::function<double(SegmentView seg_t, SegmentView seg_gamma)>;

  /// f(x(gamma(t) - tau)) with the capped quadratic g(s) = s^2/2, |s| <= 0.1.
  static Activation example6();
  static Activation pointwise(ActivationKind kind, ScalarRule rule, double M, double L, double lag = -1.0);
  static Activation two_point(ScalarRule rule_t, ScalarRule rule_gamma, double M, double L, double lag = -1.0);
  static Activation segment_integral(ScalarRule rule, double weight_t, double weight_gamma, double decay, double M,
                                     double L);
  static Activation custom(CustomFn fn, double M, double L, std::string description = "custom");

  [[nodiscard]] ActivationKind kind() const { return kind_; }
  [[nodiscard]] double M() const { return M_; }
  [[nodiscard]] double L() const { return L_; }
  [[nodiscard]] std::string describe() const;

  /// Lookback used by the delayed kinds; negative means "the full window tau".
  [[nodiscard]] double lag(double tau) const { return lag_ < 0.0 ? tau : lag_; }
  [[nodiscard]] bool reads_current() const;
  [[nodiscard]] bool reads_gamma() const;

  /// Both views must carry the same tau and cover [-tau, 0].
  [[nodiscard]] double operator()(SegmentView seg_t, SegmentView seg_gamma) const;

private:
  Activation() = default;

  ActivationKind kind_ = ActivationKind::pointwise_on_gamma_delayed;
  ScalarRule rule_;
  ScalarRule rule_gamma_;
  double lag_ = -1.0;
  double weight_t_ = 0.0;
  double weight_gamma_ = 0.0;
  double kernel_decay_ = 0.0;
  CustomFn custom_;
  std::string custom_description_;
  double M_ = 0.0;
  double L_ = 0.0;
};

struct BoundsWitness {
  std::vector<double> phi1, psi1, phi2, psi2;  // knot values on a uniform grid over [-tau, 0]
  double value1 = 0.0;
  double value2 = 0.0;
};

struct BoundsReport {
  double max_abs = 0.0;
  double max_lipschitz_quotient = 0.0;
  std::size_t samples = 0;
  bool pass = false;
  std::optional<BoundsWitness> bound_witness;      // largest |f| found when it exceeds M
  std::optional<BoundsWitness> lipschitz_witness;  // largest quotient found when it exceeds L
};

/// Random piecewise-linear segment pairs with sup-norm <= amplitude; half of
/// the comparison pairs are small perturbations to probe local slopes.
[[nodiscard]] BoundsReport validate_bounds(const Activation& act, std::size_t samples, double amplitude, double tau,
                                           std::uint64_t seed = 1);

} // namespace sicnn
