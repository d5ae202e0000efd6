#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sicnn/schedule.hpp"

namespace sicnn {

/// Grid position, zero-based. Reports print cells one-based as x{row+1}{col+1}.
struct Cell {
  int row = 0;
  int col = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
};

enum class Wave { sine, cosine };

struct InputTerm {
  double amplitude = 0.0;
  double angular_frequency = 0.0;
  double phase = 0.0;
  Wave wave = Wave::sine;

  [[nodiscard]] double operator()(double t) const;
};

/// External input L_ij(t) with a certified uniform bound.
///
/// The normal form is a finite trigonometric sum, which is almost periodic by
/// construction and whose bound is the sum of absolute amplitudes. An
/// arbitrary callable can be installed with unchecked(); such inputs carry a
/// self-declared bound and disable almost-periodic analysis.
class InputSignal {
public:
  InputSignal() = default;
  /// Throws ConfigError when declared_bound is below the sum of |amplitude|.
  explicit InputSignal(std::vector<InputTerm> terms, std::optional<double> declared_bound = {});
  static InputSignal unchecked(std::function<double(double)> fn, double declared_bound);

  [[nodiscard]] double operator()(double t) const;
  [[nodiscard]] double bound() const { return bound_; }
  [[nodiscard]] bool trigonometric() const { return !custom_; }
  [[nodiscard]] const std::vector<InputTerm>& terms() const { return terms_; }

private:
  std::vector<InputTerm> terms_;
  std::function<double(double)> custom_;
  double bound_ = 0.0;
};

struct Coupling {
  std::size_t source = 0;  // flat index of C_kl
  double weight = 0.0;     // C_ij^kl >= 0
};

/// Shunting inhibitory CNN on an m x n grid with r-neighbourhoods.
class NetworkSpec {
public:
  using CouplingRule = std::function<double(Cell target, Cell source)>;

  /// `coupling(target, source)` is consulted for every source in N_r(target).
  NetworkSpec(int rows, int cols, int radius, std::vector<double> decay, const CouplingRule& coupling,
              std::vector<InputSignal> inputs, double tau);

  /// C_ij^kl = weights[k][l] for every target (i, j): the per-cell coupling layout.
  static NetworkSpec with_cell_weights(int rows, int cols, int radius, std::vector<double> decay,
                                       std::vector<double> weights, std::vector<InputSignal> inputs, double tau);

  [[nodiscard]] int rows() const { return rows_; }
  [[nodiscard]] int cols() const { return cols_; }
  [[nodiscard]] int radius() const { return radius_; }
  [[nodiscard]] std::size_t size() const { return decay_.size(); }
  [[nodiscard]] double tau() const { return tau_; }

  [[nodiscard]] std::size_t flat(Cell c) const { return std::size_t(c.row) * std::size_t(cols_) + std::size_t(c.col); }
  [[nodiscard]] Cell cell(std::size_t flat) const { return {int(flat / std::size_t(cols_)), int(flat % std::size_t(cols_))}; }
  [[nodiscard]] std::string cell_name(std::size_t flat) const;

  /// Cells within Chebyshev distance r of c, clipped to the grid, row-major.
  [[nodiscard]] std::vector<Cell> neighborhood(Cell c) const;

  [[nodiscard]] double decay(std::size_t i) const { return decay_[i]; }
  [[nodiscard]] std::span<const double> decays() const { return decay_; }
  [[nodiscard]] std::span<const Coupling> couplings(std::size_t i) const { return couplings_[i]; }
  /// Sum of C_ij^kl over N_r(i,j).
  [[nodiscard]] double coupling_sum(std::size_t i) const;
  [[nodiscard]] const InputSignal& input(std::size_t i) const { return inputs_[i]; }
  [[nodiscard]] bool inputs_trigonometric() const;

  /// Same network with every coupling multiplied by factor >= 0.
  [[nodiscard]] NetworkSpec scaled_couplings(double factor) const;

private:
  NetworkSpec() = default;
  void validate() const;

  int rows_ = 0;
  int cols_ = 0;
  int radius_ = 0;
  std::vector<double> decay_;
  std::vector<std::vector<Coupling>> couplings_;
  std::vector<InputSignal> inputs_;
  double tau_ = 0.0;
};

/// Spacing constants used by the conditions. Declared values take precedence
/// over the empirical scan; the scan is kept alongside for the C3/C9 checks.
struct ScheduleBounds {
  double theta_bar = 0.0;
  double theta_under = 0.0;
  double zeta_under = 0.0;
  SpacingReport scan;
};

struct DeclaredSpacing {
  std::optional<double> theta_bar;
  std::optional<double> theta_under;
  std::optional<double> zeta_under;
};

[[nodiscard]] ScheduleBounds schedule_bounds(const GammaSchedule& schedule, const DeclaredSpacing& declared = {});

struct DerivedConstants {
  double mu = 0.0;
  double c_bar = 0.0;
  double d_bar = 0.0;
  double L_bar = 0.0;
  double l_bar = 0.0;
  double gamma0 = 0.0;
  std::optional<double> H;  // l_bar / (1 - M c_bar); empty when M c_bar >= 1
  double theta_bar = 0.0;
  double theta_under = 0.0;
  double zeta_under = 0.0;
  std::vector<double> coupling_sums;  // per cell, row-major
};

[[nodiscard]] DerivedConstants derived_constants(const NetworkSpec& net, const ScheduleBounds& bounds, double M,
                                                 double L);

enum class Relation { less, less_equal, greater_equal };

struct ConditionEntry {
  std::string name;
  double lhs = 0.0;
  double threshold = 0.0;
  double margin = 0.0;
  bool pass = false;
  Relation relation = Relation::less;
  std::string note;
};

struct ConditionReport {
  DerivedConstants constants;
  double M = 0.0;
  double L = 0.0;
  double tau = 0.0;
  bool mu_theta_M_ok = false;  // mu theta_bar M < 1
  bool M_c_bar_ok = false;     // M c_bar < 1
  std::vector<ConditionEntry> entries;  // C3, C5, C6, C7, C9 in that order
  SpacingReport spacing;

  [[nodiscard]] const ConditionEntry& entry(std::string_view name) const;
  [[nodiscard]] bool passes(std::string_view name) const { return entry(name).pass; }
  [[nodiscard]] bool all_pass() const;
  /// C5, C6, C7: the hypotheses of the bounded-solution and stability results.
  [[nodiscard]] bool stability_certified() const;
};

[[nodiscard]] ConditionReport check_conditions(const NetworkSpec& net, const ScheduleBounds& bounds, double M,
                                               double L);

/// Left-hand sides of the smallness conditions as plain formulas.
namespace formulas {
[[nodiscard]] double c5(double mu, double theta_bar, double M, double L, double H, double L_bar);
[[nodiscard]] double c6(double M, double L, double H, double c_bar);
[[nodiscard]] double c7(double d_bar, double M, double L, double H, double gamma0, double tau, double theta_bar);
/// Stability envelope amplitude K(delta) = delta / (1 - c7).
[[nodiscard]] double envelope_amplitude(double delta, double c7_lhs);
/// Per-interval contraction bound mu theta_bar (M + 2 K0 L) with
/// K0 = (H0 + theta_bar L_bar) / (1 - mu theta_bar M).
[[nodiscard]] double picard_contraction_bound(const DerivedConstants& k, double M, double L, double H0);
} // namespace formulas

} // namespace sicnn
