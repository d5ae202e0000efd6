#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sicnn {

using Index = std::int64_t;

/// Closed index interval [first, last].
struct IndexRange {
  Index first = 0;
  Index last = 0;

  [[nodiscard]] Index size() const { return last - first + 1; }
  [[nodiscard]] bool contains(Index p) const { return p >= first && p <= last; }
};

/// Per-worker memo of the last interval found; purely a lookup accelerator.
struct ScheduleCursor {
  Index last = std::numeric_limits<Index>::min();
};

struct SpacingReport {
  double theta_bar = 0.0;    // max theta_{p+1} - theta_p
  double theta_under = 0.0;  // min theta_{p+1} - theta_p
  double zeta_under = 0.0;   // min zeta_{p+1} - zeta_p (may be <= 0)
  IndexRange p_range;
  // Consistency of user declarations with the scan; unset when nothing was declared.
  std::optional<bool> theta_bar_ok;
  std::optional<bool> theta_under_ok;
  std::optional<bool> zeta_under_ok;
};

enum class SequenceKind { theta, zeta };

struct AlmostPeriodScan {
  std::vector<Index> accepted;
  // Largest difference between consecutive accepted shifts; infinity when fewer than two.
  double max_gap = std::numeric_limits<double>::infinity();
};

/// Argument function gamma(t) = zeta_p on [theta_p, theta_{p+1}).
///
/// The sequences are tabulated over a declared finite index range when the
/// schedule is built; every invariant (theta strictly increasing and
/// theta_p <= zeta_p <= theta_{p+1}) is validated at that point. Queries
/// outside the range throw RangeError. Instances are immutable.
class GammaSchedule {
public:
  using Rule = std::function<double(Index)>;

  /// theta_p = p + |sin p - cos(p sqrt 2)| / 4 and zeta_p = theta_p.
  static GammaSchedule example6(IndexRange range);
  /// theta_p = slope * p + offset, zeta_p = theta_p + advance.
  static GammaSchedule affine(double slope, double offset, double advance, IndexRange range);
  /// Explicit tables; entry k holds index first_index + k.
  static GammaSchedule table(std::vector<double> theta, std::vector<double> zeta, Index first_index);
  static GammaSchedule from_rules(const Rule& theta, const Rule& zeta, IndexRange range,
                                  std::string description);

  [[nodiscard]] IndexRange index_range() const { return range_; }
  [[nodiscard]] const std::string& description() const { return description_; }

  [[nodiscard]] double theta(Index p) const;
  [[nodiscard]] double zeta(Index p) const;

  /// Times covered by interval_index: [theta_first, theta_last).
  [[nodiscard]] double t_min() const { return theta_.front(); }
  [[nodiscard]] double t_max() const { return theta_.back(); }

  /// Unique p with theta_p <= t < theta_{p+1}.
  [[nodiscard]] Index interval_index(double t) const;
  [[nodiscard]] Index interval_index(double t, ScheduleCursor& cursor) const;
  [[nodiscard]] double gamma(double t) const { return zeta(interval_index(t)); }
  [[nodiscard]] double gamma(double t, ScheduleCursor& cursor) const {
    return zeta(interval_index(t, cursor));
  }

  /// Largest zeta_p - theta_p over the range.
  [[nodiscard]] double max_advance() const;

  /// Empirical statistics of the gaps between consecutive indices in [p_min, p_max].
  [[nodiscard]] SpacingReport spacing_report(Index p_min, Index p_max,
                                             std::optional<double> declared_theta_bar = {},
                                             std::optional<double> declared_theta_under = {},
                                             std::optional<double> declared_zeta_under = {}) const;
  [[nodiscard]] SpacingReport spacing_report() const {
    return spacing_report(range_.first, range_.last);
  }

  /// Integer shifts k in k_range with |s^q_{p+k} - s^q_p| < eps for every p in
  /// p_window and q in q_set, where s^q_p = s_{p+q} - s_p. A finite-window proxy
  /// for equipotential almost periodicity; it proves nothing on its own.
  [[nodiscard]] AlmostPeriodScan almost_period_scan(double eps, IndexRange p_window,
                                                    std::span<const Index> q_set, IndexRange k_range,
                                                    SequenceKind which = SequenceKind::theta) const;

private:
  GammaSchedule(std::vector<double> theta, std::vector<double> zeta, Index first, std::string description);

  [[nodiscard]] std::size_t offset(Index p) const;

  std::vector<double> theta_;
  std::vector<double> zeta_;
  IndexRange range_;
  std::string description_;
};

} // namespace sicnn
