#include "sicnn/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sicnn/errors.hpp"

namespace sicnn {

namespace {

std::string describe_range(double lo, double hi) {
  std::ostringstream os;
  os.precision(17);
  os << "[" << lo << ", " << hi << ")";
  return os.str();
}

} // namespace

GammaSchedule::GammaSchedule(std::vector<double> theta, std::vector<double> zeta, Index first,
                             std::string description)
    : theta_(std::move(theta)), zeta_(std::move(zeta)), description_(std::move(description)) {
  if (theta_.size() != zeta_.size())
    throw ConfigError("schedule: theta and zeta tables differ in length");
  if (theta_.size() < 2)
    throw ConfigError("schedule: at least two theta values are required");
  range_ = {first, first + static_cast<Index>(theta_.size()) - 1};
  for (std::size_t k = 0; k < theta_.size(); ++k) {
    if (!std::isfinite(theta_[k]) || !std::isfinite(zeta_[k]))
      throw ConfigError("schedule: non-finite entry at p = " + std::to_string(first + Index(k)));
    if (k + 1 < theta_.size()) {
      if (!(theta_[k] < theta_[k + 1]))
        throw ConfigError("schedule: theta is not strictly increasing at p = " +
                          std::to_string(first + Index(k)));
      if (!(theta_[k] <= zeta_[k] && zeta_[k] <= theta_[k + 1]))
        throw ConfigError("schedule: theta_p <= zeta_p <= theta_{p+1} violated at p = " +
                          std::to_string(first + Index(k)));
    } else if (zeta_[k] < theta_[k]) {
      throw ConfigError("schedule: zeta_p < theta_p at p = " + std::to_string(first + Index(k)));
    }
  }
}

GammaSchedule GammaSchedule::example6(IndexRange range) {
  const double root2 = std::sqrt(2.0);
  auto rule = [root2](Index p) {
    const double x = static_cast<double>(p);
    return x + 0.25 * std::abs(std::sin(x) - std::cos(x * root2));
  };
  return from_rules(rule, rule, range, "example6: theta_p = p + |sin p - cos(p sqrt2)|/4, zeta_p = theta_p");
}

GammaSchedule GammaSchedule::affine(double slope, double offset, double advance, IndexRange range) {
  if (!(slope > 0.0)) throw ConfigError("schedule: affine slope must be positive");
  if (advance < 0.0 || advance > slope)
    throw ConfigError("schedule: affine advance must lie in [0, slope]");
  std::ostringstream os;
  os << "affine: theta_p = " << slope << " p + " << offset << ", zeta_p = theta_p + " << advance;
  return from_rules([=](Index p) { return slope * double(p) + offset; },
                    [=](Index p) { return slope * double(p) + offset + advance; }, range, os.str());
}

GammaSchedule GammaSchedule::table(std::vector<double> theta, std::vector<double> zeta, Index first_index) {
  return GammaSchedule(std::move(theta), std::move(zeta), first_index, "table");
}

GammaSchedule GammaSchedule::from_rules(const Rule& theta, const Rule& zeta, IndexRange range,
                                        std::string description) {
  if (range.last <= range.first) throw ConfigError("schedule: index range must contain at least two indices");
  std::vector<double> th(static_cast<std::size_t>(range.size()));
  std::vector<double> ze(th.size());
  for (Index p = range.first; p <= range.last; ++p) {
    th[std::size_t(p - range.first)] = theta(p);
    ze[std::size_t(p - range.first)] = zeta(p);
  }
  return GammaSchedule(std::move(th), std::move(ze), range.first, std::move(description));
}

std::size_t GammaSchedule::offset(Index p) const {
  if (!range_.contains(p))
    throw RangeError("schedule: index " + std::to_string(p) + " outside [" + std::to_string(range_.first) +
                     ", " + std::to_string(range_.last) + "]");
  return static_cast<std::size_t>(p - range_.first);
}

double GammaSchedule::theta(Index p) const { return theta_[offset(p)]; }
double GammaSchedule::zeta(Index p) const { return zeta_[offset(p)]; }

Index GammaSchedule::interval_index(double t) const {
  if (!(t >= theta_.front() && t < theta_.back()))
    throw RangeError("schedule: time " + std::to_string(t) + " outside covered interval " +
                     describe_range(theta_.front(), theta_.back()));
  // First theta strictly greater than t; its predecessor opens the interval.
  auto it = std::upper_bound(theta_.begin(), theta_.end(), t);
  return range_.first + static_cast<Index>(it - theta_.begin()) - 1;
}

Index GammaSchedule::interval_index(double t, ScheduleCursor& cursor) const {
  if (range_.first <= cursor.last && cursor.last < range_.last) {
    const std::size_t k = offset(cursor.last);
    if (theta_[k] <= t && t < theta_[k + 1]) return cursor.last;
    if (k + 2 < theta_.size() && theta_[k + 1] <= t && t < theta_[k + 2]) return ++cursor.last;
  }
  cursor.last = interval_index(t);
  return cursor.last;
}

double GammaSchedule::max_advance() const {
  double adv = 0.0;
  for (std::size_t k = 0; k < theta_.size(); ++k) adv = std::max(adv, zeta_[k] - theta_[k]);
  return adv;
}

SpacingReport GammaSchedule::spacing_report(Index p_min, Index p_max, std::optional<double> declared_theta_bar,
                                            std::optional<double> declared_theta_under,
                                            std::optional<double> declared_zeta_under) const {
  if (!(p_min < p_max)) throw ArgumentError("spacing_report: p_min must be below p_max");
  // Gaps between consecutive indices inside [p_min, p_max].
  (void)offset(p_min);  // range check
  (void)offset(p_max);  // range check
  SpacingReport rep;
  rep.p_range = {p_min, p_max};
  rep.theta_bar = -std::numeric_limits<double>::infinity();
  rep.theta_under = std::numeric_limits<double>::infinity();
  rep.zeta_under = std::numeric_limits<double>::infinity();
  for (Index p = p_min; p < p_max; ++p) {
    const std::size_t k = offset(p);
    const double dt = theta_[k + 1] - theta_[k];
    rep.theta_bar = std::max(rep.theta_bar, dt);
    rep.theta_under = std::min(rep.theta_under, dt);
    rep.zeta_under = std::min(rep.zeta_under, zeta_[k + 1] - zeta_[k]);
  }
  if (declared_theta_bar) rep.theta_bar_ok = rep.theta_bar <= *declared_theta_bar;
  if (declared_theta_under) rep.theta_under_ok = *declared_theta_under > 0.0 && rep.theta_under >= *declared_theta_under;
  if (declared_zeta_under) rep.zeta_under_ok = *declared_zeta_under > 0.0 && rep.zeta_under >= *declared_zeta_under;
  return rep;
}

AlmostPeriodScan GammaSchedule::almost_period_scan(double eps, IndexRange p_window, std::span<const Index> q_set,
                                                   IndexRange k_range, SequenceKind which) const {
  if (!(eps > 0.0)) throw ArgumentError("almost_period_scan: eps must be positive");
  if (p_window.last < p_window.first || k_range.last < k_range.first)
    throw ArgumentError("almost_period_scan: empty window");
  const std::vector<double>& seq = which == SequenceKind::theta ? theta_ : zeta_;
  Index q_lo = 0, q_hi = 0;
  for (Index q : q_set) {
    q_lo = std::min(q_lo, q);
    q_hi = std::max(q_hi, q);
  }
  (void)offset(p_window.first + std::min<Index>(0, k_range.first) + q_lo);
  (void)offset(p_window.last + std::max<Index>(0, k_range.last) + q_hi);

  auto at = [&](Index p) { return seq[static_cast<std::size_t>(p - range_.first)]; };
  AlmostPeriodScan out;
  for (Index k = k_range.first; k <= k_range.last; ++k) {
    bool ok = true;
    for (Index q : q_set) {
      for (Index p = p_window.first; p <= p_window.last && ok; ++p) {
        const double shifted = at(p + k + q) - at(p + k);
        const double base = at(p + q) - at(p);
        ok = std::abs(shifted - base) < eps;
      }
      if (!ok) break;
    }
    if (ok) out.accepted.push_back(k);
  }
  if (out.accepted.size() >= 2) {
    Index gap = 0;
    for (std::size_t i = 1; i < out.accepted.size(); ++i) gap = std::max(gap, out.accepted[i] - out.accepted[i - 1]);
    out.max_gap = static_cast<double>(gap);
  }
  return out;
}

} // namespace sicnn
