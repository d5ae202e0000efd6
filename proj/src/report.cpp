#include "sicnn/report.hpp"

#include <algorithm>
#include <cmath>

namespace sicnn {

using nlohmann::json;

namespace {

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json opt(const std::optional<double>& x) { return x ? num(*x) : json(nullptr); }

json opt(const std::optional<bool>& x) { return x ? json(*x) : json(nullptr); }

json witness(const std::optional<BoundsWitness>& w) {
  if (!w) return nullptr;
  return {{"phi1", w->phi1}, {"psi1", w->psi1}, {"phi2", w->phi2}, {"psi2", w->psi2},
          {"value1", num(w->value1)}, {"value2", num(w->value2)}};
}

} // namespace

std::string to_string(Relation r) {
  switch (r) {
  case Relation::less: return "<";
  case Relation::less_equal: return "<=";
  case Relation::greater_equal: return ">=";
  }
  return "?";
}

json to_json(const DerivedConstants& k) {
  return {{"mu", num(k.mu)},
          {"c_bar", num(k.c_bar)},
          {"d_bar", num(k.d_bar)},
          {"L_bar", num(k.L_bar)},
          {"l_bar", num(k.l_bar)},
          {"gamma0", num(k.gamma0)},
          {"H", opt(k.H)},
          {"theta_bar", num(k.theta_bar)},
          {"theta_under", num(k.theta_under)},
          {"zeta_under", num(k.zeta_under)},
          {"coupling_sums", k.coupling_sums}};
}

json to_json(const SpacingReport& s) {
  return {{"theta_bar", num(s.theta_bar)},
          {"theta_under", num(s.theta_under)},
          {"zeta_under", num(s.zeta_under)},
          {"p_range", {s.p_range.first, s.p_range.last}},
          {"declared_theta_bar_ok", opt(s.theta_bar_ok)},
          {"declared_theta_under_ok", opt(s.theta_under_ok)},
          {"declared_zeta_under_ok", opt(s.zeta_under_ok)}};
}

json to_json(const ConditionEntry& e) {
  json j = {{"name", e.name},
            {"lhs", num(e.lhs)},
            {"relation", to_string(e.relation)},
            {"threshold", num(e.threshold)},
            {"margin", num(e.margin)},
            {"pass", e.pass}};
  if (!e.note.empty()) j["note"] = e.note;
  return j;
}

json to_json(const ConditionReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) entries.push_back(to_json(e));
  return {{"constants", to_json(r.constants)},
          {"M", num(r.M)},
          {"L", num(r.L)},
          {"tau", num(r.tau)},
          {"M_c_bar", num(r.M * r.constants.c_bar)},
          {"M_c_bar_ok", r.M_c_bar_ok},
          {"mu_theta_bar_M", num(r.constants.mu * r.constants.theta_bar * r.M)},
          {"mu_theta_bar_M_ok", r.mu_theta_M_ok},
          {"conditions", entries},
          {"spacing_scan", to_json(r.spacing)},
          {"all_pass", r.all_pass()},
          {"stability_certified", r.stability_certified()}};
}

json to_json(const BoundsReport& r) {
  json j = {{"samples", r.samples},
            {"max_abs", num(r.max_abs)},
            {"max_lipschitz_quotient", num(r.max_lipschitz_quotient)},
            {"pass", r.pass}};
  if (r.bound_witness) j["bound_witness"] = witness(r.bound_witness);
  if (r.lipschitz_witness) j["lipschitz_witness"] = witness(r.lipschitz_witness);
  return j;
}

json to_json(const IntervalRecord& r) {
  json d = json::array();
  for (double x : r.picard_distances) d.push_back(num(x));
  return {{"p", r.p},
          {"left", num(r.left)},
          {"right", num(r.right)},
          {"zeta", num(r.zeta)},
          {"steps", r.steps},
          {"passes", r.passes()},
          {"picard_distances", d},
          {"max_ratio", num(r.max_ratio())},
          {"contraction_bound", num(r.contraction_bound)}};
}

json picard_summary(const Trajectory& traj) {
  std::size_t max_passes = 0;
  double max_ratio = 0.0, max_bound = 0.0;
  bool monotone = true;
  for (const auto& iv : traj.intervals()) {
    max_passes = std::max(max_passes, iv.passes());
    max_ratio = std::max(max_ratio, iv.max_ratio());
    max_bound = std::max(max_bound, iv.contraction_bound);
    for (std::size_t i = 1; i < iv.picard_distances.size(); ++i)
      monotone = monotone && iv.picard_distances[i] <= iv.picard_distances[i - 1];
  }
  return {{"intervals", traj.intervals().size()},
          {"substeps", traj.steps()},
          {"max_passes", max_passes},
          {"max_ratio", num(max_ratio)},
          {"max_contraction_bound", num(max_bound)},
          {"monotone", monotone}};
}

json to_json(const StabilityReport& r) {
  json v = json::array();
  for (const auto& e : r.envelope_violations) v.push_back({{"t", num(e.t)}, {"norm", num(e.norm)}, {"bound", num(e.bound)}});
  double worst = 0.0;
  for (const auto& s : r.samples)
    if (s[2] > 0.0) worst = std::max(worst, s[1] / s[2]);
  return {{"delta", num(r.delta)},
          {"K_delta", num(r.K_delta)},
          {"guaranteed_rate", num(r.rate)},
          {"fitted_rate", num(r.fitted_rate)},
          {"sigma", num(r.sigma)},
          {"horizon", num(r.horizon)},
          {"samples", r.samples.size()},
          {"max_norm_over_envelope", num(worst)},
          {"envelope_violations", v},
          {"pass", r.pass}};
}

json to_json(const TranslationReport& r) {
  json acc = json::array();
  for (double a : r.accepted) acc.push_back(num(a));
  std::size_t nontrivial = 0;
  for (double a : r.accepted)
    if (std::abs(a) > 0.5 * r.alpha_step) ++nontrivial;
  return {{"eps", num(r.eps)},
          {"alpha_min", num(r.alpha_min)},
          {"alpha_max", num(r.alpha_max)},
          {"alpha_step", num(r.alpha_step)},
          {"window", {num(r.window_start), num(r.window_end)}},
          {"sample_step", num(r.sample_step)},
          {"accepted", acc},
          {"accepted_count", r.accepted.size()},
          {"nonzero_accepted_count", nontrivial},
          {"max_gap", num(r.max_gap)}};
}

} // namespace sicnn
