#include "sicnn/commands.hpp"

#include <algorithm>
#include <cmath>

#include "sicnn/analysis.hpp"
#include "sicnn/errors.hpp"
#include "sicnn/output.hpp"
#include "sicnn/report.hpp"

namespace sicnn {

using nlohmann::json;

namespace {

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json solver_json(const SolverOptions& o) {
  return {{"h", num(o.h)},
          {"picard_tol", num(o.picard_tol)},
          {"picard_max_iters", o.picard_max_iters},
          {"quadrature", o.quadrature == Quadrature::simpson ? "simpson" : "trapezoid"}};
}

json header(const std::string& command, const RunConfig& cfg) {
  json j = {{"command", command},
            {"activation", cfg.model.activation.describe()},
            {"schedule", cfg.model.schedule.description()},
            {"grid", {cfg.model.network.rows(), cfg.model.network.cols()}},
            {"radius", cfg.model.network.radius()},
            {"tau", num(cfg.model.network.tau())}};
  if (cfg.document.contains("name") && cfg.document.at("name").is_string()) j["name"] = cfg.document.at("name");
  return j;
}

json inputs_json(const NetworkSpec& net) {
  json bounds = json::array();
  for (std::size_t i = 0; i < net.size(); ++i) bounds.push_back(num(net.input(i).bound()));
  return {{"bounds", bounds}, {"trigonometric", net.inputs_trigonometric()}};
}

} // namespace

std::vector<std::string> cell_names(const NetworkSpec& net) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < net.size(); ++i) out.push_back(net.cell_name(i));
  return out;
}

CommandOutput run_check(const RunConfig& cfg) {
  CommandOutput out;
  const ConditionReport rep = cfg.model.conditions();
  out.report = header("check", cfg);
  out.report["report"] = to_json(rep);
  out.report["inputs"] = inputs_json(cfg.model.network);
  bool pass = rep.all_pass();
  if (cfg.check.validate_samples > 0) {
    const BoundsReport b = validate_bounds(cfg.model.activation, cfg.check.validate_samples, cfg.check.validate_amplitude,
                                           cfg.model.network.tau(), cfg.seed);
    out.report["activation_bounds"] = to_json(b);
    out.report["activation_bounds"]["amplitude"] = num(cfg.check.validate_amplitude);
    out.report["activation_bounds"]["seed"] = cfg.seed;
    pass = pass && b.pass;
  }
  std::vector<std::string> failing;
  for (const auto& e : rep.entries)
    if (!e.pass) failing.push_back(e.name);
  out.report["failing"] = failing;
  out.report["pass"] = pass;
  out.exit_code = pass ? ExitCode::pass : ExitCode::fail;
  return out;
}

CommandOutput run_simulate(const RunConfig& cfg, bool plot) {
  CommandOutput out;
  const double t_end = cfg.simulate.t_end;
  const Trajectory traj = solve_ivp(cfg.model, cfg.initial, t_end, cfg.solver);
  const auto names = cell_names(cfg.model.network);
  const double t0 = cfg.initial.sigma;
  out.csv = trajectory_csv(traj, names, t0, t_end, cfg.simulate.stride);
  if (plot) out.svg = render_svg(trajectory_plot(traj, names, t0, t_end, cfg.simulate.stride, "Solution components"));
  const ResidualReport res = residual(cfg.model, traj, t0, t_end);
  out.report = header("simulate", cfg);
  out.report["sigma"] = num(t0);
  out.report["regime"] = cfg.initial.regime(cfg.model.schedule) == InitialRegime::ic1 ? "IC1" : "IC2";
  out.report["t_end"] = num(t_end);
  out.report["record_end"] = num(traj.end());
  out.report["stride"] = num(cfg.simulate.stride);
  out.report["solver"] = solver_json(cfg.solver.resolved(cfg.model));
  out.report["sup_norm"] = num(traj.sup_norm(t0, t_end));
  out.report["residual"] = {{"max_defect", num(res.max_defect)}, {"at_time", num(res.at_time)},
                            {"cell", cfg.model.network.cell_name(res.cell)}};
  out.report["picard"] = picard_summary(traj);
  out.report["pass"] = true;
  return out;
}

CommandOutput run_ap(const RunConfig& cfg, bool plot) {
  CommandOutput out;
  out.report = header("ap", cfg);
  const auto& p = cfg.ap;
  const BoundedSolution bs = bounded_solution(cfg.model, p.t0, p.t1, p.accuracy, cfg.solver);
  const PiResidual pr = pi_residual(cfg.model, bs.trajectory, p.t0, p.t1, p.accuracy);
  const auto names = cell_names(cfg.model.network);
  out.csv = trajectory_csv(bs.trajectory, names, p.t0, p.t1, p.stride);
  if (plot)
    out.svg = render_svg(trajectory_plot(bs.trajectory, names, p.t0, p.t1, p.stride, "Bounded solution"));
  const double limit = bs.H + p.accuracy;
  const bool pass = bs.sup_norm <= limit;
  out.report["window"] = {num(p.t0), num(p.t1)};
  out.report["accuracy"] = num(p.accuracy);
  out.report["t_back"] = num(bs.t_back);
  out.report["sigma"] = num(bs.trajectory.start());
  out.report["H"] = num(bs.H);
  out.report["envelope_at_t0"] = num(bs.envelope_at_t0);
  out.report["sup_norm"] = num(bs.sup_norm);
  out.report["sup_norm_limit"] = num(limit);
  out.report["solver"] = solver_json(cfg.solver.resolved(cfg.model));
  out.report["pi_residual"] = {{"max_defect", num(pr.max_defect)}, {"at_time", num(pr.at_time)},
                               {"cell", cfg.model.network.cell_name(pr.cell)}, {"tail_bound", num(pr.tail_bound)}};
  out.report["picard"] = picard_summary(bs.trajectory);
  out.report["pass"] = pass;
  out.exit_code = pass ? ExitCode::pass : ExitCode::fail;
  return out;
}

CommandOutput run_stability(const RunConfig& cfg, bool plot) {
  CommandOutput out;
  out.report = header("stability", cfg);
  const StabilityReport rep =
      stability_envelope(cfg.model, cfg.initial, cfg.stability.delta, cfg.stability.horizon, cfg.solver);
  out.report["report"] = to_json(rep);
  out.report["solver"] = solver_json(cfg.solver.resolved(cfg.model));
  out.csv = "t,norm,envelope\n";
  Plot p{"Perturbation norm against the envelope", "t", "||w(t)||", {}};
  Series w{"||w||", {}, {}}, env{"envelope", {}, {}};
  for (const auto& s : rep.samples) {
    out.csv += format_number(s[0]) + "," + format_number(s[1]) + "," + format_number(s[2]) + "\n";
    w.x.push_back(s[0]);
    w.y.push_back(s[1]);
    env.x.push_back(s[0]);
    env.y.push_back(s[2]);
  }
  if (plot) {
    p.series = {w, env};
    out.svg = render_svg(p);
  }
  out.report["pass"] = rep.pass;
  out.exit_code = rep.pass ? ExitCode::pass : ExitCode::fail;
  return out;
}

CommandOutput run_scan(const RunConfig& cfg, bool plot) {
  CommandOutput out;
  out.report = header("scan", cfg);
  const auto& s = cfg.scan;
  const double lo = s.window_start + std::min(0.0, s.alpha_min);
  const double hi = s.window_end + std::max(0.0, s.alpha_max);
  const BoundedSolution bs = bounded_solution(cfg.model, lo, hi, s.accuracy, cfg.solver);
  const TranslationReport rep =
      translation_scan(bs.trajectory, s.eps, s.alpha_min, s.alpha_max, s.alpha_step, s.window_start, s.window_end, s.refine);
  out.report["report"] = to_json(rep);
  out.report["trajectory"] = {{"sigma", num(bs.trajectory.start())}, {"t_back", num(bs.t_back)}, {"span", {num(lo), num(hi)}}};
  const bool nontrivial = std::any_of(rep.accepted.begin(), rep.accepted.end(),
                                      [&](double a) { return std::abs(a) > 0.5 * s.alpha_step; });
  const bool pass = nontrivial && std::isfinite(rep.max_gap);
  std::string csv = "alpha,deviation,accepted\n";
  for (std::size_t j = 0; j < rep.alphas.size(); ++j)
    csv += format_number(rep.alphas[j]) + "," + format_number(rep.deviation[j]) + "," + (rep.deviation[j] < s.eps ? "1" : "0") + "\n";
  out.csv = std::move(csv);
  if (plot) {
    const auto names = cell_names(cfg.model.network);
    out.svg = render_svg(trajectory_plot(bs.trajectory, names, lo, hi, std::max(s.alpha_step / s.refine, (hi - lo) / 20000.0),
                                         "Bounded solution used by the scan"));
  }
  out.report["pass"] = pass;
  out.exit_code = pass ? ExitCode::pass : ExitCode::fail;
  return out;
}

CommandOutput run_command(const std::string& name, const RunConfig& cfg, bool plot) {
  try {
    if (name == "check") return run_check(cfg);
    if (name == "simulate") return run_simulate(cfg, plot);
    if (name == "ap") return run_ap(cfg, plot);
    if (name == "stability") return run_stability(cfg, plot);
    if (name == "scan") return run_scan(cfg, plot);
  } catch (const CertificationError& e) {
    CommandOutput out;
    out.report = header(name, cfg);
    out.report["pass"] = false;
    out.report["error"] = e.what();
    out.report["conditions"] = to_json(cfg.model.conditions());
    out.exit_code = ExitCode::fail;
    return out;
  }
  throw ArgumentError("unknown command '" + name + "' (expected check, simulate, ap, stability or scan)");
}

} // namespace sicnn
