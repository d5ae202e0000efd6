// sicnn: command-line driver over the C interface.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sicnn/sicnn.h"

namespace {

enum Exit { kPass = 0, kFail = 1, kConfig = 2, kSolver = 3 };

int exit_for(sicnn_status s) {
  switch (s) {
  case SICNN_OK: return kPass;
  case SICNN_FAIL: return kFail;
  case SICNN_ERR_CONFIG:
  case SICNN_ERR_RANGE:
  case SICNN_ERR_ARGUMENT: return kConfig;
  case SICNN_ERR_SOLVER:
  case SICNN_ERR_INTERNAL: return kSolver;
  }
  return kSolver;
}

// Owns a string returned by the library.
struct Owned {
  char* p = nullptr;
  ~Owned() { sicnn_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

std::string number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  f.close();
  if (!f) {
    std::cerr << "sicnn: cannot write " << path << "\n";
    return false;
  }
  return true;
}

struct Common {
  std::string preset;
  std::string config;
  std::vector<std::string> sets;
  std::string report;
  std::string out;
  std::optional<std::string> plot;
  std::optional<double> h;
  std::string quadrature;
  std::optional<long long> seed;
};

// Command-specific numeric flags and the config path each one sets.
using Flags = std::map<std::string, std::optional<double>>;

int run(const std::string& command, const Common& c, const Flags& flags) {
  std::string doc;
  if (!c.preset.empty() && !c.config.empty()) {
    std::cerr << "sicnn: give either --preset or --config, not both\n";
    return kConfig;
  }
  if (!c.config.empty()) {
    std::ifstream f(c.config, std::ios::binary);
    if (!f) {
      std::cerr << "sicnn: cannot read config " << c.config << "\n";
      return kConfig;
    }
    std::stringstream ss;
    ss << f.rdbuf();
    doc = ss.str();
  } else {
    const std::string name = c.preset.empty() ? "example6" : c.preset;
    Owned text;
    if (sicnn_status s = sicnn_preset_json(name.c_str(), &text.p); s != SICNN_OK) {
      std::cerr << "sicnn: " << sicnn_last_error() << "\n";
      return exit_for(s);
    }
    doc = text.str();
  }

  std::vector<std::string> assignments = c.sets;
  for (const auto& [path, value] : flags)
    if (value) assignments.push_back(path + "=" + number(*value));
  if (c.h) assignments.push_back("solver.h=" + number(*c.h));
  if (!c.quadrature.empty()) assignments.push_back("solver.quadrature=\"" + c.quadrature + "\"");
  if (c.seed) assignments.push_back("seed=" + std::to_string(*c.seed));
  for (const auto& a : assignments) {
    Owned next;
    if (sicnn_status s = sicnn_config_override(doc.c_str(), a.c_str(), &next.p); s != SICNN_OK) {
      std::cerr << "sicnn: " << sicnn_last_error() << "\n";
      return exit_for(s);
    }
    doc = next.str();
  }

  sicnn_model* model = nullptr;
  if (sicnn_status s = sicnn_model_create(doc.c_str(), &model); s != SICNN_OK) {
    std::cerr << "sicnn: " << sicnn_last_error() << "\n";
    return exit_for(s);
  }
  Owned report, csv, svg;
  const sicnn_status s = sicnn_run(model, command.c_str(), c.plot ? 1 : 0, &report.p, &csv.p, &svg.p);
  sicnn_model_free(model);
  if (s != SICNN_OK && s != SICNN_FAIL) {
    std::cerr << "sicnn: " << sicnn_last_error() << "\n";
    return exit_for(s);
  }

  bool ok = true;
  if (c.report.empty())
    std::cout << report.str() << "\n";
  else
    ok = write_file(c.report, report.str() + "\n") && ok;
  if (!csv.str().empty()) {
    const std::string path = c.out.empty() ? command + ".csv" : c.out;
    ok = write_file(path, csv.str()) && ok;
  }
  if (c.plot && !svg.str().empty()) {
    const std::string path = c.plot->empty() ? command + ".svg" : *c.plot;
    ok = write_file(path, svg.str()) && ok;
  }
  if (s == SICNN_FAIL) std::cerr << "sicnn: " << command << " failed: " << sicnn_last_error() << "\n";
  if (!ok) return kConfig;
  return exit_for(s);
}

void add_common(CLI::App* sub, Common& c, bool outputs) {
  sub->add_option("--preset", c.preset, "Bundled configuration (example6)");
  sub->add_option("--config", c.config, "JSON configuration file")->check(CLI::ExistingFile);
  sub->add_option("--set", c.sets, "Override a config value: path=value (repeatable)");
  sub->add_option("--report", c.report, "Write the report to this file instead of standard output");
  sub->add_option("--step", c.h, "Integrator substep h");
  sub->add_option("--quadrature", c.quadrature, "trapezoid or simpson")->check(CLI::IsMember({"trapezoid", "simpson"}));
  sub->add_option("--seed", c.seed, "Seed for sampling checks");
  if (outputs) {
    sub->add_option("--out", c.out, "CSV output path (default <command>.csv)");
    sub->add_option("--plot", c.plot, "Write an SVG plot (default <command>.svg)")->expected(0, 1);
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shunting inhibitory CNNs with piecewise constant argument: certification, simulation and analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sicnn_version()));

  Common common;
  std::map<std::string, Flags> flags;

  auto* check = app.add_subcommand("check", "Evaluate the smallness and spacing conditions");
  add_common(check, common, false);
  check->add_option("--samples", flags["check"]["check.validate_samples"], "Samples for the M and L check (0 skips)")->type_name("INT");

  auto* simulate = app.add_subcommand("simulate", "Solve the initial value problem and write CSV (and SVG)");
  add_common(simulate, common, true);
  simulate->add_option("--t-end", flags["simulate"]["simulate.t_end"], "End time");
  simulate->add_option("--stride", flags["simulate"]["simulate.stride"], "CSV sampling step");
  simulate->add_option("--sigma", flags["simulate"]["initial.sigma"], "Initial moment");

  auto* ap = app.add_subcommand("ap", "Approximate the bounded (almost periodic) solution on [t0, t1]");
  add_common(ap, common, true);
  ap->add_option("--t0", flags["ap"]["ap.t0"], "Window start");
  ap->add_option("--t1", flags["ap"]["ap.t1"], "Window end");
  ap->add_option("--accuracy", flags["ap"]["ap.accuracy"], "Target distance to the bounded solution");
  ap->add_option("--stride", flags["ap"]["ap.stride"], "CSV sampling step");

  auto* stability = app.add_subcommand("stability", "Compare a perturbed run against the exponential envelope");
  add_common(stability, common, true);
  stability->add_option("--delta", flags["stability"]["stability.delta"], "Uniform perturbation of the initial data");
  stability->add_option("--horizon", flags["stability"]["stability.horizon"], "Length of the comparison");
  stability->add_option("--sigma", flags["stability"]["initial.sigma"], "Initial moment");

  auto* scan = app.add_subcommand("scan", "Search eps-translation numbers of the bounded solution");
  add_common(scan, common, true);
  scan->add_option("--eps", flags["scan"]["scan.eps"], "Tolerance");
  scan->add_option("--alpha-min", flags["scan"]["scan.alpha_min"], "Smallest shift");
  scan->add_option("--alpha-max", flags["scan"]["scan.alpha_max"], "Largest shift");
  scan->add_option("--alpha-step", flags["scan"]["scan.alpha_step"], "Shift grid step");
  scan->add_option("--window-start", flags["scan"]["scan.window_start"], "Comparison window start");
  scan->add_option("--window-end", flags["scan"]["scan.window_end"], "Comparison window end");
  scan->add_option("--refine", flags["scan"]["scan.refine"], "Samples per shift step")->type_name("INT");
  scan->add_option("--accuracy", flags["scan"]["scan.accuracy"], "Accuracy of the bounded solution");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfig;
  }

  for (auto* sub : app.get_subcommands()) return run(sub->get_name(), common, flags[sub->get_name()]);
  return kConfig;
}
