#include "sicnn/sicnn.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <string>

#include "sicnn/analysis.hpp"
#include "sicnn/commands.hpp"
#include "sicnn/config.hpp"
#include "sicnn/errors.hpp"
#include "sicnn/output.hpp"
#include "sicnn/report.hpp"

struct sicnn_model {
  sicnn::RunConfig config;
};

struct sicnn_trajectory {
  sicnn::Trajectory traj;
  sicnn::Model model;
  std::vector<std::string> names;
};

namespace {

thread_local std::string last_error;

sicnn_status fail(sicnn_status code, const char* what) {
  last_error = what;
  return code;
}

template <class F>
sicnn_status guard(F&& f) {
  last_error.clear();
  try {
    return f();
  } catch (const sicnn::ConfigError& e) {
    return fail(SICNN_ERR_CONFIG, e.what());
  } catch (const sicnn::SolverError& e) {
    return fail(SICNN_ERR_SOLVER, e.what());
  } catch (const sicnn::RangeError& e) {
    return fail(SICNN_ERR_RANGE, e.what());
  } catch (const sicnn::ArgumentError& e) {
    return fail(SICNN_ERR_ARGUMENT, e.what());
  } catch (const sicnn::CertificationError& e) {
    return fail(SICNN_FAIL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SICNN_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SICNN_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SICNN_ERR_INTERNAL, "unknown error");
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void need(const void* p, const char* what) {
  if (!p) throw sicnn::ArgumentError(std::string(what) + " must not be null");
}

sicnn_trajectory* wrap(sicnn::Trajectory traj, const sicnn::Model& model) {
  return new sicnn_trajectory{std::move(traj), model, sicnn::cell_names(model.network)};
}

} // namespace

extern "C" {

const char* sicnn_version(void) { return "1.0.0"; }

const char* sicnn_last_error(void) { return last_error.c_str(); }

void sicnn_string_free(char* s) { std::free(s); }

sicnn_status sicnn_preset_json(const char* name, char** out_json) {
  return guard([&] {
    need(name, "name");
    need(out_json, "out_json");
    *out_json = dup(sicnn::preset(name).dump(2));
    return SICNN_OK;
  });
}

sicnn_status sicnn_config_override(const char* config_json, const char* assignment, char** out_json) {
  return guard([&] {
    need(config_json, "config_json");
    need(assignment, "assignment");
    need(out_json, "out_json");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(config_json);
    } catch (const nlohmann::json::parse_error& e) {
      throw sicnn::ConfigError(std::string("config: not a valid JSON document: ") + e.what());
    }
    sicnn::apply_override(doc, assignment);
    *out_json = dup(doc.dump(2));
    return SICNN_OK;
  });
}

sicnn_status sicnn_model_create(const char* config_json, sicnn_model** out) {
  return guard([&] {
    need(config_json, "config_json");
    need(out, "out");
    *out = nullptr;
    *out = new sicnn_model{sicnn::parse_config_text(config_json)};
    return SICNN_OK;
  });
}

sicnn_status sicnn_model_from_preset(const char* name, sicnn_model** out) {
  return guard([&] {
    need(name, "name");
    need(out, "out");
    *out = nullptr;
    *out = new sicnn_model{sicnn::parse_config(sicnn::preset(name))};
    return SICNN_OK;
  });
}

void sicnn_model_free(sicnn_model* model) { delete model; }

sicnn_status sicnn_model_grid(const sicnn_model* model, int* rows, int* cols) {
  return guard([&] {
    need(model, "model");
    if (rows) *rows = model->config.model.network.rows();
    if (cols) *cols = model->config.model.network.cols();
    return SICNN_OK;
  });
}

sicnn_status sicnn_model_cell_name(const sicnn_model* model, size_t cell, char** out) {
  return guard([&] {
    need(model, "model");
    need(out, "out");
    if (cell >= model->config.model.network.size()) throw sicnn::RangeError("cell index outside the grid");
    *out = dup(model->config.model.network.cell_name(cell));
    return SICNN_OK;
  });
}

sicnn_status sicnn_model_constants(const sicnn_model* model, sicnn_constants* out) {
  return guard([&] {
    need(model, "model");
    need(out, "out");
    const auto& m = model->config.model;
    const auto k = m.constants();
    *out = sicnn_constants{k.mu,
                           k.c_bar,
                           k.d_bar,
                           k.L_bar,
                           k.l_bar,
                           k.gamma0,
                           k.H ? *k.H : std::numeric_limits<double>::quiet_NaN(),
                           k.H ? 1 : 0,
                           k.theta_bar,
                           k.theta_under,
                           k.zeta_under,
                           m.activation.M(),
                           m.activation.L(),
                           m.network.tau()};
    return SICNN_OK;
  });
}

sicnn_status sicnn_model_coupling_sums(const sicnn_model* model, double* out, size_t n) {
  return guard([&] {
    need(model, "model");
    need(out, "out");
    const auto& net = model->config.model.network;
    if (n != net.size()) throw sicnn::ArgumentError("output length must equal rows * cols");
    for (std::size_t i = 0; i < n; ++i) out[i] = net.coupling_sum(i);
    return SICNN_OK;
  });
}

sicnn_status sicnn_model_set_activation(sicnn_model* model, sicnn_activation_fn fn, void* user, size_t samples,
                                        double M, double L) {
  return guard([&] {
    need(model, "model");
    if (!fn) throw sicnn::ArgumentError("fn must not be null");
    if (samples < 2 || samples > 100000) throw sicnn::ArgumentError("samples must be in [2, 100000]");
    auto custom = [fn, user, samples](sicnn::SegmentView a, sicnn::SegmentView b) {
      std::vector<double> xa(samples), xb(samples);
      const double tau = a.tau();
      for (std::size_t k = 0; k < samples; ++k) {
        const double s = -tau + tau * double(k) / double(samples - 1);
        xa[k] = a(s);
        xb[k] = b(s);
      }
      return fn(user, xa.data(), xb.data(), samples, tau);
    };
    model->config.model.activation = sicnn::Activation::custom(custom, M, L, "callback");
    return SICNN_OK;
  });
}

sicnn_status sicnn_gamma(const sicnn_model* model, double t, double* out) {
  return guard([&] {
    need(model, "model");
    need(out, "out");
    *out = model->config.model.schedule.gamma(t);
    return SICNN_OK;
  });
}

sicnn_status sicnn_interval_index(const sicnn_model* model, double t, int64_t* out) {
  return guard([&] {
    need(model, "model");
    need(out, "out");
    *out = model->config.model.schedule.interval_index(t);
    return SICNN_OK;
  });
}

sicnn_status sicnn_theta(const sicnn_model* model, int64_t p, double* theta, double* zeta) {
  return guard([&] {
    need(model, "model");
    const auto& s = model->config.model.schedule;
    const double th = s.theta(p), ze = s.zeta(p);
    if (theta) *theta = th;
    if (zeta) *zeta = ze;
    return SICNN_OK;
  });
}

sicnn_status sicnn_check(const sicnn_model* model, char** report_json, int* all_pass) {
  return guard([&] {
    need(model, "model");
    const auto rep = model->config.model.conditions();
    if (report_json) *report_json = dup(sicnn::to_json(rep).dump(2));
    if (all_pass) *all_pass = rep.all_pass() ? 1 : 0;
    return SICNN_OK;
  });
}

sicnn_status sicnn_simulate(const sicnn_model* model, double t_end, sicnn_trajectory** out) {
  return guard([&] {
    need(model, "model");
    need(out, "out");
    *out = nullptr;
    const auto& c = model->config;
    *out = wrap(sicnn::solve_ivp(c.model, c.initial, t_end, c.solver), c.model);
    return SICNN_OK;
  });
}

sicnn_status sicnn_solve(const sicnn_model* model, double sigma, const double* phi, const double* psi, size_t n,
                         double t_end, sicnn_trajectory** out) {
  return guard([&] {
    need(model, "model");
    need(phi, "phi");
    need(out, "out");
    *out = nullptr;
    const auto& c = model->config;
    if (n != c.model.network.size()) throw sicnn::ArgumentError("initial data length must equal rows * cols");
    sicnn::IvpSetup setup;
    setup.sigma = sigma;
    setup.phi = sicnn::InitialSegment::constant(std::vector<double>(phi, phi + n));
    if (psi) setup.psi = sicnn::InitialSegment::constant(std::vector<double>(psi, psi + n));
    *out = wrap(sicnn::solve_ivp(c.model, setup, t_end, c.solver), c.model);
    return SICNN_OK;
  });
}

sicnn_status sicnn_bounded_solution(const sicnn_model* model, double t0, double t1, double accuracy,
                                    sicnn_trajectory** out, char** report_json) {
  return guard([&] {
    need(model, "model");
    need(out, "out");
    *out = nullptr;
    const auto& c = model->config;
    auto bs = sicnn::bounded_solution(c.model, t0, t1, accuracy, c.solver);
    if (report_json) {
      nlohmann::json j = {{"t0", t0},           {"t1", t1},     {"t_back", bs.t_back},
                          {"H", bs.H},          {"sup_norm", bs.sup_norm}, {"envelope_at_t0", bs.envelope_at_t0},
                          {"sigma", bs.trajectory.start()}};
      *report_json = dup(j.dump(2));
    }
    *out = wrap(std::move(bs.trajectory), c.model);
    return SICNN_OK;
  });
}

sicnn_status sicnn_trajectory_span(const sicnn_trajectory* traj, double* start, double* end) {
  return guard([&] {
    need(traj, "traj");
    if (start) *start = traj->traj.start();
    if (end) *end = traj->traj.end();
    return SICNN_OK;
  });
}

sicnn_status sicnn_trajectory_cells(const sicnn_trajectory* traj, size_t* cells) {
  return guard([&] {
    need(traj, "traj");
    need(cells, "cells");
    *cells = traj->traj.cells();
    return SICNN_OK;
  });
}

sicnn_status sicnn_trajectory_eval(const sicnn_trajectory* traj, double t, double* out, size_t n) {
  return guard([&] {
    need(traj, "traj");
    need(out, "out");
    if (n != traj->traj.cells()) throw sicnn::ArgumentError("output length must equal the number of cells");
    traj->traj.values(t, {out, n});
    return SICNN_OK;
  });
}

sicnn_status sicnn_trajectory_csv(const sicnn_trajectory* traj, double t0, double t1, double stride, char** out) {
  return guard([&] {
    need(traj, "traj");
    need(out, "out");
    *out = dup(sicnn::trajectory_csv(traj->traj, traj->names, t0, t1, stride));
    return SICNN_OK;
  });
}

sicnn_status sicnn_trajectory_svg(const sicnn_trajectory* traj, double t0, double t1, double stride,
                                  const char* title, char** out) {
  return guard([&] {
    need(traj, "traj");
    need(out, "out");
    *out = dup(sicnn::render_svg(
        sicnn::trajectory_plot(traj->traj, traj->names, t0, t1, stride, title ? title : "Solution components")));
    return SICNN_OK;
  });
}

sicnn_status sicnn_trajectory_residual(const sicnn_trajectory* traj, double t0, double t1, double* out) {
  return guard([&] {
    need(traj, "traj");
    need(out, "out");
    *out = sicnn::residual(traj->model, traj->traj, t0, t1).max_defect;
    return SICNN_OK;
  });
}

sicnn_status sicnn_trajectory_intervals(const sicnn_trajectory* traj, char** out_json) {
  return guard([&] {
    need(traj, "traj");
    need(out_json, "out_json");
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& iv : traj->traj.intervals()) arr.push_back(sicnn::to_json(iv));
    *out_json = dup(nlohmann::json{{"summary", sicnn::picard_summary(traj->traj)}, {"intervals", arr}}.dump(2));
    return SICNN_OK;
  });
}

void sicnn_trajectory_free(sicnn_trajectory* traj) { delete traj; }

sicnn_status sicnn_stability(const sicnn_model* model, double delta, double horizon, char** report_json, int* pass) {
  return guard([&] {
    need(model, "model");
    const auto& c = model->config;
    const auto rep = sicnn::stability_envelope(c.model, c.initial, delta, horizon, c.solver);
    if (report_json) *report_json = dup(sicnn::to_json(rep).dump(2));
    if (pass) *pass = rep.pass ? 1 : 0;
    return SICNN_OK;
  });
}

sicnn_status sicnn_scan(const sicnn_trajectory* traj, double eps, double alpha_min, double alpha_max,
                        double alpha_step, double window_start, double window_end, char** report_json) {
  return guard([&] {
    need(traj, "traj");
    need(report_json, "report_json");
    const auto rep =
        sicnn::translation_scan(traj->traj, eps, alpha_min, alpha_max, alpha_step, window_start, window_end);
    *report_json = dup(sicnn::to_json(rep).dump(2));
    return SICNN_OK;
  });
}

sicnn_status sicnn_run(const sicnn_model* model, const char* command, int plot, char** report_json, char** csv,
                       char** svg) {
  return guard([&] {
    need(model, "model");
    need(command, "command");
    if (report_json) *report_json = nullptr;
    if (csv) *csv = nullptr;
    if (svg) *svg = nullptr;
    const auto out = sicnn::run_command(command, model->config, plot != 0);
    if (report_json) *report_json = dup(out.report.dump(2));
    if (csv) *csv = dup(out.csv);
    if (svg) *svg = dup(out.svg);
    if (out.exit_code == sicnn::ExitCode::fail) {
      last_error = out.report.contains("error") ? out.report["error"].get<std::string>() : "check failed";
      return SICNN_FAIL;
    }
    return SICNN_OK;
  });
}

} // extern "C"
