#include "sicnn/config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <map>
#include <sstream>

#include "sicnn/errors.hpp"

namespace sicnn {

using nlohmann::json;

namespace {

constexpr const char* kExample6 = R"({
  "name": "example6",
  "network": {
    "rows": 3,
    "cols": 3,
    "radius": 1,
    "tau": 0.3,
    "a": [[9, 3, 5], [6, 5, 4], [3, 12, 9]],
    "C": [[0.08, 0.01, 0.02], [0.05, 0.03, 0.06], [0.04, 0.07, 0.02]],
    "inputs": [
      [
        [{"amplitude": 0.1, "frequency": 1, "wave": "cos"}, {"amplitude": 0.2, "frequency": 1.4142135623730951, "wave": "sin"}],
        [{"amplitude": 0.2, "frequency": 3.141592653589793, "wave": "cos"}, {"amplitude": 0.1, "frequency": 1.4142135623730951, "wave": "sin"}],
        [{"amplitude": 0.15, "frequency": 2, "wave": "cos"}, {"amplitude": -0.12, "frequency": 3.141592653589793, "wave": "cos"}]
      ],
      [
        [{"amplitude": 0.15, "frequency": 3, "wave": "cos"}, {"amplitude": -0.1, "frequency": 3.141592653589793, "wave": "sin"}],
        [{"amplitude": 0.2, "frequency": 1, "wave": "cos"}, {"amplitude": -0.15, "frequency": 1.4142135623730951, "wave": "sin"}],
        [{"amplitude": 0.1, "frequency": 1, "wave": "sin"}, {"amplitude": 0.2, "frequency": 1.7320508075688772, "wave": "cos"}]
      ],
      [
        [{"amplitude": 0.2, "frequency": 1.4142135623730951, "wave": "cos"}, {"amplitude": 0.14, "frequency": 3.141592653589793, "wave": "sin"}],
        [{"amplitude": 0.2, "frequency": 1.4142135623730951, "wave": "cos"}, {"amplitude": 0.1, "frequency": 1, "wave": "sin"}],
        [{"amplitude": 0.15, "frequency": 1.4142135623730951, "wave": "cos"}, {"amplitude": -0.13, "frequency": 4, "wave": "cos"}]
      ]
    ]
  },
  "schedule": {
    "kind": "example6",
    "p_range": [-10000, 10000],
    "theta_bar": 1.5,
    "theta_under": 0.5,
    "zeta_under": 0.5
  },
  "activation": {
    "kind": "pointwise_on_gamma_delayed",
    "rule": {"kind": "capped_quadratic", "threshold": 0.1},
    "M": 0.005,
    "L": 0.1
  },
  "initial": {
    "sigma": 0.25,
    "phi": [[-0.025, 0.036, -0.014], [0.012, -0.021, 0.042], [0.023, -0.015, 0.012]]
  }
})";

std::string join_path(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

// Object reader that rejects unknown keys up front.
class Section {
public:
  Section(const json& j, std::string path, std::initializer_list<const char*> allowed) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw ConfigError(where() + "expected an object");
    for (const auto& [key, _] : j.items()) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) throw ConfigError(where() + "unknown key '" + key + "'");
    }
  }

  [[nodiscard]] bool has(const char* key) const { return j_.contains(key) && !j_.at(key).is_null(); }
  [[nodiscard]] const json& at(const char* key) const {
    if (!has(key)) throw ConfigError(where() + "missing key '" + key + "'");
    return j_.at(key);
  }
  [[nodiscard]] std::string path(const char* key) const { return join_path(path_, key); }

  [[nodiscard]] double number(const char* key) const { return as_number(at(key), path(key)); }
  [[nodiscard]] double number(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }
  [[nodiscard]] std::optional<double> optional_number(const char* key) const {
    if (!has(key)) return std::nullopt;
    return number(key);
  }
  [[nodiscard]] std::int64_t integer(const char* key) const { return as_integer(at(key), path(key)); }
  [[nodiscard]] std::int64_t integer(const char* key, std::int64_t fallback) const {
    return has(key) ? integer(key) : fallback;
  }
  [[nodiscard]] std::string string(const char* key) const {
    const json& v = at(key);
    if (!v.is_string()) throw ConfigError(path(key) + ": expected a string");
    return v.get<std::string>();
  }
  [[nodiscard]] std::string string(const char* key, const std::string& fallback) const {
    return has(key) ? string(key) : fallback;
  }

  static double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(path + ": expected a finite number");
    return x;
  }
  static std::int64_t as_integer(const json& v, const std::string& path) {
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) {
      const double x = v.get<double>();
      if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9e15) return std::int64_t(x);
    }
    throw ConfigError(path + ": expected an integer");
  }

private:
  [[nodiscard]] std::string where() const { return path_.empty() ? "config: " : path_ + ": "; }

  const json& j_;
  std::string path_;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

// A rows x cols field given as nested rows or as one flat row-major list.
std::vector<const json*> grid_items(const json& v, int rows, int cols, const std::string& path) {
  require(v.is_array(), path + ": expected an array");
  const std::size_t n = std::size_t(rows) * std::size_t(cols);
  std::vector<const json*> out;
  const bool nested = v.size() == std::size_t(rows) && std::all_of(v.begin(), v.end(), [&](const json& r) {
                        return r.is_array() && r.size() == std::size_t(cols);
                      });
  if (nested) {
    for (const auto& r : v)
      for (const auto& x : r) out.push_back(&x);
    return out;
  }
  if (v.size() == n) {
    for (const auto& x : v) out.push_back(&x);
    return out;
  }
  std::ostringstream os;
  os << path << ": expected " << rows << " rows of " << cols << " entries or a flat list of " << n;
  throw ConfigError(os.str());
}

std::vector<double> grid_numbers(const json& v, int rows, int cols, const std::string& path) {
  // A scalar stands for the same value on every cell.
  if (v.is_number()) return std::vector<double>(std::size_t(rows) * std::size_t(cols), Section::as_number(v, path));
  std::vector<double> out;
  for (const json* x : grid_items(v, rows, cols, path)) out.push_back(Section::as_number(*x, path));
  return out;
}

InputTerm parse_term(const json& j, const std::string& path) {
  Section s(j, path, {"amplitude", "frequency", "phase", "wave"});
  InputTerm t;
  t.amplitude = s.number("amplitude");
  t.angular_frequency = s.number("frequency", 0.0);
  t.phase = s.number("phase", 0.0);
  const std::string wave = s.string("wave", "sin");
  if (wave == "sin")
    t.wave = Wave::sine;
  else if (wave == "cos")
    t.wave = Wave::cosine;
  else
    throw ConfigError(s.path("wave") + ": expected \"sin\" or \"cos\"");
  return t;
}

InputSignal parse_input(const json& j, const std::string& path) {
  if (j.is_number()) {
    // constant input
    const double c = Section::as_number(j, path);
    return InputSignal(std::vector<InputTerm>{InputTerm{c, 0.0, 0.0, Wave::cosine}});
  }
  if (j.is_object() && j.contains("amplitude")) return InputSignal(std::vector<InputTerm>{parse_term(j, path)});
  std::vector<InputTerm> terms;
  std::optional<double> bound;
  const json* list = &j;
  if (j.is_object()) {
    Section s(j, path, {"terms", "bound"});
    list = &s.at("terms");
    bound = s.optional_number("bound");
  }
  require(list->is_array(), path + ": expected a list of terms, an object with \"terms\", or a number");
  for (std::size_t k = 0; k < list->size(); ++k) terms.push_back(parse_term((*list)[k], path + "[" + std::to_string(k) + "]"));
  try {
    return InputSignal(std::move(terms), bound);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::pair<int, int> parse_cell(const json& v, int rows, int cols, const std::string& path) {
  require(v.is_array() && v.size() == 2, path + ": expected [row, col] (one-based)");
  const auto r = Section::as_integer(v[0], path), c = Section::as_integer(v[1], path);
  require(r >= 1 && r <= rows && c >= 1 && c <= cols, path + ": cell outside the grid");
  return {int(r - 1), int(c - 1)};
}

NetworkSpec parse_network(const json& j) {
  Section s(j, "network", {"rows", "cols", "radius", "tau", "a", "C", "couplings", "inputs"});
  const auto rows64 = s.integer("rows"), cols64 = s.integer("cols");
  require(rows64 >= 1 && cols64 >= 1 && rows64 <= 10000 && cols64 <= 10000, "network: rows and cols must be in [1, 10000]");
  const int rows = int(rows64), cols = int(cols64);
  const auto radius = s.integer("radius", 1);
  require(radius >= 0, "network.radius: must be non-negative");
  const double tau = s.number("tau", 0.0);
  require(tau >= 0.0, "network.tau: must be non-negative");
  std::vector<double> decay = grid_numbers(s.at("a"), rows, cols, s.path("a"));

  const std::size_t n = std::size_t(rows) * std::size_t(cols);
  std::vector<InputSignal> inputs;
  if (s.has("inputs")) {
    const json& v = s.at("inputs");
    const std::string p = s.path("inputs");
    require(v.is_array() || v.is_number(), p + ": expected an array or a number");
    // a number is a constant input on every cell; a single-cell network may list its terms directly
    std::vector<const json*> items;
    if (v.is_number())
      items.assign(n, &v);
    else if (n == 1 && !v.empty() && v[0].is_object() && v[0].contains("amplitude"))
      items.push_back(&v);
    else
      items = grid_items(v, rows, cols, p);
    for (std::size_t i = 0; i < items.size(); ++i) inputs.push_back(parse_input(*items[i], p + "[" + std::to_string(i) + "]"));
  } else {
    inputs.assign(n, InputSignal(std::vector<InputTerm>{}));
  }

  require(s.has("C") != s.has("couplings"), "network: give exactly one of \"C\" and \"couplings\"");
  try {
    if (s.has("C")) {
      std::vector<double> w = grid_numbers(s.at("C"), rows, cols, s.path("C"));
      return NetworkSpec::with_cell_weights(rows, cols, int(radius), std::move(decay), std::move(w), std::move(inputs), tau);
    }
    // explicit C_ij^kl entries; absent pairs are zero
    const json& list = s.at("couplings");
    require(list.is_array(), "network.couplings: expected an array");
    std::map<std::pair<std::size_t, std::size_t>, double> table;
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string p = "network.couplings[" + std::to_string(k) + "]";
      Section e(list[k], p, {"target", "source", "weight"});
      const auto [tr, tc] = parse_cell(e.at("target"), rows, cols, e.path("target"));
      const auto [sr, sc] = parse_cell(e.at("source"), rows, cols, e.path("source"));
      require(std::abs(tr - sr) <= radius && std::abs(tc - sc) <= radius, p + ": source outside the neighbourhood of target");
      const auto key = std::pair{std::size_t(tr) * std::size_t(cols) + std::size_t(tc), std::size_t(sr) * std::size_t(cols) + std::size_t(sc)};
      require(!table.contains(key), p + ": duplicate target/source pair");
      table[key] = e.number("weight");
    }
    auto rule = [table = std::move(table), cols](Cell t, Cell src) {
      const auto it = table.find({std::size_t(t.row) * std::size_t(cols) + std::size_t(t.col), std::size_t(src.row) * std::size_t(cols) + std::size_t(src.col)});
      return it == table.end() ? 0.0 : it->second;
    };
    return NetworkSpec(rows, cols, int(radius), std::move(decay), rule, std::move(inputs), tau);
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    throw ConfigError(what.rfind("network", 0) == 0 ? what : "network: " + what);
  }
}

IndexRange parse_range(const Section& s, IndexRange fallback) {
  if (!s.has("p_range")) return fallback;
  const json& v = s.at("p_range");
  require(v.is_array() && v.size() == 2, s.path("p_range") + ": expected [first, last]");
  IndexRange r{Section::as_integer(v[0], s.path("p_range")), Section::as_integer(v[1], s.path("p_range"))};
  require(r.first < r.last, s.path("p_range") + ": first must be below last");
  require(r.size() <= 10000001, s.path("p_range") + ": at most 10^7 indices");
  return r;
}

std::vector<double> number_list(const json& v, const std::string& path) {
  require(v.is_array(), path + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(Section::as_number(x, path));
  return out;
}

std::pair<GammaSchedule, DeclaredSpacing> parse_schedule(const json& j) {
  Section s(j, "schedule",
            {"kind", "p_range", "a", "b", "c", "theta", "zeta", "first_index", "theta_bar", "theta_under", "zeta_under"});
  const std::string kind = s.string("kind");
  DeclaredSpacing declared{s.optional_number("theta_bar"), s.optional_number("theta_under"),
                           s.optional_number("zeta_under")};
  auto reject = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys)
      if (s.has(k)) throw ConfigError(s.path(k) + ": not used by schedule kind '" + kind + "'");
  };
  try {
    if (kind == "example6") {
      reject({"a", "b", "c", "theta", "zeta", "first_index"});
      return {GammaSchedule::example6(parse_range(s, {-10000, 10000})), declared};
    }
    if (kind == "affine") {
      reject({"theta", "zeta", "first_index"});
      const double a = s.number("a", 1.0), b = s.number("b", 0.0), c = s.number("c", 0.0);
      return {GammaSchedule::affine(a, b, c, parse_range(s, {-10000, 10000})), declared};
    }
    if (kind == "table") {
      reject({"a", "b", "c", "p_range"});
      std::vector<double> theta = number_list(s.at("theta"), s.path("theta"));
      std::vector<double> zeta = s.has("zeta") ? number_list(s.at("zeta"), s.path("zeta")) : theta;
      return {GammaSchedule::table(std::move(theta), std::move(zeta), s.integer("first_index", 0)), declared};
    }
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("schedule: ") + e.what());
  }
  throw ConfigError("schedule.kind: expected \"example6\", \"affine\" or \"table\"");
}

ScalarRule parse_rule(const json& j, const std::string& path) {
  require(j.is_object(), path + ": expected an object");
  const std::string kind = j.contains("kind") && j.at("kind").is_string() ? j.at("kind").get<std::string>() : "";
  if (kind == "capped_quadratic") {
    Section s(j, path, {"kind", "threshold"});
    const double th = s.number("threshold");
    require(th > 0.0, s.path("threshold") + ": must be positive");
    return ScalarRule::capped_quadratic(th);
  }
  if (kind == "clipped_linear") {
    Section s(j, path, {"kind", "slope", "cap"});
    const double cap = s.number("cap");
    require(cap > 0.0, s.path("cap") + ": must be positive");
    return ScalarRule::clipped_linear(s.number("slope"), cap);
  }
  if (kind == "constant") {
    Section s(j, path, {"kind", "value"});
    return ScalarRule::constant(s.number("value"));
  }
  if (kind == "tanh") {
    Section s(j, path, {"kind", "amplitude", "gain"});
    return ScalarRule::hyperbolic(s.number("amplitude"), s.number("gain"));
  }
  throw ConfigError(path + ".kind: expected capped_quadratic, clipped_linear, constant or tanh");
}

Activation parse_activation(const json& j) {
  Section s(j, "activation", {"kind", "rule", "rule_gamma", "lag", "weight_t", "weight_gamma", "decay", "M", "L"});
  const std::string name = s.string("kind");
  const auto kind = activation_kind_from_string(name);
  if (!kind) throw ConfigError("activation.kind: unknown kind '" + name + "'");
  const double M = s.number("M"), L = s.number("L");
  const double lag = s.number("lag", -1.0);
  auto reject = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys)
      if (s.has(k)) throw ConfigError(s.path(k) + ": not used by activation kind '" + name + "'");
  };
  switch (*kind) {
  case ActivationKind::pointwise_on_gamma_delayed:
  case ActivationKind::pointwise_on_gamma:
  case ActivationKind::pointwise_on_delay:
    reject({"rule_gamma", "weight_t", "weight_gamma", "decay"});
    return Activation::pointwise(*kind, parse_rule(s.at("rule"), s.path("rule")), M, L, lag);
  case ActivationKind::two_point:
    reject({"weight_t", "weight_gamma", "decay"});
    return Activation::two_point(parse_rule(s.at("rule"), s.path("rule")),
                                 parse_rule(s.at("rule_gamma"), s.path("rule_gamma")), M, L, lag);
  case ActivationKind::segment_integral:
    reject({"rule_gamma", "lag"});
    return Activation::segment_integral(parse_rule(s.at("rule"), s.path("rule")), s.number("weight_t", 1.0),
                                        s.number("weight_gamma", 0.0), s.number("decay", 0.0), M, L);
  case ActivationKind::custom:
    break;
  }
  throw ConfigError("activation.kind: custom activations are installed through the library API, not the config");
}

IvpSetup parse_initial(const json* j, const NetworkSpec& net) {
  IvpSetup setup;
  setup.phi = InitialSegment::zero(net.size());
  if (!j) return setup;
  Section s(*j, "initial", {"sigma", "phi", "psi"});
  setup.sigma = s.number("sigma", 0.0);
  if (s.has("phi")) setup.phi = InitialSegment::constant(grid_numbers(s.at("phi"), net.rows(), net.cols(), s.path("phi")));
  if (s.has("psi")) setup.psi = InitialSegment::constant(grid_numbers(s.at("psi"), net.rows(), net.cols(), s.path("psi")));
  return setup;
}

SolverOptions parse_solver(const json* j) {
  SolverOptions o;
  if (!j) return o;
  Section s(*j, "solver", {"h", "picard_tol", "picard_max_iters", "quadrature"});
  o.h = s.number("h", 0.0);
  require(o.h >= 0.0, "solver.h: must be non-negative (0 selects the default)");
  o.picard_tol = s.number("picard_tol", o.picard_tol);
  require(o.picard_tol > 0.0, "solver.picard_tol: must be positive");
  const auto iters = s.integer("picard_max_iters", o.picard_max_iters);
  require(iters >= 1 && iters <= 100000, "solver.picard_max_iters: must be in [1, 100000]");
  o.picard_max_iters = int(iters);
  const std::string q = s.string("quadrature", "trapezoid");
  if (q == "trapezoid")
    o.quadrature = Quadrature::trapezoid;
  else if (q == "simpson")
    o.quadrature = Quadrature::simpson;
  else
    throw ConfigError("solver.quadrature: expected \"trapezoid\" or \"simpson\"");
  return o;
}

const json* section(const json& doc, const char* key) {
  return doc.contains(key) && !doc.at(key).is_null() ? &doc.at(key) : nullptr;
}

void check_coverage(const GammaSchedule& sched, double from, double to, const std::string& what) {
  if (from < sched.t_min() || to >= sched.t_max()) {
    std::ostringstream os;
    os.precision(10);
    os << what << ": needs times [" << from << ", " << to << "] but the schedule covers [" << sched.t_min() << ", "
       << sched.t_max() << ")";
    throw ConfigError(os.str());
  }
}

} // namespace

RunConfig parse_config(const json& doc) {
  Section top(doc, "", {"name", "network", "schedule", "activation", "initial", "solver", "check", "simulate", "ap",
                        "stability", "scan", "seed"});
  if (top.has("name")) (void)top.string("name");

  NetworkSpec net = parse_network(top.at("network"));
  auto [schedule, declared] = parse_schedule(top.at("schedule"));
  Activation act = parse_activation(top.at("activation"));
  RunConfig cfg{Model{std::move(net), std::move(schedule), std::move(act), declared}, {}, {}, {}, {}, {}, {}, {}, 1, doc};
  const Model& model = cfg.model;
  const auto& sched = model.schedule;

  // Declarations must be usable numbers; their consistency with the scan is reported by check.
  for (auto [v, key] : {std::pair{declared.theta_bar, "theta_bar"}, std::pair{declared.theta_under, "theta_under"}})
    if (v) require(*v > 0.0, std::string("schedule.") + key + ": must be positive");

  cfg.initial = parse_initial(section(doc, "initial"), model.network);
  check_coverage(sched, cfg.initial.sigma, cfg.initial.sigma, "initial.sigma");
  cfg.initial.validate(model);
  cfg.solver = parse_solver(section(doc, "solver"));
  (void)cfg.solver.resolved(model);

  if (const json* j = section(doc, "check")) {
    Section s(*j, "check", {"validate_samples", "validate_amplitude"});
    const auto n = s.integer("validate_samples", std::int64_t(cfg.check.validate_samples));
    require(n >= 0 && n <= 10000000, "check.validate_samples: must be in [0, 10^7]");
    cfg.check.validate_samples = std::size_t(n);
    cfg.check.validate_amplitude = s.number("validate_amplitude", cfg.check.validate_amplitude);
    require(cfg.check.validate_amplitude > 0.0, "check.validate_amplitude: must be positive");
  }
  if (const json* j = section(doc, "simulate")) {
    Section s(*j, "simulate", {"t_end", "stride"});
    cfg.simulate.t_end = s.number("t_end", cfg.simulate.t_end);
    cfg.simulate.stride = s.number("stride", cfg.simulate.stride);
  }
  require(cfg.simulate.t_end > cfg.initial.sigma, "simulate.t_end: must exceed initial.sigma");
  require(cfg.simulate.stride > 0.0, "simulate.stride: must be positive");
  if (const json* j = section(doc, "ap")) {
    Section s(*j, "ap", {"t0", "t1", "accuracy", "stride"});
    cfg.ap.t0 = s.number("t0", cfg.ap.t0);
    cfg.ap.t1 = s.number("t1", cfg.ap.t1);
    cfg.ap.accuracy = s.number("accuracy", cfg.ap.accuracy);
    cfg.ap.stride = s.number("stride", cfg.ap.stride);
  }
  require(cfg.ap.t1 > cfg.ap.t0, "ap.t1: must exceed ap.t0");
  require(cfg.ap.accuracy > 0.0, "ap.accuracy: must be positive");
  require(cfg.ap.stride > 0.0, "ap.stride: must be positive");
  if (const json* j = section(doc, "stability")) {
    Section s(*j, "stability", {"delta", "horizon"});
    cfg.stability.delta = s.number("delta", cfg.stability.delta);
    cfg.stability.horizon = s.number("horizon", cfg.stability.horizon);
  }
  require(cfg.stability.delta > 0.0, "stability.delta: must be positive");
  require(cfg.stability.horizon > 0.0, "stability.horizon: must be positive");
  if (const json* j = section(doc, "scan")) {
    Section s(*j, "scan", {"eps", "alpha_min", "alpha_max", "alpha_step", "window_start", "window_end", "refine", "accuracy"});
    cfg.scan.eps = s.number("eps", cfg.scan.eps);
    cfg.scan.alpha_min = s.number("alpha_min", cfg.scan.alpha_min);
    cfg.scan.alpha_max = s.number("alpha_max", cfg.scan.alpha_max);
    cfg.scan.alpha_step = s.number("alpha_step", cfg.scan.alpha_step);
    cfg.scan.window_start = s.number("window_start", cfg.scan.window_start);
    cfg.scan.window_end = s.number("window_end", cfg.scan.window_end);
    const auto refine = s.integer("refine", cfg.scan.refine);
    require(refine >= 1 && refine <= 1000, "scan.refine: must be in [1, 1000]");
    cfg.scan.refine = int(refine);
    cfg.scan.accuracy = s.number("accuracy", cfg.scan.accuracy);
  }
  require(cfg.scan.eps > 0.0, "scan.eps: must be positive");
  require(cfg.scan.alpha_step > 0.0, "scan.alpha_step: must be positive");
  require(cfg.scan.alpha_max >= cfg.scan.alpha_min, "scan.alpha_max: must not be below alpha_min");
  require(cfg.scan.window_end > cfg.scan.window_start, "scan.window_end: must exceed window_start");
  require(cfg.scan.accuracy > 0.0, "scan.accuracy: must be positive");
  require((cfg.scan.alpha_max - cfg.scan.alpha_min) / cfg.scan.alpha_step <= 1e7, "scan: too many alpha values");

  if (top.has("seed")) {
    const auto seed = top.integer("seed");
    require(seed >= 0, "seed: must be non-negative");
    cfg.seed = std::uint64_t(seed);
  }
  return cfg;
}

RunConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: not a valid JSON document: ") + e.what());
  }
  return parse_config(doc);
}

json preset(const std::string& name) {
  if (name == "example6") return json::parse(kExample6);
  throw ConfigError("unknown preset '" + name + "' (available: example6)");
}

std::vector<std::string> preset_names() { return {"example6"}; }

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "': expected path=value");
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &doc;
  std::size_t pos = 0;
  while (true) {
    const auto dot = path.find('.', pos);
    const std::string key = path.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    if (key.empty()) throw ConfigError("override '" + assignment + "': empty path component");
    json* child = nullptr;
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        std::size_t used = 0;
        idx = std::stoul(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        throw ConfigError("override '" + assignment + "': '" + key + "' is not an array index");
      }
      if (idx >= node->size()) throw ConfigError("override '" + assignment + "': index " + key + " out of range");
      child = &(*node)[idx];
    } else {
      if (node->is_null()) *node = json::object();
      if (!node->is_object()) throw ConfigError("override '" + assignment + "': '" + key + "' lies inside a scalar");
      child = &(*node)[key];
    }
    if (dot == std::string::npos) {
      *child = std::move(value);
      return;
    }
    node = child;
    pos = dot + 1;
  }
}

Model Model::example6(Index range) {
  json doc = preset("example6");
  doc["schedule"]["p_range"] = json::array({-range, range});
  return parse_config(doc).model;
}

} // namespace sicnn
