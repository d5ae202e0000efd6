#include <doctest.h>

#include "sicnn/config.hpp"
#include "sicnn/errors.hpp"

using namespace sicnn;
using nlohmann::json;

namespace {

json scalar_doc() {
  return json::parse(R"({
    "network": {"rows": 1, "cols": 1, "a": 1, "C": 0.05, "inputs": 0.1},
    "schedule": {"kind": "affine", "a": 1, "b": 0, "c": 0, "p_range": [-10, 40]},
    "activation": {"kind": "pointwise_on_gamma", "rule": {"kind": "clipped_linear", "slope": 1, "cap": 1}, "M": 1, "L": 1},
    "initial": {"sigma": 0, "phi": 0.5}
  })");
}

RunConfig with(json doc, const std::string& assignment) {
  apply_override(doc, assignment);
  return parse_config(doc);
}

} // namespace

TEST_CASE("the bundled preset parses") {
  const auto cfg = parse_config(preset("example6"));
  CHECK(cfg.model.network.rows() == 3);
  CHECK(cfg.model.network.tau() == 0.3);
  CHECK(cfg.initial.sigma == 0.25);
  CHECK(cfg.model.activation.M() == 0.005);
  CHECK(cfg.model.activation.L() == 0.1);
  CHECK(cfg.model.declared.theta_bar == 1.5);
  CHECK(cfg.model.constants().mu == doctest::Approx(0.38));
  CHECK(cfg.model.network.input(0)(0.0) == doctest::Approx(0.1));
  CHECK(cfg.model.network.input(0).bound() == doctest::Approx(0.3));
  CHECK(preset_names() == std::vector<std::string>{"example6"});
  CHECK_THROWS_AS((void)preset("example7"), ConfigError);
}

TEST_CASE("unknown keys and wrong types are rejected") {
  const json base = preset("example6");
  CHECK_THROWS_AS(with(base, "network.bogus=1"), ConfigError);
  CHECK_THROWS_AS(with(base, "extra=1"), ConfigError);
  CHECK_THROWS_AS(with(base, "network.tau=\"slow\""), ConfigError);
  CHECK_THROWS_AS(with(base, "network.rows=2.5"), ConfigError);
  CHECK_THROWS_AS(with(base, "network.tau=-1"), ConfigError);
  CHECK_THROWS_AS(with(base, "activation.kind=custom"), ConfigError);
  CHECK_THROWS_AS(with(base, "activation.kind=sigmoid"), ConfigError);
  CHECK_THROWS_AS(with(base, "schedule.kind=random"), ConfigError);
  CHECK_THROWS_AS(with(base, "solver.quadrature=rk4"), ConfigError);
  CHECK_THROWS_AS(with(base, "solver.h=0.5"), ConfigError);
  CHECK_THROWS_AS(with(base, "initial.sigma=1e9"), ConfigError);
  CHECK_THROWS_AS(with(base, "scan.refine=0"), ConfigError);
  CHECK_THROWS_AS(with(base, "network.a.1.1=-2"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("{not json"), ConfigError);
  json both = base;
  both["network"]["couplings"] = json::array();
  CHECK_THROWS_AS(parse_config(both), ConfigError);
}

TEST_CASE("overrides") {
  json doc = preset("example6");
  apply_override(doc, "activation.M=15");
  CHECK(doc["activation"]["M"] == 15);
  apply_override(doc, "network.a.2.1=7");
  CHECK(doc["network"]["a"][2][1] == 7);
  apply_override(doc, "name=renamed");
  CHECK(doc["name"] == "renamed");
  apply_override(doc, "solver.quadrature=simpson");
  CHECK(doc["solver"]["quadrature"] == "simpson");
  CHECK_THROWS_AS(apply_override(doc, "network.a.9.0=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(doc, "network.a.x=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(doc, "novalue"), ConfigError);
  CHECK_THROWS_AS(apply_override(doc, "activation.M.x=1"), ConfigError);
  const auto cfg = parse_config(doc);
  CHECK(cfg.model.network.decays()[7] == 7.0);
  CHECK(cfg.solver.quadrature == Quadrature::simpson);
  CHECK(cfg.document["name"] == "renamed");
}

TEST_CASE("flat and nested grids are equivalent") {
  json nested = preset("example6");
  json flat = nested;
  flat["network"]["a"] = json::array({9, 3, 5, 6, 5, 4, 3, 12, 9});
  flat["network"]["C"] = json::array({.08, .01, .02, .05, .03, .06, .04, .07, .02});
  const auto a = parse_config(nested).model.constants();
  const auto b = parse_config(flat).model.constants();
  CHECK(a.coupling_sums == b.coupling_sums);
  CHECK(*a.H == *b.H);
  flat["network"]["a"] = json::array({9, 3, 5});
  CHECK_THROWS_AS(parse_config(flat), ConfigError);
}

TEST_CASE("explicit couplings reproduce the shared layout") {
  json doc = preset("example6");
  const double C[3][3] = {{.08, .01, .02}, {.05, .03, .06}, {.04, .07, .02}};
  json list = json::array();
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      for (int k = 1; k <= 3; ++k)
        for (int l = 1; l <= 3; ++l)
          if (std::abs(i - k) <= 1 && std::abs(j - l) <= 1)
            list.push_back({{"target", {i, j}}, {"source", {k, l}}, {"weight", C[k - 1][l - 1]}});
  doc["network"].erase("C");
  doc["network"]["couplings"] = list;
  const auto explicit_sums = parse_config(doc).model.constants().coupling_sums;
  const auto shared_sums = parse_config(preset("example6")).model.constants().coupling_sums;
  for (std::size_t i = 0; i < 9; ++i) CHECK(explicit_sums[i] == doctest::Approx(shared_sums[i]).epsilon(1e-15));

  // a source outside the neighbourhood is rejected
  doc["network"]["couplings"] = json::array({{{"target", {1, 1}}, {"source", {3, 3}}, {"weight", 0.1}}});
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
}

TEST_CASE("scalar networks and table schedules") {
  const auto cfg = parse_config(scalar_doc());
  CHECK(cfg.model.network.size() == 1);
  CHECK(cfg.model.network.input(0)(3.0) == doctest::Approx(0.1));
  CHECK(cfg.model.schedule.gamma(2.7) == 2.0);

  json doc = scalar_doc();
  doc["schedule"] = json::parse(R"({"kind": "table", "theta": [0, 1, 2.5, 3], "zeta": [0.5, 2, 2.5, 3]})");
  const auto t = parse_config(doc);
  CHECK(t.model.schedule.gamma(1.2) == 2.0);
  doc["schedule"]["zeta"] = json::array({0.5, 3, 2.5, 3});
  CHECK_THROWS_AS(parse_config(doc), ConfigError);

  json terms = scalar_doc();
  terms["network"]["inputs"] = json::parse(R"([{"amplitude": 0.2, "frequency": 2, "wave": "cos"}])");
  CHECK(parse_config(terms).model.network.input(0)(0.5) == doctest::Approx(0.2 * std::cos(1.0)));
  terms["network"]["inputs"] = json::parse(R"({"terms": [{"amplitude": 0.2, "frequency": 2}], "bound": 0.1})");
  CHECK_THROWS_AS(parse_config(terms), ConfigError);
}

TEST_CASE("psi is required exactly in the second regime") {
  json doc = scalar_doc();
  doc["schedule"]["c"] = 0.5;  // zeta_p = p + 0.5
  doc["network"]["tau"] = 0.3;
  doc["activation"]["kind"] = "pointwise_on_gamma_delayed";
  doc["initial"]["sigma"] = 0.7;
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
  doc["initial"]["psi"] = 0.5;
  const auto cfg = parse_config(doc);
  REQUIRE(cfg.initial.psi.has_value());
  CHECK(cfg.initial.regime(cfg.model.schedule) == InitialRegime::ic2);
  doc["initial"]["sigma"] = 0.3;
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
}

TEST_CASE("seed and command parameters") {
  json doc = preset("example6");
  apply_override(doc, "seed=42");
  apply_override(doc, "scan.window_end=12");
  apply_override(doc, "simulate.t_end=5");
  const auto cfg = parse_config(doc);
  CHECK(cfg.seed == 42);
  CHECK(cfg.scan.window_end == 12.0);
  CHECK(cfg.simulate.t_end == 5.0);
  CHECK_THROWS_AS(with(doc, "simulate.t_end=0.1"), ConfigError);
  CHECK_THROWS_AS(with(doc, "ap.t1=-1"), ConfigError);
  CHECK_THROWS_AS(with(doc, "seed=-3"), ConfigError);
}
