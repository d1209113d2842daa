// Scenario runner, config parsing, and report serialization.  Serializer
// outputs are pinned byte for byte: the JSON form is the reproducibility
// contract, so these tests spell out exact strings rather than properties.
#include <algorithm>
#include <string>
#include <vector>

#include "doctest.h"
#include "qmeas/errors.hpp"
#include "qmeas/lab.hpp"
#include "qmeas/measure.hpp"
#include "qmeas/report.hpp"
#include "qmeas/verify.hpp"

using namespace qmeas;

namespace {

// Path reported by parse_config for a rejected document; empty when the
// document is accepted.
std::string rejected_at(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigInvalid& e) {
        return e.path;
    }
    return "";
}

LabConfig fast_config(uint64_t seed = 7) {
    LabConfig c;
    c.grid_n = 64;
    c.thresholds = 64;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_CASE("config parsing: defaults, full documents, resolved fields") {
    LabConfig d = parse_config("{}");
    CHECK(d.grid_n == 0);
    CHECK(d.thresholds == 0);
    CHECK(d.seed == 7);
    CHECK_FALSE(d.has_measures);
    CHECK(d.coefficients.empty());

    LabConfig c = parse_config(R"({
        "grid": {"n": 96},
        "thresholds": {"k": 128},
        "seed": 12345,
        "measures": {
            "x": {"variant": "point-mass", "params": {"location": [0.25, 0.75], "weight": 0.5}},
            "y": {"variant": "three-point",
                  "params": {"points": [[0.1, 0.2], [0.8, 0.3], [0.5, 0.9]]}}
        },
        "coefficients": [0, 0.5, 1]
    })");
    CHECK(c.grid_n == 96);
    CHECK(c.thresholds == 128);
    CHECK(c.seed == 12345);
    REQUIRE(c.has_measures);
    CHECK(c.x.variant == "point-mass");
    CHECK(c.x.location.x == 0.25);
    CHECK(c.x.location.y == 0.75);
    CHECK(c.x.weight == 0.5);
    CHECK(c.y.variant == "three-point");
    REQUIRE(c.y.points.size() == 3);
    CHECK(c.y.points[2].y == 0.9);
    CHECK(c.coefficients == std::vector<double>{0.0, 0.5, 1.0});

    // Omitted sub-objects keep their defaults.
    LabConfig part = parse_config(R"({"measures": {"x": {"variant": "lebesgue"}}})");
    CHECK(part.has_measures);
    CHECK(part.x.variant == "lebesgue");
    CHECK(part.y.variant == "three-point");
}

TEST_CASE("config parsing: every rejection names the offending key path") {
    CHECK(rejected_at("not json") == "$");
    CHECK(rejected_at("[1, 2]") == "$");
    CHECK(rejected_at(R"({"grids": {}})") == "grids");
    CHECK(rejected_at(R"({"grid": 5})") == "grid");
    CHECK(rejected_at(R"({"grid": {"m": 3}})") == "grid.m");
    CHECK(rejected_at(R"({"grid": {"n": "64"}})") == "grid.n");
    CHECK(rejected_at(R"({"grid": {"n": 4}})") == "grid.n");
    CHECK(rejected_at(R"({"grid": {"n": 8192}})") == "grid.n");
    CHECK(rejected_at(R"({"thresholds": {"k": 70000}})") == "thresholds.k");
    CHECK(rejected_at(R"({"seed": -3})") == "seed");
    CHECK(rejected_at(R"({"seed": 1.5})") == "seed");
    CHECK(rejected_at(R"({"measures": {"z": {}}})") == "measures.z");
    CHECK(rejected_at(R"({"measures": {"x": {"variant": "gauss"}}})") == "measures.x.variant");
    CHECK(rejected_at(R"({"measures": {"x": {"variant": "lebesgue", "extra": 1}}})") ==
          "measures.x.extra");
    CHECK(rejected_at(R"({"measures": {"x": {"variant": "lebesgue", "params": {"foo": 1}}}})") ==
          "measures.x.params.foo");
    CHECK(rejected_at(
              R"({"measures": {"x": {"variant": "point-mass", "params": {"weight": -1}}}})") ==
          "measures.x.params.weight");
    CHECK(rejected_at(
              R"({"measures": {"x": {"variant": "point-mass", "params": {"location": [1.5, 0.2]}}}})") ==
          "measures.x.params.location[0]");
    CHECK(rejected_at(
              R"({"measures": {"y": {"variant": "three-point", "params": {"points": [[0.1, 0.2], [0.3, 0.4]]}}}})") ==
          "measures.y.params.points");
    CHECK(rejected_at(
              R"({"measures": {"x": {"variant": "scaled-three-point", "params": {"scale": 0}}}})") ==
          "measures.x.params.scale");
    CHECK(rejected_at(R"({"coefficients": 5})") == "coefficients");
    CHECK(rejected_at(R"({"coefficients": ["a"]})") == "coefficients[0]");
    CHECK(rejected_at(R"({"coefficients": [0.5, -0.25]})") == "coefficients[1]");
}

TEST_CASE("build_measure realizes every variant on the grid") {
    Grid g = Grid::unit_square(64);

    TopMeasure leb = build_measure(parse_config(
        R"({"measures": {"x": {"variant": "lebesgue"}}})").x, g);
    CHECK(leb.is_measure());
    CHECK(leb.total() == doctest::Approx(1.0));

    MeasureSpec tp_spec;
    tp_spec.variant = "three-point";
    TopMeasure tp = build_measure(tp_spec, g);
    CHECK(tp.two_valued() == 1.0);
    CHECK(tp.special_points().size() == 3);

    // Point overrides land on the cell centers holding the given fractions.
    tp_spec.points = {Point{0.1, 0.2}, Point{0.8, 0.3}, Point{0.5, 0.9}};
    TopMeasure tp2 = build_measure(tp_spec, g);
    std::vector<Point> pts = tp2.special_points();
    REQUIRE(pts.size() == 3);
    Point want = g.cell_center(g.cell_i(g.at_fraction(0.1, 0.2).x),
                               g.cell_j(g.at_fraction(0.1, 0.2).y));
    CHECK(pts[0].x == doctest::Approx(want.x));
    CHECK(pts[0].y == doctest::Approx(want.y));

    MeasureSpec pm_spec;
    pm_spec.variant = "point-mass";
    pm_spec.location = Point{0.25, 0.75};
    pm_spec.weight = 0.5;
    TopMeasure pm = build_measure(pm_spec, g);
    auto info = pm.as_point_mass();
    REQUIRE(info.has_value());
    CHECK(info->weight == 0.5);
    CHECK(info->location.x == doctest::Approx(g.cell_cx(g.cell_i(0.25))));

    MeasureSpec sc_spec;
    sc_spec.variant = "scaled-three-point";
    sc_spec.scale = 3.0;
    TopMeasure sc = build_measure(sc_spec, g);
    CHECK(sc.two_valued() == 3.0);
    CHECK(sc.total() == doctest::Approx(3.0));

    // The corrupted density is rejected by the axiom verifier outright.
    MeasureSpec bad_spec;
    bad_spec.variant = "corrupted-lebesgue";
    TopMeasure bad = build_measure(bad_spec, g);
    Verdict ax = verify_tm_axioms(bad, 5);
    CHECK_FALSE(ax.pass);

    MeasureSpec unknown;
    unknown.variant = "gauss";
    CHECK_THROWS_AS(build_measure(unknown, g), ConfigInvalid);
}

TEST_CASE("scenario catalog is ordered and filterable") {
    const std::vector<std::string> expected = {
        "axioms",       "representation",   "continuity",
        "simplicity",   "almost-simple",    "recovery",
        "qi-criterion", "two-of-three",     "product-formulas",
        "fubini-failure", "point-mass-commute", "rectangle-family",
    };
    CHECK(list_scenarios() == expected);
    CHECK(list_scenarios("fub") == std::vector<std::string>{"fubini-failure"});
    CHECK(list_scenarios("product") == std::vector<std::string>{"product-formulas"});
    CHECK(list_scenarios("no-such-scenario").empty());
}

TEST_CASE("run_scenario is deterministic and echoes the resolved config") {
    LabConfig c = fast_config(11);
    Report a = run_scenario("axioms", c);
    Report b = run_scenario("axioms", c);
    CHECK(to_json(a) == to_json(b));
    CHECK(a.scenario == "axioms");
    CHECK(a.seed == 11);
    CHECK(a.config_echo == R"({"grid":{"n":64},"seed":11,"thresholds":{"k":64}})");
    CHECK(a.pass());
    CHECK(a.wall_ms > 0.0);
    CHECK(to_json(a).find("wall") == std::string::npos);

    // Built-in cast: one axioms row and one subadditivity row per subject.
    auto has_row = [&](const std::string& name) {
        return std::any_of(a.checks.begin(), a.checks.end(),
                           [&](const CheckRow& r) { return r.name == name; });
    };
    CHECK(a.checks.size() == 8);
    CHECK(has_row("axioms/lebesgue"));
    CHECK(has_row("axioms/three-point"));
    CHECK(has_row("subadditive/point-mass"));
    CHECK(has_row("subadditive/scaled-three-point"));

    CHECK_THROWS_AS(run_scenario("no-such", c), UnknownScenario);
}

TEST_CASE("configured measures replace the built-in cast") {
    LabConfig c = fast_config(13);
    c.has_measures = true;
    c.x.variant = "three-point";
    Report r = run_scenario("axioms", c);
    REQUIRE(r.checks.size() == 2);
    CHECK(r.checks[0].name == "axioms/three-point");
    CHECK(r.checks[1].name == "subadditive/three-point");
    CHECK(r.pass());
    CHECK(r.config_echo.find("\"measures\":{\"x\":{\"params\":{},\"variant\":\"three-point\"}") !=
          std::string::npos);

    // A deliberately corrupted density must fail the axioms scenario.
    LabConfig cbad = fast_config(14);
    cbad.has_measures = true;
    cbad.x.variant = "corrupted-lebesgue";
    Report rb = run_scenario("axioms", cbad);
    CHECK_FALSE(rb.pass());

    // Coefficients reach the rectangle-family scenario and its echo.
    LabConfig cf = fast_config(15);
    cf.coefficients = {0.0, 0.5, 1.0};
    Report rf = run_scenario("rectangle-family", cf);
    CHECK(rf.pass());
    CHECK(rf.config_echo.rfind(R"({"coefficients":[0,0.5,1],"grid")", 0) == 0);
}

TEST_CASE("number formatting and report serializers are pinned") {
    CHECK(format_num(0.5) == "0.5");
    CHECK(format_num(1.0) == "1");
    CHECK(format_num(1.0 / 3.0) == "0.333333333333");
    CHECK(format_num(1e-9) == "1e-09");
    CHECK(format_num(-2.0) == "-2");

    Report r;
    r.scenario = "demo";
    r.seed = 3;
    r.config_echo = R"({"grid":{"n":8}})";
    r.wall_ms = 12.5;
    r.checks.push_back({"alpha", "ok, detail", 1.0, 1.0, 0.5, true});
    r.checks.push_back({"beta\"q\"", "", 0.0, 2.0, 0.1, false});
    CHECK_FALSE(r.pass());

    CHECK(to_json(r) ==
          "{\"checks\":["
          "{\"actual\":1,\"detail\":\"ok, detail\",\"expected\":1,\"name\":\"alpha\","
          "\"pass\":true,\"tolerance\":0.5},"
          "{\"actual\":2,\"detail\":\"\",\"expected\":0,\"name\":\"beta\\\"q\\\"\","
          "\"pass\":false,\"tolerance\":0.1}"
          "],\"config\":{\"grid\":{\"n\":8}},\"pass\":false,\"scenario\":\"demo\",\"seed\":3}");
    CHECK(to_json(std::vector<Report>{r}) == "[" + to_json(r) + "]");

    CHECK(to_csv(r) ==
          "scenario,check,expected,actual,tolerance,pass,detail\n"
          "demo,alpha,1,1,0.5,true,\"ok, detail\"\n"
          "demo,\"beta\"\"q\"\"\",0,2,0.1,false,\n");
    std::string both = to_csv(std::vector<Report>{r, r});
    CHECK(std::count(both.begin(), both.end(), '\n') == 5);
    CHECK(both.rfind("scenario,check", 1) == std::string::npos);

    std::string table = to_table(r);
    CHECK(table.find("scenario demo  (seed 3, 12.5 ms)") != std::string::npos);
    CHECK(table.find("FAIL") != std::string::npos);
    CHECK(table.find("result FAIL") != std::string::npos);

    Report ok = r;
    ok.checks.pop_back();
    CHECK(ok.pass());
    CHECK(to_table(ok).find("result PASS") != std::string::npos);
}

TEST_CASE("run_all covers the catalog in order; parallel runs byte-identical") {
    LabConfig c = fast_config();
    std::vector<Report> seq = run_all(c);
    REQUIRE(seq.size() == list_scenarios().size());
    for (size_t i = 0; i < seq.size(); ++i) {
        CAPTURE(seq[i].scenario);
        CHECK(seq[i].scenario == list_scenarios()[i]);
        CHECK(seq[i].pass());
    }
    std::vector<Report> par = run_all(c, true);
    CHECK(to_json(seq) == to_json(par));
}
