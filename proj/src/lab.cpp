// Config parsing, measure construction, and the scenario runner.  The config
// echo is rebuilt from resolved values in canonical form (keys sorted, twelve
// significant digits, no timing data) so identical runs serialize to
// identical bytes.
#include "qmeas/lab.hpp"

#include <chrono>
#include <cstdint>
#include <future>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "qmeas/errors.hpp"
#include "qmeas/rng.hpp"
#include "scenarios.hpp"

namespace qmeas {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& what) {
    throw ConfigInvalid(path, what);
}

void require_object(const json& v, const std::string& path) {
    if (!v.is_object()) bad(path, "expected an object");
}

void reject_unknown(const json& v, const std::string& path,
                    std::initializer_list<std::string_view> allowed) {
    for (const auto& item : v.items()) {
        bool known = false;
        for (std::string_view a : allowed)
            if (item.key() == a) known = true;
        if (!known) bad(path.empty() ? item.key() : path + "." + item.key(), "unknown key");
    }
}

int parse_cell_count(const json& v, const std::string& path, int lo, int hi) {
    if (!v.is_number_integer()) bad(path, "expected an integer");
    std::int64_t n = v.get<std::int64_t>();
    if (n < lo || n > hi)
        bad(path, "expected an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<int>(n);
}

double parse_number(const json& v, const std::string& path) {
    if (!v.is_number()) bad(path, "expected a number");
    return v.get<double>();
}

double parse_fraction(const json& v, const std::string& path) {
    double f = parse_number(v, path);
    if (!(f >= 0.0 && f <= 1.0)) bad(path, "expected a fraction in [0, 1]");
    return f;
}

Point parse_point(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2) bad(path, "expected [fx, fy]");
    return Point{parse_fraction(v[0], path + "[0]"), parse_fraction(v[1], path + "[1]")};
}

MeasureSpec parse_measure(const json& v, const std::string& path) {
    require_object(v, path);
    reject_unknown(v, path, {"variant", "params"});
    MeasureSpec spec;
    if (v.contains("variant")) {
        const json& var = v["variant"];
        if (!var.is_string()) bad(path + ".variant", "expected a string");
        spec.variant = var.get<std::string>();
    }
    static const char* known[] = {"lebesgue", "three-point", "point-mass",
                                  "scaled-three-point", "corrupted-lebesgue"};
    bool ok = false;
    for (const char* k : known)
        if (spec.variant == k) ok = true;
    if (!ok) bad(path + ".variant", "unknown variant '" + spec.variant + "'");

    json params = v.contains("params") ? v["params"] : json::object();
    require_object(params, path + ".params");
    const std::string pp = path + ".params";
    if (spec.variant == "three-point") {
        reject_unknown(params, pp, {"points"});
        if (params.contains("points")) {
            const json& pts = params["points"];
            if (!pts.is_array() || pts.size() != 3) bad(pp + ".points", "expected three [fx, fy] points");
            for (int i = 0; i < 3; ++i)
                spec.points.push_back(parse_point(pts[i], pp + ".points[" + std::to_string(i) + "]"));
        }
    } else if (spec.variant == "point-mass") {
        reject_unknown(params, pp, {"location", "weight"});
        if (params.contains("location")) spec.location = parse_point(params["location"], pp + ".location");
        if (params.contains("weight")) {
            spec.weight = parse_number(params["weight"], pp + ".weight");
            if (!(spec.weight > 0.0)) bad(pp + ".weight", "expected a positive number");
        }
    } else if (spec.variant == "scaled-three-point") {
        reject_unknown(params, pp, {"scale"});
        if (params.contains("scale")) {
            spec.scale = parse_number(params["scale"], pp + ".scale");
            if (!(spec.scale > 0.0)) bad(pp + ".scale", "expected a positive number");
        }
    } else {
        reject_unknown(params, pp, {});
    }
    return spec;
}

std::string point_json(const Point& p) {
    return "[" + format_num(p.x) + "," + format_num(p.y) + "]";
}

std::string spec_json(const MeasureSpec& s) {
    std::string params = "{";
    if (s.variant == "three-point" && !s.points.empty()) {
        params += "\"points\":[";
        for (size_t i = 0; i < s.points.size(); ++i) {
            if (i) params += ",";
            params += point_json(s.points[i]);
        }
        params += "]";
    } else if (s.variant == "point-mass") {
        params += "\"location\":" + point_json(s.location) + ",\"weight\":" + format_num(s.weight);
    } else if (s.variant == "scaled-three-point") {
        params += "\"scale\":" + format_num(s.scale);
    }
    params += "}";
    return "{\"params\":" + params + ",\"variant\":\"" + s.variant + "\"}";
}

std::string canonical_echo(const LabConfig& c, int n, int k) {
    std::string out = "{";
    if (!c.coefficients.empty()) {
        out += "\"coefficients\":[";
        for (size_t i = 0; i < c.coefficients.size(); ++i) {
            if (i) out += ",";
            out += format_num(c.coefficients[i]);
        }
        out += "],";
    }
    out += "\"grid\":{\"n\":" + std::to_string(n) + "}";
    if (c.has_measures)
        out += ",\"measures\":{\"x\":" + spec_json(c.x) + ",\"y\":" + spec_json(c.y) + "}";
    out += ",\"seed\":" + std::to_string(c.seed);
    out += ",\"thresholds\":{\"k\":" + std::to_string(k) + "}";
    out += "}";
    return out;
}

Report run_def(const ScenarioDef& def, const LabConfig& config) {
    ScenarioContext ctx;
    ctx.config = &config;
    ctx.n = config.grid_n > 0 ? config.grid_n : def.default_n;
    ctx.k = config.thresholds > 0 ? config.thresholds : def.default_k;
    ctx.seed = Rng(config.seed).fork(def.name).next();
    Report r;
    r.scenario = def.name;
    r.seed = config.seed;
    r.config_echo = canonical_echo(config, ctx.n, ctx.k);
    auto t0 = std::chrono::steady_clock::now();
    r.checks = def.run(ctx);
    auto t1 = std::chrono::steady_clock::now();
    r.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return r;
}

}  // namespace

LabConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        bad("$", e.what());
    }
    require_object(doc, "$");
    reject_unknown(doc, "", {"grid", "thresholds", "seed", "measures", "coefficients"});

    LabConfig c;
    if (doc.contains("grid")) {
        const json& g = doc["grid"];
        require_object(g, "grid");
        reject_unknown(g, "grid", {"n"});
        if (g.contains("n")) c.grid_n = parse_cell_count(g["n"], "grid.n", 8, 4096);
    }
    if (doc.contains("thresholds")) {
        const json& t = doc["thresholds"];
        require_object(t, "thresholds");
        reject_unknown(t, "thresholds", {"k"});
        if (t.contains("k")) c.thresholds = parse_cell_count(t["k"], "thresholds.k", 8, 65536);
    }
    if (doc.contains("seed")) {
        const json& s = doc["seed"];
        if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() &&
                                       s.get<std::int64_t>() < 0))
            bad("seed", "expected a nonnegative integer");
        c.seed = s.get<std::uint64_t>();
    }
    if (doc.contains("measures")) {
        const json& m = doc["measures"];
        require_object(m, "measures");
        reject_unknown(m, "measures", {"x", "y"});
        c.has_measures = true;
        if (m.contains("x")) c.x = parse_measure(m["x"], "measures.x");
        if (m.contains("y")) c.y = parse_measure(m["y"], "measures.y");
    }
    if (doc.contains("coefficients")) {
        const json& a = doc["coefficients"];
        if (!a.is_array()) bad("coefficients", "expected an array of numbers");
        for (size_t i = 0; i < a.size(); ++i) {
            const std::string path = "coefficients[" + std::to_string(i) + "]";
            double v = parse_number(a[i], path);
            if (v < 0.0) bad(path, "expected a nonnegative number");
            c.coefficients.push_back(v);
        }
    }
    return c;
}

TopMeasure build_measure(const MeasureSpec& spec, const Grid& g) {
    if (spec.variant == "lebesgue") return TopMeasure::lebesgue(g);
    if (spec.variant == "three-point") {
        if (spec.points.empty()) return TopMeasure::three_point(g);
        return TopMeasure::three_point(g, g.at_fraction(spec.points[0].x, spec.points[0].y),
                                       g.at_fraction(spec.points[1].x, spec.points[1].y),
                                       g.at_fraction(spec.points[2].x, spec.points[2].y));
    }
    if (spec.variant == "point-mass")
        return TopMeasure::point_mass(g, g.at_fraction(spec.location.x, spec.location.y), spec.weight);
    if (spec.variant == "scaled-three-point")
        return TopMeasure::scaled(spec.scale, TopMeasure::three_point(g));
    if (spec.variant == "corrupted-lebesgue") {
        // Uniform density with one strongly negative cell.  Any region holding
        // that cell clamps to zero, so additivity and the complement identity
        // fail deterministically.
        std::vector<double> w(g.cells(), g.cell_area());
        w[g.cells() / 2 + g.n / 4] = -5.0;
        return TopMeasure::grid_weights(g, std::move(w));
    }
    throw ConfigInvalid("measures", "unknown variant '" + spec.variant + "'");
}

std::vector<std::string> list_scenarios(const std::string& filter) {
    std::vector<std::string> names;
    for (const ScenarioDef& def : scenario_table()) {
        if (filter.empty() || std::string_view(def.name).find(filter) != std::string_view::npos)
            names.emplace_back(def.name);
    }
    return names;
}

Report run_scenario(const std::string& name, const LabConfig& config) {
    for (const ScenarioDef& def : scenario_table())
        if (name == def.name) return run_def(def, config);
    throw UnknownScenario("unknown scenario '" + name + "'");
}

std::vector<Report> run_all(const LabConfig& config, bool parallel) {
    const std::vector<ScenarioDef>& table = scenario_table();
    std::vector<Report> out;
    out.reserve(table.size());
    if (!parallel) {
        for (const ScenarioDef& def : table) out.push_back(run_def(def, config));
        return out;
    }
    std::vector<std::future<Report>> futures;
    futures.reserve(table.size());
    for (const ScenarioDef& def : table)
        futures.push_back(std::async(std::launch::async,
                                     [&def, &config] { return run_def(def, config); }));
    for (std::future<Report>& f : futures) out.push_back(f.get());
    return out;
}

}  // namespace qmeas
