#include "qmeas/report.hpp"

#include <algorithm>
#include <cstdio>

namespace qmeas {
namespace {

void append_escaped(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

// Keys stay alphabetical within every object so the output is canonical.
void append_row(std::string& out, const CheckRow& c) {
    out += "{\"actual\":";
    out += format_num(c.actual);
    out += ",\"detail\":";
    append_escaped(out, c.detail);
    out += ",\"expected\":";
    out += format_num(c.expected);
    out += ",\"name\":";
    append_escaped(out, c.name);
    out += ",\"pass\":";
    out += c.pass ? "true" : "false";
    out += ",\"tolerance\":";
    out += format_num(c.tolerance);
    out += '}';
}

void csv_field(std::string& out, const std::string& s) {
    bool quote = s.find_first_of(",\"\n") != std::string::npos;
    if (!quote) {
        out += s;
        return;
    }
    out += '"';
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
}

}  // namespace

bool Report::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckRow& c) { return c.pass; });
}

std::string format_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string to_json(const Report& r) {
    std::string out = "{\"checks\":[";
    for (size_t i = 0; i < r.checks.size(); ++i) {
        if (i) out += ',';
        append_row(out, r.checks[i]);
    }
    out += "],\"config\":";
    out += r.config_echo.empty() ? "{}" : r.config_echo;
    out += ",\"pass\":";
    out += r.pass() ? "true" : "false";
    out += ",\"scenario\":";
    append_escaped(out, r.scenario);
    out += ",\"seed\":";
    char buf[24];
    std::snprintf(buf, sizeof buf, "%llu", static_cast<unsigned long long>(r.seed));
    out += buf;
    out += '}';
    return out;
}

std::string to_json(const std::vector<Report>& reports) {
    std::string out = "[";
    for (size_t i = 0; i < reports.size(); ++i) {
        if (i) out += ',';
        out += to_json(reports[i]);
    }
    out += ']';
    return out;
}

std::string to_csv(const Report& r) {
    std::string out = "scenario,check,expected,actual,tolerance,pass,detail\n";
    for (const CheckRow& c : r.checks) {
        csv_field(out, r.scenario);
        out += ',';
        csv_field(out, c.name);
        out += ',';
        out += format_num(c.expected);
        out += ',';
        out += format_num(c.actual);
        out += ',';
        out += format_num(c.tolerance);
        out += ',';
        out += c.pass ? "true" : "false";
        out += ',';
        csv_field(out, c.detail);
        out += '\n';
    }
    return out;
}

std::string to_csv(const std::vector<Report>& reports) {
    std::string out = "scenario,check,expected,actual,tolerance,pass,detail\n";
    for (const Report& r : reports) {
        std::string one = to_csv(r);
        out.append(one, one.find('\n') + 1, std::string::npos);
    }
    return out;
}

std::string to_table(const Report& r) {
    size_t name_w = 5;
    for (const CheckRow& c : r.checks) name_w = std::max(name_w, c.name.size());
    std::string out = "scenario " + r.scenario + "  (seed " + std::to_string(r.seed) + ", " +
                      format_num(r.wall_ms) + " ms)\n";
    char line[512];
    std::snprintf(line, sizeof line, "  %-*s  %14s  %14s  %12s  %s\n", static_cast<int>(name_w),
                  "check", "expected", "actual", "tolerance", "status");
    out += line;
    for (const CheckRow& c : r.checks) {
        std::snprintf(line, sizeof line, "  %-*s  %14s  %14s  %12s  %s%s%s\n",
                      static_cast<int>(name_w), c.name.c_str(), format_num(c.expected).c_str(),
                      format_num(c.actual).c_str(), format_num(c.tolerance).c_str(),
                      c.pass ? "ok" : "FAIL", c.detail.empty() ? "" : "  ", c.detail.c_str());
        out += line;
    }
    out += r.pass() ? "  result PASS\n" : "  result FAIL\n";
    return out;
}

std::string to_table(const std::vector<Report>& reports) {
    std::string out;
    int failed = 0;
    for (const Report& r : reports) {
        out += to_table(r);
        out += '\n';
        if (!r.pass()) ++failed;
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "%zu scenarios, %d failed\n", reports.size(), failed);
    out += buf;
    return out;
}

}  // namespace qmeas
