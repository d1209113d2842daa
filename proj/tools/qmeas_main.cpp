// Command-line runner.
//
//   qmeas run <scenario> [--config FILE] [--grid-n N] [--thresholds K]
//                        [--seed S] [--format json|csv|table] [--out PATH]
//                        [--parallel]
//   qmeas list [FILTER]
//
// The scenario name "all" runs the whole catalog and serializes an array of
// reports.  Flags override the config file.  Exit codes: 0 every check
// passed, 1 a property check failed, 2 usage or config error.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qmeas/errors.hpp"
#include "qmeas/lab.hpp"
#include "qmeas/report.hpp"

namespace {

struct RunArgs {
    std::string scenario;
    std::string config_path;
    int grid_n = 0;
    int thresholds = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string format = "table";
    std::string out_path;
    bool parallel = false;
};

int do_run(const RunArgs& args) {
    qmeas::LabConfig config;
    if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        if (!in) throw qmeas::ConfigInvalid(args.config_path, "cannot open config file");
        std::stringstream buf;
        buf << in.rdbuf();
        config = qmeas::parse_config(buf.str());
    }
    if (args.grid_n > 0) config.grid_n = args.grid_n;
    if (args.thresholds > 0) config.thresholds = args.thresholds;
    if (args.seed_set) config.seed = args.seed;

    std::vector<qmeas::Report> reports;
    if (args.scenario == "all")
        reports = qmeas::run_all(config, args.parallel);
    else
        reports.push_back(qmeas::run_scenario(args.scenario, config));

    std::string body;
    const bool many = args.scenario == "all";
    if (args.format == "json")
        body = many ? qmeas::to_json(reports) : qmeas::to_json(reports.front());
    else if (args.format == "csv")
        body = many ? qmeas::to_csv(reports) : qmeas::to_csv(reports.front());
    else
        body = many ? qmeas::to_table(reports) : qmeas::to_table(reports.front());

    if (!args.out_path.empty()) {
        std::ofstream out(args.out_path);
        if (!out) throw qmeas::ConfigInvalid(args.out_path, "cannot open output file");
        out << body << "\n";
    } else {
        std::cout << body << "\n";
    }
    for (const qmeas::Report& r : reports)
        if (!r.pass()) return 1;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"topological measure scenario runner"};
    app.require_subcommand(1);

    RunArgs args;
    CLI::App* run = app.add_subcommand("run", "run one scenario, or \"all\"");
    run->add_option("scenario", args.scenario, "scenario name from `qmeas list`, or \"all\"")
        ->required();
    run->add_option("--config", args.config_path, "JSON config file");
    run->add_option("--grid-n", args.grid_n, "grid cells per axis")->check(CLI::PositiveNumber);
    run->add_option("--thresholds", args.thresholds, "threshold ladder size")
        ->check(CLI::PositiveNumber);
    CLI::Option* seed_opt = run->add_option("--seed", args.seed, "base seed");
    run->add_option("--format", args.format, "output format")
        ->check(CLI::IsMember({"json", "csv", "table"}));
    run->add_option("--out", args.out_path, "write the report to this file");
    run->add_flag("--parallel", args.parallel, "run scenarios concurrently");

    std::string filter;
    CLI::App* list = app.add_subcommand("list", "list registered scenarios");
    list->add_option("filter", filter, "substring filter");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (list->parsed()) {
            for (const std::string& name : qmeas::list_scenarios(filter))
                std::cout << name << "\n";
            return 0;
        }
        args.seed_set = seed_opt->count() > 0;
        return do_run(args);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
