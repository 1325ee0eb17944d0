#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "sclab/config.hpp"
#include "sclab/runner.hpp"

namespace {

struct Args {
    std::string config;
    std::string out;
    long long seed = -1;
    bool seed_set = false;
};

int run_task(const std::string& task, const Args& args) {
    std::ifstream is(args.config);
    if (!is) {
        std::cerr << "error: cannot open config file " << args.config << "\n";
        return 1;
    }
    std::stringstream buf;
    buf << is.rdbuf();
    auto parsed = sclab::cfg::parse_config(buf.str());
    if (!parsed.ok()) {
        for (const auto& e : parsed.errors) {
            std::cerr << args.config << ":";
            if (e.line > 0) std::cerr << e.line << ":";
            std::cerr << " " << e.message << "\n";
        }
        return 1;
    }
    parsed.spec.task = task;
    if (args.seed_set) parsed.spec.seed = static_cast<uint64_t>(args.seed);
    if (!args.out.empty()) parsed.spec.output_dir = args.out;
    return sclab::run::run_experiment(parsed.spec);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sclab: stochastic scalar conservation law laboratory"};
    app.set_version_flag("--version", std::string(sclab::run::kVersion));
    app.require_subcommand(1);

    Args args;
    int exit_code = 0;
    for (const std::string& task : sclab::cfg::known_tasks()) {
        CLI::App* sub = app.add_subcommand(task, "run the '" + task + "' task");
        sub->add_option("--config", args.config, "experiment config file")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--seed", args.seed, "override the config seed");
        sub->add_option("--out", args.out, "override the output directory");
        sub->callback([&args, sub, task, &exit_code] {
            args.seed_set = sub->count("--seed") > 0;
            exit_code = run_task(task, args);
        });
    }

    CLI11_PARSE(app, argc, argv);
    return exit_code;
}
