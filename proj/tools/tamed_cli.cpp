// Command-line front end: run, validate, list-models, describe-model.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tamed/cli/runner.hpp"
#include "tamed/core/errors.hpp"
#include "tamed/models/catalog.hpp"

namespace {

tamed::ParamMap parse_assignments(const std::vector<std::string>& items)
{
    tamed::ParamMap params;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw tamed::ConfigError("expected key=value, got '" + item + "'");
        }
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(value, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != value.size()) {
            throw tamed::ConfigError(key + ": expected a number, got '" + value +
                                     "'");
        }
        params[key] = v;
    }
    return params;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Tamed Euler schemes for SDEs with superlinear coefficients"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tamed::software_version);

    unsigned threads = 0;
    bool threads_set = false;
    auto add_threads = [&](CLI::App* sub) {
        sub->add_option_function<unsigned>(
               "--threads",
               [&](unsigned t) {
                   threads = t;
                   threads_set = true;
               },
               "Worker threads (0: all cores); results do not depend on it");
    };

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run an experiment from a config file");
    run->add_option("config", config_path, "Experiment config")->required();
    add_threads(run);

    std::string validate_path;
    auto* validate =
        app.add_subcommand("validate", "Check config, certificate and p-condition");
    validate->add_option("config", validate_path, "Experiment config")->required();

    auto* list = app.add_subcommand("list-models", "List catalog models");

    std::string model_name;
    std::vector<std::string> assignments;
    auto* describe_cmd = app.add_subcommand(
        "describe-model", "Show a model's certificate and its provenance");
    describe_cmd->add_option("name", model_name, "Model name")->required();
    describe_cmd->add_option("params", assignments, "Parameters as key=value");

    CLI11_PARSE(app, argc, argv);

    tamed::RunOptions options;
    options.log = &std::cerr;
    if (threads_set) {
        options.threads = threads;
    }

    if (*run) {
        const auto outcome = tamed::run_experiment(config_path, options);
        return outcome.exit_code;
    }
    if (*validate) {
        return tamed::validate_experiment(validate_path, options).exit_code;
    }
    if (*list) {
        for (const auto& name : tamed::catalog_names()) {
            std::cout << name << "  defaults:";
            for (const auto& [k, v] : tamed::default_params(name)) {
                std::cout << " " << k << "=" << v;
            }
            std::cout << "\n";
        }
        return tamed::exit_ok;
    }
    try {
        const auto spec =
            tamed::make_model(model_name, parse_assignments(assignments));
        std::cout << tamed::describe(spec);
    } catch (const tamed::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return tamed::exit_config_error;
    }
    return tamed::exit_ok;
}
