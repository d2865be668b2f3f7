#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tamed/core/problem.hpp"

namespace tamed {

using ParamMap = std::map<std::string, double>;

// Everything a run needs; loaded from the config file by the CLI.
struct ExperimentConfig
{
    std::string model_name;
    ParamMap model_params;
    TamingScheme scheme;

    std::vector<int> resolutions;
    int reference_resolution = 0;

    std::size_t path_count = 0;
    std::uint64_t master_seed = 0;
    unsigned threads = 0; // 0: hardware concurrency

    std::vector<double> error_norms{2.0};
    std::vector<double> uniform_norms;
    std::vector<double> moment_norms;
    std::vector<double> one_step_norms;
    std::vector<double> as_kappas;

    // With assert_rate the p-condition gates the run and fitted strong and
    // uniform orders must land in the window; without it the run only
    // checks that the error decays ("convergence-only" mode).
    bool assert_rate = false;
    double order_min = 0.35;
    double order_max = 0.65;
    double max_order_se = 0.1;
    bool assert_moments_bounded = false;

    std::size_t certificate_samples = 1000;

    std::string output_dir = "out";

    // Throws ConfigError naming the offending key.
    void validate() const;
};

} // namespace tamed
