#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tamed/core/experiment.hpp"

namespace tamed {

inline constexpr const char* software_version = "0.1.0";

enum ExitCode : int
{
    exit_ok = 0,
    exit_config_error = 2, // also p-condition refusals
    exit_model_error = 3,
    exit_acceptance_failure = 4,
    exit_divergence = 5, // completed, with non-finite paths or exploding moments
};

struct CheckResult
{
    std::string name;
    bool pass = false;
    std::string detail;
};

struct RunOptions
{
    std::optional<unsigned> threads;
    // Takes precedence over TAMED_OUTPUT_DIR and the config's directory.
    std::optional<std::string> output_dir;
    std::ostream* log = nullptr;
};

struct RunOutcome
{
    int exit_code = exit_ok;
    std::string message; // why the run stopped early, if it did
    std::string output_dir;
    std::vector<CheckResult> checks;
    bool divergence_found = false;
};

// Output directory: options, then TAMED_OUTPUT_DIR, then the config.
std::string resolve_output_dir(const ExperimentConfig& cfg,
                               const RunOptions& options);

/*!
 * Validates the certificate on samples, applies the p-condition gate when
 * a rate is asserted, simulates, analyses and writes errors.csv,
 * moments.csv, summary.json and manifest.json. Never throws for config or
 * model problems; they map onto the exit code.
 */
RunOutcome run_experiment(const std::string& config_path,
                          const RunOptions& options = {});

RunOutcome run_experiment(const ExperimentConfig& cfg,
                          const std::string& config_text,
                          const RunOptions& options = {});

// Dry run: config, model, certificate samples and the p-condition gate.
RunOutcome validate_experiment(const std::string& config_path,
                               const RunOptions& options = {});

// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

} // namespace tamed
