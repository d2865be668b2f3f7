#pragma once

#include <string>

#include "tamed/core/experiment.hpp"

namespace tamed {

/*!
 * Experiment file: INI-style sections [model], [taming], [grid],
 * [montecarlo], [norms], [output] with `key = value` lines.
 * Values are numbers, booleans, "quoted strings" or [a, b, ...] lists;
 * lines starting with '#' or ';' are comments.
 *
 * Every key except the model parameters is fixed; unknown keys are errors.
 * Throws ConfigError naming the offending key. The result is validated.
 */
ExperimentConfig parse_config(const std::string& text,
                              const std::string& source = "<config>");

ExperimentConfig load_config(const std::string& path);

} // namespace tamed
