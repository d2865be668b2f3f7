#include "tamed/core/experiment.hpp"

#include <stdexcept>
#include <string>

#include "tamed/core/errors.hpp"

namespace tamed {

namespace {

void require_positive(const std::vector<double>& values, const char* key)
{
    for (double v : values) {
        if (!(v > 0.0)) {
            throw ConfigError(std::string(key) + ": norms must be positive (got " +
                              std::to_string(v) + ")");
        }
    }
}

} // namespace

void ExperimentConfig::validate() const
{
    if (model_name.empty()) {
        throw ConfigError("model.name: missing");
    }
    try {
        scheme.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("taming: ") + e.what());
    }
    if (resolutions.empty()) {
        throw ConfigError("grid.resolutions: must list at least one resolution");
    }
    for (std::size_t i = 0; i < resolutions.size(); ++i) {
        if (resolutions[i] < 1) {
            throw ConfigError("grid.resolutions: entries must be positive");
        }
        if (i > 0 && resolutions[i] <= resolutions[i - 1]) {
            throw ConfigError("grid.resolutions: must be strictly increasing");
        }
    }
    if (reference_resolution <= resolutions.back()) {
        throw ConfigError(
            "grid.reference_resolution: must exceed the largest resolution " +
            std::to_string(resolutions.back()));
    }
    for (int n : resolutions) {
        if (reference_resolution % n != 0) {
            throw ConfigError("grid.resolutions: " + std::to_string(n) +
                              " does not divide " +
                              std::to_string(reference_resolution));
        }
    }
    if (path_count < 2) {
        throw ConfigError("montecarlo.paths: need at least 2 paths");
    }
    if (error_norms.empty()) {
        throw ConfigError("norms.strong: must list at least one norm");
    }
    require_positive(error_norms, "norms.strong");
    require_positive(uniform_norms, "norms.uniform");
    require_positive(moment_norms, "norms.moments");
    require_positive(one_step_norms, "norms.one_step");
    for (double k : as_kappas) {
        if (!(k >= 0.0)) {
            throw ConfigError("norms.as_kappa: exponents must be >= 0");
        }
    }
    if (!(order_min < order_max)) {
        throw ConfigError("norms.order_window: lower bound must be below upper");
    }
    if (!(max_order_se > 0.0)) {
        throw ConfigError("norms.max_order_se: must be positive");
    }
    if (certificate_samples == 0) {
        throw ConfigError("model.certificate_samples: must be positive");
    }
    if (output_dir.empty()) {
        throw ConfigError("output.directory: must not be empty");
    }
}

} // namespace tamed
