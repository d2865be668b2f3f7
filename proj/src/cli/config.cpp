#include "tamed/cli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "tamed/core/errors.hpp"

namespace tamed {

namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_number(const std::string& raw, const std::string& key)
{
    const std::string text = trim(raw);
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (text.empty() || res.ec != std::errc() || res.ptr != end ||
        !std::isfinite(v)) {
        throw ConfigError(key + ": expected a number, got '" + text + "'");
    }
    return v;
}

long long parse_integer(const std::string& raw, const std::string& key)
{
    const double v = parse_number(raw, key);
    if (v != std::floor(v) || std::fabs(v) > 9.0e15) {
        throw ConfigError(key + ": expected an integer, got '" + trim(raw) + "'");
    }
    return static_cast<long long>(v);
}

std::string parse_string(const std::string& raw, const std::string& key)
{
    std::string text = trim(raw);
    if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
        text = text.substr(1, text.size() - 2);
    } else if (text.find('"') != std::string::npos) {
        throw ConfigError(key + ": unbalanced quotes in '" + text + "'");
    }
    if (text.empty()) {
        throw ConfigError(key + ": empty string");
    }
    return text;
}

bool parse_bool(const std::string& raw, const std::string& key)
{
    const std::string text = trim(raw);
    if (text == "true") {
        return true;
    }
    if (text == "false") {
        return false;
    }
    throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

std::vector<double> parse_list(const std::string& raw, const std::string& key)
{
    const std::string text = trim(raw);
    if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
        throw ConfigError(key + ": expected a list like [1, 2], got '" + text +
                          "'");
    }
    std::vector<double> out;
    const std::string body = trim(text.substr(1, text.size() - 2));
    if (body.empty()) {
        return out;
    }
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_number(item, key));
    }
    if (body.back() == ',') {
        throw ConfigError(key + ": trailing comma");
    }
    return out;
}

std::size_t parse_count(const std::string& raw, const std::string& key)
{
    const long long v = parse_integer(raw, key);
    if (v < 0) {
        throw ConfigError(key + ": must not be negative");
    }
    return static_cast<std::size_t>(v);
}

const std::map<std::string, std::set<std::string>>& fixed_keys()
{
    static const std::map<std::string, std::set<std::string>> keys = {
        {"model", {"name", "certificate_samples"}},
        {"taming", {"scheme", "alpha", "l"}},
        {"grid", {"resolutions", "reference_resolution"}},
        {"montecarlo", {"paths", "seed", "threads"}},
        {"norms",
         {"strong", "uniform", "moments", "one_step", "as_kappa",
          "assert_rate", "order_window", "max_order_se",
          "assert_moments_bounded"}},
        {"output", {"directory"}},
    };
    return keys;
}

} // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& source)
{
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(source + ": line " + std::to_string(e.line()) + ": " +
                          e.message());
    }

    for (const auto& [section, entries] : tree) {
        if (entries.empty() && !entries.data().empty()) {
            throw ConfigError(section + ": key outside of a section");
        }
        const auto it = fixed_keys().find(section);
        if (it == fixed_keys().end()) {
            throw ConfigError(section + ": unknown section");
        }
        if (section == "model") {
            continue;
        }
        for (const auto& entry : entries) {
            if (!it->second.count(entry.first)) {
                throw ConfigError(section + "." + entry.first + ": unknown key");
            }
        }
    }

    auto get = [&](const std::string& section,
                   const std::string& key) -> std::optional<std::string> {
        const auto sec = tree.get_child_optional(section);
        if (!sec) {
            return std::nullopt;
        }
        const auto v = sec->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
        if (!v) {
            return std::nullopt;
        }
        return *v;
    };
    auto require = [&](const std::string& section, const std::string& key) {
        const auto v = get(section, key);
        if (!v) {
            throw ConfigError(section + "." + key + ": missing");
        }
        return *v;
    };

    ExperimentConfig cfg;
    cfg.model_name = parse_string(require("model", "name"), "model.name");
    if (const auto v = get("model", "certificate_samples")) {
        cfg.certificate_samples = parse_count(*v, "model.certificate_samples");
    }
    if (const auto sec = tree.get_child_optional("model")) {
        for (const auto& [key, value] : *sec) {
            if (key == "name" || key == "certificate_samples") {
                continue;
            }
            cfg.model_params[key] = parse_number(value.data(), "model." + key);
        }
    }

    const std::string kind_text =
        parse_string(require("taming", "scheme"), "taming.scheme");
    try {
        cfg.scheme.kind = parse_taming_kind(kind_text);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("taming.scheme: ") + e.what());
    }
    if (const auto v = get("taming", "alpha")) {
        cfg.scheme.alpha = parse_number(*v, "taming.alpha");
    }
    if (const auto v = get("taming", "l")) {
        cfg.scheme.l = parse_number(*v, "taming.l");
    }

    for (double n : parse_list(require("grid", "resolutions"), "grid.resolutions")) {
        if (n != std::floor(n) || n < 1 || n > 1 << 30) {
            throw ConfigError("grid.resolutions: entries must be positive integers");
        }
        cfg.resolutions.push_back(static_cast<int>(n));
    }
    const long long ref = parse_integer(require("grid", "reference_resolution"),
                                        "grid.reference_resolution");
    if (ref < 1 || ref > 1 << 30) {
        throw ConfigError("grid.reference_resolution: out of range");
    }
    cfg.reference_resolution = static_cast<int>(ref);

    cfg.path_count = parse_count(require("montecarlo", "paths"), "montecarlo.paths");
    {
        const std::string seed_text = trim(require("montecarlo", "seed"));
        std::uint64_t seed = 0;
        const auto* end = seed_text.data() + seed_text.size();
        const auto res = std::from_chars(seed_text.data(), end, seed);
        if (seed_text.empty() || res.ec != std::errc() || res.ptr != end) {
            throw ConfigError("montecarlo.seed: expected an unsigned 64-bit "
                              "integer, got '" + seed_text + "'");
        }
        cfg.master_seed = seed;
    }
    if (const auto v = get("montecarlo", "threads")) {
        cfg.threads = static_cast<unsigned>(parse_count(*v, "montecarlo.threads"));
    }

    if (const auto v = get("norms", "strong")) {
        cfg.error_norms = parse_list(*v, "norms.strong");
    }
    if (const auto v = get("norms", "uniform")) {
        cfg.uniform_norms = parse_list(*v, "norms.uniform");
    }
    if (const auto v = get("norms", "moments")) {
        cfg.moment_norms = parse_list(*v, "norms.moments");
    }
    if (const auto v = get("norms", "one_step")) {
        cfg.one_step_norms = parse_list(*v, "norms.one_step");
    }
    if (const auto v = get("norms", "as_kappa")) {
        cfg.as_kappas = parse_list(*v, "norms.as_kappa");
    }
    if (const auto v = get("norms", "assert_rate")) {
        cfg.assert_rate = parse_bool(*v, "norms.assert_rate");
    }
    if (const auto v = get("norms", "order_window")) {
        const auto w = parse_list(*v, "norms.order_window");
        if (w.size() != 2) {
            throw ConfigError("norms.order_window: expected [low, high]");
        }
        cfg.order_min = w[0];
        cfg.order_max = w[1];
    }
    if (const auto v = get("norms", "max_order_se")) {
        cfg.max_order_se = parse_number(*v, "norms.max_order_se");
    }
    if (const auto v = get("norms", "assert_moments_bounded")) {
        cfg.assert_moments_bounded =
            parse_bool(*v, "norms.assert_moments_bounded");
    }

    if (const auto v = get("output", "directory")) {
        cfg.output_dir = parse_string(*v, "output.directory");
    }

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(path + ": cannot open config file");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

} // namespace tamed
