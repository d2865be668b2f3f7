#include "tamed/cli/runner.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "tamed/analysis/analysis.hpp"
#include "tamed/cli/config.hpp"
#include "tamed/core/conditions.hpp"
#include "tamed/core/errors.hpp"
#include "tamed/core/format.hpp"
#include "tamed/models/catalog.hpp"

namespace tamed {

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

void say(const RunOptions& options, const std::string& line)
{
    if (options.log) {
        *options.log << line << "\n";
    }
}

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(path + ": cannot open config file");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json number(double v)
{
    // Non-finite values have no JSON literal; they become null.
    return std::isfinite(v) ? json(v) : json(nullptr);
}

json pvalidation_json(const PValidation& v)
{
    return {{"p", v.p},
            {"admissible", v.admissible},
            {"max_admissible_p", number(v.max_admissible_p)},
            {"max_is_strict", v.max_is_strict},
            {"growth_bound", number(v.growth_bound)},
            {"reasons", v.reasons}};
}

json certificate_json(const ConditionCertificate& c)
{
    return {{"p0", c.p0()}, {"p1", c.p1()}, {"K", c.K()}, {"L", c.L()},
            {"l", c.l()}};
}

json scheme_json(const TamingScheme& s)
{
    return {{"kind", to_string(s.kind)}, {"alpha", s.alpha}, {"l", s.l}};
}

json config_json(const ExperimentConfig& cfg)
{
    json params = json::object();
    for (const auto& [k, v] : cfg.model_params) {
        params[k] = v;
    }
    return {{"model", {{"name", cfg.model_name},
                       {"params", params},
                       {"certificate_samples", cfg.certificate_samples}}},
            {"taming", scheme_json(cfg.scheme)},
            {"grid", {{"resolutions", cfg.resolutions},
                      {"reference_resolution", cfg.reference_resolution}}},
            {"montecarlo", {{"paths", cfg.path_count},
                            {"seed", cfg.master_seed},
                            {"threads", cfg.threads}}},
            {"norms", {{"strong", cfg.error_norms},
                       {"uniform", cfg.uniform_norms},
                       {"moments", cfg.moment_norms},
                       {"one_step", cfg.one_step_norms},
                       {"as_kappa", cfg.as_kappas},
                       {"assert_rate", cfg.assert_rate},
                       {"order_window", {cfg.order_min, cfg.order_max}},
                       {"max_order_se", cfg.max_order_se},
                       {"assert_moments_bounded", cfg.assert_moments_bounded}}},
            {"output", {{"directory", cfg.output_dir}}}};
}

json inequality_json(const InequalityCheck& c)
{
    json j = {{"name", c.name},
              {"evaluated", c.evaluated},
              {"violations", c.violations},
              {"max_violation", number(c.max_violation)}};
    if (c.worst_point) {
        j["worst_point"] = *c.worst_point;
    }
    return j;
}

std::optional<OrderFit> try_fit(const ErrorReport& report, double p,
                                Statistic s, std::string& failure)
{
    try {
        return report.fit(p, s);
    } catch (const FitError& e) {
        failure = e.what();
        return std::nullopt;
    }
}

json fit_json(double p, const std::optional<OrderFit>& fit,
              const std::string& failure)
{
    json j = {{"p", p}};
    if (fit) {
        j["fitted_order"] = number(fit->order);
        j["order_se"] = number(fit->order_se);
        j["intercept"] = number(fit->intercept);
        j["residual"] = number(fit->residual);
        j["points_used"] = fit->points_used;
        j["warnings"] = fit->warnings;
    } else {
        j["fitted_order"] = nullptr;
        j["order_se"] = nullptr;
        j["fit_failure"] = failure;
    }
    return j;
}

// Everything checked before simulation.
struct Prepared
{
    ModelSpec spec;
    ConditionReport certificate;
    std::vector<InequalityCheck> growth;
};

Prepared prepare(const ExperimentConfig& cfg, const RunOptions& options)
{
    auto spec = make_model(cfg.model_name, cfg.model_params);
    say(options, "model: " + spec.name + " (d=" +
                     std::to_string(spec.problem.dim_state()) + ", d1=" +
                     std::to_string(spec.problem.dim_noise()) + ")");
    const auto samples = spec.samples(cfg.certificate_samples, cfg.master_seed);
    auto report = validate_certificate(spec.problem, spec.certificate, samples);
    auto growth = check_growth_bounds(spec, samples);
    return Prepared{std::move(spec), std::move(report), std::move(growth)};
}

std::optional<std::string> certificate_refutation(const Prepared& prep)
{
    std::string msg;
    if (!prep.certificate.no_violation_found()) {
        msg += prep.certificate.summary();
    }
    for (const auto& g : prep.growth) {
        if (!g.no_violation_found()) {
            msg += g.name + ": " + std::to_string(g.violations) +
                   " violation(s)\n";
        }
    }
    if (msg.empty()) {
        return std::nullopt;
    }
    return "certificate refuted on samples:\n" + msg;
}

// Largest strong norm admitted by the gate, if any.
std::optional<double> validated_p(const ExperimentConfig& cfg,
                                  const ConditionCertificate& cert)
{
    std::optional<double> best;
    for (double p : cfg.error_norms) {
        if (validate_p_condition(cert, cfg.scheme, p).admissible) {
            best = std::max(best.value_or(p), p);
        }
    }
    return best;
}

std::optional<std::string> gate_refusal(const ExperimentConfig& cfg,
                                        const ConditionCertificate& cert)
{
    if (!cfg.assert_rate) {
        return std::nullopt;
    }
    for (double p : cfg.error_norms) {
        const auto v = validate_p_condition(cert, cfg.scheme, p);
        if (!v.admissible) {
            std::string msg = "norms.strong: rate assertion for p = " +
                              format_double(p) +
                              " refused by the p-condition:";
            for (const auto& r : v.reasons) {
                msg += "\n  - " + r;
            }
            return msg;
        }
    }
    const double p_max =
        *std::max_element(cfg.error_norms.begin(), cfg.error_norms.end());
    for (double q : cfg.uniform_norms) {
        if (!(q < p_max)) {
            return "norms.uniform: q = " + format_double(q) +
                   " must be below the validated p = " + format_double(p_max);
        }
    }
    const double window = as_rate_window(cert);
    for (double k : cfg.as_kappas) {
        if (!(k > 0.0 && k < window)) {
            return "norms.as_kappa: kappa = " + format_double(k) +
                   " outside the admissible window (0, " +
                   format_double(window) + ")";
        }
    }
    return std::nullopt;
}

struct CsvPrefix
{
    std::string model;
    std::string scheme;
    std::string alpha;
    std::string l;
};

std::string errors_csv(const CsvPrefix& prefix, const ErrorReport& report,
                       std::uint64_t seed)
{
    std::ostringstream os;
    os << "model,scheme,alpha,l,n,p,statistic,value,std_err,path_count,seed\n";
    for (const auto& e : report.entries) {
        os << prefix.model << ',' << prefix.scheme << ',' << prefix.alpha << ','
           << prefix.l << ',' << e.n << ',' << format_double(e.p) << ','
           << to_string(e.statistic) << ',' << format_double(e.value) << ','
           << format_double(e.std_err) << ',' << e.path_count << ',' << seed
           << '\n';
    }
    return os.str();
}

std::string moments_csv(const CsvPrefix& prefix, const MomentReport& report,
                        std::uint64_t seed)
{
    std::ostringstream os;
    os << "model,scheme,alpha,l,n,p,sup_moment,std_err,at_time,diverged_count,"
          "bounded,explosion,path_count,seed\n";
    for (const auto& s : report.series) {
        for (const auto& r : s.rows) {
            const bool exploded =
                !std::isfinite(r.sup_moment) || r.diverged_count > 0;
            os << prefix.model << ',' << prefix.scheme << ',' << prefix.alpha
               << ',' << prefix.l << ',' << r.n << ',' << format_double(s.p)
               << ',' << format_double(r.sup_moment) << ','
               << format_double(r.std_err) << ',' << format_double(r.at_time)
               << ',' << r.diverged_count << ',' << (s.bounded ? "true" : "false")
               << ',' << (exploded ? "true" : "false") << ','
               << report.path_count << ',' << seed << '\n';
        }
    }
    return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

RunOutcome fail(int code, const std::string& message, const RunOptions& options)
{
    say(options, message);
    RunOutcome out;
    out.exit_code = code;
    out.message = message;
    return out;
}

} // namespace

std::string sha256_hex(const std::string& bytes)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(),
                   nullptr) != 1) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xf];
    }
    return out;
}

std::string resolve_output_dir(const ExperimentConfig& cfg,
                               const RunOptions& options)
{
    if (options.output_dir) {
        return *options.output_dir;
    }
    if (const char* env = std::getenv("TAMED_OUTPUT_DIR"); env && *env) {
        return env;
    }
    return cfg.output_dir;
}

RunOutcome run_experiment(const std::string& config_path,
                          const RunOptions& options)
{
    std::string text;
    ExperimentConfig cfg;
    try {
        text = read_file(config_path);
        cfg = parse_config(text, config_path);
    } catch (const ConfigError& e) {
        return fail(exit_config_error, std::string("config error: ") + e.what(),
                    options);
    }
    return run_experiment(cfg, text, options);
}

RunOutcome validate_experiment(const std::string& config_path,
                               const RunOptions& options)
{
    ExperimentConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const ConfigError& e) {
        return fail(exit_config_error, std::string("config error: ") + e.what(),
                    options);
    }
    try {
        const auto prep = prepare(cfg, options);
        say(options, prep.certificate.summary());
        for (const auto& g : prep.growth) {
            say(options, g.name + ": " +
                             (g.no_violation_found()
                                  ? "no violation found"
                                  : std::to_string(g.violations) +
                                        " violation(s)"));
        }
        if (auto msg = certificate_refutation(prep)) {
            return fail(exit_model_error, *msg, options);
        }
        for (double p : cfg.error_norms) {
            const auto v =
                validate_p_condition(prep.spec.certificate, cfg.scheme, p);
            std::string line = "p = " + format_double(p) + ": " +
                               (v.admissible ? "admissible" : "not admissible");
            for (const auto& r : v.reasons) {
                line += "; " + r;
            }
            say(options, line);
        }
        if (auto msg = gate_refusal(cfg, prep.spec.certificate)) {
            return fail(exit_config_error, *msg, options);
        }
    } catch (const ConfigError& e) {
        return fail(exit_config_error, std::string("config error: ") + e.what(),
                    options);
    } catch (const ModelEvaluationError& e) {
        return fail(exit_model_error, std::string("model error: ") + e.what(),
                    options);
    }
    say(options, "valid");
    return {};
}

RunOutcome run_experiment(const ExperimentConfig& cfg,
                          const std::string& config_text,
                          const RunOptions& options)
{
    std::map<std::string, double> timings;
    auto phase = Clock::now();

    std::optional<Prepared> prep;
    try {
        cfg.validate();
        prep = prepare(cfg, options);
    } catch (const ConfigError& e) {
        return fail(exit_config_error, std::string("config error: ") + e.what(),
                    options);
    } catch (const ModelEvaluationError& e) {
        return fail(exit_model_error, std::string("model error: ") + e.what(),
                    options);
    }
    if (auto msg = certificate_refutation(*prep)) {
        return fail(exit_model_error, *msg, options);
    }
    const auto& spec = prep->spec;
    const auto& cert = spec.certificate;
    if (auto msg = gate_refusal(cfg, cert)) {
        return fail(exit_config_error, *msg, options);
    }
    timings["conditions"] = seconds_since(phase);

    RunOutcome out;
    out.output_dir = resolve_output_dir(cfg, options);
    const unsigned threads = options.threads.value_or(cfg.threads);

    EnsemblePlan plan;
    plan.resolutions = cfg.resolutions;
    plan.reference_resolution = cfg.reference_resolution;
    plan.error_norms = cfg.error_norms;
    plan.moment_norms = cfg.moment_norms;
    plan.one_step_norms = cfg.one_step_norms;
    plan.exact_solution = spec.exact_solution;
    EnsembleOptions eopt;
    eopt.path_count = cfg.path_count;
    eopt.master_seed = cfg.master_seed;
    eopt.threads = threads;

    phase = Clock::now();
    std::optional<Ensemble> ens;
    try {
        say(options, "simulating " + std::to_string(cfg.path_count) +
                         " coupled paths, reference n = " +
                         std::to_string(cfg.reference_resolution));
        ens = run_ensemble(spec.problem, cfg.scheme, plan, eopt);
    } catch (const ModelEvaluationError& e) {
        return fail(exit_model_error, std::string("model error: ") + e.what(),
                    options);
    }
    timings["simulation"] = seconds_since(phase);

    phase = Clock::now();
    const auto vp = validated_p(cfg, cert);
    ErrorReport report;
    json strong_j = json::array(), uniform_j = json::array(),
         exact_j = json::array(), one_step_j = json::array(),
         moments_j = json::array(), as_j = json::array();
    auto& checks = out.checks;
    auto window_check = [&](const std::string& name,
                            const std::optional<OrderFit>& fit,
                            const std::string& failure,
                            bool with_se) -> std::optional<bool> {
        CheckResult c{name, false, ""};
        if (!fit) {
            c.detail = "no fit: " + failure;
        } else {
            c.pass = fit->order >= cfg.order_min && fit->order <= cfg.order_max &&
                     (!with_se || fit->order_se < cfg.max_order_se);
            c.detail = "order " + format_double(fit->order) + " (se " +
                       format_double(fit->order_se) + "), window [" +
                       format_double(cfg.order_min) + ", " +
                       format_double(cfg.order_max) + "]" +
                       (with_se ? ", se < " + format_double(cfg.max_order_se)
                                : "");
        }
        checks.push_back(c);
        return c.pass;
    };
    auto decay_check = [&](const std::string& name,
                           const std::vector<ErrorEntry>& entries,
                           const std::optional<OrderFit>& fit)
        -> std::optional<bool> {
        if (entries.size() < 2) {
            return std::nullopt; // nothing to compare
        }
        CheckResult c{name, false, ""};
        const double first = entries.front().value;
        const double last = entries.back().value;
        c.pass = std::isfinite(first) && last < first &&
                 (!fit || fit->order > 0.0);
        c.detail = "error " + format_double(first) + " -> " + format_double(last);
        checks.push_back(c);
        return c.pass;
    };

    for (double p : cfg.error_norms) {
        const auto gate = validate_p_condition(cert, cfg.scheme, p);
        const auto entries = strong_error(*ens, p, TimeEval::terminal, gate);
        report.entries.insert(report.entries.end(), entries.begin(),
                              entries.end());
        std::string failure;
        const auto fit = try_fit(report, p, Statistic::strong, failure);
        auto j = fit_json(p, fit, failure);
        j["p_validation"] = pvalidation_json(gate);
        j["outside_rate_scope"] = !gate.admissible;
        const auto verdict =
            cfg.assert_rate
                ? window_check("strong order p=" + format_double(p), fit,
                               failure, true)
                : decay_check("strong decay p=" + format_double(p), entries, fit);
        if (verdict) {
            j["pass"] = *verdict;
        }
        strong_j.push_back(j);
        if (spec.exact_solution) {
            ErrorReport exact;
            exact.entries = exact_strong_error(*ens, p);
            std::string ef;
            const auto efit = try_fit(exact, p, Statistic::strong, ef);
            auto ej = fit_json(p, efit, ef);
            json values = json::array();
            for (const auto& e : exact.entries) {
                values.push_back({{"n", e.n},
                                  {"value", number(e.value)},
                                  {"std_err", number(e.std_err)}});
            }
            ej["errors"] = values;
            exact_j.push_back(ej);
        }
    }
    for (double q : cfg.uniform_norms) {
        const auto entries = uniform_error(*ens, q, vp);
        report.entries.insert(report.entries.end(), entries.begin(),
                              entries.end());
        std::string failure;
        const auto fit = try_fit(report, q, Statistic::uniform, failure);
        auto j = fit_json(q, fit, failure);
        j["p_validation"] = pvalidation_json(validate_p_condition(cert, cfg.scheme, q));
        j["validated_p"] = vp ? json(*vp) : json(nullptr);
        j["outside_rate_scope"] = entries.front().outside_scope;
        const auto verdict =
            cfg.assert_rate
                ? window_check("uniform order q=" + format_double(q), fit,
                               failure, false)
                : decay_check("uniform decay q=" + format_double(q), entries, fit);
        if (verdict) {
            j["pass"] = *verdict;
        }
        uniform_j.push_back(j);
    }
    for (double p : cfg.one_step_norms) {
        const auto os = one_step_report(*ens, p);
        report.entries.insert(report.entries.end(), os.rows.begin(),
                              os.rows.end());
        auto j = fit_json(p, os.fit, os.fit_failure);
        j["slope"] = os.fit ? number(os.slope()) : json(nullptr);
        j["expected_slope"] = -p / 2.0;
        j["p_validation"] = pvalidation_json(validate_p_condition(cert, cfg.scheme, p));
        const double p0 = cert.p0();
        const bool in_scope = p <= std::max(2.0, 2.0 * p0 / (cfg.scheme.l + 2.0)) &&
                              cfg.scheme.l <= p0 - 2.0;
        j["outside_rate_scope"] = !in_scope;
        if (cfg.assert_rate && in_scope) {
            CheckResult c{"one-step slope p=" + format_double(p), false, ""};
            if (os.fit) {
                const double ratio = -os.slope() / p;
                c.pass = ratio >= 0.4 && ratio <= 0.6;
                c.detail = "slope " + format_double(os.slope()) + ", window [" +
                           format_double(-0.6 * p) + ", " +
                           format_double(-0.4 * p) + "]";
            } else {
                c.detail = "no fit: " + os.fit_failure;
            }
            checks.push_back(c);
            j["pass"] = c.pass;
        }
        one_step_j.push_back(j);
    }

    const auto moments = moment_report(*ens, cfg.moment_norms);
    bool explosion = false;
    for (const auto& s : moments.series) {
        explosion = explosion || s.explosion;
        json rows = json::array();
        for (const auto& r : s.rows) {
            rows.push_back({{"n", r.n},
                            {"sup_moment", number(r.sup_moment)},
                            {"std_err", number(r.std_err)},
                            {"at_time", r.at_time},
                            {"diverged_count", r.diverged_count}});
        }
        json j = {{"p", s.p},
                  {"bounded", s.bounded},
                  {"monotone_increase", s.monotone_increase},
                  {"explosion", s.explosion},
                  {"max_over_min", number(s.max_over_min)},
                  {"rows", rows}};
        if (s.p > cert.p0()) {
            j["note"] = "p exceeds p0; no moment bound is claimed";
        }
        if (cfg.assert_moments_bounded) {
            CheckResult c{"moments bounded p=" + format_double(s.p), false, ""};
            c.pass = s.bounded && !s.monotone_increase && !s.explosion;
            c.detail = "max/min " + format_double(s.max_over_min) +
                       (s.monotone_increase ? ", monotone increase" : "") +
                       (s.explosion ? ", explosion" : "");
            checks.push_back(c);
            j["pass"] = c.pass;
        }
        moments_j.push_back(j);
    }

    for (double kappa : cfg.as_kappas) {
        const auto as = as_rate_diagnostic(*ens, kappa, cert);
        json per = json::array();
        for (std::size_t r = 0; r < as.resolutions.size(); ++r) {
            const auto& q = as.per_resolution[r];
            per.push_back({{"n", as.resolutions[r]},
                           {"q50", number(q.q50)},
                           {"q90", number(q.q90)},
                           {"q99", number(q.q99)},
                           {"max", number(q.max)}});
        }
        json j = {{"kappa", kappa},
                  {"window_upper", number(as_rate_window(cert))},
                  {"in_window", as.in_window.value_or(false)},
                  {"per_resolution", per},
                  {"q90_ratio", number(as.q90_ratio())},
                  {"zeta_q90", number(as.zeta_quantiles.q90)},
                  {"zeta_max", number(as.zeta_quantiles.max)}};
        if (cfg.assert_rate) {
            CheckResult c{"a.s. statistic kappa=" + format_double(kappa), false,
                          ""};
            c.pass = as.q90_ratio() < 2.0;
            c.detail = "q90 max/min over n " + format_double(as.q90_ratio()) +
                       " (< 2)";
            checks.push_back(c);
            j["pass"] = c.pass;
        }
        as_j.push_back(j);
    }

    std::size_t diverged_total = 0;
    json diverged = json::array();
    for (std::size_t r = 0; r < ens->resolution_count(); ++r) {
        diverged_total += ens->diverged_count(r);
        diverged.push_back({{"n", cfg.resolutions[r]},
                            {"diverged", ens->diverged_count(r)}});
    }
    const std::size_t ref_diverged = ens->reference_diverged_count();
    out.divergence_found = diverged_total > 0 || ref_diverged > 0 || explosion;
    timings["analysis"] = seconds_since(phase);

    const bool all_pass = std::all_of(checks.begin(), checks.end(),
                                      [](const CheckResult& c) { return c.pass; });
    out.exit_code = out.divergence_found ? exit_divergence
                    : all_pass           ? exit_ok
                                         : exit_acceptance_failure;

    json checks_j = json::array();
    for (const auto& c : checks) {
        checks_j.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        say(options, std::string(c.pass ? "PASS " : "FAIL ") + c.name + ": " +
                         c.detail);
    }
    json cert_checks = json::array();
    for (const auto& c : prep->certificate.checks) {
        cert_checks.push_back(inequality_json(c));
    }
    for (const auto& c : prep->growth) {
        cert_checks.push_back(inequality_json(c));
    }

    json summary = {
        {"model", spec.name},
        {"params", config_json(cfg)["model"]["params"]},
        {"scheme", scheme_json(cfg.scheme)},
        {"mode", cfg.assert_rate ? "rate" : "convergence-only"},
        {"path_count", cfg.path_count},
        {"seed", cfg.master_seed},
        {"resolutions", cfg.resolutions},
        {"reference_resolution", cfg.reference_resolution},
        {"certificate", certificate_json(cert)},
        {"certificate_checks", cert_checks},
        {"strong", strong_j},
        {"uniform", uniform_j},
        {"exact_strong", exact_j},
        {"one_step", one_step_j},
        {"moments", moments_j},
        {"as_rate", as_j},
        {"divergence",
         {{"found", out.divergence_found},
          {"per_resolution", diverged},
          {"reference_diverged", ref_diverged}}},
        {"checks", checks_j},
        {"pass", all_pass},
        {"exit_code", out.exit_code},
    };

    phase = Clock::now();
    const CsvPrefix prefix{spec.name, to_string(cfg.scheme.kind),
                           format_double(cfg.scheme.alpha),
                           format_double(cfg.scheme.l)};
    const std::vector<std::pair<std::string, std::string>> files = {
        {"errors.csv", errors_csv(prefix, report, cfg.master_seed)},
        {"moments.csv", moments_csv(prefix, moments, cfg.master_seed)},
        {"summary.json", summary.dump(2) + "\n"},
    };
    json inventory = json::array();
    try {
        const std::filesystem::path dir(out.output_dir);
        std::filesystem::create_directories(dir);
        for (const auto& [name, text] : files) {
            write_text(dir / name, text);
            inventory.push_back(
                {{"name", name}, {"bytes", text.size()}, {"sha256", sha256_hex(text)}});
        }
        timings["write"] = seconds_since(phase);
        json t = json::object();
        for (const auto& [k, v] : timings) {
            t[k] = v;
        }
        const json manifest = {
            {"software", "tamed"},
            {"version", software_version},
            {"master_seed", cfg.master_seed},
            {"config", {{"text", config_text}, {"parsed", config_json(cfg)}}},
            {"execution",
             {{"threads", threads},
              {"route", to_string(ens->route_used)},
              {"simd", kernels::to_string(ens->simd_used)}}},
            {"timings_seconds", t},
            {"files", inventory},
        };
        write_text(dir / "manifest.json", manifest.dump(2) + "\n");
    } catch (const std::exception& e) {
        return fail(exit_config_error,
                    std::string("output.directory: ") + e.what(), options);
    }
    say(options, "wrote " + out.output_dir + "/{errors.csv, moments.csv, "
                 "summary.json, manifest.json}");
    return out;
}

} // namespace tamed
