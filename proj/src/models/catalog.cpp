#include "tamed/models/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tamed/core/errors.hpp"
#include "tamed/core/format.hpp"
#include "tamed/core/norms.hpp"
#include "tamed/kernels/scalar_math.hpp"

namespace tamed {

namespace {

namespace km = kernels::math;

void require(bool ok, const std::string& what)
{
    if (!ok) {
        throw std::invalid_argument(what);
    }
}

// xi xi^T positive definite, via a Cholesky factorisation of the Gram matrix.
bool gram_positive_definite(const std::vector<double>& xi, std::size_t d,
                            std::size_t d1)
{
    std::vector<double> g(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            for (std::size_t k = 0; k < d1; ++k) {
                g[i * d + j] += xi[i * d1 + k] * xi[j * d1 + k];
            }
        }
    }
    double scale = 0.0;
    for (double v : g) {
        scale = std::max(scale, std::fabs(v));
    }
    for (std::size_t j = 0; j < d; ++j) {
        double diag = g[j * d + j];
        for (std::size_t k = 0; k < j; ++k) {
            diag -= g[j * d + k] * g[j * d + k];
        }
        if (!(diag > 1e-12 * scale)) {
            return false;
        }
        const double root = std::sqrt(diag);
        g[j * d + j] = root;
        for (std::size_t i = j + 1; i < d; ++i) {
            double v = g[i * d + j];
            for (std::size_t k = 0; k < j; ++k) {
                v -= g[i * d + k] * g[j * d + k];
            }
            g[i * d + j] = v / root;
        }
    }
    return true;
}

std::string join_vector(const Vector& v)
{
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? ", " : "") + format_double(v[i]);
    }
    return s + "]";
}

} // namespace

SampleSpec ModelSpec::samples(std::size_t count, std::uint64_t seed) const
{
    return SampleSpec::random_cloud(problem.dim_state(), count,
                                    sample_half_width, seed);
}

ModelSpec three_half_model(double lambda, double mu,
                           const std::vector<double>& xi, std::size_t dim_noise,
                           const Vector& x0, double horizon)
{
    const std::size_t d = x0.size();
    const std::size_t d1 = dim_noise;
    require(lambda > 0.0 && std::isfinite(lambda), "lambda must be positive");
    require(mu > 0.0 && std::isfinite(mu), "mu must be positive");
    require(d >= 1, "x0 must not be empty");
    require(d1 >= 1, "d1 must be >= 1");
    require(xi.size() == d * d1, "xi must have d * d1 entries");
    require(all_finite(xi), "xi must be finite");
    require(std::all_of(x0.begin(), x0.end(), [](double v) { return v > 0.0; }),
            "x0 entries must be positive");
    require(gram_positive_definite(xi, d, d1),
            "xi xi^T must be positive definite");

    const double xi_sq = hilbert_schmidt_sq(xi);
    require(lambda >= xi_sq, "lambda must be >= |xi|^2 so that p1 >= 2");
    const double p0 = (2.0 * lambda + xi_sq) / xi_sq;
    const double p1 = (lambda + xi_sq) / xi_sq;
    const double K = 2.0 * lambda * mu;
    const double L = std::max(K, lambda * std::max(mu, 1.0));

    DriftFn drift = [lambda, mu](double, std::span<const double> x,
                                 std::span<double> out) {
        const double r = euclidean_norm(x);
        for (std::size_t i = 0; i < x.size(); ++i) {
            out[i] = (lambda * x[i]) * (mu - r);
        }
    };
    DiffusionFn diffusion = [xi](double, std::span<const double> x,
                                 std::span<double> out) {
        const double g = km::three_half_power(euclidean_norm(x));
        for (std::size_t i = 0; i < xi.size(); ++i) {
            out[i] = xi[i] * g;
        }
    };
    std::optional<ScalarModelKernel> kernel;
    if (d == 1 && d1 == 1) {
        kernel = ScalarModelKernel{ScalarModelKernel::Form::three_half, lambda,
                                   mu, xi[0]};
    }

    ModelSpec spec{
        "three-half",
        {{"lambda", lambda},
         {"mu", mu},
         {"xi_sq", xi_sq},
         {"d", static_cast<double>(d)},
         {"d1", static_cast<double>(d1)},
         {"T", horizon}},
        SdeProblem("three-half", d, d1, horizon, std::move(drift),
                   std::move(diffusion), x0, kernel),
        ConditionCertificate(p0, p1, K, L, 1.0),
        lambda * (mu + 1.0),
        xi_sq,
        10.0,
        {
            "coercivity: 2x.b + (p0-1)|sigma|^2 = 2 lambda mu |x|^2 when "
            "(p0-1)|xi|^2 = 2 lambda, giving p0 = (2 lambda + |xi|^2)/|xi|^2 "
            "and K = 2 lambda mu",
            "monotonicity: (|x|^{3/2} - |y|^{3/2})^2 <= 2 (x-y).(x|x| - y|y|) "
            "absorbs the diffusion term when (p1-1)|xi|^2 = lambda, giving "
            "p1 = (lambda + |xi|^2)/|xi|^2 with L >= 2 lambda mu",
            "polynomial Lipschitz: |b(x)-b(y)| <= lambda max(mu,1) "
            "(1+|x|+|y|)|x-y|, so l = 1; L is the larger of the two constants",
            "growth: |b| <= lambda(mu+1)(1+|x|^2), |sigma|^2 = |xi|^2 |x|^3",
            "xi is read as a d x d1 matrix with xi xi^T positive definite",
        },
        {},
    };
    return spec;
}

ModelSpec three_half_model(double lambda, double mu, double xi_scale,
                           std::size_t dim_noise, const Vector& x0,
                           double horizon)
{
    const std::size_t d = x0.size();
    require(xi_scale > 0.0 && std::isfinite(xi_scale), "xi must be positive");
    require(dim_noise >= d, "d1 must be >= d");
    std::vector<double> xi(d * dim_noise, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        xi[i * dim_noise + i] = xi_scale;
    }
    auto spec = three_half_model(lambda, mu, xi, dim_noise, x0, horizon);
    spec.params["xi"] = xi_scale;
    return spec;
}

ModelSpec ginzburg_landau_model(double a, double c, double x0, double horizon,
                                double p0, double p1)
{
    require(a > 0.0 && std::isfinite(a), "a must be positive");
    require(c > 0.0 && std::isfinite(c), "c must be positive");
    require(std::isfinite(x0), "x0 must be finite");
    require(p0 >= 2.0 && p1 >= 2.0, "p0 and p1 must be >= 2");
    const double c_sq = c * c;
    const double K = 2.0 * a + (p0 - 1.0) * c_sq;
    const double L = std::max({2.0 * a + (p1 - 1.0) * c_sq, a, 1.5});

    DriftFn drift = [a](double, std::span<const double> x,
                        std::span<double> out) {
        out[0] = km::ginzburg_landau_drift(a, x[0]);
    };
    DiffusionFn diffusion = [c](double, std::span<const double> x,
                                std::span<double> out) {
        out[0] = km::linear_coefficient(c, x[0]);
    };
    return ModelSpec{
        "ginzburg-landau",
        {{"a", a}, {"c", c}, {"x0", x0}, {"T", horizon}, {"p0", p0}, {"p1", p1}},
        SdeProblem("ginzburg-landau", 1, 1, horizon, std::move(drift),
                   std::move(diffusion), Vector{x0},
                   ScalarModelKernel{ScalarModelKernel::Form::ginzburg_landau,
                                     a, c, 0.0}),
        ConditionCertificate(p0, p1, K, L, 2.0),
        a + 1.0,
        c_sq,
        5.0,
        {
            "coercivity: 2x.b + (p0-1)|sigma|^2 = (2a + (p0-1)c^2) x^2 - 2x^4, "
            "so any p0 works with K = 2a + (p0-1)c^2",
            "monotonicity: -(x-y)(x^3-y^3) <= 0, so L = 2a + (p1-1)c^2 suffices",
            "polynomial Lipschitz: |b(x)-b(y)| <= (a + 3/2(x^2+y^2))|x-y|, "
            "so l = 2 and L >= max(a, 3/2)",
            "rate results need l <= (p0-2)/4, i.e. p0 >= 10",
            "derivation: docs/ginzburg_landau_certificate.md",
        },
        {},
    };
}

ModelSpec linear_model(double a, double c, double x0, double horizon, double p0,
                       double p1)
{
    require(std::isfinite(a) && std::isfinite(c), "a and c must be finite");
    require(std::isfinite(x0), "x0 must be finite");
    require(p0 >= 2.0 && p1 >= 2.0, "p0 and p1 must be >= 2");
    const double c_sq = c * c;
    double K = 2.0 * std::fabs(a) + (p0 - 1.0) * c_sq;
    double L = std::max(2.0 * std::fabs(a) + (p1 - 1.0) * c_sq, std::fabs(a));
    K = K > 0.0 ? K : 1.0;
    L = L > 0.0 ? L : 1.0;

    DriftFn drift = [a](double, std::span<const double> x,
                        std::span<double> out) {
        out[0] = km::linear_coefficient(a, x[0]);
    };
    DiffusionFn diffusion = [c](double, std::span<const double> x,
                                std::span<double> out) {
        out[0] = km::linear_coefficient(c, x[0]);
    };
    ExactSolution exact = [a, c](double t, std::span<const double> x_start,
                                 std::span<const double> w,
                                 std::span<double> out) {
        out[0] = x_start[0] * std::exp((a - 0.5 * c * c) * t + c * w[0]);
    };
    return ModelSpec{
        "linear",
        {{"a", a}, {"c", c}, {"x0", x0}, {"T", horizon}, {"p0", p0}, {"p1", p1}},
        SdeProblem("linear", 1, 1, horizon, std::move(drift),
                   std::move(diffusion), Vector{x0},
                   ScalarModelKernel{ScalarModelKernel::Form::linear, a, c, 0.0}),
        ConditionCertificate(p0, p1, K, L, 0.0),
        std::max(std::fabs(a), 1e-300),
        std::max(c_sq, 1e-300),
        10.0,
        {
            "globally Lipschitz: K = 2|a| + (p0-1)c^2, L = max(2|a| + (p1-1)c^2, "
            "|a|) (1 when zero), l = 0",
            "exact solution x0 exp((a - c^2/2) t + c W(t))",
        },
        std::move(exact),
    };
}

std::vector<InequalityCheck> check_growth_bounds(const ModelSpec& spec,
                                                 const SampleSpec& samples)
{
    const auto& problem = spec.problem;
    const double l = spec.certificate.l();
    InequalityCheck drift_check;
    drift_check.name = "drift_growth";
    InequalityCheck diffusion_check;
    diffusion_check.name = "diffusion_growth";
    auto record = [](InequalityCheck& c, double lhs, double rhs, double t,
                     std::span<const double> x) {
        ++c.evaluated;
        const double excess = lhs - rhs;
        if (excess > violation_slack) {
            ++c.violations;
            if (excess > c.max_violation) {
                c.max_violation = excess;
                c.worst_point = describe_point(t, x);
            }
        }
    };
    Vector b(problem.dim_state());
    Vector s(problem.dim_state() * problem.dim_noise());
    for (double t : samples.times) {
        for (const auto& x : samples.points) {
            problem.drift(t, x, b);
            problem.diffusion(t, x, s);
            if (!all_finite(b) || !all_finite(s)) {
                throw ModelEvaluationError("non-finite coefficient at " +
                                           describe_point(t, x));
            }
            const double r = euclidean_norm(x);
            record(drift_check, euclidean_norm(b),
                   spec.growth_N * (1.0 + std::pow(r, l + 1.0)), t, x);
            record(diffusion_check, hilbert_schmidt_sq(s),
                   spec.growth_C * (1.0 + std::pow(r, l + 2.0)), t, x);
        }
    }
    return {drift_check, diffusion_check};
}

std::vector<std::string> catalog_names()
{
    return {"three-half", "ginzburg-landau", "linear"};
}

std::vector<std::pair<std::string, double>> default_params(const std::string& name)
{
    if (name == "three-half") {
        return {{"lambda", 2.5}, {"mu", 1.0}, {"xi", 1.0}, {"x0", 1.0},
                {"d", 1.0},      {"d1", 0.0}, {"T", 1.0}};
    }
    if (name == "ginzburg-landau") {
        return {{"a", 1.0},  {"c", 0.5},   {"x0", 1.0},
                {"T", 1.0}, {"p0", 10.0}, {"p1", 10.0}};
    }
    if (name == "linear") {
        return {{"a", 0.05}, {"c", 0.2},  {"x0", 1.0},
                {"T", 1.0},  {"p0", 8.0}, {"p1", 8.0}};
    }
    throw ConfigError("model: unknown model '" + name + "' (known: three-half, "
                      "ginzburg-landau, linear)");
}

ModelSpec make_model(const std::string& name, const ParamMap& params)
{
    const auto defaults = default_params(name);
    ParamMap p(defaults.begin(), defaults.end());
    for (const auto& [key, value] : params) {
        if (!p.count(key)) {
            throw ConfigError("model." + key + ": unknown parameter for " + name);
        }
        p[key] = value;
    }
    auto dimension = [&](const std::string& key) {
        const double v = p.at(key);
        if (!(v >= 1.0) || v != std::floor(v) || v > 64.0) {
            throw ConfigError("model." + key + ": must be an integer in [1, 64]");
        }
        return static_cast<std::size_t>(v);
    };
    try {
        if (name == "three-half") {
            const std::size_t d = dimension("d");
            const std::size_t d1 = p.at("d1") == 0.0 ? d : dimension("d1");
            return three_half_model(p.at("lambda"), p.at("mu"), p.at("xi"), d1,
                                    Vector(d, p.at("x0")), p.at("T"));
        }
        if (name == "ginzburg-landau") {
            return ginzburg_landau_model(p.at("a"), p.at("c"), p.at("x0"),
                                         p.at("T"), p.at("p0"), p.at("p1"));
        }
        return linear_model(p.at("a"), p.at("c"), p.at("x0"), p.at("T"),
                            p.at("p0"), p.at("p1"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError("model (" + name + "): " + e.what());
    }
}

std::string describe(const ModelSpec& spec)
{
    std::ostringstream os;
    const auto& pb = spec.problem;
    const auto& c = spec.certificate;
    os << spec.name << "\n";
    os << "  parameters:";
    for (const auto& [k, v] : spec.params) {
        os << " " << k << "=" << format_double(v);
    }
    os << "\n";
    os << "  dimensions: d=" << pb.dim_state() << " d1=" << pb.dim_noise()
       << " T=" << format_double(pb.horizon()) << "\n";
    Vector x0(pb.dim_state());
    pb.initial_value(0, x0);
    os << "  x0: " << join_vector(x0) << "\n";
    os << "  certificate: p0=" << format_double(c.p0())
       << " p1=" << format_double(c.p1()) << " K=" << format_double(c.K())
       << " L=" << format_double(c.L()) << " l=" << format_double(c.l()) << "\n";
    os << "  growth: N=" << format_double(spec.growth_N)
       << " C=" << format_double(spec.growth_C) << "\n";
    os << "  sampling domain: [-" << format_double(spec.sample_half_width)
       << ", " << format_double(spec.sample_half_width) << "]^"
       << pb.dim_state() << "\n";
    os << "  exact solution: " << (spec.exact_solution ? "yes" : "no") << "\n";
    os << "  notes:\n";
    for (const auto& n : spec.notes) {
        os << "    - " << n << "\n";
    }
    return os.str();
}

} // namespace tamed
