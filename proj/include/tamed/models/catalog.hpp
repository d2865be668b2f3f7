#pragma once

#include <string>
#include <vector>

#include "tamed/core/conditions.hpp"
#include "tamed/core/experiment.hpp"
#include "tamed/core/problem.hpp"
#include "tamed/integrator/ensemble.hpp"

namespace tamed {

//---------------------------------------------------------------------------//
/*!
 * A catalog SDE with analytically derived constants.
 *
 * The certificate passes validate_certificate on samples drawn from
 * [-sample_half_width, sample_half_width]^d. N and C bound the growth:
 *   |b(x)| <= N (1 + |x|^{l+1}),  |sigma(x)|^2 <= C (1 + |x|^{l+2}).
 */
struct ModelSpec
{
    std::string name;
    ParamMap params;
    SdeProblem problem;
    ConditionCertificate certificate;
    double growth_N = 0.0;
    double growth_C = 0.0;
    double sample_half_width = 0.0;
    // Which conditions hold and where each constant comes from.
    std::vector<std::string> notes;
    ExactSolution exact_solution; // empty unless a closed form exists

    SampleSpec samples(std::size_t count, std::uint64_t seed) const;
};

/*!
 * dX = lambda X (mu - |X|) dt + xi |X|^{3/2} dW with xi a d x d1 matrix
 * (row-major) such that xi xi^T is positive definite.
 *
 * With |xi| the Frobenius norm:
 *   p0 = (2 lambda + |xi|^2) / |xi|^2,  K = 2 lambda mu,
 *   p1 = (lambda + |xi|^2) / |xi|^2,    l = 1,
 *   L = max(2 lambda mu, lambda max(mu, 1)).
 * lambda < |xi|^2 (so p1 < 2) is rejected.
 */
ModelSpec three_half_model(double lambda, double mu,
                           const std::vector<double>& xi, std::size_t dim_noise,
                           const Vector& x0, double horizon = 1.0);

// Same with xi = s [I_d | 0] in R^{d x d1}, d <= d1, so |xi|^2 = d s^2.
ModelSpec three_half_model(double lambda, double mu, double xi_scale,
                           std::size_t dim_noise, const Vector& x0,
                           double horizon = 1.0);

/*!
 * Scalar dX = (a X - X^3) dt + c X dW. Valid for any p0, p1 >= 2:
 *   K = 2a + (p0-1) c^2,  L = max(2a + (p1-1) c^2, a, 3/2),  l = 2.
 */
ModelSpec ginzburg_landau_model(double a, double c, double x0,
                                double horizon = 1.0, double p0 = 10.0,
                                double p1 = 10.0);

/*!
 * Scalar dX = a X dt + c X dW with l = 0 and the exact solution
 * X(t) = x0 exp((a - c^2/2) t + c W(t)).
 */
ModelSpec linear_model(double a, double c, double x0, double horizon = 1.0,
                       double p0 = 8.0, double p1 = 8.0);

// Sampled check of the growth bounds |b| <= N(1+|x|^{l+1}) ("drift_growth")
// and |sigma|^2 <= C(1+|x|^{l+2}) ("diffusion_growth").
std::vector<InequalityCheck> check_growth_bounds(const ModelSpec& spec,
                                                 const SampleSpec& samples);

std::vector<std::string> catalog_names();

// Parameter names with their defaults, in display order.
std::vector<std::pair<std::string, double>> default_params(const std::string& name);

// Unknown names or parameters throw ConfigError; invalid values throw
// ConfigError naming the parameter.
ModelSpec make_model(const std::string& name, const ParamMap& params = {});

std::string describe(const ModelSpec& spec);

} // namespace tamed
