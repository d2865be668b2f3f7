#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tamed/integrator/rng.hpp"

namespace tamed {

using Vector = std::vector<double>;

// b(t, x) written into `out` (size d).
using DriftFn = std::function<void(double t, std::span<const double> x,
                                   std::span<double> out)>;
// sigma(t, x) written row-major into `out` (size d * d1).
using DiffusionFn = std::function<void(double t, std::span<const double> x,
                                       std::span<double> out)>;
// Draws an F_0-measurable initial value from the path's own stream.
// Finiteness of E|X(0)|^p0 is the caller's responsibility.
using InitialSampler =
    std::function<void(CounterEngine& engine, std::span<double> out)>;

using InitialValue = std::variant<Vector, InitialSampler>;

/*!
 * Closed-form scalar models that the batched kernels can step without a
 * std::function call per lane. Coefficients (d = d1 = 1):
 *   three_half:      b = c0 x (c1 - |x|),  sigma = c2 |x|^{3/2}
 *   ginzburg_landau: b = c0 x - x^3,       sigma = c1 x
 *   linear:          b = c0 x,             sigma = c1 x
 */
struct ScalarModelKernel
{
    enum class Form
    {
        three_half,
        ginzburg_landau,
        linear,
    };
    Form form;
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
};

//---------------------------------------------------------------------------//
/*!
 * dX = b(t, X) dt + sigma(t, X) dW on [0, T], X in R^d, W in R^{d1}.
 *
 * Immutable after construction. When `kernel` is set, the closures must
 * evaluate exactly the expressions of the corresponding kernel form; the
 * ensemble runner then steps the scalar problem through the batched kernels.
 */
class SdeProblem
{
  public:
    SdeProblem(std::string name, std::size_t dim_state, std::size_t dim_noise,
               double horizon, DriftFn drift, DiffusionFn diffusion,
               InitialValue initial,
               std::optional<ScalarModelKernel> kernel = std::nullopt);

    const std::string& name() const noexcept { return name_; }
    std::size_t dim_state() const noexcept { return dim_state_; }
    std::size_t dim_noise() const noexcept { return dim_noise_; }
    double horizon() const noexcept { return horizon_; }
    const std::optional<ScalarModelKernel>& kernel() const noexcept
    {
        return kernel_;
    }

    void drift(double t, std::span<const double> x, std::span<double> out) const
    {
        drift_(t, x, out);
    }
    void diffusion(double t, std::span<const double> x,
                   std::span<double> out) const
    {
        diffusion_(t, x, out);
    }

    Vector drift(double t, std::span<const double> x) const;
    Vector diffusion(double t, std::span<const double> x) const;

    bool has_fixed_initial() const noexcept
    {
        return std::holds_alternative<Vector>(initial_);
    }
    // Realised initial value of a path with the given stream key.
    void initial_value(std::uint64_t stream_key, std::span<double> out) const;

  private:
    std::string name_;
    std::size_t dim_state_;
    std::size_t dim_noise_;
    double horizon_;
    DriftFn drift_;
    DiffusionFn diffusion_;
    InitialValue initial_;
    std::optional<ScalarModelKernel> kernel_;
};

//---------------------------------------------------------------------------//
/*!
 * Constants claimed for a problem by the coercivity condition
 *   2 x.b + (p0 - 1)|sigma|^2 <= K (1 + |x|^2)
 * and the global monotonicity / polynomial Lipschitz conditions
 *   2 (x-y).(b(x)-b(y)) + (p1 - 1)|sigma(x)-sigma(y)|^2 <= L |x-y|^2,
 *   |b(x) - b(y)| <= L (1 + |x|^l + |y|^l) |x - y|.
 */
class ConditionCertificate
{
  public:
    ConditionCertificate(double p0, double p1, double K, double L, double l);

    double p0() const noexcept { return p0_; }
    double p1() const noexcept { return p1_; }
    double K() const noexcept { return K_; }
    double L() const noexcept { return L_; }
    double l() const noexcept { return l_; }

  private:
    double p0_;
    double p1_;
    double K_;
    double L_;
    double l_;
};

enum class TamingKind
{
    identity,
    model1,
    model2,
};

std::string to_string(TamingKind kind);
TamingKind parse_taming_kind(const std::string& text);

//---------------------------------------------------------------------------//
// Which taming is applied, with alpha in (0, 1/2] and (Model 2) exponent l.
struct TamingScheme
{
    TamingKind kind = TamingKind::identity;
    double alpha = 0.5;
    double l = 0.0;

    static TamingScheme identity() { return {}; }
    static TamingScheme model1(double alpha);
    static TamingScheme model2(double alpha, double l);

    // Throws std::invalid_argument when alpha or l are out of range.
    void validate() const;
    std::string describe() const;
};

struct PValidation
{
    double p = 0.0;
    bool admissible = false;
    // min(p1, p0/(2l+1)); the p1 side of the bound is strict.
    double max_admissible_p = 0.0;
    bool max_is_strict = false;
    double growth_bound = 0.0; // p0 / (2l + 1)
    std::vector<std::string> reasons;
};

/*!
 * Gate for the rate-1/2 results: admissible iff alpha = 1/2,
 * l <= (p0-2)/4, p < p1 and p <= p0/(2l+1), with l taken from the
 * certificate.
 */
PValidation validate_p_condition(const ConditionCertificate& cert,
                                 const TamingScheme& scheme, double p);

} // namespace tamed
