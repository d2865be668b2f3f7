#include "tamed/core/problem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tamed/core/errors.hpp"
#include "tamed/core/norms.hpp"

namespace tamed {

SdeProblem::SdeProblem(std::string name, std::size_t dim_state,
                       std::size_t dim_noise, double horizon, DriftFn drift,
                       DiffusionFn diffusion, InitialValue initial,
                       std::optional<ScalarModelKernel> kernel)
    : name_(std::move(name)),
      dim_state_(dim_state),
      dim_noise_(dim_noise),
      horizon_(horizon),
      drift_(std::move(drift)),
      diffusion_(std::move(diffusion)),
      initial_(std::move(initial)),
      kernel_(kernel)
{
    if (dim_state_ < 1 || dim_noise_ < 1) {
        throw std::invalid_argument("SdeProblem: dimensions must be >= 1");
    }
    if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) {
        throw std::invalid_argument("SdeProblem: horizon must be positive");
    }
    if (!drift_ || !diffusion_) {
        throw std::invalid_argument("SdeProblem: missing coefficient");
    }
    if (const auto* x0 = std::get_if<Vector>(&initial_)) {
        if (x0->size() != dim_state_) {
            throw std::invalid_argument(
                "SdeProblem: initial value has wrong dimension");
        }
        if (!all_finite(*x0)) {
            throw std::invalid_argument("SdeProblem: initial value not finite");
        }
    } else if (!std::get<InitialSampler>(initial_)) {
        throw std::invalid_argument("SdeProblem: empty initial sampler");
    }
    if (kernel_ && (dim_state_ != 1 || dim_noise_ != 1)) {
        throw std::invalid_argument(
            "SdeProblem: scalar kernels require d = d1 = 1");
    }
}

Vector SdeProblem::drift(double t, std::span<const double> x) const
{
    Vector out(dim_state_);
    drift_(t, x, out);
    return out;
}

Vector SdeProblem::diffusion(double t, std::span<const double> x) const
{
    Vector out(dim_state_ * dim_noise_);
    diffusion_(t, x, out);
    return out;
}

void SdeProblem::initial_value(std::uint64_t stream_key,
                               std::span<double> out) const
{
    if (const auto* x0 = std::get_if<Vector>(&initial_)) {
        std::copy(x0->begin(), x0->end(), out.begin());
        return;
    }
    CounterEngine engine(stream_key, StreamDomain::initial_value);
    std::get<InitialSampler>(initial_)(engine, out);
    if (!all_finite(out)) {
        throw ModelEvaluationError(
            "initial-value sampler returned a non-finite value");
    }
}

ConditionCertificate::ConditionCertificate(double p0, double p1, double K,
                                           double L, double l)
    : p0_(p0), p1_(p1), K_(K), L_(L), l_(l)
{
    if (!(p0_ >= 2.0) || !(p1_ >= 2.0)) {
        throw std::invalid_argument(
            "ConditionCertificate: p0 and p1 must lie in [2, inf)");
    }
    if (!(K_ > 0.0) || !(L_ > 0.0)) {
        throw std::invalid_argument(
            "ConditionCertificate: K and L must be positive");
    }
    if (!(l_ >= 0.0)) {
        throw std::invalid_argument("ConditionCertificate: l must be >= 0");
    }
    if (!std::isfinite(p0_) || !std::isfinite(p1_) || !std::isfinite(K_) ||
        !std::isfinite(L_) || !std::isfinite(l_)) {
        throw std::invalid_argument("ConditionCertificate: non-finite constant");
    }
}

std::string to_string(TamingKind kind)
{
    switch (kind) {
    case TamingKind::identity:
        return "identity";
    case TamingKind::model1:
        return "model1";
    case TamingKind::model2:
        return "model2";
    }
    return "unknown";
}

TamingKind parse_taming_kind(const std::string& text)
{
    if (text == "identity" || text == "none") {
        return TamingKind::identity;
    }
    if (text == "model1") {
        return TamingKind::model1;
    }
    if (text == "model2") {
        return TamingKind::model2;
    }
    throw std::invalid_argument("unknown taming kind '" + text +
                                "' (expected identity, model1 or model2)");
}

TamingScheme TamingScheme::model1(double alpha)
{
    TamingScheme s{TamingKind::model1, alpha, 0.0};
    s.validate();
    return s;
}

TamingScheme TamingScheme::model2(double alpha, double l)
{
    TamingScheme s{TamingKind::model2, alpha, l};
    s.validate();
    return s;
}

void TamingScheme::validate() const
{
    if (!(alpha > 0.0 && alpha <= 0.5)) {
        throw std::invalid_argument("taming alpha must lie in (0, 1/2]");
    }
    if (kind == TamingKind::model2 && !(l >= 0.0 && std::isfinite(l))) {
        throw std::invalid_argument("Model 2 taming requires l >= 0");
    }
}

std::string TamingScheme::describe() const
{
    std::ostringstream os;
    os << to_string(kind);
    if (kind != TamingKind::identity) {
        os << "(alpha=" << alpha;
        if (kind == TamingKind::model2) {
            os << ", l=" << l;
        }
        os << ")";
    }
    return os.str();
}

PValidation validate_p_condition(const ConditionCertificate& cert,
                                 const TamingScheme& scheme, double p)
{
    if (!(p > 0.0)) {
        throw std::invalid_argument("validate_p_condition: p must be positive");
    }
    PValidation v;
    v.p = p;
    const double l = cert.l();
    v.growth_bound = cert.p0() / (2.0 * l + 1.0);
    v.max_is_strict = cert.p1() <= v.growth_bound;
    v.max_admissible_p = std::min(cert.p1(), v.growth_bound);

    auto fmt = [](double x) {
        std::ostringstream os;
        os << x;
        return os.str();
    };
    if (scheme.alpha != 0.5) {
        v.reasons.push_back("p-condition requires alpha = 1/2 (got " +
                            fmt(scheme.alpha) + ")");
    }
    if (!(l <= (cert.p0() - 2.0) / 4.0)) {
        v.reasons.push_back("l = " + fmt(l) + " exceeds (p0-2)/4 = " +
                            fmt((cert.p0() - 2.0) / 4.0));
    }
    if (!(p < cert.p1())) {
        v.reasons.push_back("p = " + fmt(p) + " is not < p1 = " +
                            fmt(cert.p1()));
    }
    if (!(p <= v.growth_bound)) {
        v.reasons.push_back("p = " + fmt(p) + " exceeds p0/(2l+1) = " +
                            fmt(v.growth_bound));
    }
    v.admissible = v.reasons.empty();
    return v;
}

} // namespace tamed
