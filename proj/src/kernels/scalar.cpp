#include <cmath>

#include "tamed/core/norms.hpp"
#include "tamed/kernels/kernels.hpp"
#include "tamed/kernels/scalar_math.hpp"

namespace tamed::kernels::scalar {

namespace {

using Form = ScalarModelKernel::Form;

template <Form F>
inline void coefficients(const ScalarModelKernel& m, double x, double& b,
                         double& s)
{
    if constexpr (F == Form::three_half) {
        b = math::three_half_drift(m.c0, m.c1, x);
        s = math::three_half_diffusion(m.c2, x);
    } else if constexpr (F == Form::ginzburg_landau) {
        b = math::ginzburg_landau_drift(m.c0, x);
        s = math::linear_coefficient(m.c1, x);
    } else {
        b = math::linear_coefficient(m.c0, x);
        s = math::linear_coefficient(m.c1, x);
    }
}

template <Form F, TamingKind T>
void step_impl(const StepParams& p, double dt, double* x, const double* dw,
               std::size_t count)
{
    for (std::size_t i = 0; i < count; ++i) {
        const double xi = x[i];
        double b;
        double s;
        coefficients<F>(p.model, xi, b, s);
        if constexpr (T == TamingKind::model1) {
            const double f =
                1.0 / (1.0 + p.scale * std::fabs(b) + p.scale * (s * s));
            b = f * b;
            s = f * s;
        } else if constexpr (T == TamingKind::model2) {
            const double f =
                1.0 / (1.0 + p.scale * pow_exponent(std::fabs(xi), p.l));
            b = f * b;
            s = f * s;
        }
        x[i] = (xi + b * dt) + s * dw[i];
    }
}

template <Form F>
void step_form(const StepParams& p, double dt, double* x, const double* dw,
               std::size_t count)
{
    switch (p.taming) {
    case TamingKind::identity:
        step_impl<F, TamingKind::identity>(p, dt, x, dw, count);
        break;
    case TamingKind::model1:
        step_impl<F, TamingKind::model1>(p, dt, x, dw, count);
        break;
    case TamingKind::model2:
        step_impl<F, TamingKind::model2>(p, dt, x, dw, count);
        break;
    }
}

} // namespace

void step(const StepParams& params, double dt, double* x, const double* dw,
          std::size_t count)
{
    switch (params.model.form) {
    case Form::three_half:
        step_form<Form::three_half>(params, dt, x, dw, count);
        break;
    case Form::ginzburg_landau:
        step_form<Form::ginzburg_landau>(params, dt, x, dw, count);
        break;
    case Form::linear:
        step_form<Form::linear>(params, dt, x, dw, count);
        break;
    }
}

void aggregate(const double* fine, std::size_t rows, std::size_t lanes,
               std::size_t group, double* out)
{
    for (std::size_t first = 0, k = 0; first < rows; first += group, ++k) {
        const std::size_t last = first + group < rows ? first + group : rows;
        double* dst = out + k * lanes;
        const double* src = fine + first * lanes;
        for (std::size_t j = 0; j < lanes; ++j) {
            dst[j] = src[j];
        }
        for (std::size_t r = first + 1; r < last; ++r) {
            src = fine + r * lanes;
            for (std::size_t j = 0; j < lanes; ++j) {
                dst[j] += src[j];
            }
        }
    }
}

} // namespace tamed::kernels::scalar
