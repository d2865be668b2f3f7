#include "tamed/kernels/kernels.hpp"

#if defined(TAMED_HAVE_AVX2)

#include <immintrin.h>

namespace tamed::kernels::avx2 {

namespace {

using Form = ScalarModelKernel::Form;

constexpr std::size_t lanes = 4;

inline __m256d abs_pd(__m256d v)
{
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

template <Form F>
inline void coefficients(const ScalarModelKernel& m, __m256d x, __m256d& b,
                         __m256d& s)
{
    if constexpr (F == Form::three_half) {
        const __m256d ax = abs_pd(x);
        b = _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(m.c0), x),
                          _mm256_sub_pd(_mm256_set1_pd(m.c1), ax));
        s = _mm256_mul_pd(_mm256_set1_pd(m.c2),
                          _mm256_mul_pd(ax, _mm256_sqrt_pd(ax)));
    } else if constexpr (F == Form::ginzburg_landau) {
        const __m256d cube = _mm256_mul_pd(_mm256_mul_pd(x, x), x);
        b = _mm256_sub_pd(_mm256_mul_pd(_mm256_set1_pd(m.c0), x), cube);
        s = _mm256_mul_pd(_mm256_set1_pd(m.c1), x);
    } else {
        b = _mm256_mul_pd(_mm256_set1_pd(m.c0), x);
        s = _mm256_mul_pd(_mm256_set1_pd(m.c1), x);
    }
}

template <Form F, TamingKind T>
void step_impl(const StepParams& p, double dt, double* x, const double* dw,
               std::size_t count)
{
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d scale = _mm256_set1_pd(p.scale);
    const __m256d vdt = _mm256_set1_pd(dt);
    std::size_t i = 0;
    for (; i + lanes <= count; i += lanes) {
        const __m256d xi = _mm256_loadu_pd(x + i);
        __m256d b;
        __m256d s;
        coefficients<F>(p.model, xi, b, s);
        if constexpr (T == TamingKind::model1) {
            const __m256d denom = _mm256_add_pd(
                _mm256_add_pd(one, _mm256_mul_pd(scale, abs_pd(b))),
                _mm256_mul_pd(scale, _mm256_mul_pd(s, s)));
            const __m256d f = _mm256_div_pd(one, denom);
            b = _mm256_mul_pd(f, b);
            s = _mm256_mul_pd(f, s);
        } else if constexpr (T == TamingKind::model2) {
            const __m256d ax = abs_pd(xi);
            __m256d power;
            if (p.l == 0.0) {
                power = one;
            } else if (p.l == 1.0) {
                power = ax;
            } else {
                power = _mm256_mul_pd(ax, ax);
            }
            const __m256d f =
                _mm256_div_pd(one, _mm256_add_pd(one, _mm256_mul_pd(scale, power)));
            b = _mm256_mul_pd(f, b);
            s = _mm256_mul_pd(f, s);
        }
        const __m256d next =
            _mm256_add_pd(_mm256_add_pd(xi, _mm256_mul_pd(b, vdt)),
                          _mm256_mul_pd(s, _mm256_loadu_pd(dw + i)));
        _mm256_storeu_pd(x + i, next);
    }
    if (i < count) {
        scalar::step(p, dt, x + i, dw + i, count - i);
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

void step(const StepParams& params, double dt, double* x, const double* dw,
          std::size_t count)
{
    // Only the integer Model 2 exponents have an exact vector form.
    if (params.taming == TamingKind::model2 && params.l != 0.0 &&
        params.l != 1.0 && params.l != 2.0) {
        scalar::step(params, dt, x, dw, count);
        return;
    }
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

void aggregate(const double* fine, std::size_t rows, std::size_t width,
               std::size_t group, double* out)
{
    for (std::size_t first = 0, k = 0; first < rows; first += group, ++k) {
        const std::size_t last = first + group < rows ? first + group : rows;
        double* dst = out + k * width;
        std::size_t j = 0;
        for (; j + lanes <= width; j += lanes) {
            __m256d acc = _mm256_loadu_pd(fine + first * width + j);
            for (std::size_t r = first + 1; r < last; ++r) {
                acc = _mm256_add_pd(acc, _mm256_loadu_pd(fine + r * width + j));
            }
            _mm256_storeu_pd(dst + j, acc);
        }
        for (; j < width; ++j) {
            double acc = fine[first * width + j];
            for (std::size_t r = first + 1; r < last; ++r) {
                acc += fine[r * width + j];
            }
            dst[j] = acc;
        }
    }
}

constexpr KernelTable avx2_table{SimdLevel::avx2, &step, &aggregate};

} // namespace

const KernelTable* table() noexcept { return &avx2_table; }

} // namespace tamed::kernels::avx2

#else

namespace tamed::kernels::avx2 {
const KernelTable* table() noexcept { return nullptr; }
} // namespace tamed::kernels::avx2

#endif
