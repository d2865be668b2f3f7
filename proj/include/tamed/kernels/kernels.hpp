#pragma once

#include <cstddef>
#include <string>

#include "tamed/core/problem.hpp"

//---------------------------------------------------------------------------//
// Data-parallel inner loops of the batched ensemble runner.
//
// Each routine has a scalar reference implementation and, on x86-64, an AVX2
// variant chosen at runtime. Variants must agree bit for bit with the
// reference (no FMA contraction, IEEE sqrt/div only), so ensemble reports do
// not depend on the host CPU or on the TAMED_SIMD override.
//---------------------------------------------------------------------------//
namespace tamed::kernels {

enum class SimdLevel
{
    scalar,
    avx2,
};

std::string to_string(SimdLevel level);

struct StepParams
{
    ScalarModelKernel model;
    TamingKind taming = TamingKind::identity;
    double scale = 1.0; // n^-alpha
    double l = 0.0;     // Model 2 exponent
};

// One explicit step for `count` independent scalar paths:
//   x[i] <- (x[i] + b_n(x[i]) dt) + sigma_n(x[i]) dw[i].
using StepFn = void (*)(const StepParams& params, double dt, double* x,
                        const double* dw, std::size_t count);

// Row-group sums of a row-major (rows x lanes) block:
//   out[k * lanes + j] = fine[(k g) lanes + j] + ... (left to right)
// over the rows of group k; the last group may be partial.
using AggregateFn = void (*)(const double* fine, std::size_t rows,
                             std::size_t lanes, std::size_t group,
                             double* out);

struct KernelTable
{
    SimdLevel level;
    StepFn step;
    AggregateFn aggregate;
};

namespace scalar {
void step(const StepParams& params, double dt, double* x, const double* dw,
          std::size_t count);
void aggregate(const double* fine, std::size_t rows, std::size_t lanes,
               std::size_t group, double* out);
} // namespace scalar

namespace avx2 {
// Null when the AVX2 variants were not compiled in.
const KernelTable* table() noexcept;
} // namespace avx2

bool cpu_has_avx2() noexcept;

// Best level supported by this build and CPU; TAMED_SIMD=scalar|avx2 caps it.
SimdLevel detect_level();

// Table for `level`, falling back to scalar when it is unavailable.
const KernelTable& table(SimdLevel level);
const KernelTable& best_table();

} // namespace tamed::kernels
