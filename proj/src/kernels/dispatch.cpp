#include <cstdlib>
#include <stdexcept>
#include <string>

#include "tamed/kernels/kernels.hpp"

namespace tamed::kernels {

namespace {

constexpr KernelTable scalar_table{SimdLevel::scalar, &scalar::step,
                                   &scalar::aggregate};

} // namespace

std::string to_string(SimdLevel level)
{
    return level == SimdLevel::avx2 ? "avx2" : "scalar";
}

bool cpu_has_avx2() noexcept
{
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

SimdLevel detect_level()
{
    SimdLevel level = (avx2::table() != nullptr && cpu_has_avx2())
                          ? SimdLevel::avx2
                          : SimdLevel::scalar;
    if (const char* env = std::getenv("TAMED_SIMD")) {
        const std::string value(env);
        if (value == "scalar") {
            level = SimdLevel::scalar;
        } else if (value != "avx2" && !value.empty()) {
            throw std::invalid_argument("TAMED_SIMD must be 'scalar' or 'avx2'");
        }
    }
    return level;
}

const KernelTable& table(SimdLevel level)
{
    if (level == SimdLevel::avx2 && avx2::table() != nullptr && cpu_has_avx2()) {
        return *avx2::table();
    }
    return scalar_table;
}

const KernelTable& best_table() { return table(detect_level()); }

} // namespace tamed::kernels
