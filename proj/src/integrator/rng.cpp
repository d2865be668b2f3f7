#include "tamed/integrator/rng.hpp"

#include <cmath>
#include <numbers>

namespace tamed {

namespace {

Philox4x32::Key key_of(std::uint64_t stream_key)
{
    return {static_cast<std::uint32_t>(stream_key),
            static_cast<std::uint32_t>(stream_key >> 32)};
}

Philox4x32::Counter counter_of(std::uint64_t block, std::uint32_t domain)
{
    return {static_cast<std::uint32_t>(block),
            static_cast<std::uint32_t>(block >> 32), domain, 0u};
}

std::uint64_t join(std::uint32_t hi, std::uint32_t lo)
{
    return (std::uint64_t{hi} << 32) | lo;
}

} // namespace

void fill_standard_normals(std::uint64_t stream_key, StreamDomain domain,
                           std::span<double> out)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const auto key = key_of(stream_key);
    const auto dom = static_cast<std::uint32_t>(domain);
    for (std::size_t i = 0, b = 0; i < out.size(); i += 2, ++b) {
        const auto r = Philox4x32::block(counter_of(b, dom), key);
        const double u1 = to_unit_open_closed(join(r[0], r[1]));
        const double u2 = to_unit_open_closed(join(r[2], r[3]));
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = two_pi * u2;
        out[i] = radius * std::cos(angle);
        if (i + 1 < out.size()) {
            out[i + 1] = radius * std::sin(angle);
        }
    }
}

CounterEngine::CounterEngine(std::uint64_t stream_key,
                             StreamDomain domain) noexcept
    : key_(key_of(stream_key)), domain_(static_cast<std::uint32_t>(domain))
{
}

CounterEngine::result_type CounterEngine::operator()() noexcept
{
    if (used_ == 2) {
        const auto r = Philox4x32::block(counter_of(block_++, domain_), key_);
        buffer_ = {join(r[0], r[1]), join(r[2], r[3])};
        used_ = 0;
    }
    return buffer_[used_++];
}

} // namespace tamed
