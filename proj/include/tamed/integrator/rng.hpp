#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>

namespace tamed {

//---------------------------------------------------------------------------//
/*!
 * Philox4x32-10 counter-based block function.
 *
 * Maps a 128-bit counter and a 64-bit key to 128 pseudorandom bits. There is
 * no state: the n-th draw of a stream is a pure function of (key, n), which
 * is what makes every path reproducible independently of scheduling.
 */
struct Philox4x32
{
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr int rounds = 10;

    static Counter block(Counter ctr, Key key) noexcept
    {
        constexpr std::uint32_t m0 = 0xD2511F53u;
        constexpr std::uint32_t m1 = 0xCD9E8D57u;
        constexpr std::uint32_t w0 = 0x9E3779B9u;
        constexpr std::uint32_t w1 = 0xBB67AE85u;
        for (int r = 0; r < rounds; ++r) {
            const std::uint64_t p0 = std::uint64_t{m0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{m1} * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += w0;
            key[1] += w1;
        }
        return ctr;
    }
};

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/*!
 * Per-path stream key: mix64(master_seed ^ mix64(path_id + golden_gamma)).
 *
 * The inner mix decorrelates consecutive path ids before they are combined
 * with the seed; the outer mix spreads the result over all 64 bits.
 */
constexpr std::uint64_t derive_stream_key(std::uint64_t master_seed,
                                          std::uint64_t path_id) noexcept
{
    return mix64(master_seed ^ mix64(path_id + 0x9e3779b97f4a7c15ull));
}

// Disjoint counter domains within a path stream.
enum class StreamDomain : std::uint32_t
{
    brownian = 0,
    initial_value = 1,
};

// Maps 64 random bits to a double in (0, 1] with 53 bits of resolution.
constexpr double to_unit_open_closed(std::uint64_t bits) noexcept
{
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

/*!
 * Standard normal variates of a path stream, indexed by position.
 *
 * Variate 2b and 2b+1 come from one Box-Muller transform of the Philox block
 * with counter (b, domain): u1 from the first 64 bits, u2 from the second;
 * z0 = sqrt(-2 ln u1) cos(2 pi u2), z1 = sqrt(-2 ln u1) sin(2 pi u2).
 */
void fill_standard_normals(std::uint64_t stream_key, StreamDomain domain,
                           std::span<double> out);

// UniformRandomBitGenerator over a single (key, domain) counter stream.
class CounterEngine
{
  public:
    using result_type = std::uint64_t;

    CounterEngine(std::uint64_t stream_key, StreamDomain domain) noexcept;

    static constexpr result_type min() { return 0; }
    static constexpr result_type max()
    {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept;

    // Uniform in (0, 1].
    double uniform() noexcept { return to_unit_open_closed((*this)()); }

  private:
    Philox4x32::Key key_;
    std::uint32_t domain_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int used_ = 2;
};

} // namespace tamed
