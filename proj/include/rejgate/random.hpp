#pragma once

#include <array>
#include <cstdint>

namespace rejgate {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
///
/// A draw is a pure function of (key, counter), so any item can be generated
/// independently of every other and generation order never matters.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    explicit constexpr Philox4x32(std::uint64_t seed) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

    constexpr Counter operator()(Counter ctr) const noexcept {
        Key key = key_;
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            ctr = single_round(ctr, key);
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static constexpr Counter single_round(const Counter& c, const Key& k) noexcept {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }

    Key key_;
};

/// Named draw streams. Each (stream, index, slot) triple addresses one
/// independent pair of uniforms.
enum class Stream : std::uint32_t {
    confidence = 1,
    outcome = 2,
    slice = 3,
    workflow = 4,
    bootstrap = 5,
    normal = 6,
};

/// Uniform doubles on the open interval (0, 1) addressed by counters.
class CounterUniform {
public:
    explicit constexpr CounterUniform(std::uint64_t seed) noexcept : rng_(seed) {}

    /// Two independent uniforms for (stream, index, slot).
    std::array<double, 2> pair(Stream stream, std::uint64_t index, std::uint32_t slot = 0) const noexcept {
        const auto out = rng_({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                               static_cast<std::uint32_t>(stream), slot});
        return {to_open_unit(out[0], out[1]), to_open_unit(out[2], out[3])};
    }

    double operator()(Stream stream, std::uint64_t index, std::uint32_t slot = 0) const noexcept {
        return pair(stream, index, slot)[0];
    }

    /// 64 raw bits for (stream, index, slot).
    std::uint64_t bits(Stream stream, std::uint64_t index, std::uint32_t slot = 0) const noexcept {
        const auto out = rng_({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                               static_cast<std::uint32_t>(stream), slot});
        return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
    }

private:
    // 53 random bits, offset by half an ulp so the result is never 0 or 1.
    static constexpr double to_open_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
        const std::uint64_t bits53 = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
        return (static_cast<double>(bits53) + 0.5) * 0x1.0p-53;
    }

    Philox4x32 rng_;
};

}  // namespace rejgate
