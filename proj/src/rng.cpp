#include "rfbmlab/rng.hpp"

#include <cmath>

namespace rfbmlab {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& ctr, std::uint32_t k0, std::uint32_t k1) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
}

inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
    // 53 significant bits, strictly inside (0, 1)
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

// counter-space offset separating the uniform channel from the normal channel
constexpr std::uint64_t kUniformOffset = 1ull << 62;

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::uint64_t seed, std::uint64_t stream,
                                        std::uint64_t counter) {
    std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(counter), static_cast<std::uint32_t>(counter >> 32),
        static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    std::uint32_t k0 = static_cast<std::uint32_t>(seed);
    std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32);
    for (int r = 0; r < 10; ++r) {
        philox_round(ctr, k0, k1);
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return ctr;
}

double NormalStream::normal(std::uint64_t i) const {
    const auto w = philox4x32(seed_, stream_, i / 2);
    const double u1 = to_unit(w[0], w[1]);
    const double u2 = to_unit(w[2], w[3]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double ang = kTwoPi * u2;
    return (i & 1) ? r * std::sin(ang) : r * std::cos(ang);
}

double NormalStream::uniform(std::uint64_t i) const {
    const auto w = philox4x32(seed_, stream_, kUniformOffset + i / 2);
    return (i & 1) ? to_unit(w[2], w[3]) : to_unit(w[0], w[1]);
}

void NormalStream::fill_normals(std::span<double> out, std::uint64_t first) const {
    std::uint64_t i = first;
    std::size_t k = 0;
    // fast path: aligned pairs share one block
    while (k < out.size()) {
        const auto w = philox4x32(seed_, stream_, i / 2);
        const double u1 = to_unit(w[0], w[1]);
        const double u2 = to_unit(w[2], w[3]);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double ang = kTwoPi * u2;
        if ((i & 1) == 0) {
            out[k++] = r * std::cos(ang);
            ++i;
            if (k < out.size()) {
                out[k++] = r * std::sin(ang);
                ++i;
            }
        } else {
            out[k++] = r * std::sin(ang);
            ++i;
        }
    }
}

}  // namespace rfbmlab
