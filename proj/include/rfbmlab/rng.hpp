#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace rfbmlab {

// Philox 4x32-10 counter-based generator. Draws are indexed, so Monte Carlo
// paths can be assigned disjoint streams and produced in any order (or on any
// number of threads) with identical results.
std::array<std::uint32_t, 4> philox4x32(std::uint64_t seed, std::uint64_t stream,
                                        std::uint64_t counter);

class NormalStream {
  public:
    NormalStream(std::uint64_t seed, std::uint64_t stream)
        : seed_(seed), stream_(stream) {}

    // i-th standard normal draw of this stream
    double normal(std::uint64_t i) const;

    // i-th uniform draw on (0, 1), counter-separated from the normals
    double uniform(std::uint64_t i) const;

    void fill_normals(std::span<double> out, std::uint64_t first = 0) const;

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
};

}  // namespace rfbmlab
