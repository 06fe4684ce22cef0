#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace rfbmlab {

// Sum with pairwise recursion so reductions stay accurate and independent of
// thread count (callers store per-slot values, then reduce in fixed order).
double pairwise_sum(std::span<const double> xs);

struct QuadResult {
    double value = 0.0;
    double est_error = 0.0;
};

// Adaptive Simpson on [a, b]. est_error accumulates the accepted panel
// estimates; throws std::runtime_error when the requested tolerance cannot be
// met within max_depth.
QuadResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                            double tol, int max_depth = 52);

// Integral of f over (0, b] when f(x) ~ x^p near 0 with p > -1. Substitutes
// x = b * tau^r with r = 2 / (1 + p), which turns the endpoint behaviour into
// tau^1, then integrates adaptively. Logarithmic factors riding on the power
// are tolerated.
QuadResult integrate_power_endpoint(const std::function<double(double)>& f, double b,
                                    double p, double tol);

struct McStats {
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;      // Bessel-corrected
    double se_mean = 0.0;
    double se_variance = 0.0;   // moment-based standard error of the variance
};

McStats mc_stats(std::span<const double> xs);

// Ordinary least squares slope of y against x.
double ls_slope(std::span<const double> x, std::span<const double> y);

// Thread-count resolution: requested > 0 wins, else RFBM_LAB_THREADS, else
// hardware concurrency. Always at least 1.
unsigned resolve_threads(unsigned requested);

// Runs body(begin, end) on contiguous chunks of [0, n). Deterministic as long
// as chunks write disjoint slots.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace rfbmlab
