#include "rfbmlab/specfun.hpp"

#include <cmath>
#include <stdexcept>

namespace rfbmlab {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kSqrt2Pi = 2.50662827463100050241576528481;

const double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

double lanczos_core(double x) {
    // valid for x >= 0.5
    double acc = kLanczos[0];
    for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (x - 1.0 + i);
    const double t = x + 6.5;
    return kSqrt2Pi * std::pow(t, x - 0.5) * std::exp(-t) * acc;
}

double series_2f1(double a, double b, double c, double z) {
    double term = 1.0;
    double sum = 1.0;
    for (int n = 0; n < 100000; ++n) {
        const double denom = (c + n) * (1.0 + n);
        if (denom == 0.0)
            throw std::invalid_argument("hyp2f1: c hits a nonpositive integer");
        term *= (a + n) * (b + n) / denom * z;
        if (term == 0.0) return sum;  // terminating (polynomial) case
        sum += term;
        if (std::abs(term) < 1e-16 * std::abs(sum)) return sum;
    }
    throw std::runtime_error("hyp2f1: series failed to converge");
}

}  // namespace

double gamma_fn(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("gamma_fn: requires x > 0");
    if (x < 0.5) {
        // reflection keeps the Lanczos core on x >= 0.5
        return kPi / (std::sin(kPi * x) * lanczos_core(1.0 - x));
    }
    return lanczos_core(x);
}

double hyp2f1(double a, double b, double c, double z) {
    if (!(z < 1.0) || z < -1.0)
        throw std::invalid_argument("hyp2f1: z must lie in [-1, 1)");
    if (c <= 0.0 && c == std::floor(c))
        throw std::invalid_argument("hyp2f1: c must not be a nonpositive integer");
    if (z == 0.0) return 1.0;
    if (z < -0.5) {
        // Pfaff: 2F1(a,b;c;z) = (1-z)^(-a) 2F1(a, c-b; c; z/(z-1))
        const double zp = z / (z - 1.0);
        return std::pow(1.0 - z, -a) * series_2f1(a, c - b, c, zp);
    }
    return series_2f1(a, b, c, z);
}

TailBound mills_bounds(double z) {
    if (!(z >= 1.0)) throw std::invalid_argument("mills_bounds: requires z >= 1");
    const double phi = std::exp(-0.5 * z * z) / kSqrt2Pi;
    TailBound out;
    out.z = z;
    out.upper = phi / z;
    out.lower = out.upper * (1.0 - 1.0 / (z * z));
    out.exact = normal_tail(z);
    return out;
}

double normal_tail(double z) {
    if (z > 12.0) {
        // far tail: Mills upper bound, relative error below 1/z^2
        return std::exp(-0.5 * z * z) / (z * kSqrt2Pi);
    }
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

double log_normal_tail(double z) {
    if (z > 12.0)
        return -0.5 * z * z - std::log(z * kSqrt2Pi) + std::log1p(-1.0 / (z * z));
    const double tail = normal_tail(z);
    if (tail <= 0.0) throw std::runtime_error("log_normal_tail: tail underflow");
    return std::log(tail);
}

double log_control_constant(double delta, double alpha) {
    if (!(delta > 0.0) || !(alpha > 0.0))
        throw std::invalid_argument("log_control_constant: delta, alpha must be positive");
    const double e = 2.71828182845904523536028747135;
    return std::fmax(1.0 / (delta * e), 1.0 / alpha);
}

}  // namespace rfbmlab
