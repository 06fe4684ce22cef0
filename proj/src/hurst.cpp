#include "rfbmlab/hurst.hpp"

#include <cmath>
#include <stdexcept>

#include "rfbmlab/rng.hpp"

namespace rfbmlab {

double ResponseFunction::dx_or_fd(double t, double x) const {
    if (dx) return dx(t, x);
    const double h = 1e-5 * std::fmax(1.0, std::fabs(x));
    const double d1 = (eval(t, x + h) - eval(t, x - h)) / (2.0 * h);
    const double d2 = (eval(t, x + 0.5 * h) - eval(t, x - 0.5 * h)) / h;
    return (4.0 * d2 - d1) / 3.0;  // Richardson on the central difference
}

HurstFunction constant_hurst(double h, double horizon) {
    if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("constant_hurst: h must lie in (0,1)");
    if (!(horizon > 0.0)) throw std::invalid_argument("constant_hurst: horizon must be positive");
    HurstFunction out;
    out.eval = [h](double) { return h; };
    out.deriv = [](double) { return 0.0; };
    out.second_deriv = [](double) { return 0.0; };
    out.gamma = 1.0;
    out.c_h = 0.0;
    out.h_min = h;
    out.h_max = h;
    out.horizon = horizon;
    out.kind = "constant";
    return out;
}

HurstFunction sinusoidal_hurst(double base, double amp, double horizon) {
    const double a = std::fabs(amp);
    if (!(base - a > 0.0 && base + a < 1.0))
        throw std::invalid_argument("sinusoidal_hurst: range must stay inside (0,1)");
    if (!(horizon > 0.0)) throw std::invalid_argument("sinusoidal_hurst: horizon must be positive");
    HurstFunction out;
    out.eval = [base, amp](double t) { return base + amp * std::sin(t); };
    out.deriv = [amp](double t) { return amp * std::cos(t); };
    out.second_deriv = [amp](double t) { return -amp * std::sin(t); };
    out.gamma = 1.0;
    out.c_h = a;
    // sup/inf over [0, horizon]: sin increases to t = pi/2 then falls back
    const double pi = 3.14159265358979323846264338328;
    double smin = std::fmin(std::sin(0.0), std::sin(horizon));
    double smax = std::fmax(std::sin(0.0), std::sin(horizon));
    if (horizon > pi / 2.0) smax = 1.0;
    if (horizon > 1.5 * pi) smin = -1.0;
    out.h_min = base + (amp >= 0.0 ? amp * smin : amp * smax);
    out.h_max = base + (amp >= 0.0 ? amp * smax : amp * smin);
    out.horizon = horizon;
    out.kind = "sinusoidal-time";
    return out;
}

HurstFunction linear_hurst(double h0, double slope, double horizon) {
    if (!(horizon > 0.0)) throw std::invalid_argument("linear_hurst: horizon must be positive");
    const double hT = h0 + slope * horizon;
    const double lo = std::fmin(h0, hT);
    const double hi = std::fmax(h0, hT);
    if (!(lo > 0.0 && hi < 1.0))
        throw std::invalid_argument("linear_hurst: range must stay inside (0,1)");
    HurstFunction out;
    out.eval = [h0, slope](double t) { return h0 + slope * t; };
    out.deriv = [slope](double) { return slope; };
    out.second_deriv = [](double) { return 0.0; };
    out.gamma = 1.0;
    out.c_h = std::fabs(slope);
    out.h_min = lo;
    out.h_max = hi;
    out.horizon = horizon;
    out.kind = "linear-time";
    return out;
}

ResponseFunction example_response(double h_min, double h_max, double alpha, double omega,
                                  double horizon) {
    if (!(0.0 < h_min && h_min < h_max && h_max < 1.0))
        throw std::invalid_argument("example_response: need 0 < h_min < h_max < 1");
    if (!(alpha > 0.0 && omega > 0.0))
        throw std::invalid_argument("example_response: alpha, omega must be positive");
    if (!(horizon > 0.0)) throw std::invalid_argument("example_response: horizon must be positive");
    const double span = h_max - h_min;
    ResponseFunction out;
    out.eval = [h_min, span, alpha, omega](double t, double x) {
        return h_min + span * (1.0 + std::tanh(alpha * x) * std::cos(omega * t)) /
                           (2.0 + std::exp(-t));
    };
    out.dx = [span, alpha, omega](double t, double x) {
        const double th = std::tanh(alpha * x);
        return span * alpha * (1.0 - th * th) * std::cos(omega * t) / (2.0 + std::exp(-t));
    };
    out.l_h = alpha * span / 2.0;
    out.c_h = span * (3.0 * omega + 2.0) / 4.0;
    out.gamma = 1.0;
    out.h_min = h_min;
    out.h_max = h_max;
    out.l_dh = alpha * span / 2.0;
    out.horizon = horizon;
    out.kind = "example61";
    return out;
}

ResponseFunction constant_response(double h, double horizon) {
    if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("constant_response: h must lie in (0,1)");
    if (!(horizon > 0.0)) throw std::invalid_argument("constant_response: horizon must be positive");
    ResponseFunction out;
    out.eval = [h](double, double) { return h; };
    out.dx = [](double, double) { return 0.0; };
    out.l_h = 0.0;
    out.c_h = 0.0;
    out.gamma = 1.0;
    out.h_min = h;
    out.h_max = h;
    out.l_dh = 0.0;
    out.horizon = horizon;
    out.kind = "constant";
    return out;
}

ResponseFunction tanh_spatial_response(double base, double amp, double scale, double horizon) {
    const double a = std::fabs(amp);
    if (!(base - a > 0.0 && base + a < 1.0))
        throw std::invalid_argument("tanh_spatial_response: range must stay inside (0,1)");
    if (!(scale > 0.0)) throw std::invalid_argument("tanh_spatial_response: scale must be positive");
    if (!(horizon > 0.0))
        throw std::invalid_argument("tanh_spatial_response: horizon must be positive");
    ResponseFunction out;
    out.eval = [base, amp, scale](double, double x) { return base + amp * std::tanh(scale * x); };
    out.dx = [amp, scale](double, double x) {
        const double th = std::tanh(scale * x);
        return amp * scale * (1.0 - th * th);
    };
    out.l_h = a * scale;
    out.c_h = 0.0;
    out.gamma = 1.0;
    out.h_min = base - a;
    out.h_max = base + a;
    out.l_dh = a * scale;
    out.horizon = horizon;
    out.kind = "tanh-spatial";
    return out;
}

ResponseFunction response_from_hurst(const HurstFunction& h) {
    ResponseFunction out;
    auto eval = h.eval;
    out.eval = [eval](double t, double) { return eval(t); };
    out.dx = [](double, double) { return 0.0; };
    out.l_h = 0.0;
    out.c_h = h.c_h;
    out.gamma = h.gamma;
    out.h_min = h.h_min;
    out.h_max = h.h_max;
    out.l_dh = 0.0;
    out.horizon = h.horizon;
    out.kind = h.kind;
    return out;
}

ValidationReport validate_response(const ResponseFunction& f, std::size_t n_samples,
                                  std::uint64_t seed) {
    if (n_samples == 0) throw std::invalid_argument("validate_response: need n_samples > 0");
    ValidationReport rep;
    rep.n_samples = n_samples;
    rep.min_value = 1.0;
    rep.max_value = 0.0;
    NormalStream rng(seed, 0);
    const double T = f.horizon;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const std::uint64_t k = 4 * static_cast<std::uint64_t>(i);
        const double t = T * rng.uniform(k);
        const double x = 6.0 * rng.uniform(k + 1) - 3.0;
        // geometric separation ladder, 1e-6 up to 1e-1
        const double sep = std::pow(10.0, -1.0 - 5.0 * rng.uniform(k + 2));
        const double v = f(t, x);
        rep.min_value = std::fmin(rep.min_value, v);
        rep.max_value = std::fmax(rep.max_value, v);
        if (v < f.h_min || v > f.h_max) rep.range_violation = true;

        const double xq = std::fabs(f(t, x + sep) - v) / sep;
        rep.max_spatial_quotient = std::fmax(rep.max_spatial_quotient, xq);

        const double dir = rng.uniform(k + 3) < 0.5 && t - sep >= 0.0 ? -1.0 : 1.0;
        const double t2 = t + dir * sep;
        const double tq = std::fabs(f(t2, x) - v) / std::pow(sep, f.gamma);
        rep.max_temporal_quotient = std::fmax(rep.max_temporal_quotient, tq);
    }
    rep.spatial_violation = rep.max_spatial_quotient > f.l_h + 1e-9;
    rep.temporal_violation = rep.max_temporal_quotient > f.c_h + 1e-9;
    return rep;
}

double sqrt_control_constant(const HurstFunction& h) {
    if (!(h.h_min > 0.0)) throw std::invalid_argument("sqrt_control_constant: h_min must be positive");
    return h.c_h / std::sqrt(2.0 * h.h_min);
}

}  // namespace rfbmlab
