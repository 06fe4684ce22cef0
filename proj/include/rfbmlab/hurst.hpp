#pragma once

#include <cstdint>
#include <functional>
#include <string>

namespace rfbmlab {

// Deterministic Hurst exponent t -> H(t) with declared regularity metadata.
// Holder condition: |H(t) - H(s)| <= c_h |t - s|^gamma with gamma > h_max.
struct HurstFunction {
    std::function<double(double)> eval;
    std::function<double(double)> deriv;         // H'
    std::function<double(double)> second_deriv;  // H''
    double gamma = 1.0;
    double c_h = 0.0;
    double h_min = 0.5;
    double h_max = 0.5;
    double horizon = 1.0;
    std::string kind = "constant";

    double operator()(double t) const { return eval(t); }
};

HurstFunction constant_hurst(double h, double horizon = 1.0);
// base + amp * sin(t)
HurstFunction sinusoidal_hurst(double base, double amp, double horizon = 1.0);
// h0 + slope * t
HurstFunction linear_hurst(double h0, double slope, double horizon = 1.0);

// State-dependent exponent (t, x) -> H(t, x):
//   |H(t,x) - H(t,y)| <= l_h |x - y|
//   |H(t,x) - H(s,x)| <= c_h |t - s|^gamma
// dx is dH/dx when available in closed form; l_dh bounds |dH/dx|.
struct ResponseFunction {
    std::function<double(double, double)> eval;
    std::function<double(double, double)> dx;
    double l_h = 0.0;
    double c_h = 0.0;
    double gamma = 1.0;
    double h_min = 0.5;
    double h_max = 0.5;
    double l_dh = 0.0;
    double horizon = 1.0;
    std::string kind = "constant";

    double operator()(double t, double x) const { return eval(t, x); }
    // closed form when provided, Richardson-extrapolated central difference
    // otherwise
    double dx_or_fd(double t, double x) const;
};

// H(t,x) = h_min + (h_max - h_min) (1 + tanh(alpha x) cos(omega t)) / (2 + exp(-t))
ResponseFunction example_response(double h_min, double h_max, double alpha, double omega,
                                  double horizon);
ResponseFunction constant_response(double h, double horizon = 1.0);
// base + amp * tanh(scale * x), time-independent
ResponseFunction tanh_spatial_response(double base, double amp, double scale,
                                       double horizon = 1.0);
// wraps a deterministic exponent as a state-independent response
ResponseFunction response_from_hurst(const HurstFunction& h);

struct ValidationReport {
    std::size_t n_samples = 0;
    double max_spatial_quotient = 0.0;
    double max_temporal_quotient = 0.0;
    double min_value = 0.0;
    double max_value = 0.0;
    bool spatial_violation = false;
    bool temporal_violation = false;
    bool range_violation = false;
    bool ok() const { return !spatial_violation && !temporal_violation && !range_violation; }
};

// Samples difference quotients at geometrically spaced separations and flags
// any empirical constant exceeding the declared one by more than 1e-9.
ValidationReport validate_response(const ResponseFunction& f, std::size_t n_samples,
                                  std::uint64_t seed = 20240801);

// D = c_h / sqrt(2 h_min): Holder constant of t -> sqrt(2 H(t))
double sqrt_control_constant(const HurstFunction& h);

}  // namespace rfbmlab
