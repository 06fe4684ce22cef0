#pragma once

namespace rfbmlab {

// Gamma function for positive real arguments (Lanczos, g = 7, 9 terms).
double gamma_fn(double x);

// Gauss hypergeometric 2F1(a, b; c; z) for real parameters and z in [-1, 1).
// Power series with term-ratio stopping; Pfaff transform for z < -1/2.
double hyp2f1(double a, double b, double c, double z);

struct TailBound {
    double z = 0.0;
    double upper = 0.0;   // phi(z) / z
    double lower = 0.0;   // phi(z) / z * (1 - 1/z^2)
    double exact = 0.0;   // 1 - Phi(z)
};

// Mills-ratio bracket for the standard normal tail, valid for z >= 1.
TailBound mills_bounds(double z);

// 1 - Phi(z). erfc-based up to z = 12, Mills upper bound as the value beyond.
double normal_tail(double z);

// ln(1 - Phi(z)); switches to the two-term asymptotic expansion past z = 12
// to dodge underflow.
double log_normal_tail(double z);

// Smallest K with |ln x| <= K x^(-delta) on (0, 1] and |ln x| <= K x^alpha on
// (1, infinity): max(1/(delta e), 1/alpha).
double log_control_constant(double delta, double alpha);

}  // namespace rfbmlab
