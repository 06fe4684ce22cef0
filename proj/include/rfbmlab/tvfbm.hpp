#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rfbmlab/grid.hpp"
#include "rfbmlab/hurst.hpp"

namespace rfbmlab {

// Volterra kernel sqrt(2h) (t - s)^(h - 1/2), evaluated with the exponent
// frozen at h.
double kernel_tv(double t, double s, double h);

// Exact average of kernel_tv(t, ., h) over the panel [s_lo, s_hi].
double panel_weight(double t, double s_lo, double s_hi, double h);

// Panel weights w_i(t_k), i < k, for the target grid point t_k. The exponent
// is H(t_k) throughout: the process value at t_k sees the whole history
// through the exponent at the current time.
std::vector<double> weights_at(const TimeGrid& grid, const HurstFunction& h, std::size_t k);

SamplePath simulate_tvfbm(const TimeGrid& grid, const HurstFunction& h, std::uint64_t seed);

struct VarianceEstimate {
    double t = 0.0;
    double target = 0.0;    // t^(2 H(t))
    double estimate = 0.0;  // sample variance across paths
    double se = 0.0;
    std::size_t n_paths = 0;
};

// Monte Carlo marginal variance at selected grid indices. Weight vectors are
// shared across paths, so the cost per path is one pass of normals plus one
// dot product per requested index.
std::vector<VarianceEstimate> mc_variance(const TimeGrid& grid, const HurstFunction& h,
                                          std::span<const std::size_t> indices,
                                          std::size_t n_paths, std::uint64_t seed,
                                          unsigned threads = 0);

double variance_theoretical(double t, const HurstFunction& h);

struct LocalIncrementVariance {
    double exact = 0.0;    // eps^(2 H(t + eps))
    double leading = 0.0;  // eps^(2 H(t))
    double lambda = 0.0;   // min(gamma - H(t), (gamma + H(t)) / 2)
};

LocalIncrementVariance local_increment_variance(double t, double eps, const HurstFunction& h);

struct LndBound {
    double cond_var = 0.0;   // eps^(2 H(t0 + eps))
    double bound = 0.0;      // eps^(2 H(t0)) / 2
    double threshold = 0.0;  // validity radius eps_2 built from the declared constants
    bool within_validity = false;
};

LndBound lnd_lower_bound(double t0, double eps, const HurstFunction& h);

// eps^(2 H(t0)) * ln P(increment > x), the quantity whose eps -> 0 limit is
// -x^2 / 2
double ldp_ratio(double t0, double x, double eps, const HurstFunction& h);

struct AsBoundReport {
    double t0 = 0.0;
    double kappa = 0.0;
    double varsigma = 0.0;  // kappa - 1
    int n_max = 0;
    std::vector<int> violating_n;
    int largest_violating_n = 0;  // 0 when no violation occurred
    double ratio_at_n_max = 0.0;  // max over seeds of |I| / sqrt(|ln eps_n|)
    double limsup_bound = 0.0;    // e^{H(t0)} sqrt(2)
    std::size_t n_seeds = 0;
};

// Samples independent Gaussian local increments along eps_n = n^(-kappa) and
// compares them against the almost-sure envelope
// x_n = e^{H(t0)} sqrt(2 (1 + varsigma) |ln eps_n|).
AsBoundReport as_bound_check(double t0, const HurstFunction& h, double kappa, int n_max,
                             std::uint64_t seed);

enum class CovMethod { quadrature, hypergeometric };

struct CovarianceResult {
    double u = 0.0;
    double v = 0.0;
    double value = 0.0;
    CovMethod method = CovMethod::quadrature;
    double est_error = 0.0;
};

// R(u, v) = 2 sqrt(H(u) H(v)) int_0^min(u,v) (u-s)^(H(u)-1/2) (v-s)^(H(v)-1/2) ds
// by adaptive quadrature after the singularity-absorbing substitution
// s = m (1 - tau^(1/(H_min + 1/2))).
CovarianceResult covariance_quadrature(double u, double v, const HurstFunction& h, double tol);

struct CovarianceBounds {
    double lower = 0.0;
    double upper = 0.0;
};

// Near-diagonal bracket for R(t, t + eps) with the shared prefactor
// 2 sqrt(H(t) H(t+eps)) eps^(H(t) + H(t+eps)) and integrals J split at
// sigma = 1.
CovarianceBounds covariance_bounds(double t, double eps, const HurstFunction& h);

// J(a, b, u, v) = int_0^u (u-s)^a (v-s)^b ds in closed hypergeometric form,
// valid for a, b > -1 and v >= 2u > 0.
double eval_J(double a, double b, double u, double v);

// I(u, v) = int_0^u (u-s)^(H(u)-3/2) (v-s)^(H(v)-1/2) ds for H > 1/2,
// hypergeometric closed form.
double cov_hyper_I(double u, double v, const HurstFunction& h);

struct MixedTerms {
    double i2 = 0.0;
    double i3 = 0.0;
    double i4 = 0.0;
    double bound2 = 0.0;
    double bound3 = 0.0;
    double bound4 = 0.0;
    double bound = 0.0;  // max of the per-term majorants
};

// Derivative-coupling integrals of the mixed partial of R, with the closed
// majorants that dominate them. dh supplies H'.
MixedTerms mixed_derivative_terms(double u, double v, const HurstFunction& h,
                                  const std::function<double(double)>& dh);

struct LampertiPoint {
    double t = 0.0;
    double phi = 0.0;
    double alpha = 0.0;  // phi^(-H(phi))
};

// Time change phi' = phi / (H(phi) + phi ln(phi) H'(phi)) integrated with
// fixed-step RK4; a halved-step Richardson monitor guards the local error and
// a degeneracy guard stops when the denominator vanishes.
std::vector<LampertiPoint> lamperti_solve(const HurstFunction& h, double phi0, double t_end,
                                          double step);

}  // namespace rfbmlab
