#pragma once

#include <cstdint>
#include <vector>

#include "rfbmlab/rfbm.hpp"

namespace rfbmlab {

enum class AttentionRegime { subcritical, critical, supercritical };

struct AttentionProfile {
    double t = 0.0;
    std::vector<double> s_grid;      // panel midpoints
    std::vector<double> rho;         // pointwise density K / D at the midpoints
    std::vector<double> panel_mass;  // per-panel probability; sums to 1
    double partition = 0.0;          // D(t, X)
    double output = 0.0;             // Y_t
    double norm_sum = 0.0;           // pairwise sum of panel_mass
    AttentionRegime regime = AttentionRegime::critical;
};

// Kernel density over the history [0, t). The final panel enters D through
// its exact frozen-exponent power integral, so the subcritical endpoint
// singularity is integrated rather than sampled.
AttentionProfile attention_profile(const RfbmSolution& sol, const ResponseFunction& f, double t);

// Pointwise density rho(t, s) for 0 < s < t (same partition construction).
double attention_density_at(const RfbmSolution& sol, const ResponseFunction& f, double t,
                            double s);

struct BoundConstants {
    double h_min = 0.0, h_max = 0.0;
    double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0, a5 = 0.0;
    double b1 = 0.0, b2 = 0.0, b3 = 0.0, b4 = 0.0, b5 = 0.0;
};

BoundConstants bound_constants(double h_min, double h_max);

struct BoundViolation {
    double s = 0.0;
    double rho = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

struct BoundCheckReport {
    std::size_t checked = 0;
    std::vector<BoundViolation> violations;
    bool ok() const { return violations.empty(); }
};

// Case-resolved two-sided bounds at every midpoint, with 1e-9 relative slack
// because several configurations touch the bounds exactly.
BoundCheckReport check_attention_bounds(const AttentionProfile& profile,
                                        const BoundConstants& consts);

// S(s) = dH/dx(s, X_s) [1/(2 H(s, X_s)) + ln(t - s)]
double sensitivity(const RfbmSolution& sol, const ResponseFunction& f, double t, double s);
double relative_sensitivity(const RfbmSolution& sol, const ResponseFunction& f, double t,
                            double s1, double s2);

// half-open [lo, hi); +-infinity sentinels allowed
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct ResidenceMeasure {
    double r = 0.0;
    double mu = 0.0;
    std::size_t count = 0;  // occupied panels
};

// Panel-count residence along the realized path, indicator frozen at the left
// panel state. mu = count / panels so partition cells add to one exactly.
ResidenceMeasure residence_measure(const RfbmSolution& sol, Interval interval, double t);

struct VolatilityEstimate {
    double v = 0.0;             // sample variance of mu across paths
    double se = 0.0;
    double cov_integral = 0.0;  // panel double sum of empirical indicator covariances
    double se_cov = 0.0;
    std::size_t n_paths = 0;
    bool agree = false;         // |v - cov_integral| <= 3 combined SE
    bool within_bound = false;  // v <= 1/4 + 3 se
};

// Two independent ensembles: one feeds the direct variance, the other the
// covariance double integral, so the agreement check is not vacuous.
VolatilityEstimate volatility_mc(const ResponseFunction& f, Interval interval, double t,
                                 std::size_t n_paths, std::uint64_t seed,
                                 std::size_t grid_n = 128, unsigned threads = 0);
VolatilityEstimate volatility_from_ensembles(const std::vector<RfbmSolution>& batch_var,
                                             const std::vector<RfbmSolution>& batch_cov,
                                             Interval interval, double t);

struct ResidenceCheck {
    double lhs = 0.0;  // MC mean of pathwise residence
    double rhs = 0.0;  // panel sum of empirical marginal probabilities
    double se_lhs = 0.0;
    double se_rhs = 0.0;
    bool ok = false;
};

ResidenceCheck expected_residence_check(const ResponseFunction& f, Interval interval, double t,
                                        std::size_t n_paths, std::uint64_t seed = 8675309,
                                        std::size_t grid_n = 128, unsigned threads = 0);
ResidenceCheck expected_residence_from_ensembles(const std::vector<RfbmSolution>& batch_lhs,
                                                 const std::vector<RfbmSolution>& batch_rhs,
                                                 Interval interval, double t);

// n_paths independent solves that share (grid, f, seed) but use streams
// stream_offset, stream_offset + 1, ...
std::vector<RfbmSolution> solve_ensemble(const TimeGrid& grid, const ResponseFunction& f,
                                         std::uint64_t seed, std::uint64_t stream_offset,
                                         std::size_t n_paths, unsigned threads = 0);

}  // namespace rfbmlab
