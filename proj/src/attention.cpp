#include "rfbmlab/attention.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "rfbmlab/numerics.hpp"

namespace rfbmlab {

namespace {

struct Partition {
    std::size_t k = 0;  // panels
    double dt = 0.0;
    std::vector<double> mids;
    std::vector<double> x_mid;
    std::vector<double> h_mid;
    std::vector<double> kernel;  // K(t, mid; H(mid, X_mid))
    std::vector<double> mass;    // unnormalized panel masses
    double d = 0.0;
};

Partition build_partition(const RfbmSolution& sol, const ResponseFunction& f, double t) {
    const std::size_t k = sol.grid.index_of(t);
    if (k == 0) throw std::invalid_argument("attention: t must be positive");
    Partition part;
    part.k = k;
    part.dt = sol.grid.dt();
    part.mids.resize(k);
    part.x_mid.resize(k);
    part.h_mid.resize(k);
    part.kernel.resize(k);
    part.mass.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double mid = (static_cast<double>(i) + 0.5) * part.dt;
        const double x = path_value_at(sol, mid);
        const double h = f(mid, x);
        part.mids[i] = mid;
        part.x_mid[i] = x;
        part.h_mid[i] = h;
        part.kernel[i] = std::sqrt(2.0 * h) * std::pow(t - mid, h - 0.5);
        part.mass[i] = part.kernel[i] * part.dt;
    }
    // Final panel: exact power integral with the exponent frozen at the last
    // midpoint, so an integrable H<1/2 singularity at s=t is not truncated.
    const double h_last = part.h_mid[k - 1];
    part.mass[k - 1] =
        std::sqrt(2.0 * h_last) * std::pow(part.dt, h_last + 0.5) / (h_last + 0.5);
    part.d = pairwise_sum(part.mass);
    return part;
}

}  // namespace

AttentionProfile attention_profile(const RfbmSolution& sol, const ResponseFunction& f,
                                   double t) {
    const Partition part = build_partition(sol, f, t);
    AttentionProfile profile;
    profile.t = t;
    profile.partition = part.d;
    profile.s_grid = part.mids;
    profile.rho.resize(part.k);
    profile.panel_mass.resize(part.k);
    std::vector<double> weighted(part.k);
    for (std::size_t i = 0; i < part.k; ++i) {
        profile.rho[i] = part.kernel[i] / part.d;
        profile.panel_mass[i] = part.mass[i] / part.d;
        weighted[i] = part.x_mid[i] * profile.panel_mass[i];
    }
    profile.norm_sum = pairwise_sum(profile.panel_mass);
    profile.output = pairwise_sum(weighted);
    const double h_now = f(t, sol.path[part.k]);
    if (std::fabs(h_now - 0.5) <= 1e-12)
        profile.regime = AttentionRegime::critical;
    else if (h_now < 0.5)
        profile.regime = AttentionRegime::subcritical;
    else
        profile.regime = AttentionRegime::supercritical;
    return profile;
}

double attention_density_at(const RfbmSolution& sol, const ResponseFunction& f, double t,
                            double s) {
    if (!(s >= 0.0 && s < t)) throw std::invalid_argument("density point must lie in [0, t)");
    const Partition part = build_partition(sol, f, t);
    const double h = f(s, path_value_at(sol, s));
    return std::sqrt(2.0 * h) * std::pow(t - s, h - 0.5) / part.d;
}

BoundConstants bound_constants(double h_min, double h_max) {
    if (!(h_min > 0.0 && h_min <= h_max && h_max < 1.0))
        throw std::invalid_argument("need 0 < h_min <= h_max < 1");
    BoundConstants c;
    c.h_min = h_min;
    c.h_max = h_max;
    c.a1 = std::sqrt(h_min) * (h_min + 0.5) / std::sqrt(h_max);
    c.b1 = std::sqrt(h_max) * (h_max + 0.5) / std::sqrt(h_min);
    c.a2 = c.a3 = c.a4 = c.a1;
    c.b2 = c.b3 = c.b4 = c.b1;
    c.a5 = 0.5 * c.a1;
    c.b5 = 2.0 * c.b1;
    return c;
}

BoundCheckReport check_attention_bounds(const AttentionProfile& profile,
                                        const BoundConstants& consts) {
    const double t = profile.t;
    const double hmin = consts.h_min, hmax = consts.h_max;
    BoundCheckReport report;
    for (std::size_t i = 0; i < profile.s_grid.size(); ++i) {
        const double d = t - profile.s_grid[i];
        double lower, upper;
        if (t <= 1.0) {
            if (std::fabs(d - 1.0) <= 1e-12) {
                lower = consts.a2;
                upper = consts.b2;
            } else {
                lower = consts.a1 * std::pow(d, hmax - 0.5);
                upper = consts.b1 * std::pow(d, hmin - hmax - 1.0);
            }
        } else {
            if (std::fabs(d - 1.0) <= 1e-12) {
                lower = consts.a5 * std::pow(t, -hmax - 0.5);
                upper = consts.b5 * std::pow(t, -hmin - 0.5);
            } else if (d < 1.0) {
                lower = consts.a3 * std::pow(d, hmax - 0.5) * std::pow(t, -hmax - 0.5);
                upper = consts.b3 / d;
            } else {
                lower = consts.a4 * std::pow(d, hmin - 0.5) * std::pow(t, -hmax - 0.5);
                upper = consts.b4 * std::pow(d, hmax - hmin - 1.0);
            }
        }
        ++report.checked;
        // some configurations (constant H = 1/2 at t = 1) touch the bounds exactly
        const double rho = profile.rho[i];
        if (rho < lower * (1.0 - 1e-9) || rho > upper * (1.0 + 1e-9))
            report.violations.push_back({profile.s_grid[i], rho, lower, upper});
    }
    return report;
}

double sensitivity(const RfbmSolution& sol, const ResponseFunction& f, double t, double s) {
    if (!(s >= 0.0 && s < t)) throw std::invalid_argument("sensitivity needs 0 <= s < t");
    const double x = path_value_at(sol, s);
    const double h = f(s, x);
    const double dh = f.dx_or_fd(s, x);
    return dh * (1.0 / (2.0 * h) + std::log(t - s));
}

double relative_sensitivity(const RfbmSolution& sol, const ResponseFunction& f, double t,
                            double s1, double s2) {
    if (!(s1 >= 0.0 && s1 < s2 && s2 < t))
        throw std::invalid_argument("relative sensitivity needs 0 <= s1 < s2 < t");
    return sensitivity(sol, f, t, s1) - sensitivity(sol, f, t, s2);
}

namespace {

inline bool in_interval(double x, const Interval& iv) { return x >= iv.lo && x < iv.hi; }

}  // namespace

ResidenceMeasure residence_measure(const RfbmSolution& sol, Interval interval, double t) {
    const std::size_t k = sol.grid.index_of(t);
    if (k == 0) throw std::invalid_argument("residence: t must be positive");
    ResidenceMeasure rm;
    for (std::size_t i = 0; i < k; ++i)
        if (in_interval(sol.path[i], interval)) ++rm.count;
    rm.r = static_cast<double>(rm.count) * sol.grid.dt();
    rm.mu = static_cast<double>(rm.count) / static_cast<double>(k);
    return rm;
}

VolatilityEstimate volatility_from_ensembles(const std::vector<RfbmSolution>& batch_var,
                                             const std::vector<RfbmSolution>& batch_cov,
                                             Interval interval, double t) {
    if (batch_var.size() < 2 || batch_cov.size() < 2)
        throw std::invalid_argument("volatility needs at least two paths per batch");
    std::vector<double> mu_var(batch_var.size());
    for (std::size_t p = 0; p < batch_var.size(); ++p)
        mu_var[p] = residence_measure(batch_var[p], interval, t).mu;
    const McStats stat = mc_stats(mu_var);

    // literal panel double sum of empirical indicator covariances
    const std::size_t k = batch_cov[0].grid.index_of(t);
    const double dt = batch_cov[0].grid.dt();
    const double n = static_cast<double>(batch_cov.size());
    std::vector<double> s1(k, 0.0);
    std::vector<double> s2(k * k, 0.0);
    std::vector<char> ind(k);
    std::vector<double> mu_cov(batch_cov.size());
    for (std::size_t p = 0; p < batch_cov.size(); ++p) {
        std::size_t occupied = 0;
        for (std::size_t i = 0; i < k; ++i) {
            ind[i] = in_interval(batch_cov[p].path[i], interval) ? 1 : 0;
            if (ind[i]) {
                s1[i] += 1.0;
                ++occupied;
            }
        }
        mu_cov[p] = static_cast<double>(occupied) / static_cast<double>(k);
        for (std::size_t i = 0; i < k; ++i) {
            if (!ind[i]) continue;
            double* row = s2.data() + i * k;
            for (std::size_t j = 0; j < k; ++j)
                if (ind[j]) row[j] += 1.0;
        }
    }
    std::vector<double> cov_cells(k * k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            cov_cells[i * k + j] =
                (s2[i * k + j] - s1[i] * s1[j] / n) / (n - 1.0);
    const double cov_integral = pairwise_sum(cov_cells) * dt * dt / (t * t);

    VolatilityEstimate est;
    est.v = stat.variance;
    est.se = stat.se_variance;
    est.cov_integral = cov_integral;
    // the double sum is algebraically the sample variance of mu over this
    // batch, so its SE is the variance SE of that batch
    est.se_cov = mc_stats(mu_cov).se_variance;
    est.n_paths = batch_var.size();
    const double combined = std::sqrt(est.se * est.se + est.se_cov * est.se_cov);
    est.agree = std::fabs(est.v - est.cov_integral) <= 3.0 * combined;
    est.within_bound = est.v <= 0.25 + 3.0 * est.se;
    return est;
}

VolatilityEstimate volatility_mc(const ResponseFunction& f, Interval interval, double t,
                                 std::size_t n_paths, std::uint64_t seed, std::size_t grid_n,
                                 unsigned threads) {
    const TimeGrid grid = TimeGrid::uniform(t, grid_n);
    const auto batch_var = solve_ensemble(grid, f, seed, 0, n_paths, threads);
    const auto batch_cov = solve_ensemble(grid, f, seed, 1ull << 32, n_paths, threads);
    return volatility_from_ensembles(batch_var, batch_cov, interval, t);
}

ResidenceCheck expected_residence_from_ensembles(const std::vector<RfbmSolution>& batch_lhs,
                                                 const std::vector<RfbmSolution>& batch_rhs,
                                                 Interval interval, double t) {
    if (batch_lhs.size() < 2 || batch_rhs.size() < 2)
        throw std::invalid_argument("residence check needs at least two paths per batch");
    std::vector<double> r_lhs(batch_lhs.size());
    for (std::size_t p = 0; p < batch_lhs.size(); ++p)
        r_lhs[p] = residence_measure(batch_lhs[p], interval, t).r;
    const McStats lhs = mc_stats(r_lhs);

    const std::size_t k = batch_rhs[0].grid.index_of(t);
    const double dt = batch_rhs[0].grid.dt();
    std::vector<double> marginal(k, 0.0);
    std::vector<double> r_rhs(batch_rhs.size());
    for (std::size_t p = 0; p < batch_rhs.size(); ++p) {
        std::size_t occupied = 0;
        for (std::size_t i = 0; i < k; ++i)
            if (in_interval(batch_rhs[p].path[i], interval)) {
                marginal[i] += 1.0;
                ++occupied;
            }
        r_rhs[p] = static_cast<double>(occupied) * dt;
    }
    for (double& m : marginal) m = m / static_cast<double>(batch_rhs.size()) * dt;

    ResidenceCheck check;
    check.lhs = lhs.mean;
    check.rhs = pairwise_sum(marginal);
    check.se_lhs = lhs.se_mean;
    check.se_rhs = mc_stats(r_rhs).se_mean;
    const double combined = std::sqrt(check.se_lhs * check.se_lhs + check.se_rhs * check.se_rhs);
    check.ok = std::fabs(check.lhs - check.rhs) <= 3.0 * combined;
    return check;
}

ResidenceCheck expected_residence_check(const ResponseFunction& f, Interval interval, double t,
                                        std::size_t n_paths, std::uint64_t seed,
                                        std::size_t grid_n, unsigned threads) {
    const TimeGrid grid = TimeGrid::uniform(t, grid_n);
    const auto batch_lhs = solve_ensemble(grid, f, seed, 0, n_paths, threads);
    const auto batch_rhs = solve_ensemble(grid, f, seed, 1ull << 32, n_paths, threads);
    return expected_residence_from_ensembles(batch_lhs, batch_rhs, interval, t);
}

std::vector<RfbmSolution> solve_ensemble(const TimeGrid& grid, const ResponseFunction& f,
                                         std::uint64_t seed, std::uint64_t stream_offset,
                                         std::size_t n_paths, unsigned threads) {
    std::vector<RfbmSolution> batch(n_paths);
    parallel_for(n_paths, resolve_threads(threads), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p)
            batch[p] = solve_rfbm(grid, f, seed, 1e-9, 64, KernelConvention::hurst_at_s,
                                  stream_offset + p);
    });
    return batch;
}

}  // namespace rfbmlab
