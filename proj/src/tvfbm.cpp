#include "rfbmlab/tvfbm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rfbmlab/numerics.hpp"
#include "rfbmlab/rng.hpp"
#include "rfbmlab/specfun.hpp"

namespace rfbmlab {

namespace {

constexpr double kE = 2.71828182845904523536028747135;

void require_hurst_value(double h, const char* who) {
    if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument(std::string(who) + ": H outside (0,1)");
}

}  // namespace

double kernel_tv(double t, double s, double h) {
    if (!(s < t)) throw std::invalid_argument("kernel_tv: requires s < t");
    require_hurst_value(h, "kernel_tv");
    return std::sqrt(2.0 * h) * std::pow(t - s, h - 0.5);
}

double panel_weight(double t, double s_lo, double s_hi, double h) {
    if (!(s_lo < s_hi) || !(s_hi <= t))
        throw std::invalid_argument("panel_weight: requires s_lo < s_hi <= t");
    require_hurst_value(h, "panel_weight");
    const double p = h + 0.5;
    const double num = std::pow(t - s_lo, p) - std::pow(t - s_hi, p);
    return std::sqrt(2.0 * h) * num / (p * (s_hi - s_lo));
}

std::vector<double> weights_at(const TimeGrid& grid, const HurstFunction& h, std::size_t k) {
    if (k < 1 || k > grid.n) throw std::invalid_argument("weights_at: index outside [1, n]");
    const double t = grid.points[k];
    const double hv = h(t);
    require_hurst_value(hv, "weights_at");
    const double p = hv + 0.5;
    const double pref = std::sqrt(2.0 * hv);
    std::vector<double> w(k);
    // share the pow at each panel boundary; arithmetic matches panel_weight
    double b_lo = std::pow(t - grid.points[0], p);
    for (std::size_t i = 0; i < k; ++i) {
        const double b_hi = std::pow(t - grid.points[i + 1], p);
        w[i] = pref * (b_lo - b_hi) / (p * (grid.points[i + 1] - grid.points[i]));
        b_lo = b_hi;
    }
    return w;
}

SamplePath simulate_tvfbm(const TimeGrid& grid, const HurstFunction& h, std::uint64_t seed) {
    SamplePath out;
    out.grid = grid;
    out.seed = seed;
    out.values.assign(grid.n + 1, 0.0);
    out.increments.resize(grid.n);
    const double sd = std::sqrt(grid.dt());
    NormalStream rng(seed, 0);
    for (std::size_t i = 0; i < grid.n; ++i) out.increments[i] = sd * rng.normal(i);
    for (std::size_t k = 1; k <= grid.n; ++k) {
        const auto w = weights_at(grid, h, k);
        double acc = 0.0;  // left to right, so H = 1/2 reproduces the Brownian partial sums
        for (std::size_t i = 0; i < k; ++i) acc += w[i] * out.increments[i];
        out.values[k] = acc;
    }
    return out;
}

std::vector<VarianceEstimate> mc_variance(const TimeGrid& grid, const HurstFunction& h,
                                          std::span<const std::size_t> indices,
                                          std::size_t n_paths, std::uint64_t seed,
                                          unsigned threads) {
    if (indices.empty()) throw std::invalid_argument("mc_variance: no indices requested");
    if (n_paths < 2) throw std::invalid_argument("mc_variance: need at least two paths");
    std::vector<std::vector<double>> weights;
    weights.reserve(indices.size());
    for (const std::size_t k : indices) weights.push_back(weights_at(grid, h, k));

    std::vector<std::vector<double>> vals(indices.size(), std::vector<double>(n_paths));
    const double sd = std::sqrt(grid.dt());
    parallel_for(n_paths, threads, [&](std::size_t lo, std::size_t hi) {
        std::vector<double> z(grid.n);
        for (std::size_t p = lo; p < hi; ++p) {
            NormalStream(seed, p).fill_normals(z);
            for (std::size_t j = 0; j < indices.size(); ++j) {
                const auto& w = weights[j];
                double acc = 0.0;
                for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * (sd * z[i]);
                vals[j][p] = acc;
            }
        }
    });

    std::vector<VarianceEstimate> out(indices.size());
    for (std::size_t j = 0; j < indices.size(); ++j) {
        const auto st = mc_stats(vals[j]);
        out[j].t = grid.points[indices[j]];
        out[j].target = variance_theoretical(out[j].t, h);
        out[j].estimate = st.variance;
        out[j].se = st.se_variance;
        out[j].n_paths = n_paths;
    }
    return out;
}

double variance_theoretical(double t, const HurstFunction& h) {
    if (t < 0.0) throw std::invalid_argument("variance_theoretical: t must be nonnegative");
    if (t == 0.0) return 0.0;
    return std::pow(t, 2.0 * h(t));
}

LocalIncrementVariance local_increment_variance(double t, double eps, const HurstFunction& h) {
    if (!(eps > 0.0)) throw std::invalid_argument("local_increment_variance: eps must be positive");
    if (t < 0.0) throw std::invalid_argument("local_increment_variance: t must be nonnegative");
    LocalIncrementVariance out;
    out.exact = std::pow(eps, 2.0 * h(t + eps));
    out.leading = std::pow(eps, 2.0 * h(t));
    const double ht = h(t);
    out.lambda = std::fmin(h.gamma - ht, 0.5 * (h.gamma + ht));
    return out;
}

LndBound lnd_lower_bound(double t0, double eps, const HurstFunction& h) {
    if (!(eps > 0.0)) throw std::invalid_argument("lnd_lower_bound: eps must be positive");
    if (t0 < 0.0) throw std::invalid_argument("lnd_lower_bound: t0 must be nonnegative");
    const double h0 = h(t0);
    if (!(h.gamma > h0)) throw std::invalid_argument("lnd_lower_bound: needs gamma > H(t0)");
    LndBound out;
    out.cond_var = std::pow(eps, 2.0 * h(t0 + eps));
    out.bound = 0.5 * std::pow(eps, 2.0 * h0);
    if (h.c_h == 0.0) {
        out.threshold = 1.0;  // constant exponent: remainder vanishes identically
    } else {
        const double delta = 0.5 * (h.gamma - h0);
        const double K = log_control_constant(delta, 1.0);
        const double c1 = 2.0 * kE * h.c_h * K;
        const double lambda = std::fmin(h.gamma - h0, 0.5 * (h.gamma + h0));
        const double eps1 = std::fmin(1.0, std::pow(2.0 * h.c_h * K, -1.0 / (h.gamma - delta)));
        out.threshold = std::fmin(eps1, std::pow(2.0 * c1, -1.0 / lambda));
    }
    out.within_validity = eps <= out.threshold;
    return out;
}

double ldp_ratio(double t0, double x, double eps, const HurstFunction& h) {
    if (!(x > 0.0)) throw std::invalid_argument("ldp_ratio: x must be positive");
    if (!(eps > 0.0)) throw std::invalid_argument("ldp_ratio: eps must be positive");
    if (t0 < 0.0) throw std::invalid_argument("ldp_ratio: t0 must be nonnegative");
    const double sigma = std::pow(eps, h(t0 + eps));
    return std::pow(eps, 2.0 * h(t0)) * log_normal_tail(x / sigma);
}

AsBoundReport as_bound_check(double t0, const HurstFunction& h, double kappa, int n_max,
                             std::uint64_t seed) {
    if (!(kappa > 1.0)) throw std::invalid_argument("as_bound_check: kappa must exceed 1");
    if (n_max < 2) throw std::invalid_argument("as_bound_check: n_max must be at least 2");
    if (t0 < 0.0) throw std::invalid_argument("as_bound_check: t0 must be nonnegative");
    AsBoundReport rep;
    rep.t0 = t0;
    rep.kappa = kappa;
    rep.varsigma = kappa - 1.0;
    rep.n_max = n_max;
    rep.n_seeds = 1;
    const double h0 = h(t0);
    rep.limsup_bound = std::exp(h0) * std::sqrt(2.0);
    NormalStream rng(seed, 0);
    for (int n = 1; n <= n_max; ++n) {
        const double eps_n = std::pow(static_cast<double>(n), -kappa);
        const double sigma = std::pow(eps_n, h(t0 + eps_n));
        const double incr = sigma * rng.normal(static_cast<std::uint64_t>(n - 1));
        const double lg = std::fabs(std::log(eps_n));
        const double envelope = std::exp(h0) * std::sqrt(2.0 * (1.0 + rep.varsigma) * lg);
        if (std::fabs(incr) > envelope) {
            rep.violating_n.push_back(n);
            rep.largest_violating_n = n;
        }
        if (n == n_max) rep.ratio_at_n_max = std::fabs(incr) / std::sqrt(lg);
    }
    return rep;
}

CovarianceResult covariance_quadrature(double u, double v, const HurstFunction& h, double tol) {
    if (u < 0.0 || v < 0.0)
        throw std::invalid_argument("covariance_quadrature: times must be nonnegative");
    CovarianceResult out;
    out.u = u;
    out.v = v;
    out.method = CovMethod::quadrature;
    const double m = std::fmin(u, v);
    if (m == 0.0) return out;  // one argument at the origin: covariance vanishes
    const double hu = h(u), hv = h(v);
    require_hurst_value(hu, "covariance_quadrature");
    require_hurst_value(hv, "covariance_quadrature");
    const double a = hu - 0.5;
    const double b = hv - 0.5;
    const double pref = 2.0 * std::sqrt(hu * hv);
    const double du0 = u - m;  // zero for the argument realising the minimum
    const double dv0 = v - m;
    // total endpoint exponent of the vanishing factors; picking
    // r = 1 / (1 + sum_exp) flattens the integrand to tau^0 at the origin,
    // on and off the diagonal alike
    double sum_exp = 0.0;
    if (du0 == 0.0) sum_exp += a;
    if (dv0 == 0.0) sum_exp += b;
    const double r = 1.0 / (1.0 + sum_exp);
    const double xi = r * (sum_exp + 1.0) - 1.0;
    auto g = [&](double tau) -> double {
        if (tau <= 0.0) {
            if (xi > 1e-12) return 0.0;
            // limit value when the transformed exponent cancels exactly
            double lim = pref * m * r * std::pow(m, sum_exp);
            if (du0 > 0.0) lim *= std::pow(du0, a);
            if (dv0 > 0.0) lim *= std::pow(dv0, b);
            return lim;
        }
        const double mt = m * std::pow(tau, r);
        return pref * std::pow(du0 + mt, a) * std::pow(dv0 + mt, b) * m * r *
               std::pow(tau, r - 1.0);
    };
    const auto q = adaptive_simpson(g, 0.0, 1.0, tol);
    out.value = q.value;
    out.est_error = q.est_error;
    return out;
}

CovarianceBounds covariance_bounds(double t, double eps, const HurstFunction& h) {
    if (!(t > 0.0)) throw std::invalid_argument("covariance_bounds: t must be positive");
    if (!(eps > 0.0)) throw std::invalid_argument("covariance_bounds: eps must be positive");
    const double h_t = h(t);
    const double h_te = h(t + eps);
    require_hurst_value(h_t, "covariance_bounds");
    require_hurst_value(h_te, "covariance_bounds");
    const double h_lo = std::fmin(h_t, h_te);
    const double h_hi = std::fmax(h_t, h_te);
    const double pref = 2.0 * std::sqrt(h_t * h_te) * std::pow(eps, h_t + h_te);
    const double upper_lim = t / eps;

    // J(p, q) = int_0^{t/eps} sigma^p (1 + sigma)^q dsigma, split at sigma = 1
    auto piece = [&](double p, double q, double lo, double hi) {
        if (hi <= lo) return 0.0;
        if (lo == 0.0) {
            auto f = [p, q](double s) { return std::pow(s, p) * std::pow(1.0 + s, q); };
            return integrate_power_endpoint(f, hi, p, 1e-11).value;
        }
        auto f = [p, q](double s) { return std::pow(s, p) * std::pow(1.0 + s, q); };
        return adaptive_simpson(f, lo, hi, 1e-11).value;
    };
    const double split = std::fmin(1.0, upper_lim);
    const double j_lower = piece(h_hi - 0.5, h_lo - 0.5, 0.0, split) +
                           piece(h_lo - 0.5, h_lo - 0.5, split, upper_lim);
    const double j_upper = piece(h_lo - 0.5, h_hi - 0.5, 0.0, split) +
                           piece(h_hi - 0.5, h_hi - 0.5, split, upper_lim);
    return {pref * j_lower, pref * j_upper};
}

double eval_J(double a, double b, double u, double v) {
    if (!(a > -1.0 && b > -1.0)) throw std::invalid_argument("eval_J: exponents must exceed -1");
    if (!(u > 0.0 && v >= 2.0 * u)) throw std::invalid_argument("eval_J: requires 0 < u, v >= 2u");
    const double z = -u / (v - u);  // in [-1, 0)
    return std::pow(u, a + 1.0) * std::pow(v - u, b) / (a + 1.0) *
           hyp2f1(-b, a + 1.0, a + 2.0, z);
}

double cov_hyper_I(double u, double v, const HurstFunction& h) {
    if (!(u > 0.0 && v >= 2.0 * u)) throw std::invalid_argument("cov_hyper_I: requires 0 < u, v >= 2u");
    const double hu = h(u), hv = h(v);
    if (!(hu > 0.5 && hv > 0.5))
        throw std::invalid_argument("cov_hyper_I: requires H > 1/2 at both arguments");
    const double z = -u / (v - u);
    return std::pow(u, hu - 0.5) * std::pow(v - u, hv - 0.5) / (hu - 0.5) *
           hyp2f1(0.5 - hv, hu - 0.5, hu + 0.5, z);
}

MixedTerms mixed_derivative_terms(double u, double v, const HurstFunction& h,
                                  const std::function<double(double)>& dh) {
    if (!(u > 0.0 && v >= 2.0 * u))
        throw std::invalid_argument("mixed_derivative_terms: requires 0 < u, v >= 2u");
    const double hu = h(u), hv = h(v);
    require_hurst_value(hu, "mixed_derivative_terms");
    require_hurst_value(hv, "mixed_derivative_terms");
    if (!(hu > 0.5 && hv > 0.5))
        throw std::invalid_argument("mixed_derivative_terms: requires H > 1/2 at both arguments");

    const double Cu = std::sqrt(2.0 * hu) * (hu - 0.5);
    const double Av = std::sqrt(2.0 * hv) * (hv - 0.5);
    const double dpu = dh(u);
    const double dpv = dh(v);

    // time-derivative coefficient of the kernel at fixed distance y, evaluated
    // with exponent hp and slope dp: sqrt(2hp) dp ln(y) + dp / sqrt(2hp)
    auto kernel_b = [](double hp, double dp, double y) {
        return std::sqrt(2.0 * hp) * dp * std::log(y) + dp / std::sqrt(2.0 * hp);
    };

    MixedTerms out;
    const double tol = 1e-11;

    {  // I2 = C(u) int (u-s)^(hu-3/2) B(v,s) (v-s)^(hv-1/2) ds
        const double p = hu - 1.5;
        auto f = [&](double x) {  // x = u - s
            const double dvs = v - u + x;
            return kernel_b(hv, dpv, dvs) * std::pow(x, p) * std::pow(dvs, hv - 0.5);
        };
        out.i2 = Cu * integrate_power_endpoint(f, u, p, tol).value;
    }
    {  // I3 = A(v) int D(u,s) (u-s)^(hu-1/2) (v-s)^(hv-3/2) ds
        const double p = hu - 0.5;
        auto f = [&](double x) {
            const double dvs = v - u + x;
            return kernel_b(hu, dpu, x) * std::pow(x, p) * std::pow(dvs, hv - 1.5);
        };
        out.i3 = Av * integrate_power_endpoint(f, u, p, tol).value;
    }
    {  // I4 = int D(u,s) B(v,s) (u-s)^(hu-1/2) (v-s)^(hv-1/2) ds
        const double p = hu - 0.5;
        auto f = [&](double x) {
            const double dvs = v - u + x;
            return kernel_b(hu, dpu, x) * kernel_b(hv, dpv, dvs) * std::pow(x, p) *
                   std::pow(dvs, hv - 0.5);
        };
        out.i4 = integrate_power_endpoint(f, u, p, tol).value;
    }

    // majorants: |ln y| <= y^(-1/2) + y for y > 0, and |H'| <= l at the two
    // evaluation points
    const double l = std::fmax(std::fabs(dpu), std::fabs(dpv));
    const double Au_ = std::sqrt(2.0 * hu) * l;
    const double Bu_ = l / std::sqrt(2.0 * hu);
    const double Av_ = std::sqrt(2.0 * hv) * l;
    const double Bv_ = l / std::sqrt(2.0 * hv);
    auto J = [&](double ea, double eb) { return eval_J(ea, eb, u, v); };

    out.bound2 = std::fabs(Cu) * (Av_ * (J(hu - 1.5, hv - 1.0) + J(hu - 1.5, hv + 0.5)) +
                                  Bv_ * J(hu - 1.5, hv - 0.5));
    out.bound3 = std::fabs(Av) * (Au_ * (J(hu - 1.0, hv - 1.5) + J(hu + 0.5, hv - 1.5)) +
                                  Bu_ * J(hu - 0.5, hv - 1.5));
    out.bound4 = Au_ * Av_ *
                     (J(hu - 1.0, hv - 1.0) + J(hu - 1.0, hv + 0.5) + J(hu + 0.5, hv - 1.0) +
                      J(hu + 0.5, hv + 0.5)) +
                 Au_ * Bv_ * (J(hu - 1.0, hv - 0.5) + J(hu + 0.5, hv - 0.5)) +
                 Bu_ * Av_ * (J(hu - 0.5, hv - 1.0) + J(hu - 0.5, hv + 0.5)) +
                 Bu_ * Bv_ * J(hu - 0.5, hv - 0.5);
    out.bound = std::fmax(out.bound2, std::fmax(out.bound3, out.bound4));
    return out;
}

std::vector<LampertiPoint> lamperti_solve(const HurstFunction& h, double phi0, double t_end,
                                          double step) {
    if (!(phi0 > 0.0)) throw std::invalid_argument("lamperti_solve: phi0 must be positive");
    if (!(t_end > 0.0)) throw std::invalid_argument("lamperti_solve: t_end must be positive");
    if (!(step > 0.0) || step > t_end)
        throw std::invalid_argument("lamperti_solve: step must lie in (0, t_end]");
    if (!h.deriv) throw std::invalid_argument("lamperti_solve: H' closure required");

    auto rhs = [&](double phi) {
        const double denom = h(phi) + phi * std::log(phi) * h.deriv(phi);
        if (std::fabs(denom) < 1e-6)
            throw std::runtime_error("lamperti_solve: time change degenerates (denominator ~ 0)");
        return phi / denom;
    };
    auto rk4 = [&](double phi, double dt) {
        const double k1 = rhs(phi);
        const double k2 = rhs(phi + 0.5 * dt * k1);
        const double k3 = rhs(phi + 0.5 * dt * k2);
        const double k4 = rhs(phi + dt * k3);
        return phi + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };

    const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / step - 1e-12));
    const double dt = t_end / static_cast<double>(n_steps);
    std::vector<LampertiPoint> out;
    out.reserve(n_steps + 1);
    double phi = phi0;
    out.push_back({0.0, phi, std::pow(phi, -h(phi))});
    for (std::size_t i = 0; i < n_steps; ++i) {
        const double full = rk4(phi, dt);
        const double halves = rk4(rk4(phi, 0.5 * dt), 0.5 * dt);
        const double err = std::fabs(full - halves) / 15.0;
        if (err > 1e-8 * std::fmax(1.0, std::fabs(halves)))
            throw std::runtime_error("lamperti_solve: step too coarse for the error target");
        phi = full;
        const double t = static_cast<double>(i + 1) * dt;
        out.push_back({t, phi, std::pow(phi, -h(phi))});
    }
    return out;
}

}  // namespace rfbmlab
