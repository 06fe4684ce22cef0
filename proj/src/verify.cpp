#include "rfbmlab/verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string_view>

#include "json.hpp"
#include "rfbmlab/attention.hpp"
#include "rfbmlab/numerics.hpp"
#include "rfbmlab/rfbm.hpp"
#include "rfbmlab/rng.hpp"
#include "rfbmlab/specfun.hpp"
#include "rfbmlab/tvfbm.hpp"

namespace rfbmlab {

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

double excess(double x, double bound) { return std::fmax(0.0, x - bound); }

McReport make(const char* id, double target, double estimate, double se, const char* rule,
              bool pass, std::uint64_t seed, std::size_t n) {
    McReport r;
    r.check_id = id;
    r.target = target;
    r.estimate = estimate;
    r.se = se;
    r.tolerance_rule = rule;
    r.pass = pass;
    r.seed = seed;
    r.n = n;
    return r;
}

// ---------------------------------------------------------------- specfun

McReport chk_gamma(const VerifyConfig&, std::uint64_t seed) {
    const double xs[] = {0.3, 0.75, 1.5, 3.2};
    double worst = 0.0;
    for (double x : xs) {
        const double lhs = gamma_fn(x + 1.0);
        worst = std::fmax(worst, std::fabs(lhs - x * gamma_fn(x)) / lhs);
    }
    return make("tails.gamma", 0.0, worst, 0.0, "abs 1e-11", worst <= 1e-11, seed, 4);
}

McReport chk_mills(const VerifyConfig&, std::uint64_t seed) {
    const std::size_t m = 500;
    const double l0 = std::log(1.05), l1 = std::log(12.0);
    std::size_t bad = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double z = std::exp(l0 + (l1 - l0) * static_cast<double>(i) /
                                           static_cast<double>(m - 1));
        const TailBound tb = mills_bounds(z);
        if (!(tb.lower < tb.exact && tb.exact < tb.upper)) ++bad;
    }
    return make("tails.mills", 0.0, static_cast<double>(bad), 0.0, "count == 0", bad == 0, seed,
                m);
}

McReport chk_log_control(const VerifyConfig&, std::uint64_t seed) {
    const double pairs[2][2] = {{0.5, 1.0}, {0.25, 0.5}};
    NormalStream rng(seed, 0);
    std::size_t bad = 0, idx = 0;
    for (const auto& da : pairs) {
        const double k = log_control_constant(da[0], da[1]);
        for (int i = 0; i < 1000; ++i) {
            const double x = rng.uniform(idx++);
            if (std::fabs(std::log(x)) > k * std::pow(x, -da[0]) + 1e-12) ++bad;
        }
        for (int i = 0; i < 1000; ++i) {
            const double x = 1.0 + 99.0 * rng.uniform(idx++);
            if (std::fabs(std::log(x)) > k * std::pow(x, da[1]) + 1e-12) ++bad;
        }
    }
    return make("tails.log_control", 0.0, static_cast<double>(bad), 0.0, "count == 0", bad == 0,
                seed, 4000);
}

double euler_2f1(double a, double b, double c, double z) {
    // Euler integral split at 1/2; each half has a pure power endpoint, which
    // integrate_power_endpoint removes exactly.
    const auto left = integrate_power_endpoint(
        [&](double t) {
            return std::pow(t, b - 1.0) * std::pow(1.0 - t, c - b - 1.0) *
                   std::pow(1.0 - z * t, -a);
        },
        0.5, b - 1.0, 1e-12);
    const auto right = integrate_power_endpoint(
        [&](double w) {
            return std::pow(w, c - b - 1.0) * std::pow(1.0 - w, b - 1.0) *
                   std::pow(1.0 - z * (1.0 - w), -a);
        },
        0.5, c - b - 1.0, 1e-12);
    return gamma_fn(c) / (gamma_fn(b) * gamma_fn(c - b)) * (left.value + right.value);
}

McReport chk_hyp2f1(const VerifyConfig&, std::uint64_t seed) {
    NormalStream rng(seed, 0);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double b = 0.5 + 2.0 * rng.uniform(4 * i);
        const double c = b + 1.0 + 2.0 * rng.uniform(4 * i + 1);
        const double a = -1.5 + 4.0 * rng.uniform(4 * i + 2);
        const double z = -rng.uniform(4 * i + 3);
        worst = std::fmax(worst, std::fabs(hyp2f1(a, b, c, z) - euler_2f1(a, b, c, z)));
    }
    return make("tails.hyp2f1", 0.0, worst, 0.0, "abs 1e-9", worst <= 1e-9, seed, 200);
}

// ------------------------------------------------------------------ hurst

McReport chk_response_spatial(const VerifyConfig& cfg, std::uint64_t seed) {
    const ValidationReport vr = validate_response(cfg.response, 100000, seed);
    const double est = excess(vr.max_spatial_quotient, cfg.response.l_h);
    return make("rfbm.response_spatial", 0.0, est, 0.0, "abs 1e-9", est <= 1e-9, seed,
                vr.n_samples);
}

McReport chk_response_composition(const VerifyConfig& cfg, std::uint64_t seed) {
    const ResponseFunction& f = cfg.response;
    const double g_star = 0.6, c_y = 1.3;  // synthetic path |s-m|^0.6, known constant
    const double horizon = f.horizon;
    const double m = 0.4 * horizon;
    const auto path = [&](double s) { return c_y * std::pow(std::fabs(s - m), g_star); };
    const double expo = std::fmin(f.gamma, g_star);
    NormalStream rng(seed, 0);
    double worst = 0.0;
    const std::size_t pairs = 10000;
    for (std::size_t i = 0; i < pairs; ++i) {
        const double sep = std::pow(10.0, -1.0 - 5.0 * rng.uniform(2 * i));
        const double s = rng.uniform(2 * i + 1) * (horizon - sep);
        const double q =
            std::fabs(f(s + sep, path(s + sep)) - f(s, path(s))) / std::pow(sep, expo);
        worst = std::fmax(worst, q);
    }
    const double bound = std::fmax(f.l_h * c_y + f.c_h, 1.0);
    const double est = excess(worst, bound);
    return make("rfbm.response_composition", 0.0, est, 0.0, "abs 1e-9", est <= 1e-9, seed, pairs);
}

McReport chk_sqrt_control(const VerifyConfig& cfg, std::uint64_t seed) {
    const HurstFunction& h = cfg.hurst;
    const double d = sqrt_control_constant(h);
    NormalStream rng(seed, 0);
    double worst = 0.0;
    const std::size_t pairs = 10000;
    for (std::size_t i = 0; i < pairs; ++i) {
        const double eps = std::pow(10.0, -1.0 - 5.0 * rng.uniform(2 * i));
        const double t = rng.uniform(2 * i + 1) * (h.horizon - eps);
        const double q = std::fabs(std::sqrt(2.0 * h(t + eps)) - std::sqrt(2.0 * h(t))) /
                         std::pow(eps, h.gamma);
        worst = std::fmax(worst, q);
    }
    const double est = excess(worst, d);
    return make("rfbm.response_sqrt_control", 0.0, est, 0.0, "abs 1e-9", est <= 1e-9, seed,
                pairs);
}

// ------------------------------------------------------------------ tvfbm

McReport chk_isometry(const VerifyConfig&, std::uint64_t seed) {
    const HurstFunction funcs[] = {constant_hurst(0.3), constant_hurst(0.6), constant_hurst(0.9),
                                   sinusoidal_hurst(0.5, 0.2)};
    const TimeGrid grid = TimeGrid::uniform(1.0, 4096);
    const std::size_t ks[] = {1024, 2048, 4096};
    double worst = 0.0;
    for (const auto& f : funcs) {
        for (std::size_t k : ks) {
            const std::vector<double> w = weights_at(grid, f, k);
            std::vector<double> sq(w.size());
            for (std::size_t i = 0; i < w.size(); ++i) sq[i] = w[i] * w[i];
            const double sum = pairwise_sum(sq) * grid.dt();
            const double target = variance_theoretical(grid.points[k], f);
            worst = std::fmax(worst, std::fabs(sum - target) / target);
        }
    }
    return make("variance.isometry", 0.0, worst, 0.0, "abs 0.005", worst <= 0.005, seed, 12);
}

McReport chk_cov_symmetry(const VerifyConfig&, std::uint64_t seed) {
    const HurstFunction h = sinusoidal_hurst(0.5, 0.2);
    NormalStream rng(seed, 0);
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
        const double u = 0.1 + 0.8 * rng.uniform(2 * i);
        const double v = u + 0.05 + (0.95 - u) * rng.uniform(2 * i + 1);
        const double a = covariance_quadrature(u, v, h, 1e-10).value;
        const double b = covariance_quadrature(v, u, h, 1e-10).value;
        worst = std::fmax(worst, std::fabs(a - b));
    }
    return make("covariance.symmetry", 0.0, worst, 0.0, "abs 1e-8", worst <= 1e-8, seed, 5);
}

McReport chk_cov_psd(const VerifyConfig&, std::uint64_t seed) {
    const HurstFunction h = sinusoidal_hurst(0.5, 0.2);
    Eigen::MatrixXd m(8, 8);
    for (int i = 0; i < 8; ++i) {
        const double u = (i + 1) / 8.0;
        for (int j = i; j < 8; ++j) {
            const double v = (j + 1) / 8.0;
            m(i, j) = m(j, i) = covariance_quadrature(u, v, h, 1e-10).value;
        }
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    const double est = excess(-es.eigenvalues().minCoeff(), 0.0);
    return make("covariance.psd", 0.0, est, 0.0, "abs 1e-9", est <= 1e-9, seed, 36);
}

McReport chk_eval_j(const VerifyConfig&, std::uint64_t seed) {
    NormalStream rng(seed, 0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double a = -0.95 + 2.45 * rng.uniform(4 * i);
        const double b = -0.95 + 2.45 * rng.uniform(4 * i + 1);
        const double u = 0.05 + 0.95 * rng.uniform(4 * i + 2);
        const double v = 2.0 * u + 0.3 + 1.7 * rng.uniform(4 * i + 3);
        const auto brute = integrate_power_endpoint(
            [&](double x) { return std::pow(x, a) * std::pow(v - u + x, b); }, u, a, 1e-10);
        worst = std::fmax(worst, std::fabs(eval_J(a, b, u, v) - brute.value));
    }
    return make("covariance.eval_j", 0.0, worst, 0.0, "abs 1e-8", worst <= 1e-8, seed, 100);
}

McReport chk_ldp_monotone(const VerifyConfig&, std::uint64_t seed) {
    const double hs[] = {0.55, 0.6, 0.75};
    const double xs[] = {0.5, 1.0, 2.0};
    std::size_t bad = 0;
    for (double hv : hs) {
        const HurstFunction h = constant_hurst(hv);
        for (double x : xs) {
            double prev = -1.0;
            for (int k = 1; k <= 5; ++k) {
                const double err =
                    std::fabs(ldp_ratio(0.5, x, std::pow(10.0, -k), h) + 0.5 * x * x);
                if (k > 1 && err >= prev) ++bad;
                prev = err;
            }
        }
    }
    return make("ldp.monotone", 0.0, static_cast<double>(bad), 0.0, "trend-monotone", bad == 0,
                seed, 36);
}

McReport chk_ldp_limit(const VerifyConfig&, std::uint64_t seed) {
    const double hs[] = {0.55, 0.6, 0.75};
    const double xs[] = {0.5, 1.0, 2.0};
    double worst = 0.0;
    for (double hv : hs) {
        const HurstFunction h = constant_hurst(hv);
        for (double x : xs) {
            const double rate = 0.5 * x * x;
            worst = std::fmax(worst, std::fabs(ldp_ratio(0.5, x, 1e-5, h) + rate) / rate);
        }
    }
    return make("ldp.limit", 0.0, worst, 0.0, "15% at smallest eps", worst <= 0.15, seed, 9);
}

McReport chk_lnd_lower(const VerifyConfig&, std::uint64_t seed) {
    const HurstFunction h = sinusoidal_hurst(0.5, 0.2);
    const double t0 = 0.4;
    const double thr = lnd_lower_bound(t0, 1e-3, h).threshold;
    std::size_t bad = 0;
    for (int j = 0; j <= 4; ++j) {
        const LndBound lb = lnd_lower_bound(t0, thr * std::pow(10.0, -j), h);
        if (!(lb.cond_var >= lb.bound) || !lb.within_validity) ++bad;
    }
    return make("lnd.lower", 0.0, static_cast<double>(bad), 0.0, "count == 0", bad == 0, seed, 5);
}

McReport chk_lnd_limit(const VerifyConfig&, std::uint64_t seed) {
    const HurstFunction h = sinusoidal_hurst(0.5, 0.2);
    const double t0 = 0.4;
    const double eps = lnd_lower_bound(t0, 1e-3, h).threshold * 1e-4;
    const LndBound lb = lnd_lower_bound(t0, eps, h);
    const double ratio = lb.cond_var / std::pow(eps, 2.0 * h(t0));
    const double est = std::fabs(ratio - 1.0);
    return make("lnd.limit", 0.0, est, 0.0, "abs 0.05", est <= 0.05, seed, 1);
}

McReport chk_lnd_asbound(const VerifyConfig&, std::uint64_t seed) {
    const HurstFunction h = sinusoidal_hurst(0.5, 0.2);
    int worst = 0;
    for (int s = 0; s < 10; ++s) {
        const AsBoundReport rep = as_bound_check(0.5, h, 2.0, 64, seed + s);
        worst = std::max(worst, rep.largest_violating_n);
    }
    return make("lnd.asbound", 0.0, static_cast<double>(worst), 0.0, "abs 4", worst <= 4, seed,
                640);
}

McReport chk_lamperti_norm(const VerifyConfig&, std::uint64_t seed) {
    const HurstFunction h = sinusoidal_hurst(0.6, 0.05, 8.0);
    const auto traj = lamperti_solve(h, 1.0, 1.0, 1.0 / 512.0);
    double worst = 0.0;
    for (const auto& pt : traj) {
        const double e = 2.0 * h(pt.phi);
        worst = std::fmax(worst, std::fabs(std::pow(pt.phi, -e) * std::pow(pt.phi, e) - 1.0));
    }
    return make("lamperti.normalization", 0.0, worst, 0.0, "abs 1e-12", worst <= 1e-12, seed,
                traj.size());
}

McReport chk_lamperti_exp(const VerifyConfig&, std::uint64_t seed) {
    const double h0 = 0.7;
    const HurstFunction h = constant_hurst(h0, 8.0);
    const auto traj = lamperti_solve(h, 1.0, 1.0, 1.0 / 512.0);
    double worst = 0.0;
    for (const auto& pt : traj) {
        const double exact = std::exp(pt.t / h0);
        worst = std::fmax(worst, std::fabs(pt.phi - exact) / exact);
    }
    return make("lamperti.exponential", 0.0, worst, 0.0, "abs 1e-8", worst <= 1e-8, seed,
                traj.size());
}

McReport chk_lamperti_ode(const VerifyConfig&, std::uint64_t seed) {
    const double step = 1.0 / 256.0;
    const HurstFunction h = constant_hurst(0.7, 8.0);
    const auto traj = lamperti_solve(h, 1.0, 1.0, step);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
        const double fd = (traj[i + 1].alpha - traj[i - 1].alpha) / (2.0 * step);
        worst = std::fmax(worst, std::fabs(fd + traj[i].alpha));
    }
    const double tol = 10.0 * step * step;
    return make("lamperti.alpha_ode", 0.0, worst, 0.0, "O(step^2)", worst <= tol, seed,
                traj.size());
}

// ------------------------------------------------------------------- rfbm

ResponseFunction certified_response() { return example_response(0.45, 0.55, 0.5, 1.0, 1.0); }

McReport chk_residual_decay(const VerifyConfig& cfg, std::uint64_t seed) {
    const ResponseFunction f = certified_response();
    const ContractionCertificate cert = contraction_certificate(f, 1.0);
    const TimeGrid grid = TimeGrid::uniform(cert.t0, cfg.grid_n);
    double worst = 0.0;
    for (int s = 0; s < 20; ++s) {
        const RfbmSolution sol = solve_rfbm(grid, f, seed + s);
        const auto& rh = sol.residual_history;
        for (std::size_t m = 1; m + 1 < rh.size(); ++m)
            if (rh[m] > 0.0) worst = std::fmax(worst, rh[m + 1] / rh[m]);
    }
    const double est = excess(worst, cert.kappa + 0.1);
    return make("rfbm.residual_decay", 0.0, est, 0.0, "abs 1e-12", est <= 1e-12, seed, 20);
}

McReport chk_s2_contraction(const VerifyConfig& cfg, std::uint64_t seed) {
    const ResponseFunction f = certified_response();
    const ContractionCertificate cert = contraction_certificate(f, 1.0);
    const TimeGrid grid = TimeGrid::uniform(cert.t0, std::min<std::size_t>(cfg.grid_n, 256));
    const std::size_t paths = std::min<std::size_t>(cfg.n_paths, 300);
    const auto batch = solve_ensemble(grid, f, seed, 0, paths, cfg.threads);
    std::vector<double> a(paths), b(paths);
    for (std::size_t p = 0; p < paths; ++p) {
        b[p] = batch[p].residual_history.at(0);
        a[p] = batch[p].residual_history.at(1);
    }
    double sa = 0.0, sb = 0.0;
    for (std::size_t p = 0; p < paths; ++p) {
        sa += a[p] * a[p];
        sb += b[p] * b[p];
    }
    const double ratio = std::sqrt(sa / sb);
    std::vector<double> loo(paths);
    for (std::size_t p = 0; p < paths; ++p)
        loo[p] = std::sqrt((sa - a[p] * a[p]) / (sb - b[p] * b[p]));
    const McStats ls = mc_stats(loo);
    const double np = static_cast<double>(paths);
    double se = 0.0;
    for (double v : loo) se += (v - ls.mean) * (v - ls.mean);
    se = std::sqrt((np - 1.0) / np * se);  // jackknife
    const double est = excess(ratio, cert.kappa);
    return make("rfbm.s2_contraction", 0.0, est, se, "3*SE", est <= 3.0 * se, seed, paths);
}

McReport chk_alpha_holder(const VerifyConfig& cfg, std::uint64_t seed) {
    const ResponseFunction f = example_response(0.45, 0.55, 0.5, 1.0, 1.0);
    const TimeGrid grid = TimeGrid::uniform(1.0, cfg.grid_n);
    const RfbmSolution sol = solve_rfbm(grid, f, seed);
    const std::size_t n = grid.n;
    std::vector<double> lx, ly;
    std::vector<std::size_t> lags;
    for (std::size_t lag = 1; lag <= n / 4; lag *= 2) lags.push_back(lag);
    std::vector<double> sup_dx(lags.size(), 0.0);
    for (std::size_t li = 0; li < lags.size(); ++li) {
        for (std::size_t i = 0; i + lags[li] <= n; ++i)
            sup_dx[li] =
                std::fmax(sup_dx[li], std::fabs(sol.path[i + lags[li]] - sol.path[i]));
        lx.push_back(std::log(static_cast<double>(lags[li]) * grid.dt()));
        ly.push_back(std::log(sup_dx[li]));
    }
    const double g_hat = std::fmin(ls_slope(lx, ly), 1.0);
    const double expo = std::fmin(f.gamma, g_hat);
    double c_path = 0.0, quot = 0.0;
    std::size_t pairs = 0;
    for (std::size_t li = 0; li < lags.size(); ++li) {
        const double dt = static_cast<double>(lags[li]) * grid.dt();
        for (std::size_t i = 0; i + lags[li] <= n; ++i, ++pairs) {
            c_path = std::fmax(
                c_path, std::fabs(sol.path[i + lags[li]] - sol.path[i]) / std::pow(dt, g_hat));
            quot = std::fmax(
                quot, std::fabs(sol.alpha[i + lags[li]] - sol.alpha[i]) / std::pow(dt, expo));
        }
    }
    const double bound = std::fmax(f.l_h * c_path + f.c_h, 1.0);
    const double est = excess(quot, bound * (1.0 + 1e-12));
    return make("rfbm.alpha_holder", 0.0, est, 0.0, "abs 1e-12", est <= 1e-12, seed, pairs);
}

McReport chk_grid_stability(const VerifyConfig& cfg, std::uint64_t seed) {
    const ResponseFunction f = example_response(0.45, 0.55, 0.5, 1.0, 1.0);
    const std::size_t n0 = std::max<std::size_t>(64, cfg.grid_n / 2);
    const TimeGrid gf = TimeGrid::uniform(1.0, 4 * n0);
    const TimeGrid gm = TimeGrid::uniform(1.0, 2 * n0);
    const TimeGrid gc = TimeGrid::uniform(1.0, n0);
    std::vector<double> dbf(4 * n0), dbm(2 * n0), dbc(n0);
    NormalStream rng(seed, 0);
    const double sd = std::sqrt(gf.dt());
    for (std::size_t i = 0; i < dbf.size(); ++i) dbf[i] = sd * rng.normal(i);
    for (std::size_t i = 0; i < dbm.size(); ++i) dbm[i] = dbf[2 * i] + dbf[2 * i + 1];
    for (std::size_t i = 0; i < dbc.size(); ++i) dbc[i] = dbm[2 * i] + dbm[2 * i + 1];
    const RfbmSolution xf = solve_rfbm(gf, f, dbf);
    const RfbmSolution xm = solve_rfbm(gm, f, dbm);
    const RfbmSolution xc = solve_rfbm(gc, f, dbc);
    double d1 = 0.0, d2 = 0.0;
    for (std::size_t i = 0; i <= n0; ++i)
        d1 = std::fmax(d1, std::fabs(xc.path[i] - xm.path[2 * i]));
    for (std::size_t i = 0; i <= 2 * n0; ++i)
        d2 = std::fmax(d2, std::fabs(xm.path[i] - xf.path[2 * i]));
    return make("rfbm.grid_stability", std::pow(0.5, f.h_min), d2 / d1, 0.0, "trend-monotone",
                d2 <= d1, seed, n0);
}

McReport chk_memory_cumulative(const VerifyConfig& cfg, std::uint64_t seed) {
    const ResponseFunction f = example_response(0.45, 0.55, 0.5, 1.0, 1.0);
    const TimeGrid grid = TimeGrid::uniform(1.0, cfg.grid_n);
    std::size_t bad = 0;
    for (int s = 0; s < 5; ++s) {
        const RfbmSolution sol = solve_rfbm(grid, f, seed + s);
        double prev = 0.0;
        for (double t : {0.25, 0.5, 0.75, 1.0}) {
            const CumulativeMemory cm = cumulative_memory(sol, t);
            if (cm.c_t < prev - 1e-15) ++bad;
            if (cm.avg < f.h_min - 1e-12 || cm.avg > f.h_max + 1e-12) ++bad;
            prev = cm.c_t;
        }
    }
    return make("memory.cumulative", 0.0, static_cast<double>(bad), 0.0, "count == 0", bad == 0,
                seed, 20);
}

McReport chk_memory_rate(const VerifyConfig&, std::uint64_t seed) {
    const double ladder[] = {1e2, 1e3, 1e4, 1e5, 1e6};
    double worst = 0.0;
    bool ok = true;
    for (double beta : {0.5, 1.0, 2.0}) {
        const RateCheckReport rep = convergence_rate_check(0.5, 0.2, beta, 1.0, ladder);
        worst = std::fmax(worst, std::fabs(rep.fitted_exponent - rep.expected_exponent));
        ok = ok && rep.ok;
    }
    return make("memory.rate", 0.0, worst, 0.0, "abs 0.05", ok && worst <= 0.05, seed, 3);
}

// -------------------------------------------------------- acceptance-style

McReport variance_law_at(const VerifyConfig& cfg, std::uint64_t seed, const char* id,
                         double t_req) {
    const HurstFunction h = sinusoidal_hurst(0.5, 0.2);
    const TimeGrid grid = TimeGrid::uniform(1.0, cfg.grid_n);
    const std::size_t idx[] = {
        static_cast<std::size_t>(std::lround(t_req * static_cast<double>(cfg.grid_n)))};
    const VarianceEstimate ve = mc_variance(grid, h, idx, cfg.n_paths, seed, cfg.threads)[0];
    const double tol = std::fmax(3.0 * ve.se, 0.01 * ve.target);
    return make(id, ve.target, ve.estimate, ve.se, "max(3*SE, 1% rel)",
                std::fabs(ve.estimate - ve.target) <= tol, seed, cfg.n_paths);
}

McReport chk_var_law_t025(const VerifyConfig& cfg, std::uint64_t seed) {
    return variance_law_at(cfg, seed, "variance.law_t025", 0.25);
}
McReport chk_var_law_t050(const VerifyConfig& cfg, std::uint64_t seed) {
    return variance_law_at(cfg, seed, "variance.law_t050", 0.5);
}
McReport chk_var_law_t100(const VerifyConfig& cfg, std::uint64_t seed) {
    return variance_law_at(cfg, seed, "variance.law_t100", 1.0);
}

McReport chk_classical_weights(const VerifyConfig&, std::uint64_t seed) {
    const HurstFunction h = constant_hurst(0.5);
    const TimeGrid grid = TimeGrid::uniform(1.0, 512);
    double worst = 0.0;
    for (std::size_t k = 1; k <= grid.n; ++k)
        for (double w : weights_at(grid, h, k)) worst = std::fmax(worst, std::fabs(w - 1.0));
    return make("variance.classical_weights", 0.0, worst, 0.0, "exact", worst == 0.0, seed,
                grid.n);
}

McReport chk_classical_h075(const VerifyConfig& cfg, std::uint64_t seed) {
    const HurstFunction h = constant_hurst(0.75);
    const TimeGrid grid = TimeGrid::uniform(1.0, cfg.grid_n);
    const std::size_t idx[] = {cfg.grid_n};
    const VarianceEstimate ve = mc_variance(grid, h, idx, cfg.n_paths, seed, cfg.threads)[0];
    return make("variance.classical_h075", 1.0, ve.estimate, ve.se, "3*SE",
                std::fabs(ve.estimate - 1.0) <= 3.0 * ve.se, seed, cfg.n_paths);
}

McReport chk_cov_diagonal(const VerifyConfig&, std::uint64_t seed) {
    const HurstFunction h = sinusoidal_hurst(0.5, 0.2);
    NormalStream rng(seed, 0);
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
        const double t = 0.1 + 0.9 * rng.uniform(i);
        const double r = covariance_quadrature(t, t, h, 1e-10).value;
        worst = std::fmax(worst, std::fabs(r - variance_theoretical(t, h)));
    }
    return make("covariance.diagonal", 0.0, worst, 0.0, "abs 1e-8", worst <= 1e-8, seed, 5);
}

McReport chk_cov_brownian(const VerifyConfig&, std::uint64_t seed) {
    const HurstFunction h = constant_hurst(0.5);
    NormalStream rng(seed, 0);
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
        const double u = 0.05 + 0.9 * rng.uniform(2 * i);
        const double v = 0.05 + 0.9 * rng.uniform(2 * i + 1);
        const double r = covariance_quadrature(u, v, h, 1e-12).value;
        worst = std::fmax(worst, std::fabs(r - std::fmin(u, v)));
    }
    return make("covariance.brownian", 0.0, worst, 0.0, "abs 1e-10", worst <= 1e-10, seed, 5);
}

McReport chk_cov_hyper(const VerifyConfig&, std::uint64_t seed) {
    NormalStream rng(seed, 0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double hu = 0.55 + 0.4 * rng.uniform(4 * i);
        const double hv = 0.55 + 0.4 * rng.uniform(4 * i + 1);
        const double u = 0.1 + 0.7 * rng.uniform(4 * i + 2);
        const double v = 2.0 * u + 0.2 + rng.uniform(4 * i + 3);
        // shell whose eval pins H(u)=hu and H(v)=hv, the only points the
        // closed form reads
        HurstFunction h = constant_hurst(0.6, v + 1.0);
        h.eval = [hu, hv, u, v](double t) {
            return std::fabs(t - u) <= std::fabs(t - v) ? hu : hv;
        };
        h.h_min = std::fmin(hu, hv);
        h.h_max = std::fmax(hu, hv);
        const auto brute_i = integrate_power_endpoint(
            [&](double x) { return std::pow(x, hu - 1.5) * std::pow(v - u + x, hv - 0.5); }, u,
            hu - 1.5, 1e-11);
        worst = std::fmax(worst, std::fabs(cov_hyper_I(u, v, h) - brute_i.value));
        const auto brute_j = integrate_power_endpoint(
            [&](double x) { return std::pow(x, hu - 0.5) * std::pow(v - u + x, hv - 0.5); }, u,
            hu - 0.5, 1e-11);
        worst = std::fmax(worst,
                          std::fabs(eval_J(hu - 0.5, hv - 0.5, u, v) - brute_j.value));
    }
    return make("covariance.hyper_closed_form", 0.0, worst, 0.0, "abs 1e-7", worst <= 1e-7, seed,
                40);
}

McReport chk_cov_mixed(const VerifyConfig&, std::uint64_t seed) {
    const HurstFunction h = sinusoidal_hurst(0.7, 0.1, 4.0);
    NormalStream rng(seed, 0);
    std::size_t bad = 0;
    for (int i = 0; i < 10; ++i) {
        const double u = 0.1 + 0.4 * rng.uniform(2 * i);
        const double v = 2.0 * u + 0.3 + rng.uniform(2 * i + 1);
        const MixedTerms mt = mixed_derivative_terms(u, v, h, h.deriv);
        if (std::fabs(mt.i2) > mt.bound2 + 1e-12) ++bad;
        if (std::fabs(mt.i3) > mt.bound3 + 1e-12) ++bad;
        if (std::fabs(mt.i4) > mt.bound4 + 1e-12) ++bad;
    }
    return make("covariance.mixed_majorant", 0.0, static_cast<double>(bad), 0.0, "count == 0",
                bad == 0, seed, 30);
}

McReport chk_alpha_range(const VerifyConfig& cfg, std::uint64_t seed) {
    const ResponseFunction f = example_response(0.45, 0.55, 0.5, 1.0, 1.0);
    const TimeGrid grid = TimeGrid::uniform(1.0, cfg.grid_n);
    std::size_t bad = 0;
    for (int s = 0; s < 5; ++s) {
        const RfbmSolution sol = solve_rfbm(grid, f, seed + s);
        for (double a : sol.alpha)
            if (a < f.h_min - 1e-12 || a > f.h_max + 1e-12) ++bad;
    }
    return make("rfbm.alpha_range", 0.0, static_cast<double>(bad), 0.0, "count == 0", bad == 0,
                seed, 5 * (cfg.grid_n + 1));
}

McReport chk_kernel_sandwich(const VerifyConfig& cfg, std::uint64_t seed) {
    const ResponseFunction f = example_response(0.45, 0.55, 0.5, 1.0, 1.0);
    const TimeGrid grid = TimeGrid::uniform(1.0, cfg.grid_n);
    std::size_t bad = 0;
    for (int s = 0; s < 3; ++s) {
        const RfbmSolution sol = solve_rfbm(grid, f, seed + s);
        for (double t : {0.3, 0.6})
            for (double eps : {1e-4, 1e-2}) {
                const KernelScaling ks = kernel_norm_scaling(sol, f, t, eps);
                if (ks.norm_sq < ks.lower * (1.0 - 1e-9) ||
                    ks.norm_sq > ks.upper * (1.0 + 1e-9))
                    ++bad;
            }
    }
    return make("rfbm.kernel_sandwich", 0.0, static_cast<double>(bad), 0.0, "count == 0",
                bad == 0, seed, 12);
}

double fitted_alpha(const RfbmSolution& sol, const ResponseFunction& f, double t) {
    const double e1 = 1e-4, e2 = 2e-4;
    const double s1 = kernel_norm_scaling(sol, f, t, e1).norm_sq;
    const double s2 = kernel_norm_scaling(sol, f, t, e2).norm_sq;
    return 0.5 * (std::log(s1) - std::log(s2)) / (std::log(e1) - std::log(e2));
}

McReport chk_scaling_slope(const VerifyConfig& cfg, std::uint64_t seed) {
    const TimeGrid grid = TimeGrid::uniform(1.0, cfg.grid_n);
    double scaled = 0.0;
    for (double hv : {0.3, 0.7}) {
        const ResponseFunction f = constant_response(hv);
        const RfbmSolution sol = solve_rfbm(grid, f, seed);
        scaled = std::fmax(scaled, std::fabs(fitted_alpha(sol, f, 0.5) - hv) / 0.02);
    }
    const ResponseFunction f = example_response(0.45, 0.55, 0.5, 1.0, 1.0);
    const RfbmSolution sol = solve_rfbm(grid, f, seed);
    const double a_t = sol.alpha[grid.index_of(0.5)];
    scaled = std::fmax(scaled, std::fabs(fitted_alpha(sol, f, 0.5) - a_t) / 0.1);
    return make("rfbm.scaling_slope", 0.0, scaled, 0.0, "scaled deviation <= 1", scaled <= 1.0,
                seed, 3);
}

// -------------------------------------------------------------- attention

McReport chk_att_normalization(const VerifyConfig& cfg, std::uint64_t seed) {
    const ResponseFunction& f = cfg.response;
    const TimeGrid grid = TimeGrid::uniform(1.0, cfg.grid_n);
    const std::size_t idx[] = {cfg.grid_n / 2, 4 * cfg.grid_n / 5, cfg.grid_n};
    double worst = 0.0;
    for (std::size_t s = 0; s < cfg.n_seeds; ++s) {
        const RfbmSolution sol = solve_rfbm(grid, f, seed + s);
        for (std::size_t k : idx) {
            const AttentionProfile prof = attention_profile(sol, f, grid.points[k]);
            worst = std::fmax(worst, std::fabs(prof.norm_sum - 1.0));
        }
    }
    return make("attention.normalization", 0.0, worst, 0.0, "abs 1e-8", worst <= 1e-8, seed,
                3 * cfg.n_seeds);
}

McReport chk_att_positivity(const VerifyConfig& cfg, std::uint64_t seed) {
    const ResponseFunction& f = cfg.response;
    const TimeGrid grid = TimeGrid::uniform(1.0, cfg.grid_n);
    const std::size_t idx[] = {cfg.grid_n / 2, 4 * cfg.grid_n / 5, cfg.grid_n};
    std::size_t bad = 0;
    for (std::size_t s = 0; s < cfg.n_seeds; ++s) {
        const RfbmSolution sol = solve_rfbm(grid, f, seed + s);
        for (std::size_t k : idx) {
            const AttentionProfile prof = attention_profile(sol, f, grid.points[k]);
            for (double r : prof.rho)
                if (!(r > 0.0)) ++bad;
        }
    }
    return make("attention.positivity", 0.0, static_cast<double>(bad), 0.0, "count == 0",
                bad == 0, seed, 3 * cfg.n_seeds);
}

McReport chk_att_bounds(const VerifyConfig& cfg, std::uint64_t seed) {
    const ResponseFunction f = example_response(0.45, 0.55, 0.5, 1.0, 3.0);
    const TimeGrid grid = TimeGrid::uniform(3.0, 600);
    const BoundConstants consts = bound_constants(f.h_min, f.h_max);
    const std::size_t seeds = std::min<std::size_t>(2 * cfg.n_seeds, 20);
    std::size_t bad = 0, checked = 0;
    for (std::size_t s = 0; s < seeds; ++s) {
        const RfbmSolution sol = solve_rfbm(grid, f, seed + s);
        for (double t : {0.3, 0.8, 1.0, 1.5, 3.0}) {
            const AttentionProfile prof = attention_profile(sol, f, t);
            const BoundCheckReport rep = check_attention_bounds(prof, consts);
            bad += rep.violations.size();
            checked += rep.checked;
        }
    }
    return make("attention.bounds", 0.0, static_cast<double>(bad), 0.0, "count == 0", bad == 0,
                seed, checked);
}

McReport chk_att_sensitivity(const VerifyConfig& cfg, std::uint64_t seed) {
    const ResponseFunction& f = cfg.response;
    NormalStream rng(seed, 0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double t = 0.1 + 1.9 * rng.uniform(3 * i);
        const double s = 0.99 * t * rng.uniform(3 * i + 1);
        const double x = -2.0 + 4.0 * rng.uniform(3 * i + 2);
        const double h = f(s, x);
        const double direct = f.dx_or_fd(s, x) * (1.0 / (2.0 * h) + std::log(t - s));
        const auto lnk = [&](double y) {
            const double hy = f(s, y);
            return 0.5 * std::log(2.0 * hy) + (hy - 0.5) * std::log(t - s);
        };
        const double fd = (lnk(x + 1e-6) - lnk(x - 1e-6)) / 2e-6;
        worst = std::fmax(worst, std::fabs(direct - fd));
    }
    return make("attention.sensitivity", 0.0, worst, 0.0, "abs 1e-5", worst <= 1e-5, seed, 1000);
}

McReport chk_att_volatility(const VerifyConfig& cfg, std::uint64_t seed) {
    const ResponseFunction& f = cfg.response;
    const TimeGrid grid = TimeGrid::uniform(1.0, 128);
    const std::size_t paths = std::min<std::size_t>(cfg.n_paths, 600);
    const auto ba = solve_ensemble(grid, f, seed, 0, paths, cfg.threads);
    const auto bb = solve_ensemble(grid, f, seed, 1ull << 32, paths, cfg.threads);
    NormalStream rng(seed, 1);
    std::size_t bad = 0;
    for (int i = 0; i < 50; ++i) {
        const double lo = -1.5 + 2.0 * rng.uniform(2 * i);
        const double hi = lo + 0.1 + 2.0 * rng.uniform(2 * i + 1);
        const VolatilityEstimate ve = volatility_from_ensembles(ba, bb, {lo, hi}, 1.0);
        if (!ve.within_bound) ++bad;
    }
    const double inf = std::numeric_limits<double>::infinity();
    if (volatility_from_ensembles(ba, bb, {-inf, inf}, 1.0).v != 0.0) ++bad;
    return make("attention.volatility", 0.0, static_cast<double>(bad), 0.0, "count == 0",
                bad == 0, seed, 51);
}

McReport chk_att_conservation(const VerifyConfig& cfg, std::uint64_t seed) {
    const ResponseFunction& f = cfg.response;
    const TimeGrid grid = TimeGrid::uniform(1.0, 256);
    const double inf = std::numeric_limits<double>::infinity();
    const Interval cells[] = {{-inf, -0.3}, {-0.3, 0.0}, {0.0, 0.7}, {0.7, inf}};
    double worst = 0.0;
    for (std::size_t s = 0; s < cfg.n_seeds; ++s) {
        const RfbmSolution sol = solve_rfbm(grid, f, seed + s);
        double total = 0.0;
        for (const Interval& c : cells) total += residence_measure(sol, c, 1.0).mu;
        worst = std::fmax(worst, std::fabs(total - 1.0));
    }
    return make("attention.conservation", 0.0, worst, 0.0, "exact", worst == 0.0, seed,
                cfg.n_seeds);
}

// ----------------------------------------------------------------- registry

using CheckFn = McReport (*)(const VerifyConfig&, std::uint64_t);

struct CheckEntry {
    const char* id;
    const char* suite;
    const char* module;  // invariant source, empty for acceptance-style checks
    CheckFn fn;
};

const CheckEntry kRegistry[] = {
    {"tails.gamma", "tails", "specfun", chk_gamma},
    {"tails.mills", "tails", "specfun", chk_mills},
    {"tails.log_control", "tails", "specfun", chk_log_control},
    {"tails.hyp2f1", "tails", "specfun", chk_hyp2f1},
    {"rfbm.response_spatial", "rfbm", "hurst", chk_response_spatial},
    {"rfbm.response_composition", "rfbm", "hurst", chk_response_composition},
    {"rfbm.response_sqrt_control", "rfbm", "hurst", chk_sqrt_control},
    {"variance.isometry", "variance", "tvfbm", chk_isometry},
    {"covariance.symmetry", "covariance", "tvfbm", chk_cov_symmetry},
    {"covariance.psd", "covariance", "tvfbm", chk_cov_psd},
    {"covariance.eval_j", "covariance", "tvfbm", chk_eval_j},
    {"ldp.monotone", "ldp", "tvfbm", chk_ldp_monotone},
    {"lamperti.normalization", "lamperti", "tvfbm", chk_lamperti_norm},
    {"rfbm.residual_decay", "rfbm", "rfbm", chk_residual_decay},
    {"rfbm.s2_contraction", "rfbm", "rfbm", chk_s2_contraction},
    {"rfbm.alpha_holder", "rfbm", "rfbm", chk_alpha_holder},
    {"rfbm.grid_stability", "rfbm", "rfbm", chk_grid_stability},
    {"memory.cumulative", "memory", "rfbm", chk_memory_cumulative},
    {"attention.normalization", "attention", "attention", chk_att_normalization},
    {"attention.positivity", "attention", "attention", chk_att_positivity},
    {"attention.bounds", "attention", "attention", chk_att_bounds},
    {"attention.sensitivity", "attention", "attention", chk_att_sensitivity},
    {"attention.volatility", "attention", "attention", chk_att_volatility},
    {"attention.conservation", "attention", "attention", chk_att_conservation},
    {"variance.law_t025", "variance", "", chk_var_law_t025},
    {"variance.law_t050", "variance", "", chk_var_law_t050},
    {"variance.law_t100", "variance", "", chk_var_law_t100},
    {"variance.classical_weights", "variance", "", chk_classical_weights},
    {"variance.classical_h075", "variance", "", chk_classical_h075},
    {"covariance.diagonal", "covariance", "", chk_cov_diagonal},
    {"covariance.brownian", "covariance", "", chk_cov_brownian},
    {"covariance.hyper_closed_form", "covariance", "", chk_cov_hyper},
    {"covariance.mixed_majorant", "covariance", "", chk_cov_mixed},
    {"ldp.limit", "ldp", "", chk_ldp_limit},
    {"lnd.lower", "lnd", "", chk_lnd_lower},
    {"lnd.limit", "lnd", "", chk_lnd_limit},
    {"lnd.asbound", "lnd", "", chk_lnd_asbound},
    {"lamperti.exponential", "lamperti", "", chk_lamperti_exp},
    {"lamperti.alpha_ode", "lamperti", "", chk_lamperti_ode},
    {"rfbm.alpha_range", "rfbm", "", chk_alpha_range},
    {"rfbm.kernel_sandwich", "rfbm", "", chk_kernel_sandwich},
    {"rfbm.scaling_slope", "rfbm", "", chk_scaling_slope},
    {"memory.rate", "memory", "", chk_memory_rate},
};

}  // namespace

VerifyConfig default_verify_config() {
    VerifyConfig cfg;
    cfg.hurst = sinusoidal_hurst(0.5, 0.2);
    cfg.response = example_response(0.45, 0.55, 0.5, 1.0, 3.0);
    return cfg;
}

std::vector<std::string> suite_names() {
    return {"variance", "covariance", "tails",  "ldp",      "lnd",
            "rfbm",     "attention",  "memory", "lamperti", "all"};
}

std::vector<std::string> suite_checks(const std::string& name) {
    std::vector<std::string> out;
    for (const auto& e : kRegistry)
        if (name == "all" || name == e.suite) out.push_back(e.id);
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t invariant_check_count(const std::string& module) {
    std::size_t count = 0;
    for (const auto& e : kRegistry)
        if (module == e.module) ++count;
    return count;
}

std::vector<McReport> run_suite(const std::string& name, const VerifyConfig& config,
                                std::uint64_t seed) {
    const auto names = suite_names();
    if (std::find(names.begin(), names.end(), name) == names.end())
        throw std::invalid_argument("unknown suite: " + name);
    std::vector<const CheckEntry*> todo;
    for (const auto& e : kRegistry)
        if (name == "all" || name == e.suite) todo.push_back(&e);
    std::vector<McReport> out(todo.size());
    parallel_for(todo.size(), resolve_threads(config.threads),
                 [&](std::size_t lo, std::size_t hi) {
                     for (std::size_t i = lo; i < hi; ++i) {
                         const auto start = std::chrono::steady_clock::now();
                         out[i] = todo[i]->fn(config, seed ^ fnv1a(todo[i]->id));
                         out[i].runtime_ms =
                             std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
                     }
                 });
    std::sort(out.begin(), out.end(),
              [](const McReport& a, const McReport& b) { return a.check_id < b.check_id; });
    return out;
}

bool all_passed(const std::vector<McReport>& reports) {
    for (const auto& r : reports)
        if (!r.pass) return false;
    return true;
}

std::string reports_to_json(const std::vector<McReport>& reports) {
    std::vector<const McReport*> ordered;
    for (const auto& r : reports) ordered.push_back(&r);
    std::sort(ordered.begin(), ordered.end(),
              [](const McReport* a, const McReport* b) { return a->check_id < b->check_id; });
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const McReport* r : ordered) {
        nlohmann::ordered_json j;
        j["check_id"] = r->check_id;
        j["target"] = r->target;
        j["estimate"] = r->estimate;
        j["se"] = r->se;
        j["tolerance_rule"] = r->tolerance_rule;
        j["verdict"] = r->pass ? "pass" : "fail";
        j["seed"] = r->seed;
        j["n"] = r->n;
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

}  // namespace rfbmlab
