#include "rfbmlab/rfbm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rfbmlab/numerics.hpp"
#include "rfbmlab/rng.hpp"
#include "rfbmlab/tvfbm.hpp"

namespace rfbmlab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// one Picard sweep: next[j] = sum_i w_i(t_j; exponents from prev) dB_i
void picard_sweep(const TimeGrid& grid, const ResponseFunction& f,
                  const std::vector<double>& db, const std::vector<double>& prev,
                  KernelConvention conv, std::vector<double>& next) {
    const std::size_t n = grid.n;
    next[0] = 0.0;
    if (conv == KernelConvention::hurst_at_s) {
        std::vector<double> e(n), pref(n);
        for (std::size_t i = 0; i < n; ++i) {
            e[i] = f(grid.points[i], prev[i]) + 0.5;
            pref[i] = std::sqrt(2.0 * (e[i] - 0.5));
        }
        for (std::size_t j = 1; j <= n; ++j) {
            const double t = grid.points[j];
            double acc = 0.0;
            for (std::size_t i = 0; i < j; ++i) {
                const double num =
                    std::pow(t - grid.points[i], e[i]) - std::pow(t - grid.points[i + 1], e[i]);
                acc += pref[i] * num / (e[i] * (grid.points[i + 1] - grid.points[i])) * db[i];
            }
            next[j] = acc;
        }
    } else {
        for (std::size_t j = 1; j <= n; ++j) {
            const double t = grid.points[j];
            const double p = f(t, prev[j]) + 0.5;
            const double pref = std::sqrt(2.0 * (p - 0.5));
            double acc = 0.0;
            double b_lo = std::pow(t - grid.points[0], p);
            for (std::size_t i = 0; i < j; ++i) {
                const double b_hi = std::pow(t - grid.points[i + 1], p);
                acc += pref * (b_lo - b_hi) / (p * (grid.points[i + 1] - grid.points[i])) * db[i];
                b_lo = b_hi;
            }
            next[j] = acc;
        }
    }
}

RfbmSolution solve_impl(const TimeGrid& grid, const ResponseFunction& f,
                        std::vector<double> increments, std::uint64_t seed, double tol,
                        int max_iter, KernelConvention conv, std::uint64_t stream,
                        std::vector<std::vector<double>>* trace) {
    if (!(tol > 0.0)) throw std::invalid_argument("solve_rfbm: tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("solve_rfbm: max_iter must be positive");
    if (increments.size() != grid.n)
        throw std::invalid_argument("solve_rfbm: one increment per panel required");
    RfbmSolution sol;
    sol.grid = grid;
    sol.seed = seed;
    sol.stream = stream;
    sol.convention = conv;
    const std::size_t n = grid.n;
    sol.increments = std::move(increments);

    std::vector<double> prev(n + 1, 0.0), next(n + 1, 0.0);
    for (int it = 1; it <= max_iter; ++it) {
        picard_sweep(grid, f, sol.increments, prev, conv, next);
        double res = 0.0;
        for (std::size_t j = 0; j <= n; ++j) res = std::fmax(res, std::fabs(next[j] - prev[j]));
        sol.residual_history.push_back(res);
        prev.swap(next);
        sol.iterations = it;
        if (trace) trace->push_back(prev);
        if (res < tol) {
            sol.converged = true;
            break;
        }
    }
    sol.path = prev;
    sol.alpha.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) sol.alpha[k] = f(grid.points[k], sol.path[k]);
    return sol;
}

std::vector<double> draw_increments(const TimeGrid& grid, std::uint64_t seed,
                                    std::uint64_t stream) {
    std::vector<double> db(grid.n);
    const double sd = std::sqrt(grid.dt());
    NormalStream rng(seed, stream);
    for (std::size_t i = 0; i < grid.n; ++i) db[i] = sd * rng.normal(i);
    return db;
}

}  // namespace

double path_value_at(const RfbmSolution& sol, double s) {
    const auto& g = sol.grid;
    if (s <= 0.0) return sol.path.front();
    if (s >= g.points.back()) return sol.path.back();
    const double step = g.dt();
    auto i = static_cast<std::size_t>(s / step);
    if (i >= g.n) i = g.n - 1;
    const double w = (s - g.points[i]) / (g.points[i + 1] - g.points[i]);
    return (1.0 - w) * sol.path[i] + w * sol.path[i + 1];
}

RfbmSolution solve_rfbm(const TimeGrid& grid, const ResponseFunction& f, std::uint64_t seed,
                        double tol, int max_iter, KernelConvention conv, std::uint64_t stream) {
    return solve_impl(grid, f, draw_increments(grid, seed, stream), seed, tol, max_iter, conv,
                      stream, nullptr);
}

RfbmSolution solve_rfbm(const TimeGrid& grid, const ResponseFunction& f,
                        std::span<const double> increments, double tol, int max_iter,
                        KernelConvention conv) {
    return solve_impl(grid, f, std::vector<double>(increments.begin(), increments.end()), 0, tol,
                      max_iter, conv, 0, nullptr);
}

PicardTrace solve_rfbm_trace(const TimeGrid& grid, const ResponseFunction& f, std::uint64_t seed,
                             double tol, int max_iter, KernelConvention conv,
                             std::uint64_t stream) {
    PicardTrace tr;
    tr.solution = solve_impl(grid, f, draw_increments(grid, seed, stream), seed, tol, max_iter,
                             conv, stream, &tr.iterates);
    return tr;
}

ContractionCertificate contraction_certificate(const ResponseFunction& f, double horizon,
                                               double c1) {
    if (!(horizon > 0.0 && horizon <= 1.0))
        throw std::invalid_argument("contraction_certificate: horizon must lie in (0, 1]");
    if (!(c1 > 0.0)) throw std::invalid_argument("contraction_certificate: c1 must be positive");
    if (!(f.h_min > 0.0))
        throw std::invalid_argument("contraction_certificate: h_min must be positive");
    ContractionCertificate cert;
    cert.c1 = c1;
    cert.kappa = std::pow(0.5, f.h_min / 2.0);
    if (f.l_h == 0.0) {
        cert.t1 = std::numeric_limits<double>::infinity();
        cert.t0 = horizon;  // state-independent response contracts on any unit horizon
    } else {
        cert.t1 = std::pow(f.h_min / (c1 * f.l_h * f.l_h), 1.0 / f.h_min);
        cert.t0 = std::fmin(horizon, 0.5 * cert.t1);
    }
    return cert;
}

ContractionCertificate contraction_certificate(const ResponseFunction& f, double horizon) {
    const auto grid = TimeGrid::uniform(std::fmin(1.0, f.horizon), 128);
    const auto fit = kernel_lipschitz_check(grid, f, 64, 1234);
    const double c1 = fit.fitted_c_k > 0.0 ? fit.fitted_c_k : 1.0;
    return contraction_certificate(f, horizon, c1);
}

LipschitzReport kernel_lipschitz_check(const TimeGrid& grid, const ResponseFunction& f,
                                       std::size_t n_pairs, std::uint64_t seed) {
    if (n_pairs == 0) throw std::invalid_argument("kernel_lipschitz_check: need n_pairs > 0");
    LipschitzReport rep;
    rep.n_pairs = n_pairs;
    const double t = grid.points.back();
    const double dt = grid.dt();
    NormalStream rng(seed, 0);
    for (std::size_t p = 0; p < n_pairs; ++p) {
        const std::uint64_t k = 8 * static_cast<std::uint64_t>(p);
        // smooth bounded path and a smooth bounded perturbation of it
        const double a1 = 0.2 + 1.3 * rng.uniform(k);
        const double b1 = 0.5 + 2.5 * rng.uniform(k + 1);
        const double c1 = kTwoPi * rng.uniform(k + 2);
        const double a0 = rng.uniform(k + 3) - 0.5;
        const double d = 0.05 + 0.45 * rng.uniform(k + 4);
        const double b2 = 0.5 + 2.5 * rng.uniform(k + 5);
        const double c2 = kTwoPi * rng.uniform(k + 6);
        auto X = [&](double s) { return a0 + a1 * std::sin(b1 * s + c1); };
        auto Y = [&](double s) { return X(s) + d * std::sin(b2 * s + c2); };
        double lhs = 0.0, rhs = 0.0;
        for (std::size_t i = 0; i < grid.n; ++i) {
            const double sm = 0.5 * (grid.points[i] + grid.points[i + 1]);
            const double kx = kernel_tv(t, sm, f(sm, X(sm)));
            const double ky = kernel_tv(t, sm, f(sm, Y(sm)));
            const double dx = X(sm) - Y(sm);
            lhs += (kx - ky) * (kx - ky) * dt;
            rhs += std::pow(t - sm, f.h_min - 1.0) * dx * dx * dt;
        }
        if (rhs > 0.0) rep.max_ratio = std::fmax(rep.max_ratio, lhs / rhs);
    }
    rep.fitted_c_k = f.l_h > 0.0 ? rep.max_ratio / (f.l_h * f.l_h) : 0.0;
    return rep;
}

NormBoundReport solution_norm_bound(const RfbmSolution& sol, const ResponseFunction& f,
                                    std::size_t n_paths, unsigned threads) {
    if (n_paths < 2) throw std::invalid_argument("solution_norm_bound: need at least two paths");
    const std::size_t n = sol.grid.n;
    std::vector<std::vector<double>> sq(n + 1, std::vector<double>(n_paths));
    parallel_for(n_paths, threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
            const auto s = solve_rfbm(sol.grid, f, sol.seed, 1e-9, 64, sol.convention,
                                      sol.stream + 1 + p);
            for (std::size_t k = 0; k <= n; ++k) sq[k][p] = s.path[k] * s.path[k];
        }
    });
    NormBoundReport rep;
    rep.n_paths = n_paths;
    const double T = sol.grid.horizon;
    rep.bound = std::pow(T, 2.0 * f.h_max) + f.h_max / f.h_min;
    std::size_t arg = 0;
    for (std::size_t k = 0; k <= n; ++k) {
        const double m = pairwise_sum(sq[k]) / static_cast<double>(n_paths);
        if (m > rep.sup_second_moment) {
            rep.sup_second_moment = m;
            arg = k;
        }
    }
    rep.se = mc_stats(sq[arg]).se_mean;
    rep.ok = rep.sup_second_moment <= rep.bound + 3.0 * rep.se;
    return rep;
}

ExtremalPair extremal_indices(const RfbmSolution& sol, double t, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("extremal_indices: eps must be positive");
    const double dt = sol.grid.dt();
    const double pad = 1e-12 * std::fmax(1.0, sol.grid.horizon);
    const auto lo = static_cast<std::ptrdiff_t>(std::ceil((t - pad) / dt));
    auto hi = static_cast<std::ptrdiff_t>(std::floor((t + eps + pad) / dt));
    hi = std::min<std::ptrdiff_t>(hi, static_cast<std::ptrdiff_t>(sol.grid.n));
    if (lo < 0 || lo > hi)
        throw std::invalid_argument("extremal_indices: no grid points inside [t, t+eps]");
    ExtremalPair out{sol.alpha[lo], sol.alpha[lo]};
    for (auto k = lo; k <= hi; ++k) {
        out.h_minus = std::fmin(out.h_minus, sol.alpha[k]);
        out.h_plus = std::fmax(out.h_plus, sol.alpha[k]);
    }
    return out;
}

KernelScaling kernel_norm_scaling(const RfbmSolution& sol, const ResponseFunction& f, double t,
                                  double eps) {
    if (!(eps > 0.0 && eps <= 1.0))
        throw std::invalid_argument("kernel_norm_scaling: eps must lie in (0, 1]");
    if (t < 0.0 || t + eps > sol.grid.points.back() + 1e-12)
        throw std::invalid_argument("kernel_norm_scaling: window leaves the solved range");
    constexpr int kPanels = 64;
    const double end = t + eps;
    const double w = eps / kPanels;
    KernelScaling out;
    out.h_minus = 1.0;
    out.h_plus = 0.0;
    std::vector<double> terms(kPanels);
    for (int j = 0; j < kPanels; ++j) {
        const double a = t + j * w;
        const double b = j + 1 == kPanels ? end : t + (j + 1) * w;
        const double sm = 0.5 * (a + b);
        const double hj = f(sm, path_value_at(sol, sm));
        out.h_minus = std::fmin(out.h_minus, hj);
        out.h_plus = std::fmax(out.h_plus, hj);
        // int_a^b 2 hj (end - s)^(2 hj - 1) ds, exactly
        terms[j] = std::pow(end - a, 2.0 * hj) - std::pow(end - b, 2.0 * hj);
    }
    out.norm_sq = pairwise_sum(terms);
    out.lower = f.h_min / f.h_max * std::pow(eps, 2.0 * out.h_plus);
    out.upper = f.h_max / f.h_min * std::pow(eps, 2.0 * out.h_minus);
    return out;
}

CumulativeMemory cumulative_memory(const RfbmSolution& sol, double t) {
    const auto& g = sol.grid;
    if (!(t > 0.0) || t > g.points.back() + 1e-12)
        throw std::invalid_argument("cumulative_memory: t must lie in (0, horizon]");
    const double dt = g.dt();
    double acc = 0.0;
    std::size_t i = 0;
    while (i < g.n && g.points[i + 1] <= t) {
        acc += 0.5 * (sol.alpha[i] + sol.alpha[i + 1]) * (g.points[i + 1] - g.points[i]);
        ++i;
    }
    if (i < g.n && g.points[i] < t) {
        // partial panel: alpha is linear between the nodes
        const double w = (t - g.points[i]) / (g.points[i + 1] - g.points[i]);
        const double a_t = (1.0 - w) * sol.alpha[i] + w * sol.alpha[i + 1];
        acc += 0.5 * (sol.alpha[i] + a_t) * (t - g.points[i]);
    }
    (void)dt;
    return {acc, acc / t};
}

RateCheckReport convergence_rate_check(double h_star, double c, double beta, double s0,
                                       std::span<const double> t_ladder, double h_lo,
                                       double h_hi) {
    if (!(beta > 0.0)) throw std::invalid_argument("convergence_rate_check: beta must be positive");
    if (!(s0 > 0.0)) throw std::invalid_argument("convergence_rate_check: s0 must be positive");
    if (!(h_lo < h_hi))
        throw std::invalid_argument("convergence_rate_check: empty clipping range");
    if (t_ladder.size() < 3)
        throw std::invalid_argument("convergence_rate_check: ladder needs at least three times");
    for (std::size_t i = 0; i < t_ladder.size(); ++i)
        if (!(t_ladder[i] > s0) || (i > 0 && t_ladder[i] <= t_ladder[i - 1]))
            throw std::invalid_argument("convergence_rate_check: ladder must increase beyond s0");

    const double t_max = t_ladder.back();
    auto clamp = [&](double x) { return std::fmin(h_hi, std::fmax(h_lo, x)); };
    const double m0 = clamp(h_star + c * std::pow(s0, -beta));

    // where the unclipped profile leaves [h_lo, h_hi]
    double s_clip = 0.0;
    if (c > 0.0 && h_star < h_hi) s_clip = std::pow(c / (h_hi - h_star), 1.0 / beta);
    if (c < 0.0 && h_star > h_lo) s_clip = std::pow(-c / (h_star - h_lo), 1.0 / beta);
    RateCheckReport rep;
    rep.beta = beta;
    rep.expected_exponent = std::fmin(beta, 1.0);
    rep.t_ladder.assign(t_ladder.begin(), t_ladder.end());
    if (s_clip > s0) {
        rep.clipped_fraction = (std::fmin(s_clip, t_max) - s0) / (t_max - s0);
        if (rep.clipped_fraction > 0.01)
            throw std::invalid_argument("convergence_rate_check: profile clipped on more than 1%");
    }
    const double plateau_end = std::fmax(s0, std::fmin(s_clip, t_max));
    const double plateau_val = c > 0.0 ? h_hi : h_lo;

    auto tail_integral = [&](double from, double to) {
        // int of h_star + c s^-beta over [from, to]
        double val = h_star * (to - from);
        if (beta == 1.0)
            val += c * std::log(to / from);
        else
            val += c * (std::pow(to, 1.0 - beta) - std::pow(from, 1.0 - beta)) / (1.0 - beta);
        return val;
    };
    auto avg = [&](double t) {
        double acc = m0 * s0;
        if (plateau_end > s0) acc += plateau_val * (std::fmin(t, plateau_end) - s0);
        if (t > plateau_end) acc += tail_integral(plateau_end, t);
        return acc / t;
    };

    std::vector<double> lx, ly;
    for (const double t : t_ladder) {
        const double dev = std::fabs(avg(t) - h_star);
        rep.deviation.push_back(dev);
        lx.push_back(std::log(t));
        double y = std::log(dev);
        if (beta == 1.0) y -= std::log(std::log(t));  // strip the logarithmic correction
        ly.push_back(y);
    }
    rep.fitted_exponent = -ls_slope(lx, ly);
    rep.regime = beta < 1.0 ? "t^-beta" : (beta == 1.0 ? "ln(t)/t" : "1/t");
    rep.ok = std::fabs(rep.fitted_exponent - rep.expected_exponent) <= 0.05;
    return rep;
}

}  // namespace rfbmlab
