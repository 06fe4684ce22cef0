#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rfbmlab/rfbm.hpp"
#include "rfbmlab/tvfbm.hpp"

using namespace rfbmlab;

TEST_CASE("a state-independent response converges in exactly two sweeps") {
    const auto grid = TimeGrid::uniform(1.0, 256);
    const auto f = constant_response(0.7);
    const auto sol = solve_rfbm(grid, f, 11);
    CHECK(sol.converged);
    CHECK(sol.iterations == 2);
    CHECK(sol.residual_history.size() == 2);
    CHECK(sol.residual_history[1] == 0.0);
    CHECK(sol.path[0] == 0.0);
    for (double a : sol.alpha) CHECK(a == 0.7);
    // same increments, same weights: the path is the frozen-exponent simulation
    const auto tv = simulate_tvfbm(grid, constant_hurst(0.7), 11);
    REQUIRE(tv.values.size() == sol.path.size());
    CHECK(sol.increments == tv.increments);
    for (std::size_t i = 0; i < sol.path.size(); ++i)
        CHECK(sol.path[i] == doctest::Approx(tv.values[i]).epsilon(1e-12));
}

TEST_CASE("picard iteration converges across seeds and contracts") {
    const auto grid = TimeGrid::uniform(1.0, 256);
    const auto f = example_response(0.45, 0.55, 0.5, 1.0, 1.0);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto sol = solve_rfbm(grid, f, seed);
        CHECK(sol.converged);
        CHECK(sol.iterations <= 30);
        CHECK(sol.residual_history.back() <= 1e-9);
    }
    const auto trace = solve_rfbm_trace(grid, f, 3);
    REQUIRE(trace.iterates.size() >= 3);
    CHECK(trace.iterates.size() == static_cast<std::size_t>(trace.solution.iterations));
    // residual history is the sup distance between consecutive iterates
    for (std::size_t k = 1; k < trace.iterates.size(); ++k) {
        double sup = 0.0;
        for (std::size_t i = 0; i < trace.iterates[k].size(); ++i)
            sup = std::fmax(sup,
                            std::fabs(trace.iterates[k][i] - trace.iterates[k - 1][i]));
        CHECK(trace.solution.residual_history[k] == doctest::Approx(sup).epsilon(1e-12));
    }
    CHECK(trace.solution.residual_history.back() <
          trace.solution.residual_history.front());
}

TEST_CASE("caller-supplied increments reproduce the seeded solve") {
    const auto grid = TimeGrid::uniform(1.0, 128);
    const auto f = example_response(0.45, 0.55, 0.5, 1.0, 1.0);
    const auto seeded = solve_rfbm(grid, f, 77);
    const auto driven = solve_rfbm(grid, f, seeded.increments);
    CHECK(driven.path == seeded.path);  // identical arithmetic
    CHECK(driven.alpha == seeded.alpha);
    CHECK(driven.seed == 0);
    std::vector<double> wrong(64, 0.0);
    CHECK_THROWS_AS(solve_rfbm(grid, f, wrong), std::invalid_argument);
}

TEST_CASE("solutions on a refined grid approach the coarse one") {
    const std::size_t n0 = 64;
    const auto f = example_response(0.45, 0.55, 0.5, 1.0, 1.0);
    const auto fine_grid = TimeGrid::uniform(1.0, 4 * n0);
    const auto fine = solve_rfbm(fine_grid, f, 42);
    auto halve = [](const std::vector<double>& inc) {
        std::vector<double> out(inc.size() / 2);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = inc[2 * i] + inc[2 * i + 1];
        return out;
    };
    const auto mid_inc = halve(fine.increments);
    const auto coarse_inc = halve(mid_inc);
    const auto mid = solve_rfbm(TimeGrid::uniform(1.0, 2 * n0), f, mid_inc);
    const auto coarse = solve_rfbm(TimeGrid::uniform(1.0, n0), f, coarse_inc);
    double d1 = 0.0, d2 = 0.0;
    for (std::size_t i = 0; i <= n0; ++i)
        d1 = std::fmax(d1, std::fabs(mid.path[2 * i] - coarse.path[i]));
    for (std::size_t i = 0; i <= 2 * n0; ++i)
        d2 = std::fmax(d2, std::fabs(fine.path[2 * i] - mid.path[i]));
    CHECK(d1 < 0.5);
    CHECK(d2 <= d1);
}

TEST_CASE("kernel conventions agree only for flat exponents") {
    const auto grid = TimeGrid::uniform(1.0, 128);
    const auto flat = constant_response(0.6);
    const auto s_anchor = solve_rfbm(grid, flat, 9, 1e-9, 64, KernelConvention::hurst_at_s);
    const auto t_anchor = solve_rfbm(grid, flat, 9, 1e-9, 64, KernelConvention::hurst_at_t);
    for (std::size_t i = 0; i < s_anchor.path.size(); ++i)
        CHECK(s_anchor.path[i] == doctest::Approx(t_anchor.path[i]).epsilon(1e-12));
    const auto f = example_response(0.45, 0.55, 0.5, 1.0, 1.0);
    const auto a = solve_rfbm(grid, f, 9, 1e-9, 64, KernelConvention::hurst_at_s);
    const auto b = solve_rfbm(grid, f, 9, 1e-9, 64, KernelConvention::hurst_at_t);
    CHECK(a.path != b.path);
    CHECK(a.convention == KernelConvention::hurst_at_s);
    CHECK(b.convention == KernelConvention::hurst_at_t);
}

TEST_CASE("distinct streams decorrelate, equal streams repeat") {
    const auto grid = TimeGrid::uniform(1.0, 64);
    const auto f = example_response(0.45, 0.55, 0.5, 1.0, 1.0);
    const auto a = solve_rfbm(grid, f, 5, 1e-9, 64, KernelConvention::hurst_at_s, 0);
    const auto b = solve_rfbm(grid, f, 5, 1e-9, 64, KernelConvention::hurst_at_s, 0);
    const auto c = solve_rfbm(grid, f, 5, 1e-9, 64, KernelConvention::hurst_at_s, 1);
    CHECK(a.path == b.path);
    CHECK(a.path != c.path);
}

TEST_CASE("linear interpolation of the solved path") {
    const auto grid = TimeGrid::uniform(1.0, 64);
    const auto f = example_response(0.45, 0.55, 0.5, 1.0, 1.0);
    const auto sol = solve_rfbm(grid, f, 21);
    for (std::size_t k : {std::size_t{0}, std::size_t{13}, std::size_t{64}})
        CHECK(path_value_at(sol, grid.points[k]) == sol.path[k]);
    const double mid = 0.5 * (grid.points[10] + grid.points[11]);
    CHECK(path_value_at(sol, mid) ==
          doctest::Approx(0.5 * (sol.path[10] + sol.path[11])).epsilon(1e-14));
}

TEST_CASE("contraction certificate: frozen factor and monotone horizon") {
    const auto f = example_response(0.45, 0.55, 0.5, 1.0, 1.0);
    const auto cert = contraction_certificate(f, 1.0);
    CHECK(cert.t0 == doctest::Approx(1.0));
    CHECK(cert.kappa == doctest::Approx(0.8555950256826022).epsilon(1e-12));
    CHECK(cert.t1 >= 2.0 * cert.t0 - 1e-12);
    CHECK(cert.c1 > 0.0);
    const auto tight = contraction_certificate(f, 1.0, 10.0);
    const auto tighter = contraction_certificate(f, 1.0, 100.0);
    CHECK(tighter.t1 <= tight.t1);
}

TEST_CASE("kernel lipschitz sampling produces a finite stability constant") {
    const auto grid = TimeGrid::uniform(1.0, 128);
    const auto f = example_response(0.45, 0.55, 0.5, 1.0, 1.0);
    const auto rep = kernel_lipschitz_check(grid, f, 64, 1234);
    CHECK(rep.n_pairs == 64);
    CHECK(rep.max_ratio > 0.0);
    CHECK(std::isfinite(rep.max_ratio));
    CHECK(rep.fitted_c_k ==
          doctest::Approx(rep.max_ratio / (f.l_h * f.l_h)).epsilon(1e-12));
}

TEST_CASE("second moment of the solution respects the a priori bound") {
    const auto grid = TimeGrid::uniform(1.0, 128);
    const auto f = example_response(0.45, 0.55, 0.5, 1.0, 1.0);
    const auto sol = solve_rfbm(grid, f, 1);
    const auto rep = solution_norm_bound(sol, f, 400);
    CHECK(rep.n_paths == 400);
    CHECK(rep.se > 0.0);
    CHECK(rep.bound ==
          doctest::Approx(std::pow(1.0, 2.0 * f.h_max) + f.h_max / f.h_min).epsilon(1e-12));
    CHECK(rep.sup_second_moment < rep.bound);
    CHECK(rep.ok);
}

TEST_CASE("window extremes of the realised exponent") {
    const auto grid = TimeGrid::uniform(1.0, 256);
    const auto f = example_response(0.45, 0.55, 0.5, 1.0, 1.0);
    const auto sol = solve_rfbm(grid, f, 17);
    const double t = 0.5, eps = 0.125;
    const auto ex = extremal_indices(sol, t, eps);
    double lo = 1.0, hi = 0.0;
    for (std::size_t i = 0; i <= 256; ++i) {
        if (grid.points[i] >= t - 1e-12 && grid.points[i] <= t + eps + 1e-12) {
            lo = std::fmin(lo, sol.alpha[i]);
            hi = std::fmax(hi, sol.alpha[i]);
        }
    }
    CHECK(ex.h_minus == doctest::Approx(lo).epsilon(1e-14));
    CHECK(ex.h_plus == doctest::Approx(hi).epsilon(1e-14));
    CHECK(ex.h_minus <= ex.h_plus);
    CHECK(ex.h_minus >= f.h_min - 1e-12);
    CHECK(ex.h_plus <= f.h_max + 1e-12);
}

TEST_CASE("local kernel norm sits inside its scaling sandwich") {
    const auto grid = TimeGrid::uniform(1.0, 256);
    const auto f = example_response(0.45, 0.55, 0.5, 1.0, 1.0);
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const auto sol = solve_rfbm(grid, f, seed);
        for (double t : {0.25, 0.6}) {
            for (double eps : {1e-4, 1e-2}) {
                const auto ks = kernel_norm_scaling(sol, f, t, eps);
                CHECK(ks.norm_sq >= ks.lower * (1.0 - 1e-9));
                CHECK(ks.norm_sq <= ks.upper * (1.0 + 1e-9));
                CHECK(ks.h_minus <= ks.h_plus);
            }
        }
    }
}

TEST_CASE("cumulative memory: flat case exact, responsive case bracketed") {
    const auto grid = TimeGrid::uniform(1.0, 256);
    const auto flat = solve_rfbm(grid, constant_response(0.7), 4);
    for (double t : {0.25, 0.5, 1.0}) {
        const auto cm = cumulative_memory(flat, t);
        CHECK(cm.c_t == doctest::Approx(0.7 * t).epsilon(1e-12));
        CHECK(cm.avg == doctest::Approx(0.7).epsilon(1e-12));
    }
    const auto f = example_response(0.45, 0.55, 0.5, 1.0, 1.0);
    const auto sol = solve_rfbm(grid, f, 4);
    double prev = 0.0;
    for (double t : {0.25, 0.5, 0.75, 1.0}) {
        const auto cm = cumulative_memory(sol, t);
        CHECK(cm.c_t >= f.h_min * t - 1e-12);
        CHECK(cm.c_t <= f.h_max * t + 1e-12);
        CHECK(cm.c_t > prev);
        prev = cm.c_t;
        CHECK(cm.avg == doctest::Approx(cm.c_t / t).epsilon(1e-13));
    }
}
