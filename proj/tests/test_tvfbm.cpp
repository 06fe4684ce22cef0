#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "rfbmlab/rfbm.hpp"
#include "rfbmlab/rng.hpp"
#include "rfbmlab/specfun.hpp"
#include "rfbmlab/tvfbm.hpp"

using namespace rfbmlab;

namespace {

// quadrature reference for the panel-averaged kernel
double oracle_weight(double t, double lo, double hi, double h) {
    auto k = [&](double x) { return std::sqrt(2.0 * h) * std::pow(x, h - 0.5); };
    const double a = t - hi, b = t - lo;
    double integral;
    if (a <= 0.0)
        integral = oracle::power_integral(k, b, h - 0.5, 1e-13);
    else
        integral = oracle::quad(k, a, b, 1e-13);
    return integral / (hi - lo);
}

}  // namespace

TEST_CASE("kernel and panel weight match the reference integral") {
    CHECK(kernel_tv(1.0, 0.5, 0.7) ==
          doctest::Approx(std::sqrt(1.4) * std::pow(0.5, 0.2)).epsilon(1e-15));
    for (auto [t, lo, hi, h] : {std::array{1.0, 0.25, 0.5, 0.3}, {1.0, 0.75, 1.0, 0.3},
                                {0.7, 0.0, 0.1, 0.85}, {2.0, 1.9, 2.0, 0.55}}) {
        CHECK(panel_weight(t, lo, hi, h) ==
              doctest::Approx(oracle_weight(t, lo, hi, h)).epsilon(1e-10));
    }
}

TEST_CASE("weights reduce to 1 exactly for exponent one half") {
    const auto grid = TimeGrid::uniform(1.0, 512);
    const auto h = constant_hurst(0.5);
    for (std::size_t k : {std::size_t{1}, std::size_t{7}, std::size_t{256}, std::size_t{512}}) {
        const auto w = weights_at(grid, h, k);
        REQUIRE(w.size() == k);
        for (double wi : w) CHECK(wi == 1.0);  // bit-exact on the dyadic grid
    }
}

TEST_CASE("weights agree with per-panel quadrature") {
    const auto grid = TimeGrid::uniform(1.0, 64);
    const auto h = sinusoidal_hurst(0.5, 0.2, 1.0);
    for (std::size_t k : {std::size_t{3}, std::size_t{32}, std::size_t{64}}) {
        const auto w = weights_at(grid, h, k);
        const double tk = grid.points[k];
        const double hk = h(tk);
        for (std::size_t i = 0; i < k; ++i) {
            CHECK(w[i] == doctest::Approx(
                              oracle_weight(tk, grid.points[i], grid.points[i + 1], hk))
                              .epsilon(1e-9));
        }
    }
}

TEST_CASE("simulated path is the weighted sum of its own increments") {
    const auto grid = TimeGrid::uniform(1.0, 128);
    const auto h = sinusoidal_hurst(0.5, 0.2, 1.0);
    const auto path = simulate_tvfbm(grid, h, 2024);
    REQUIRE(path.values.size() == 129);
    REQUIRE(path.increments.size() == 128);
    CHECK(path.values[0] == 0.0);
    CHECK(path.seed == 2024);
    for (std::size_t k : {std::size_t{1}, std::size_t{17}, std::size_t{128}}) {
        const double tk = grid.points[k];
        const double hk = h(tk);
        std::vector<double> terms(k);
        for (std::size_t i = 0; i < k; ++i)
            terms[i] = oracle_weight(tk, grid.points[i], grid.points[i + 1], hk) *
                       path.increments[i];
        CHECK(path.values[k] == doctest::Approx(oracle::ksum(terms)).epsilon(1e-9));
    }
}

TEST_CASE("simulation is seed-deterministic") {
    const auto grid = TimeGrid::uniform(1.0, 64);
    const auto h = sinusoidal_hurst(0.5, 0.2, 1.0);
    const auto a = simulate_tvfbm(grid, h, 5);
    const auto b = simulate_tvfbm(grid, h, 5);
    const auto c = simulate_tvfbm(grid, h, 6);
    CHECK(a.values == b.values);
    CHECK(a.increments == b.increments);
    CHECK(a.values != c.values);
}

TEST_CASE("monte carlo variance tracks t^(2H(t))") {
    const auto grid = TimeGrid::uniform(1.0, 256);
    const auto h = sinusoidal_hurst(0.5, 0.2, 1.0);
    const std::size_t idx[] = {64, 128, 256};
    const auto est = mc_variance(grid, h, idx, 4000, 31337);
    REQUIRE(est.size() == 3);
    for (const auto& e : est) {
        CHECK(e.n_paths == 4000);
        CHECK(e.se > 0.0);
        CHECK(e.target ==
              doctest::Approx(std::pow(e.t, 2.0 * h(e.t))).epsilon(1e-12));
        CHECK(std::fabs(e.estimate - e.target) <= 3.0 * e.se);
    }
}

TEST_CASE("variance estimates do not depend on the thread count") {
    const auto grid = TimeGrid::uniform(1.0, 128);
    const auto h = sinusoidal_hurst(0.5, 0.2, 1.0);
    const std::size_t idx[] = {32, 128};
    const auto one = mc_variance(grid, h, idx, 1500, 7, 1);
    const auto four = mc_variance(grid, h, idx, 1500, 7, 4);
    REQUIRE(one.size() == four.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK(one[i].estimate == four[i].estimate);  // bitwise: fixed-order reduction
        CHECK(one[i].se == four[i].se);
    }
}

TEST_CASE("theoretical variance and local increment variance") {
    const auto h = sinusoidal_hurst(0.5, 0.2, 1.0);
    CHECK(variance_theoretical(0.5, h) ==
          doctest::Approx(0.43776538416561093).epsilon(1e-14));
    const auto liv = local_increment_variance(0.4, 1e-3, h);
    CHECK(liv.exact == doctest::Approx(std::pow(1e-3, 2.0 * h(0.4 + 1e-3))).epsilon(1e-13));
    CHECK(liv.leading == doctest::Approx(std::pow(1e-3, 2.0 * h(0.4))).epsilon(1e-13));
    const double lam = std::fmin(h.gamma - h(0.4), 0.5 * (h.gamma + h(0.4)));
    CHECK(liv.lambda == doctest::Approx(lam).epsilon(1e-13));
    CHECK(liv.exact == doctest::Approx(liv.leading).epsilon(0.05));
}

TEST_CASE("conditional variance stays above half the leading power inside the validity radius") {
    const auto h = sinusoidal_hurst(0.5, 0.2, 1.0);
    const auto probe = lnd_lower_bound(0.4, 1e-3, h);
    CHECK(probe.threshold > 0.0);
    for (int j = 0; j <= 4; ++j) {
        const double eps = probe.threshold * std::pow(10.0, -j);
        const auto lb = lnd_lower_bound(0.4, eps, h);
        CHECK(lb.within_validity);
        CHECK(lb.threshold == doctest::Approx(probe.threshold).epsilon(1e-13));
        CHECK(lb.cond_var == doctest::Approx(std::pow(eps, 2.0 * h(0.4 + eps))).epsilon(1e-12));
        CHECK(lb.bound == doctest::Approx(0.5 * std::pow(eps, 2.0 * h(0.4))).epsilon(1e-12));
        CHECK(lb.cond_var >= lb.bound);
    }
    CHECK_FALSE(lnd_lower_bound(0.4, 2.0 * probe.threshold, h).within_validity);
    // the ratio to the leading power approaches one
    const double eps = probe.threshold * 1e-4;
    const auto lb = lnd_lower_bound(0.4, eps, h);
    CHECK(lb.cond_var / std::pow(eps, 2.0 * h(0.4)) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("small deviation ratio: reference values and the limit") {
    const auto h = sinusoidal_hurst(0.5, 0.2, 1.0);
    const double t0 = 0.5, x = 1.0;
    // direct recomputation at a moderate eps
    for (double eps : {1e-2, 1e-3}) {
        const double sigma = std::pow(eps, h(t0 + eps));
        const double ref = std::pow(eps, 2.0 * h(t0)) * log_normal_tail(x / sigma);
        CHECK(ldp_ratio(t0, x, eps, h) == doctest::Approx(ref).epsilon(1e-12));
    }
    CHECK(ldp_ratio(t0, x, 1e-5, h) == doctest::Approx(-0.5 * x * x).epsilon(0.15));
    // the gap to the limit shrinks along a decade ladder (the ratio itself
    // overshoots and then climbs back, so its sign of change is not fixed)
    double prev = std::fabs(ldp_ratio(t0, x, 1e-1, h) + 0.5 * x * x);
    for (int k = 2; k <= 5; ++k) {
        const double cur = std::fabs(ldp_ratio(t0, x, std::pow(10.0, -k), h) + 0.5 * x * x);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("almost sure envelope report") {
    const auto h = sinusoidal_hurst(0.5, 0.2, 1.0);
    const auto rep = as_bound_check(0.4, h, 2.0, 64, 99);
    CHECK(rep.t0 == 0.4);
    CHECK(rep.kappa == 2.0);
    CHECK(rep.varsigma == doctest::Approx(1.0));
    CHECK(rep.n_max == 64);
    REQUIRE(!rep.violating_n.empty());
    CHECK(rep.violating_n.front() == 1);  // the envelope vanishes at n = 1
    CHECK(rep.largest_violating_n <= 4);
    CHECK(rep.limsup_bound ==
          doctest::Approx(std::exp(h(0.4)) * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(rep.ratio_at_n_max > 0.0);
    CHECK(rep.ratio_at_n_max < rep.limsup_bound);
}

TEST_CASE("covariance quadrature: classical limits and a frozen value") {
    const auto bm = constant_hurst(0.5);
    for (auto [u, v] : {std::pair{0.3, 0.8}, {0.6, 0.6}, {0.05, 1.0}}) {
        const auto r = covariance_quadrature(u, v, bm, 1e-11);
        CHECK(r.value == doctest::Approx(std::fmin(u, v)).epsilon(1e-10));
        CHECK(r.est_error <= 1e-10);
    }
    const auto h7 = constant_hurst(0.7);
    CHECK(covariance_quadrature(0.3, 0.9, h7, 1e-11).value ==
          doctest::Approx(0.26040277042597813).epsilon(1e-10));
    // symmetry and the diagonal
    const auto hs = sinusoidal_hurst(0.5, 0.2, 1.0);
    const auto a = covariance_quadrature(0.25, 0.85, hs, 1e-10);
    const auto b = covariance_quadrature(0.85, 0.25, hs, 1e-10);
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-9));
    CHECK(covariance_quadrature(0.6, 0.6, hs, 1e-11).value ==
          doctest::Approx(std::pow(0.6, 2.0 * hs(0.6))).epsilon(1e-9));
}

TEST_CASE("covariance quadrature against an independent integral") {
    const auto h = sinusoidal_hurst(0.5, 0.2, 1.0);
    for (auto [u, v] : {std::pair{0.2, 0.9}, {0.5, 0.55}, {0.45, 1.0}}) {
        const double hu = h(u), hv = h(v);
        auto integrand = [&](double x) {  // x = u - s
            return 2.0 * std::sqrt(hu * hv) * std::pow(x, hu - 0.5) *
                   std::pow(v - u + x, hv - 0.5);
        };
        const double ref = oracle::power_integral(integrand, u, hu - 0.5, 1e-12);
        CHECK(covariance_quadrature(u, v, h, 1e-11).value ==
              doctest::Approx(ref).epsilon(1e-9));
    }
}

TEST_CASE("near-diagonal bracket contains the covariance") {
    const auto h = linear_hurst(0.55, 0.2, 2.0);
    for (double eps : {1e-3, 1e-2}) {
        const auto cb = covariance_bounds(0.5, eps, h);
        CHECK(cb.lower > 0.0);
        CHECK(cb.lower <= cb.upper);
        const double r = covariance_quadrature(0.5, 0.5 + eps, h, 1e-12).value;
        CHECK(r >= cb.lower * (1.0 - 1e-9));
        CHECK(r <= cb.upper * (1.0 + 1e-9));
    }
}

TEST_CASE("closed-form J: special cases, a frozen value, random tuples") {
    CHECK(eval_J(0.0, 0.0, 0.4, 1.1) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(eval_J(0.7, 0.0, 0.3, 0.9) ==
          doctest::Approx(std::pow(0.3, 1.7) / 1.7).epsilon(1e-12));
    CHECK(eval_J(0.2, -0.3, 0.4, 1.5) ==
          doctest::Approx(0.25580752247049118).epsilon(1e-10));
    NormalStream rng(31415, 0);
    for (int i = 0; i < 60; ++i) {
        const double a = -0.9 + 2.0 * rng.uniform(4 * i);
        const double b = -0.9 + 2.0 * rng.uniform(4 * i + 1);
        const double u = 0.05 + 0.95 * rng.uniform(4 * i + 2);
        const double v = 2.0 * u + 0.2 + 1.5 * rng.uniform(4 * i + 3);
        auto integrand = [&](double x) { return std::pow(x, a) * std::pow(v - u + x, b); };
        const double ref = oracle::power_integral(integrand, u, a, 1e-12);
        CHECK(eval_J(a, b, u, v) == doctest::Approx(ref).epsilon(1e-8));
    }
}

TEST_CASE("hypergeometric I integral for smooth exponents above one half") {
    const auto h = constant_hurst(0.8, 3.0);
    for (auto [u, v] : {std::pair{0.3, 0.9}, {0.5, 1.4}, {0.2, 2.0}}) {
        auto integrand = [&, u = u, v = v](double x) {
            return std::pow(x, h(u) - 1.5) * std::pow(v - u + x, h(v) - 0.5);
        };
        const double ref = oracle::power_integral(integrand, u, h(u) - 1.5, 1e-12);
        CHECK(cov_hyper_I(u, v, h) == doctest::Approx(ref).epsilon(1e-8));
    }
}

TEST_CASE("mixed derivative terms sit below their majorants") {
    const auto h = linear_hurst(0.55, 0.15, 2.0);
    for (auto [u, v] : {std::pair{0.3, 0.8}, {0.4, 1.6}, {0.7, 1.5}}) {
        const auto mt = mixed_derivative_terms(u, v, h, h.deriv);
        CHECK(std::fabs(mt.i2) <= mt.bound2 * (1.0 + 1e-9));
        CHECK(std::fabs(mt.i3) <= mt.bound3 * (1.0 + 1e-9));
        CHECK(std::fabs(mt.i4) <= mt.bound4 * (1.0 + 1e-9));
        CHECK(mt.bound ==
              doctest::Approx(std::fmax(mt.bound2, std::fmax(mt.bound3, mt.bound4))));
    }
    // a flat exponent kills the derivative couplings
    const auto flat = constant_hurst(0.7, 2.0);
    const auto mt = mixed_derivative_terms(0.4, 1.1, flat, flat.deriv);
    CHECK(mt.i3 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(mt.i4 == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("time change: exponential flow for a flat exponent") {
    const auto h = constant_hurst(0.7, 100.0);
    const auto traj = lamperti_solve(h, 1.0, 2.0, 1.0 / 512.0);
    REQUIRE(traj.size() == 1025);
    for (std::size_t i = 0; i < traj.size(); i += 128) {
        const auto& pt = traj[i];
        CHECK(pt.phi == doctest::Approx(std::exp(pt.t / 0.7)).epsilon(1e-8));
        CHECK(pt.alpha == doctest::Approx(std::pow(pt.phi, -0.7)).epsilon(1e-13));
        CHECK(pt.alpha * std::pow(pt.phi, h(pt.phi)) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("time change: alpha solves its decay equation to second order") {
    // stay inside the window where phi ln(phi) H'(phi) cannot cancel H
    const auto h = sinusoidal_hurst(0.6, 0.05, 8.0);
    const double step = 1.0 / 256.0;
    const auto traj = lamperti_solve(h, 1.0, 1.0, step);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
        const double da = (traj[i + 1].alpha - traj[i - 1].alpha) / (2.0 * step);
        worst = std::fmax(worst, std::fabs(da + traj[i].alpha));
    }
    CHECK(worst <= 10.0 * step * step);
    // halving the step cuts the residual by about four
    const auto fine = lamperti_solve(h, 1.0, 1.0, 0.5 * step);
    double worst_fine = 0.0;
    for (std::size_t i = 1; i + 1 < fine.size(); ++i) {
        const double da = (fine[i + 1].alpha - fine[i - 1].alpha) / step;
        worst_fine = std::fmax(worst_fine, std::fabs(da + fine[i].alpha));
    }
    CHECK(worst_fine <= 0.35 * worst);
}

TEST_CASE("relaxation profile rate fits") {
    const std::vector<double> ladder = {1e2, 1e3, 1e4, 1e5, 1e6};
    for (double beta : {0.5, 1.0, 2.0}) {
        const auto rep = convergence_rate_check(0.5, 0.2, beta, 1.0, ladder);
        CHECK(rep.beta == beta);
        CHECK(rep.expected_exponent == doctest::Approx(std::fmin(beta, 1.0)));
        CHECK(std::fabs(rep.fitted_exponent - rep.expected_exponent) <= 0.05);
        CHECK(rep.ok);
        if (beta < 1.0) CHECK(rep.regime == "t^-beta");
        if (beta == 1.0) CHECK(rep.regime == "ln(t)/t");
        if (beta > 1.0) CHECK(rep.regime == "1/t");
        REQUIRE(rep.deviation.size() == ladder.size());
        for (std::size_t i = 1; i < rep.deviation.size(); ++i)
            CHECK(rep.deviation[i] < rep.deviation[i - 1]);
    }
}
