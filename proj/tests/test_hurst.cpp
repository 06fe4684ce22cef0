#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "rfbmlab/hurst.hpp"
#include "rfbmlab/rng.hpp"

using namespace rfbmlab;

TEST_CASE("constant exponent metadata") {
    const auto h = constant_hurst(0.62, 2.0);
    CHECK(h(0.0) == 0.62);
    CHECK(h(1.7) == 0.62);
    CHECK(h.deriv(0.5) == 0.0);
    CHECK(h.h_min == 0.62);
    CHECK(h.h_max == 0.62);
    CHECK(h.c_h == 0.0);
    CHECK_THROWS_AS(constant_hurst(0.0), std::invalid_argument);
    CHECK_THROWS_AS(constant_hurst(1.0), std::invalid_argument);
}

TEST_CASE("sinusoidal exponent: values, derivative, attained range") {
    const auto h = sinusoidal_hurst(0.5, 0.2, 1.0);
    CHECK(h(0.3) == doctest::Approx(0.5 + 0.2 * std::sin(0.3)).epsilon(1e-15));
    for (double t : {0.1, 0.45, 0.9})
        CHECK(h.deriv(t) ==
              doctest::Approx(oracle::deriv([&](double s) { return h(s); }, t)).epsilon(1e-8));
    // range over [0, 1]: sin covers [0, sin 1]
    CHECK(h.h_min == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(h.h_max == doctest::Approx(0.6682941969615793).epsilon(1e-12));
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i <= 4000; ++i) {
        const double v = h(i / 4000.0);
        lo = std::fmin(lo, v);
        hi = std::fmax(hi, v);
    }
    CHECK(lo >= h.h_min - 1e-12);
    CHECK(hi <= h.h_max + 1e-12);
    CHECK(h.c_h == doctest::Approx(0.2));
    // a horizon past the first peak pins the sup at base + amp
    const auto wide = sinusoidal_hurst(0.5, 0.2, 8.0);
    CHECK(wide.h_max == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(wide.h_min == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("linear exponent validates its range on the horizon") {
    const auto h = linear_hurst(0.4, 0.2, 1.0);
    CHECK(h(0.5) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(h.h_min == doctest::Approx(0.4));
    CHECK(h.h_max == doctest::Approx(0.6));
    CHECK(h.deriv(0.3) == doctest::Approx(0.2));
    CHECK_THROWS_AS(linear_hurst(0.55, 0.4, 2.0), std::invalid_argument);  // exits (0,1)
    CHECK_THROWS_AS(linear_hurst(0.2, -0.3, 1.0), std::invalid_argument);
}

TEST_CASE("example response: frozen values and closed-form x-derivative") {
    const auto f = example_response(0.45, 0.55, 0.5, 1.0, 3.0);
    CHECK(f(0.3, 0.7) == doctest::Approx(0.49821012285978343).epsilon(1e-14));
    CHECK(f(1.2, -0.4) == doctest::Approx(0.4903477254274275).epsilon(1e-14));
    NormalStream rng(99, 0);
    for (int i = 0; i < 50; ++i) {
        const double t = 3.0 * rng.uniform(2 * i);
        const double x = -2.0 + 4.0 * rng.uniform(2 * i + 1);
        const double fd = oracle::deriv([&](double y) { return f(t, y); }, x);
        CHECK(f.dx(t, x) == doctest::Approx(fd).epsilon(1e-7));
        CHECK(f.dx_or_fd(t, x) == f.dx(t, x));  // closed form wins when present
        CHECK(f(t, x) >= f.h_min - 1e-12);
        CHECK(f(t, x) <= f.h_max + 1e-12);
    }
    CHECK(f.gamma == 1.0);
    CHECK(f.l_h == doctest::Approx(0.5 * (0.55 - 0.45) / 2.0).epsilon(1e-12));
}

TEST_CASE("dx_or_fd falls back to Richardson differences") {
    auto f = example_response(0.45, 0.55, 0.5, 1.0, 3.0);
    const auto closed = f.dx;
    f.dx = nullptr;
    for (auto [t, x] : {std::pair{0.2, 0.4}, {1.5, -1.1}, {2.8, 0.0}})
        CHECK(f.dx_or_fd(t, x) == doctest::Approx(closed(t, x)).epsilon(1e-8));
}

TEST_CASE("declared Lipschitz and Holder constants dominate sampled quotients") {
    for (const auto& f :
         {example_response(0.45, 0.55, 0.5, 1.0, 3.0), tanh_spatial_response(0.5, 0.2, 1.5),
          constant_response(0.7), response_from_hurst(sinusoidal_hurst(0.5, 0.2, 1.0))}) {
        const auto rep = validate_response(f, 20000);
        CHECK(rep.ok());
        CHECK(rep.n_samples == 20000);
        CHECK(rep.min_value >= f.h_min - 1e-12);
        CHECK(rep.max_value <= f.h_max + 1e-12);
    }
}

TEST_CASE("validation flags an understated spatial constant") {
    auto f = example_response(0.45, 0.55, 0.5, 1.0, 3.0);
    f.l_h *= 0.2;  // claim far less spatial variation than the function has
    const auto rep = validate_response(f, 20000);
    CHECK(rep.spatial_violation);
    CHECK_FALSE(rep.ok());
}

TEST_CASE("response_from_hurst is state-independent and copies metadata") {
    const auto h = sinusoidal_hurst(0.5, 0.2, 1.0);
    const auto f = response_from_hurst(h);
    for (double t : {0.0, 0.4, 0.95}) {
        CHECK(f(t, -3.0) == h(t));
        CHECK(f(t, 2.5) == h(t));
        CHECK(f.dx_or_fd(t, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
    }
    CHECK(f.l_h == 0.0);
    CHECK(f.h_min == h.h_min);
    CHECK(f.h_max == h.h_max);
    CHECK(f.c_h == h.c_h);
}

TEST_CASE("sqrt control constant bounds the Holder quotient of sqrt(2H)") {
    const auto h = sinusoidal_hurst(0.5, 0.2, 1.0);
    const double d = sqrt_control_constant(h);
    CHECK(d == doctest::Approx(0.2 / std::sqrt(2.0 * 0.5)).epsilon(1e-12));
    NormalStream rng(5150, 0);
    double worst = 0.0;
    for (int i = 0; i < 20000; ++i) {
        const double s = rng.uniform(2 * i);
        const double t = rng.uniform(2 * i + 1);
        if (s == t) continue;
        const double q = std::fabs(std::sqrt(2.0 * h(t)) - std::sqrt(2.0 * h(s))) /
                         std::pow(std::fabs(t - s), h.gamma);
        worst = std::fmax(worst, q);
    }
    CHECK(worst <= d * (1.0 + 1e-9));
}
