#include "rfbmlab/numerics.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

namespace rfbmlab {

namespace {

double pairwise_sum_rec(const double* xs, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += xs[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum_rec(xs, half) + pairwise_sum_rec(xs + half, n - half);
}

struct SimpsonState {
    const std::function<double(double)>* f;
    double tol;
    int max_depth;
    double est_error;
};

double simpson_panel(double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_rec(SimpsonState& st, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = (*st.f)(lm);
    const double frm = (*st.f)(rm);
    const double left = simpson_panel(fa, flm, fm, m - a);
    const double right = simpson_panel(fm, frm, fb, b - m);
    const double delta = left + right - whole;
    if (depth >= st.max_depth) {
        if (std::abs(delta) > 15.0 * tol)
            throw std::runtime_error("adaptive_simpson: tolerance not met at max depth");
        st.est_error += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    if (std::abs(delta) <= 15.0 * tol) {
        st.est_error += std::abs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return simpson_rec(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           simpson_rec(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

double pairwise_sum(std::span<const double> xs) {
    return pairwise_sum_rec(xs.data(), xs.size());
}

QuadResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                            double tol, int max_depth) {
    if (!(b > a)) {
        if (b == a) return {0.0, 0.0};
        throw std::invalid_argument("adaptive_simpson: requires a <= b");
    }
    if (!(tol > 0.0)) throw std::invalid_argument("adaptive_simpson: tol must be positive");
    SimpsonState st{&f, tol, max_depth, 0.0};
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = simpson_panel(fa, fm, fb, b - a);
    const double value = simpson_rec(st, a, b, fa, fm, fb, whole, tol, 0);
    return {value, st.est_error};
}

QuadResult integrate_power_endpoint(const std::function<double(double)>& f, double b,
                                    double p, double tol) {
    if (!(p > -1.0)) throw std::invalid_argument("integrate_power_endpoint: p must exceed -1");
    if (!(b > 0.0)) throw std::invalid_argument("integrate_power_endpoint: b must be positive");
    const double r = 2.0 / (1.0 + p);
    auto g = [&](double tau) {
        if (tau <= 0.0) return 0.0;  // transformed integrand vanishes like tau
        const double x = b * std::pow(tau, r);
        return f(x) * b * r * std::pow(tau, r - 1.0);
    };
    return adaptive_simpson(g, 0.0, 1.0, tol);
}

McStats mc_stats(std::span<const double> xs) {
    McStats out;
    out.n = xs.size();
    if (out.n == 0) return out;
    out.mean = pairwise_sum(xs) / static_cast<double>(out.n);
    if (out.n < 2) return out;
    std::vector<double> d2(out.n), d4(out.n);
    for (std::size_t i = 0; i < out.n; ++i) {
        const double d = xs[i] - out.mean;
        d2[i] = d * d;
        d4[i] = d2[i] * d2[i];
    }
    const double nn = static_cast<double>(out.n);
    const double m2 = pairwise_sum(d2) / nn;
    const double m4 = pairwise_sum(d4) / nn;
    out.variance = m2 * nn / (nn - 1.0);
    out.se_mean = std::sqrt(out.variance / nn);
    // asymptotic variance of the sample variance: (m4 - m2^2 (n-3)/(n-1)) / n
    const double v = (m4 - m2 * m2 * (nn - 3.0) / (nn - 1.0)) / nn;
    out.se_variance = v > 0.0 ? std::sqrt(v) : 0.0;
    return out;
}

double ls_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("ls_slope: need matching samples, at least two");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw std::invalid_argument("ls_slope: degenerate abscissae");
    return sxy / sxx;
}

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("RFBM_LAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)>& body) {
    if (n == 0) return;
    const unsigned k = std::min<std::size_t>(resolve_threads(threads), n);
    if (k <= 1) {
        body(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(k);
    const std::size_t chunk = (n + k - 1) / k;
    for (unsigned i = 0; i < k; ++i) {
        const std::size_t lo = static_cast<std::size_t>(i) * chunk;
        if (lo >= n) break;
        const std::size_t hi = std::min(n, lo + chunk);
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace rfbmlab
