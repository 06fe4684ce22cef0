#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rfbmlab/attention.hpp"
#include "rfbmlab/hurst.hpp"
#include "rfbmlab/numerics.hpp"
#include "rfbmlab/rfbm.hpp"
#include "rfbmlab/specfun.hpp"
#include "rfbmlab/tvfbm.hpp"
#include "rfbmlab/verify.hpp"

using nlohmann::ordered_json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct RunConfig {
    std::string command;
    std::string kind;  // function kind; empty = per-command default
    std::vector<double> fn_params;
    std::size_t grid_n = 512;
    double horizon = 1.0;
    std::size_t n_paths = 1000;
    std::uint64_t seed = 12345;
    double t = 0.8;
    double u = 0.3;
    double v = 0.7;
    double eps = 1e-3;
    double x = 1.0;
    double t0 = 0.5;
    double phi0 = 1.0;
    double step = 0.001953125;
    int eps_ladder = 5;
    double lo = 0.0;
    double hi = kInf;
    std::string suite = "all";
    std::string bounds_kind = "tails";
    std::string method = "quadrature";
    std::string convention = "s";
    double tol = 1e-9;
    int max_iter = 64;
    std::string out_path;
    std::string format = "csv";
    unsigned threads = 0;

    bool operator==(const RunConfig&) const = default;
};

ordered_json num_out(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

double num_in(const nlohmann::json& j, double fallback) {
    if (j.is_null()) return fallback;
    if (j.is_string()) return std::stod(j.get<std::string>());
    return j.get<double>();
}

ordered_json config_to_json(const RunConfig& c) {
    ordered_json j;
    j["command"] = c.command;
    j["function"] = {{"kind", c.kind}, {"params", c.fn_params}};
    j["grid"] = {{"n", c.grid_n}, {"horizon", c.horizon}};
    j["mc"] = {{"n_paths", c.n_paths}, {"seed", c.seed}};
    ordered_json p;
    p["t"] = c.t;
    p["u"] = c.u;
    p["v"] = c.v;
    p["eps"] = c.eps;
    p["x"] = c.x;
    p["t0"] = c.t0;
    p["phi0"] = c.phi0;
    p["step"] = c.step;
    p["eps_ladder"] = c.eps_ladder;
    p["interval"] = ordered_json::array({num_out(c.lo), num_out(c.hi)});
    p["suite"] = c.suite;
    p["bounds_kind"] = c.bounds_kind;
    p["method"] = c.method;
    p["convention"] = c.convention;
    p["tol"] = c.tol;
    p["max_iter"] = c.max_iter;
    j["params"] = p;
    j["output"] = {{"path", c.out_path}, {"format", c.format}};
    j["threads"] = c.threads;
    return j;
}

RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig c;
    c.command = j.value("command", c.command);
    if (j.contains("function")) {
        const auto& f = j.at("function");
        c.kind = f.value("kind", c.kind);
        c.fn_params = f.value("params", c.fn_params);
    }
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        c.grid_n = g.value("n", c.grid_n);
        c.horizon = g.value("horizon", c.horizon);
    }
    if (j.contains("mc")) {
        const auto& m = j.at("mc");
        c.n_paths = m.value("n_paths", c.n_paths);
        c.seed = m.value("seed", c.seed);
    }
    if (j.contains("params")) {
        const auto& p = j.at("params");
        c.t = p.value("t", c.t);
        c.u = p.value("u", c.u);
        c.v = p.value("v", c.v);
        c.eps = p.value("eps", c.eps);
        c.x = p.value("x", c.x);
        c.t0 = p.value("t0", c.t0);
        c.phi0 = p.value("phi0", c.phi0);
        c.step = p.value("step", c.step);
        c.eps_ladder = p.value("eps_ladder", c.eps_ladder);
        if (p.contains("interval")) {
            c.lo = num_in(p.at("interval").at(0), c.lo);
            c.hi = num_in(p.at("interval").at(1), c.hi);
        }
        c.suite = p.value("suite", c.suite);
        c.bounds_kind = p.value("bounds_kind", c.bounds_kind);
        c.method = p.value("method", c.method);
        c.convention = p.value("convention", c.convention);
        c.tol = p.value("tol", c.tol);
        c.max_iter = p.value("max_iter", c.max_iter);
    }
    if (j.contains("output")) {
        const auto& o = j.at("output");
        c.out_path = o.value("path", c.out_path);
        c.format = o.value("format", c.format);
    }
    c.threads = j.value("threads", c.threads);
    return c;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
}

std::vector<double> params_or(const RunConfig& c, std::initializer_list<double> defaults) {
    return c.fn_params.empty() ? std::vector<double>(defaults) : c.fn_params;
}

rfbmlab::HurstFunction build_hurst(const RunConfig& c) {
    const std::string kind = c.kind.empty() ? "sin" : c.kind;
    if (kind == "constant") {
        const auto p = params_or(c, {0.7});
        return rfbmlab::constant_hurst(p.at(0), c.horizon);
    }
    if (kind == "sin" || kind == "sinusoidal") {
        const auto p = params_or(c, {0.5, 0.2});
        return rfbmlab::sinusoidal_hurst(p.at(0), p.at(1), c.horizon);
    }
    if (kind == "linear") {
        const auto p = params_or(c, {0.4, 0.2});
        return rfbmlab::linear_hurst(p.at(0), p.at(1), c.horizon);
    }
    throw std::runtime_error("hurst kind must be constant, sin, or linear (got '" + kind + "')");
}

rfbmlab::ResponseFunction build_response(const RunConfig& c) {
    const std::string kind = c.kind.empty() ? "example61" : c.kind;
    if (kind == "example61") {
        const auto p = params_or(c, {0.45, 0.55, 0.5, 1.0});
        return rfbmlab::example_response(p.at(0), p.at(1), p.at(2), p.at(3), c.horizon);
    }
    if (kind == "constant") {
        const auto p = params_or(c, {0.7});
        return rfbmlab::constant_response(p.at(0), c.horizon);
    }
    if (kind == "tanh-spatial") {
        const auto p = params_or(c, {0.5, 0.2, 1.0});
        return rfbmlab::tanh_spatial_response(p.at(0), p.at(1), p.at(2), c.horizon);
    }
    if (kind == "sin" || kind == "sinusoidal" || kind == "linear")
        return rfbmlab::response_from_hurst(build_hurst(c));
    throw std::runtime_error("response kind must be example61, constant, tanh-spatial, sin, or linear (got '" +
                             kind + "')");
}

// CLI t values snap to the nearest grid point
std::size_t snap_index(const rfbmlab::TimeGrid& grid, double t) {
    auto idx = static_cast<long>(std::lround(t / grid.dt()));
    if (idx < 1) idx = 1;
    if (idx > static_cast<long>(grid.n)) idx = static_cast<long>(grid.n);
    return static_cast<std::size_t>(idx);
}

int run_simulate(const RunConfig& c) {
    const auto h = build_hurst(c);
    const auto grid = rfbmlab::TimeGrid::uniform(c.horizon, c.grid_n);
    const auto path = rfbmlab::simulate_tvfbm(grid, h, c.seed);
    if (c.format == "json") {
        ordered_json j;
        j["config"] = config_to_json(c);
        j["t"] = grid.points;
        j["x"] = path.values;
        emit(j.dump(2) + "\n", c.out_path);
    } else {
        std::ostringstream os;
        os << "t,x\n";
        for (std::size_t i = 0; i < path.values.size(); ++i)
            os << fmt(grid.points[i]) << "," << fmt(path.values[i]) << "\n";
        emit(os.str(), c.out_path);
    }
    return 0;
}

int run_rfbm(const RunConfig& c) {
    const auto f = build_response(c);
    const auto grid = rfbmlab::TimeGrid::uniform(c.horizon, c.grid_n);
    const auto conv = c.convention == "t" ? rfbmlab::KernelConvention::hurst_at_t
                                          : rfbmlab::KernelConvention::hurst_at_s;
    const auto sol = rfbmlab::solve_rfbm(grid, f, c.seed, c.tol, c.max_iter, conv);
    if (c.format == "json") {
        ordered_json j;
        j["config"] = config_to_json(c);
        j["iterations"] = sol.iterations;
        j["converged"] = sol.converged;
        j["residual_history"] = sol.residual_history;
        j["t"] = grid.points;
        j["x"] = sol.path;
        j["alpha"] = sol.alpha;
        emit(j.dump(2) + "\n", c.out_path);
    } else {
        std::ostringstream os;
        os << "t,x,alpha\n";
        for (std::size_t i = 0; i < sol.path.size(); ++i)
            os << fmt(grid.points[i]) << "," << fmt(sol.path[i]) << "," << fmt(sol.alpha[i])
               << "\n";
        emit(os.str(), c.out_path);
    }
    if (!sol.converged) {
        std::cerr << "rfbm: Picard iteration did not reach tol " << c.tol << " in " << c.max_iter
                  << " sweeps; last residual " << sol.residual_history.back() << "\n";
        return 1;
    }
    return 0;
}

int run_covariance(const RunConfig& c) {
    const auto h = build_hurst(c);
    rfbmlab::CovarianceResult res;
    if (c.method == "hyper") {
        const double u = std::fmin(c.u, c.v), v = std::fmax(c.u, c.v);
        if (!(v >= 2.0 * u))
            throw std::runtime_error("hypergeometric closed form needs max(u,v) >= 2*min(u,v)");
        res.u = c.u;
        res.v = c.v;
        res.method = rfbmlab::CovMethod::hypergeometric;
        res.value = 2.0 * std::sqrt(h(u) * h(v)) *
                    rfbmlab::eval_J(h(u) - 0.5, h(v) - 0.5, u, v);
    } else if (c.method == "quadrature") {
        res = rfbmlab::covariance_quadrature(c.u, c.v, h, 1e-10);
    } else {
        throw std::runtime_error("method must be quadrature or hyper");
    }
    const char* mname = res.method == rfbmlab::CovMethod::quadrature ? "quadrature" : "hyper";
    if (c.format == "json") {
        ordered_json j;
        j["config"] = config_to_json(c);
        j["u"] = res.u;
        j["v"] = res.v;
        j["value"] = res.value;
        j["est_error"] = res.est_error;
        j["method"] = mname;
        emit(j.dump(2) + "\n", c.out_path);
    } else {
        std::ostringstream os;
        os << "u,v,value,est_error,method\n";
        os << fmt(res.u) << "," << fmt(res.v) << "," << fmt(res.value) << ","
           << fmt(res.est_error) << "," << mname << "\n";
        emit(os.str(), c.out_path);
    }
    return 0;
}

const char* regime_name(rfbmlab::AttentionRegime r) {
    switch (r) {
        case rfbmlab::AttentionRegime::subcritical: return "subcritical";
        case rfbmlab::AttentionRegime::critical: return "critical";
        default: return "supercritical";
    }
}

int run_attention(const RunConfig& c) {
    const auto f = build_response(c);
    const auto grid = rfbmlab::TimeGrid::uniform(c.horizon, c.grid_n);
    const auto sol = rfbmlab::solve_rfbm(grid, f, c.seed, c.tol, c.max_iter);
    const double t = grid.points[snap_index(grid, c.t)];
    const auto prof = rfbmlab::attention_profile(sol, f, t);
    const auto consts = rfbmlab::bound_constants(f.h_min, f.h_max);
    const auto rep = rfbmlab::check_attention_bounds(prof, consts);
    const auto res = rfbmlab::residence_measure(sol, {c.lo, c.hi}, t);
    ordered_json head;
    head["t"] = prof.t;
    head["partition"] = prof.partition;
    head["output"] = prof.output;
    head["regime"] = regime_name(prof.regime);
    head["normalization"] = prof.norm_sum;
    head["bounds_checked"] = rep.checked;
    head["bound_violations"] = rep.violations.size();
    head["residence_r"] = res.r;
    head["residence_mu"] = res.mu;
    if (c.format == "json") {
        ordered_json j;
        j["config"] = config_to_json(c);
        j["profile"] = head;
        j["s"] = prof.s_grid;
        j["rho"] = prof.rho;
        emit(j.dump(2) + "\n", c.out_path);
    } else {
        std::ostringstream os;
        os << "# " << head.dump() << "\n";
        os << "s,rho\n";
        for (std::size_t i = 0; i < prof.s_grid.size(); ++i)
            os << fmt(prof.s_grid[i]) << "," << fmt(prof.rho[i]) << "\n";
        emit(os.str(), c.out_path);
    }
    return 0;
}

int run_verify(const RunConfig& c) {
    rfbmlab::VerifyConfig vc = rfbmlab::default_verify_config();
    vc.grid_n = c.grid_n;
    vc.n_paths = c.n_paths;
    vc.threads = c.threads;
    if (!c.kind.empty()) {
        if (c.kind == "constant" || c.kind == "sin" || c.kind == "sinusoidal" ||
            c.kind == "linear")
            vc.hurst = build_hurst(c);
        vc.response = build_response(c);
    }
    const auto reports = rfbmlab::run_suite(c.suite, vc, c.seed);
    emit(rfbmlab::reports_to_json(reports), c.out_path);
    if (!rfbmlab::all_passed(reports)) {
        std::cerr << "verify: one or more checks failed\n";
        return 1;
    }
    return 0;
}

int run_lamperti(const RunConfig& c) {
    const auto h = build_hurst(c);
    const auto traj = rfbmlab::lamperti_solve(h, c.phi0, c.t, c.step);
    if (c.format == "json") {
        std::vector<double> ts, phis, alphas;
        for (const auto& p : traj) {
            ts.push_back(p.t);
            phis.push_back(p.phi);
            alphas.push_back(p.alpha);
        }
        ordered_json j;
        j["config"] = config_to_json(c);
        j["t"] = ts;
        j["phi"] = phis;
        j["alpha"] = alphas;
        emit(j.dump(2) + "\n", c.out_path);
    } else {
        std::ostringstream os;
        os << "t,phi,alpha\n";
        for (const auto& p : traj)
            os << fmt(p.t) << "," << fmt(p.phi) << "," << fmt(p.alpha) << "\n";
        emit(os.str(), c.out_path);
    }
    return 0;
}

int run_ldp(const RunConfig& c) {
    const auto h = build_hurst(c);
    if (c.eps_ladder < 1) throw std::runtime_error("eps-ladder must be at least 1");
    std::vector<std::pair<double, double>> rows;
    for (int k = 1; k <= c.eps_ladder; ++k) {
        const double eps = std::pow(10.0, -k);
        rows.emplace_back(eps, rfbmlab::ldp_ratio(c.t0, c.x, eps, h));
    }
    if (c.format == "json") {
        ordered_json j;
        j["config"] = config_to_json(c);
        ordered_json arr = ordered_json::array();
        for (const auto& [eps, ratio] : rows) arr.push_back({{"eps", eps}, {"ratio", ratio}});
        j["ladder"] = arr;
        emit(j.dump(2) + "\n", c.out_path);
    } else {
        std::ostringstream os;
        os << "eps,ratio\n";
        for (const auto& [eps, ratio] : rows) os << fmt(eps) << "," << fmt(ratio) << "\n";
        emit(os.str(), c.out_path);
    }
    return 0;
}

int run_bounds(const RunConfig& c) {
    std::ostringstream os;
    ordered_json j;
    j["config"] = config_to_json(c);
    if (c.bounds_kind == "tails") {
        const double l0 = std::log(1.05), l1 = std::log(12.0);
        os << "z,lower,exact,upper\n";
        ordered_json arr = ordered_json::array();
        for (int i = 0; i < 500; ++i) {
            const double z = std::exp(l0 + (l1 - l0) * i / 499.0);
            const auto tb = rfbmlab::mills_bounds(z);
            os << fmt(z) << "," << fmt(tb.lower) << "," << fmt(tb.exact) << "," << fmt(tb.upper)
               << "\n";
            arr.push_back({{"z", z}, {"lower", tb.lower}, {"exact", tb.exact}, {"upper", tb.upper}});
        }
        j["rows"] = arr;
    } else if (c.bounds_kind == "covariance") {
        const auto h = build_hurst(c);
        const auto cb = rfbmlab::covariance_bounds(c.t, c.eps, h);
        os << "t,eps,lower,upper\n";
        os << fmt(c.t) << "," << fmt(c.eps) << "," << fmt(cb.lower) << "," << fmt(cb.upper)
           << "\n";
        j["lower"] = cb.lower;
        j["upper"] = cb.upper;
    } else if (c.bounds_kind == "lnd") {
        const auto h = build_hurst(c);
        const auto lb = rfbmlab::lnd_lower_bound(c.t0, c.eps, h);
        os << "t0,eps,cond_var,bound,threshold,within_validity\n";
        os << fmt(c.t0) << "," << fmt(c.eps) << "," << fmt(lb.cond_var) << "," << fmt(lb.bound)
           << "," << fmt(lb.threshold) << "," << (lb.within_validity ? 1 : 0) << "\n";
        j["cond_var"] = lb.cond_var;
        j["bound"] = lb.bound;
        j["threshold"] = lb.threshold;
        j["within_validity"] = lb.within_validity;
    } else {
        throw std::runtime_error("bounds kind must be tails, covariance, or lnd");
    }
    emit(c.format == "json" ? j.dump(2) + "\n" : os.str(), c.out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rfbmlab: simulation and verification laboratory for time-varying and "
                 "state-responsive fractional Brownian motion"};
    app.require_subcommand(1);

    RunConfig f;
    std::string config_path;
    bool dump = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file; flags override its values");
        sub->add_flag("--dump-config", dump, "print the effective config as JSON and exit");
        sub->add_option("--seed", f.seed, "RNG seed; reaches every stream");
        sub->add_option("--n", f.grid_n, "grid panels");
        sub->add_option("--horizon", f.horizon, "time horizon");
        sub->add_option("--paths", f.n_paths, "Monte Carlo paths");
        sub->add_option("--threads", f.threads,
                        "thread cap (0 = RFBM_LAB_THREADS or hardware)");
        sub->add_option("--out", f.out_path, "output file (default stdout)");
        sub->add_option("--format", f.format, "csv or json");
        sub->add_option("--fn-params", f.fn_params, "function parameters")->delimiter(',');
        return sub;
    };
    auto add_hurst = [&](CLI::App* sub) {
        sub->add_option("--hurst", f.kind, "exponent kind: constant, sin, linear");
    };
    auto add_response = [&](CLI::App* sub) {
        sub->add_option("--response", f.kind,
                        "response kind: example61, constant, tanh-spatial, sin, linear");
    };

    auto* sim = add_common(app.add_subcommand(
        "simulate", "simulate a time-varying-exponent path; CSV: t,x"));
    add_hurst(sim);

    auto* rf = add_common(app.add_subcommand(
        "rfbm", "solve the state-responsive equation by Picard iteration; CSV: t,x,alpha"));
    add_response(rf);
    rf->add_option("--tol", f.tol, "Picard sup-norm tolerance");
    rf->add_option("--max-iter", f.max_iter, "Picard sweep cap; exit 1 when exceeded");
    rf->add_option("--convention", f.convention, "exponent anchor inside the kernel: s or t");

    auto* cov = add_common(app.add_subcommand(
        "covariance", "covariance R(u,v); CSV: u,v,value,est_error,method"));
    add_hurst(cov);
    cov->add_option("--u", f.u, "first time");
    cov->add_option("--v", f.v, "second time");
    cov->add_option("--method", f.method, "quadrature or hyper (closed form, needs v >= 2u)");

    auto* att = add_common(app.add_subcommand(
        "attention",
        "kernel attention profile at t (snapped to the grid); CSV: '# {json header}' then s,rho"));
    add_response(att);
    att->add_option("--t", f.t, "profile time");
    att->add_option("--lo", f.lo, "residence interval lower end (half-open)");
    att->add_option("--hi", f.hi, "residence interval upper end");

    auto* ver = add_common(app.add_subcommand(
        "verify", "run verification suites; canonical JSON report array, exit 1 on any failure"));
    add_response(ver);
    ver->add_option("--suite", f.suite,
                    "variance, covariance, tails, ldp, lnd, rfbm, attention, memory, lamperti, all");

    auto* lam = add_common(app.add_subcommand(
        "lamperti", "self-similarity time change; CSV: t,phi,alpha"));
    add_hurst(lam);
    lam->add_option("--t", f.t, "end time");
    lam->add_option("--phi0", f.phi0, "initial value (> 0)");
    lam->add_option("--step", f.step, "RK4 step");

    auto* ldp = add_common(app.add_subcommand(
        "ldp", "small-deviation ratio ladder; CSV: eps,ratio"));
    add_hurst(ldp);
    ldp->add_option("--x", f.x, "deviation level");
    ldp->add_option("--t0", f.t0, "base time");
    ldp->add_option("--eps-ladder", f.eps_ladder, "ladder length: eps = 10^-1 .. 10^-k");

    auto* bnd = add_common(app.add_subcommand(
        "bounds",
        "bracket tables; CSV tails: z,lower,exact,upper | covariance: t,eps,lower,upper | "
        "lnd: t0,eps,cond_var,bound,threshold,within_validity"));
    add_hurst(bnd);
    bnd->add_option("--kind", f.bounds_kind, "tails, covariance, or lnd");
    bnd->add_option("--t", f.t, "base time (covariance bracket)");
    bnd->add_option("--t0", f.t0, "base time (lnd)");
    bnd->add_option("--eps", f.eps, "offset");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    CLI::App* sub = app.get_subcommands().at(0);
    try {
        RunConfig c;
        if (sub->count("--config") > 0) {
            std::ifstream in(config_path);
            if (!in) throw std::runtime_error("cannot open config file: " + config_path);
            nlohmann::json doc = nlohmann::json::parse(in);
            c = config_from_json(doc);
        }
        c.command = sub->get_name();
        auto on = [&](const char* name) { return sub->count(name) > 0; };
        if (on("--seed")) c.seed = f.seed;
        if (on("--n")) c.grid_n = f.grid_n;
        if (on("--horizon")) c.horizon = f.horizon;
        if (on("--paths")) c.n_paths = f.n_paths;
        if (on("--threads")) c.threads = f.threads;
        if (on("--out")) c.out_path = f.out_path;
        if (on("--format")) c.format = f.format;
        if (on("--fn-params")) c.fn_params = f.fn_params;
        if (sub->get_option_no_throw("--hurst") && on("--hurst")) c.kind = f.kind;
        if (sub->get_option_no_throw("--response") && on("--response")) c.kind = f.kind;
        if (sub->get_option_no_throw("--tol") && on("--tol")) c.tol = f.tol;
        if (sub->get_option_no_throw("--max-iter") && on("--max-iter")) c.max_iter = f.max_iter;
        if (sub->get_option_no_throw("--convention") && on("--convention"))
            c.convention = f.convention;
        if (sub->get_option_no_throw("--u") && on("--u")) c.u = f.u;
        if (sub->get_option_no_throw("--v") && on("--v")) c.v = f.v;
        if (sub->get_option_no_throw("--method") && on("--method")) c.method = f.method;
        if (sub->get_option_no_throw("--t") && on("--t")) c.t = f.t;
        if (sub->get_option_no_throw("--lo") && on("--lo")) c.lo = f.lo;
        if (sub->get_option_no_throw("--hi") && on("--hi")) c.hi = f.hi;
        if (sub->get_option_no_throw("--suite") && on("--suite")) c.suite = f.suite;
        if (sub->get_option_no_throw("--phi0") && on("--phi0")) c.phi0 = f.phi0;
        if (sub->get_option_no_throw("--step") && on("--step")) c.step = f.step;
        if (sub->get_option_no_throw("--x") && on("--x")) c.x = f.x;
        if (sub->get_option_no_throw("--t0") && on("--t0")) c.t0 = f.t0;
        if (sub->get_option_no_throw("--eps-ladder") && on("--eps-ladder"))
            c.eps_ladder = f.eps_ladder;
        if (sub->get_option_no_throw("--kind") && on("--kind")) c.bounds_kind = f.bounds_kind;
        if (sub->get_option_no_throw("--eps") && on("--eps")) c.eps = f.eps;

        if (c.format != "csv" && c.format != "json")
            throw std::runtime_error("format must be csv or json");

        if (dump) {
            emit(config_to_json(c).dump(2) + "\n", c.out_path);
            return 0;
        }

        const std::string& name = c.command;
        if (name == "simulate") return run_simulate(c);
        if (name == "rfbm") return run_rfbm(c);
        if (name == "covariance") return run_covariance(c);
        if (name == "attention") return run_attention(c);
        if (name == "verify") return run_verify(c);
        if (name == "lamperti") return run_lamperti(c);
        if (name == "ldp") return run_ldp(c);
        if (name == "bounds") return run_bounds(c);
        throw std::runtime_error("unknown subcommand: " + name);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::cerr << sub->help() << "\n";
        return 2;
    }
}
