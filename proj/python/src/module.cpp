#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rfbmlab/attention.hpp"
#include "rfbmlab/rfbm.hpp"
#include "rfbmlab/specfun.hpp"
#include "rfbmlab/tvfbm.hpp"
#include "rfbmlab/verify.hpp"

namespace py = pybind11;
using namespace rfbmlab;

namespace {

HurstFunction make_hurst(const std::string& kind, const std::vector<double>& params,
                         double horizon) {
    if (kind == "constant") return constant_hurst(params.at(0), horizon);
    if (kind == "sin" || kind == "sinusoidal")
        return sinusoidal_hurst(params.at(0), params.at(1), horizon);
    if (kind == "linear") return linear_hurst(params.at(0), params.at(1), horizon);
    throw std::invalid_argument("hurst kind must be constant, sin, or linear");
}

ResponseFunction make_response(const std::string& kind, const std::vector<double>& params,
                               double horizon) {
    if (kind == "example61")
        return example_response(params.at(0), params.at(1), params.at(2), params.at(3), horizon);
    if (kind == "constant") return constant_response(params.at(0), horizon);
    if (kind == "tanh-spatial")
        return tanh_spatial_response(params.at(0), params.at(1), params.at(2), horizon);
    return response_from_hurst(make_hurst(kind, params, horizon));
}

const char* regime_name(AttentionRegime r) {
    switch (r) {
        case AttentionRegime::subcritical: return "subcritical";
        case AttentionRegime::critical: return "critical";
        default: return "supercritical";
    }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "simulation and verification toolkit for fractional processes with "
              "time-varying and state-responsive regularity";

    m.def("gamma_fn", &gamma_fn, py::arg("x"));
    m.def("hyp2f1", &hyp2f1, py::arg("a"), py::arg("b"), py::arg("c"), py::arg("z"));
    m.def("normal_tail", &normal_tail, py::arg("z"));
    m.def(
        "mills_bounds",
        [](double z) {
            const auto tb = mills_bounds(z);
            return py::make_tuple(tb.lower, tb.exact, tb.upper);
        },
        py::arg("z"), "returns (lower, exact, upper) for the standard normal tail");

    m.def(
        "simulate",
        [](const std::string& kind, const std::vector<double>& params, double horizon,
           std::size_t n, std::uint64_t seed) {
            const auto grid = TimeGrid::uniform(horizon, n);
            const auto path = simulate_tvfbm(grid, make_hurst(kind, params, horizon), seed);
            py::dict out;
            out["t"] = grid.points;
            out["x"] = path.values;
            return out;
        },
        py::arg("kind") = "sin", py::arg("params") = std::vector<double>{0.5, 0.2},
        py::arg("horizon") = 1.0, py::arg("n") = 512, py::arg("seed") = 12345,
        "path of the process with time-varying exponent");

    m.def(
        "variance_mc",
        [](const std::string& kind, const std::vector<double>& params, double horizon,
           std::size_t n, std::vector<std::size_t> indices, std::size_t n_paths,
           std::uint64_t seed, unsigned threads) {
            const auto grid = TimeGrid::uniform(horizon, n);
            const auto est = mc_variance(grid, make_hurst(kind, params, horizon), indices,
                                         n_paths, seed, threads);
            py::list out;
            for (const auto& e : est) {
                py::dict d;
                d["t"] = e.t;
                d["target"] = e.target;
                d["estimate"] = e.estimate;
                d["se"] = e.se;
                out.append(d);
            }
            return out;
        },
        py::arg("kind"), py::arg("params"), py::arg("horizon"), py::arg("n"),
        py::arg("indices"), py::arg("n_paths"), py::arg("seed") = 12345,
        py::arg("threads") = 0);

    m.def(
        "covariance",
        [](double u, double v, const std::string& kind, const std::vector<double>& params,
           double horizon, double tol) {
            return covariance_quadrature(u, v, make_hurst(kind, params, horizon), tol).value;
        },
        py::arg("u"), py::arg("v"), py::arg("kind") = "sin",
        py::arg("params") = std::vector<double>{0.5, 0.2}, py::arg("horizon") = 1.0,
        py::arg("tol") = 1e-10);

    m.def(
        "solve",
        [](const std::string& kind, const std::vector<double>& params, double horizon,
           std::size_t n, std::uint64_t seed, double tol) {
            const auto grid = TimeGrid::uniform(horizon, n);
            const auto sol = solve_rfbm(grid, make_response(kind, params, horizon), seed, tol);
            py::dict out;
            out["t"] = grid.points;
            out["x"] = sol.path;
            out["alpha"] = sol.alpha;
            out["iterations"] = sol.iterations;
            out["converged"] = sol.converged;
            return out;
        },
        py::arg("kind") = "example61",
        py::arg("params") = std::vector<double>{0.45, 0.55, 0.5, 1.0}, py::arg("horizon") = 1.0,
        py::arg("n") = 512, py::arg("seed") = 12345, py::arg("tol") = 1e-9,
        "fixed point of the state-responsive equation");

    m.def(
        "attention",
        [](const std::string& kind, const std::vector<double>& params, double horizon,
           std::size_t n, std::uint64_t seed, double t) {
            const auto grid = TimeGrid::uniform(horizon, n);
            const auto f = make_response(kind, params, horizon);
            const auto sol = solve_rfbm(grid, f, seed);
            const auto prof = attention_profile(sol, f, t);
            const auto rep =
                check_attention_bounds(prof, bound_constants(f.h_min, f.h_max));
            py::dict out;
            out["t"] = prof.t;
            out["s"] = prof.s_grid;
            out["rho"] = prof.rho;
            out["partition"] = prof.partition;
            out["output"] = prof.output;
            out["norm_sum"] = prof.norm_sum;
            out["regime"] = regime_name(prof.regime);
            out["bounds_checked"] = rep.checked;
            out["bound_violations"] = rep.violations.size();
            return out;
        },
        py::arg("kind") = "example61",
        py::arg("params") = std::vector<double>{0.45, 0.55, 0.5, 1.0}, py::arg("horizon") = 1.0,
        py::arg("n") = 512, py::arg("seed") = 12345, py::arg("t") = 0.5,
        "normalized kernel attention profile at a grid time");

    m.def(
        "lamperti",
        [](const std::string& kind, const std::vector<double>& params, double horizon,
           double phi0, double t_end, double step) {
            const auto traj =
                lamperti_solve(make_hurst(kind, params, horizon), phi0, t_end, step);
            std::vector<double> t, phi, alpha;
            for (const auto& p : traj) {
                t.push_back(p.t);
                phi.push_back(p.phi);
                alpha.push_back(p.alpha);
            }
            py::dict out;
            out["t"] = t;
            out["phi"] = phi;
            out["alpha"] = alpha;
            return out;
        },
        py::arg("kind") = "constant", py::arg("params") = std::vector<double>{0.7},
        py::arg("horizon") = 1.0, py::arg("phi0") = 1.0, py::arg("t_end") = 1.0,
        py::arg("step") = 0.001953125);

    m.def(
        "ldp_ratio",
        [](double t0, double x, double eps, const std::string& kind,
           const std::vector<double>& params, double horizon) {
            return ldp_ratio(t0, x, eps, make_hurst(kind, params, horizon));
        },
        py::arg("t0"), py::arg("x"), py::arg("eps"), py::arg("kind") = "sin",
        py::arg("params") = std::vector<double>{0.5, 0.2}, py::arg("horizon") = 1.0);

    m.def("suite_names", &suite_names);
    m.def(
        "verify",
        [](const std::string& suite, std::uint64_t seed, std::size_t grid_n,
           std::size_t n_paths, unsigned threads) {
            VerifyConfig cfg = default_verify_config();
            cfg.grid_n = grid_n;
            cfg.n_paths = n_paths;
            cfg.threads = threads;
            const auto reports = run_suite(suite, cfg, seed);
            return py::make_tuple(all_passed(reports), reports_to_json(reports));
        },
        py::arg("suite") = "all", py::arg("seed") = 12345, py::arg("grid_n") = 512,
        py::arg("n_paths") = 1500, py::arg("threads") = 0,
        "runs a verification suite; returns (all_passed, json_report)");
}
