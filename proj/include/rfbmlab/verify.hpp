#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rfbmlab/hurst.hpp"

namespace rfbmlab {

struct McReport {
    std::string check_id;
    double target = 0.0;
    double estimate = 0.0;
    double se = 0.0;
    std::string tolerance_rule;
    bool pass = false;
    std::int64_t runtime_ms = 0;
    std::uint64_t seed = 0;
    std::size_t n = 0;
};

struct VerifyConfig {
    HurstFunction hurst;        // deterministic-exponent checks
    ResponseFunction response;  // state-dependent checks
    std::size_t grid_n = 512;
    std::size_t n_paths = 1500;
    std::size_t n_seeds = 10;
    unsigned threads = 0;
};

VerifyConfig default_verify_config();

// Runs the named suite (or "all"). Reports come back sorted by check_id and
// are deterministic for a fixed (config, seed) regardless of thread count.
std::vector<McReport> run_suite(const std::string& name, const VerifyConfig& config,
                                std::uint64_t seed);

std::vector<std::string> suite_names();
std::vector<std::string> suite_checks(const std::string& name);

// number of registry checks tied to the named module's invariant list
std::size_t invariant_check_count(const std::string& module);

bool all_passed(const std::vector<McReport>& reports);

// Canonical JSON array: fixed field order, sorted by check_id, runtimes
// omitted so identical (config, seed) runs serialize byte-identically.
std::string reports_to_json(const std::vector<McReport>& reports);

}  // namespace rfbmlab
