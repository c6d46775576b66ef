#pragma once

// Experiment configuration for batch verification runs. Files are JSON objects:
//
//   {"schema": 1, "name": "single-point", "p": 2, "r": 3, "variety": ["[1:0:0]"],
//    "N": 8, "window": 6, "checks": ["decomp-dims", "i-squared-zero"], "seed": 1,
//    "output": {"json": "report.json", "csv": "dims.csv"}}
//
// Every field but p, r and variety has a default. "inject_fault": "boundary" builds
// F_V with one corrupted boundary entry (used to test failure reporting).

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fv/idempotent.hpp"

namespace fv {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kConfigSchema = 1;

struct ExperimentConfig {
    int schema = kConfigSchema;
    std::string name;
    Residue p = 2;
    std::size_t r = 3;
    std::vector<std::string> variety;
    std::size_t top = 8;     // N
    std::size_t window = 6;  // W
    std::vector<std::string> checks;
    std::uint64_t seed = 1;
    std::string json_path;
    std::string csv_path;
    std::string inject_fault;

    PointVariety points() const;
    /// Stable key for sorting and report rows: the name, or p/r/points/N.
    std::string key() const;
};

const std::vector<std::string>& known_checks();

/// Throws ConfigError on malformed input or a violated invariant.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
void validate(const ExperimentConfig& c);

/// "a,b" -> {"a", "b"}, rejecting unknown ids.
std::vector<std::string> parse_check_list(const std::string& text);

}  // namespace fv
