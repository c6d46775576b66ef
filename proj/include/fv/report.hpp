#pragma once

// Runs verification checks on experiment configurations and serializes reports.

#include <string>
#include <vector>

#include <json.hpp>

#include "fv/config.hpp"

namespace fv {

struct CheckResult {
    std::string check;
    std::string anchor;  // the statement the check verifies
    std::string config;
    bool pass = false;
    nlohmann::ordered_json witness;
};

/// Statement verified by a check id.
std::string check_anchor(const std::string& id);

/// Runs one check; exceptions from the library become failures with the message as witness.
CheckResult run_check(const ExperimentConfig& config, const std::string& id);

/// All (config, check) jobs on up to `jobs` worker threads. The order of the result
/// follows the configs as given, then the check order of known_checks().
std::vector<CheckResult> run_plan(const std::vector<ExperimentConfig>& configs, std::size_t jobs);

std::string report_json(const std::vector<CheckResult>& results);
/// Graded dimension rows (config, slot, dim, expected) from decomp-dims results.
std::string report_csv(const std::vector<CheckResult>& results);

/// dim Ext^j_{kG}(k, k) for G elementary abelian of rank r.
std::size_t trivial_ext_dim(Residue p, std::size_t r, std::size_t j);

}  // namespace fv
