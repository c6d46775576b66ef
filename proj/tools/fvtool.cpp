// fvtool: rank varieties, F_V truncations and batch verification runs.
//
// Exit codes: 0 all checks pass, 1 some check failed, 2 usage or config error.

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fv/config.hpp"
#include "fv/report.hpp"
#include "fv/stable.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kUsageError = 2;

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw fv::ConfigError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out)
        throw fv::ConfigError("cannot write " + path);
    out << text;
}

int cmd_rank_variety(const std::string& module_path, bool as_json)
{
    fv::FDModule m = fv::module_from_json(read_file(module_path));
    auto pts = fv::rank_variety(m);
    if (as_json) {
        ordered_json out = ordered_json::array();
        for (const auto& v : pts)
            out.push_back(v.to_string());
        std::cout << out.dump() << "\n";
    } else {
        for (const auto& v : pts)
            std::cout << v.to_string() << "\n";
    }
    return 0;
}

int cmd_build_fv(const fv::ExperimentConfig& c)
{
    fv::FVOptions opts;
    opts.corrupt_boundary = c.inject_fault == "boundary";
    fv::TruncatedFV f = fv::build_fv_multi(c.points(), c.top, opts);
    ordered_json out;
    out["p"] = c.p;
    out["r"] = c.r;
    out["points"] = c.variety;
    out["N"] = c.top;
    out["dim"] = f.dim();
    out["expected_dim"] = fv::expected_fv_dim(c.p, c.r, c.variety.size(), c.top);
    std::vector<std::size_t> ranks, slot_dims;
    for (std::size_t j = 0; j <= c.top; ++j) {
        ranks.push_back(f.pieces[0].resolution.ranks[j]);
        slot_dims.push_back(f.prefix_dim(static_cast<int>(j)) - f.prefix_dim(static_cast<int>(j) - 1));
    }
    out["resolution_ranks"] = ranks;
    out["slot_dims"] = slot_dims;
    auto violation = fv::fv_invariant_violation(f);
    bool restriction_ok = true;
    std::mt19937_64 rng(c.seed);
    const auto v = c.points();
    for (int t = 0; t < 3; ++t)
        restriction_ok = restriction_ok && fv::restrict_fv(f, fv::random_avoiding_subalgebra(v, rng)).trivial_plus_free();
    bool tau_fixed = true;
    for (const auto& a : f.module.actions())
        tau_fixed = tau_fixed && a.column(0) == std::vector<fv::Residue>(f.dim(), 0);
    out["checks"] = {{"invariants", violation.empty()},
                     {"tau_fixed", tau_fixed},
                     {"restriction_trivial_plus_free", restriction_ok}};
    if (!violation.empty())
        out["violation"] = violation;
    std::cout << out.dump(2) << "\n";
    return violation.empty() && restriction_ok && tau_fixed ? 0 : 1;
}

int cmd_verify(std::vector<fv::ExperimentConfig> configs, const std::string& checks, const std::string& json_path,
               const std::string& csv_path, std::size_t jobs, const std::optional<std::uint64_t>& seed)
{
    if (configs.empty()) {
        // The default configuration: one point, N = 8, W = 6.
        fv::ExperimentConfig c;
        c.name = "default";
        c.variety = {"[1:0:0]"};
        c.checks = fv::known_checks();
        configs.push_back(c);
    }
    for (auto& c : configs) {
        if (!checks.empty())
            c.checks = fv::parse_check_list(checks);
        if (seed)
            c.seed = *seed;
        fv::validate(c);
    }
    auto results = fv::run_plan(configs, jobs);
    std::size_t failed = 0;
    for (const auto& r : results) {
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.config << " " << r.check << "\n";
        failed += r.pass ? 0 : 1;
    }
    const std::string json = fv::report_json(results);
    const std::string csv = fv::report_csv(results);
    if (!json_path.empty())
        write_file(json_path, json);
    if (!csv_path.empty())
        write_file(csv_path, csv);
    for (const auto& c : configs) {
        if (!c.json_path.empty() && c.json_path != json_path)
            write_file(c.json_path, json);
        if (!c.csv_path.empty() && c.csv_path != csv_path)
            write_file(c.csv_path, csv);
    }
    for (const auto& r : results)
        if (!r.pass) {
            std::cerr << "first failure: " << r.config << " " << r.check << "\n" << r.witness.dump(2) << "\n";
            break;
        }
    std::cout << results.size() - failed << "/" << results.size() << " checks passed\n";
    return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Truncated idempotent modules for elementary abelian p-groups"};
    app.require_subcommand(1);

    auto* rv = app.add_subcommand("rank-variety", "F_p-rational points of the rank variety of a module");
    std::string module_path;
    bool rv_json = false;
    rv->add_option("module", module_path, "module JSON file {p, r, dim, actions}")->required();
    rv->add_flag("--json", rv_json, "print a JSON list");

    auto* bf = app.add_subcommand("build-fv", "build a truncation of F_V and print a summary");
    std::string bf_config;
    bf->add_option("--config", bf_config, "experiment config file")->required();

    auto* vf = app.add_subcommand("verify", "run verification checks");
    std::vector<std::string> config_paths;
    std::string checks, json_path, csv_path;
    std::size_t jobs = 1;
    std::uint64_t seed_value = 0;
    vf->add_option("--config", config_paths, "experiment config file (repeatable)");
    vf->add_option("--check", checks, "comma-separated check ids");
    vf->add_option("--json", json_path, "write the JSON report here");
    vf->add_option("--csv", csv_path, "write the graded-dimension CSV here");
    vf->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1, 256));
    auto* seed_opt = vf->add_option("--seed", seed_value, "override the seed of every config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return e.get_exit_code() == 0 ? code : kUsageError;
    }

    try {
        if (rv->parsed())
            return cmd_rank_variety(module_path, rv_json);
        if (bf->parsed())
            return cmd_build_fv(fv::load_config(bf_config));
        std::vector<fv::ExperimentConfig> configs;
        for (const auto& path : config_paths)
            configs.push_back(fv::load_config(path));
        std::optional<std::uint64_t> seed;
        if (seed_opt->count())
            seed = seed_value;
        return cmd_verify(std::move(configs), checks, json_path, csv_path, jobs, seed);
    } catch (const fv::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    }
}
