#include "fv/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fv {

using nlohmann::json;

const std::vector<std::string>& known_checks()
{
    static const std::vector<std::string> ids{"decomp-dims", "i-squared-zero", "ideal-criteria-agree",
                                              "restriction-kernel", "negative-tate", "extension",
                                              "zeta-colimit", "nonfg-growth"};
    return ids;
}

PointVariety ExperimentConfig::points() const { return PointVariety::parse(p, r, variety); }

std::string ExperimentConfig::key() const
{
    if (!name.empty())
        return name;
    std::string s = "p" + std::to_string(p) + "-r" + std::to_string(r) + "-";
    for (std::size_t i = 0; i < variety.size(); ++i)
        s += (i ? "+" : "") + variety[i];
    return s + "-N" + std::to_string(top);
}

std::vector<std::string> parse_check_list(const std::string& text)
{
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string id;
    while (std::getline(ss, id, ',')) {
        if (id.empty())
            continue;
        const auto& known = known_checks();
        if (std::find(known.begin(), known.end(), id) == known.end())
            throw ConfigError("unknown check id '" + id + "'");
        if (std::find(out.begin(), out.end(), id) == out.end())
            out.push_back(id);
    }
    if (out.empty())
        throw ConfigError("empty check list");
    return out;
}

void validate(const ExperimentConfig& c)
{
    if (c.schema != kConfigSchema)
        throw ConfigError("unsupported schema version " + std::to_string(c.schema));
    if (!is_prime(c.p))
        throw ConfigError("p = " + std::to_string(c.p) + " is not prime");
    if (c.r < 2)
        throw ConfigError("r must be at least 2");
    if (c.variety.empty())
        throw ConfigError("variety must list at least one point");
    try {
        (void)c.points();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (c.top < 2)
        throw ConfigError("N must be at least 2");
    if (c.window + 2 > c.top)
        throw ConfigError("window " + std::to_string(c.window) + " exceeds N - 2 = " + std::to_string(c.top - 2));
    for (const auto& id : c.checks) {
        const auto& known = known_checks();
        if (std::find(known.begin(), known.end(), id) == known.end())
            throw ConfigError("unknown check id '" + id + "'");
    }
    if (!c.inject_fault.empty() && c.inject_fault != "boundary")
        throw ConfigError("unknown fault '" + c.inject_fault + "'");
}

namespace {

template <class T>
T field(const json& j, const char* name, T fallback)
{
    if (!j.contains(name))
        return fallback;
    try {
        return j.at(name).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("field '") + name + "' has the wrong type");
    }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ConfigError("config must be a JSON object");
    static const std::vector<std::string> allowed{"schema", "name", "p",      "r",      "variety",     "N",
                                                  "window", "checks", "seed", "output", "inject_fault"};
    for (const auto& [k, v] : j.items())
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
            throw ConfigError("unknown config field '" + k + "'");
    for (const char* req : {"p", "r", "variety"})
        if (!j.contains(req))
            throw ConfigError(std::string("missing required field '") + req + "'");

    ExperimentConfig c;
    c.schema = field<int>(j, "schema", kConfigSchema);
    c.name = field<std::string>(j, "name", "");
    auto p = field<std::int64_t>(j, "p", 2);
    auto r = field<std::int64_t>(j, "r", 3);
    auto n = field<std::int64_t>(j, "N", 8);
    if (p < 2 || p > 65521 || r < 1 || r > 16 || n < 0 || n > 64)
        throw ConfigError("p, r or N out of range");
    c.p = static_cast<Residue>(p);
    c.r = static_cast<std::size_t>(r);
    c.top = static_cast<std::size_t>(n);
    auto w = field<std::int64_t>(j, "window", static_cast<std::int64_t>(c.top) - 2);
    if (w < 0)
        throw ConfigError("window must be nonnegative");
    c.window = static_cast<std::size_t>(w);
    c.variety = field<std::vector<std::string>>(j, "variety", {});
    c.checks = field<std::vector<std::string>>(j, "checks", known_checks());
    c.seed = field<std::uint64_t>(j, "seed", 1);
    c.inject_fault = field<std::string>(j, "inject_fault", "");
    if (j.contains("output")) {
        const json& out = j.at("output");
        if (!out.is_object())
            throw ConfigError("field 'output' must be an object");
        c.json_path = field<std::string>(out, "json", "");
        c.csv_path = field<std::string>(out, "csv", "");
    }
    validate(c);
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

}  // namespace fv
