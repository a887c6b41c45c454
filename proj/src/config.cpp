#include "vstream/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace vstream
{

namespace
{

std::string join(const std::vector<std::string>& parts)
{
    std::string out;
    for (const auto& p : parts)
    {
        if (!out.empty())
            out += "; ";
        out += p;
    }
    return out;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view text, std::string_view what)
{
    text = trim(text);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ConfigError({"cannot parse " + std::string(what) + " from '" + std::string(text) + "'"});
    return value;
}

std::uint64_t parse_seed(std::string_view text)
{
    text = trim(text);
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ConfigError({"cannot parse master_seed from '" + std::string(text) + "'"});
    return value;
}

bool is_rate_key(std::string_view key)
{
    return key == "r_u" || key == "r_v";
}

double* scalar_field(ScenarioConfig& cfg, std::string_view key)
{
    if (key == "d") return &cfg.d;
    if (key == "R_u") return &cfg.R_u;
    if (key == "R_v") return &cfg.R_v;
    if (key == "r_u") return &cfg.r_u;
    if (key == "r_v") return &cfg.r_v;
    if (key == "rho1") return &cfg.rho1;
    if (key == "rho2") return &cfg.rho2;
    if (key == "v1") return &cfg.v1;
    if (key == "v2") return &cfg.v2;
    return nullptr;
}

double rate_from_json(const nlohmann::json& v, std::string_view key)
{
    if (v.is_number())
        return v.get<double>();
    if (v.is_string())
        return parse_rate(v.get<std::string>());
    throw ConfigError({std::string(key) + " must be a number or a rate string"});
}

} // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error(join(violations)), violations_(std::move(violations))
{
}

std::vector<std::string> config_violations(const ScenarioConfig& cfg)
{
    std::vector<std::string> v;
    auto positive = [&](double x, const char* name) {
        if (!(x > 0.0) || !std::isfinite(x))
            v.push_back(std::string(name) + " must be positive and finite");
    };
    positive(cfg.d, "d");
    positive(cfg.R_u, "R_u");
    positive(cfg.R_v, "R_v");
    positive(cfg.r_u, "r_u");
    positive(cfg.r_v, "r_v");
    positive(cfg.rho1, "rho1");
    positive(cfg.rho2, "rho2");
    positive(cfg.v1, "v1");
    positive(cfg.v2, "v2");

    if (!(cfg.R_u > cfg.R_v))
        v.emplace_back("R_u must exceed R_v");
    if (!(cfg.r_u > cfg.r_v))
        v.emplace_back("r_u must exceed r_v");
    if (!(cfg.d > 2.0 * cfg.R_u))
        v.emplace_back("d must exceed 2*R_u");
    if (cfg.layer_rates.empty())
        v.emplace_back("layer_rates must contain at least one layer");
    for (std::size_t q = 0; q < cfg.layer_rates.size(); ++q)
    {
        double r = cfg.layer_rates[q];
        if (!(r > 0.0) || !std::isfinite(r))
            v.push_back("layer_rates[" + std::to_string(q) + "] must be positive and finite");
    }
    return v;
}

const ScenarioConfig& validate_config(const ScenarioConfig& cfg)
{
    auto v = config_violations(cfg);
    if (!v.empty())
        throw ConfigError(std::move(v));
    return cfg;
}

double parse_rate(std::string_view text)
{
    text = trim(text);
    struct Unit
    {
        std::string_view suffix;
        double scale;
    };
    // Longest suffixes first so "kb/s" is not read as "b/s".
    static constexpr Unit units[] = {
        {"Mb/s", 1e6}, {"Mbps", 1e6}, {"kb/s", 1e3}, {"Kb/s", 1e3},
        {"kbps", 1e3}, {"Kbps", 1e3}, {"b/s", 1.0},  {"bps", 1.0},
    };
    for (const auto& u : units)
    {
        if (text.size() > u.suffix.size() && text.ends_with(u.suffix))
            return parse_number(text.substr(0, text.size() - u.suffix.size()), "rate") * u.scale;
    }
    return parse_number(text, "rate");
}

std::vector<double> parse_rate_list(std::string_view text)
{
    std::vector<double> out;
    while (!text.empty())
    {
        auto comma = text.find(',');
        auto item = trim(text.substr(0, comma));
        if (item.empty())
            throw ConfigError({"empty entry in rate list"});
        out.push_back(parse_rate(item));
        if (comma == std::string_view::npos)
            break;
        text.remove_prefix(comma + 1);
        if (text.empty())
            throw ConfigError({"trailing comma in rate list"});
    }
    return out;
}

void apply_override(ScenarioConfig& cfg, std::string_view assignment)
{
    auto eq = assignment.find('=');
    if (eq == std::string_view::npos)
        throw ConfigError({"override '" + std::string(assignment) + "' is not KEY=VALUE"});
    auto key = trim(assignment.substr(0, eq));
    auto value = assignment.substr(eq + 1);

    if (key == "layer_rates")
    {
        cfg.layer_rates = parse_rate_list(value);
        return;
    }
    if (key == "master_seed")
    {
        cfg.master_seed = parse_seed(value);
        return;
    }
    double* field = scalar_field(cfg, key);
    if (field == nullptr)
        throw ConfigError({"unknown config key '" + std::string(key) + "'"});
    *field = is_rate_key(key) ? parse_rate(value) : parse_number(value, key);
}

nlohmann::json to_json(const ScenarioConfig& cfg)
{
    return nlohmann::json{
        {"d", cfg.d},       {"R_u", cfg.R_u},   {"R_v", cfg.R_v},   {"r_u", cfg.r_u},
        {"r_v", cfg.r_v},   {"rho1", cfg.rho1}, {"rho2", cfg.rho2}, {"v1", cfg.v1},
        {"v2", cfg.v2},     {"layer_rates", cfg.layer_rates},       {"master_seed", cfg.master_seed},
    };
}

ScenarioConfig config_from_json(const nlohmann::json& j)
{
    if (!j.is_object())
        throw ConfigError({"config must be a JSON object"});
    ScenarioConfig cfg;
    std::vector<std::string> errors;
    for (const auto& [key, value] : j.items())
    {
        if (key == "layer_rates")
        {
            if (!value.is_array())
            {
                errors.emplace_back("layer_rates must be an array");
                continue;
            }
            cfg.layer_rates.clear();
            for (const auto& r : value)
                cfg.layer_rates.push_back(rate_from_json(r, key));
        }
        else if (key == "master_seed")
        {
            if (!value.is_number_unsigned())
                errors.emplace_back("master_seed must be a nonnegative integer");
            else
                cfg.master_seed = value.get<std::uint64_t>();
        }
        else if (double* field = scalar_field(cfg, key))
        {
            if (is_rate_key(key))
                *field = rate_from_json(value, key);
            else if (value.is_number())
                *field = value.get<double>();
            else
                errors.push_back(key + " must be a number");
        }
        else
        {
            errors.push_back("unknown config key '" + key + "'");
        }
    }
    if (!errors.empty())
        throw ConfigError(std::move(errors));
    return cfg;
}

ScenarioConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError({"cannot open config file '" + path + "'"});
    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(in);
    }
    catch (const nlohmann::json::parse_error& e)
    {
        // nlohmann reports "at line L, column C" in what().
        throw ConfigError({path + ": " + e.what()});
    }
    return config_from_json(j);
}

} // namespace vstream
