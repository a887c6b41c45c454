#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace vstream
{

// All quantities are SI: meters, seconds, bits, bit/s, vehicles/m.
struct ScenarioConfig
{
    double d = 2000.0;       // inter-RSU distance
    double R_u = 400.0;      // RSU radio range
    double R_v = 200.0;      // vehicle radio range
    double r_u = 2.0e6;      // V2I rate
    double r_v = 1.0e6;      // V2V rate
    double rho1 = 0.007;     // target-direction density
    double rho2 = 0.005;     // carrier-direction density
    double v1 = 15.0;        // target-direction speed
    double v2 = 20.0;        // carrier-direction speed
    std::vector<double> layer_rates{537.9e3, 420.3e3, 450.5e3};
    std::uint64_t master_seed = 1;

    std::size_t layers() const { return layer_rates.size(); }
    double period() const { return d / v1; }
    double relative_speed() const { return v1 + v2; }

    bool operator==(const ScenarioConfig&) const = default;
};

/// Thrown by validate_config; what() joins every violated invariant.
class ConfigError : public std::runtime_error
{
  public:
    explicit ConfigError(std::vector<std::string> violations);

    const std::vector<std::string>& violations() const { return violations_; }

  private:
    std::vector<std::string> violations_;
};

/// Returns every violated invariant, empty when the config is usable.
std::vector<std::string> config_violations(const ScenarioConfig& cfg);

/// Returns cfg unchanged when valid, throws ConfigError otherwise.
const ScenarioConfig& validate_config(const ScenarioConfig& cfg);

/// Parses a rate such as "2Mb/s", "537.9kb/s", "1e6" or "800b/s" into bit/s.
double parse_rate(std::string_view text);

/// Parses a comma separated list of rates.
std::vector<double> parse_rate_list(std::string_view text);

/// Applies a single KEY=VALUE override. Rate keys accept unit suffixes.
void apply_override(ScenarioConfig& cfg, std::string_view assignment);

nlohmann::json to_json(const ScenarioConfig& cfg);

/// Strict: unknown keys are rejected. Missing keys keep their defaults.
ScenarioConfig config_from_json(const nlohmann::json& j);

/// Reads a JSON config file. Parse errors carry line/column information.
ScenarioConfig load_config(const std::string& path);

} // namespace vstream
