#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "vstream/config.hpp"

using namespace vstream;

namespace
{

bool mentions(const ConfigError& e, const std::string& needle)
{
    for (const auto& v : e.violations())
        if (v.find(needle) != std::string::npos)
            return true;
    return false;
}

ConfigError capture(const ScenarioConfig& cfg)
{
    try
    {
        validate_config(cfg);
    }
    catch (const ConfigError& e)
    {
        return e;
    }
    FAIL("config was accepted");
    return ConfigError({});
}

} // namespace

TEST_SUITE("config")
{
    TEST_CASE("default scenario is valid and uses SI units")
    {
        ScenarioConfig cfg;
        CHECK(config_violations(cfg).empty());
        CHECK(&validate_config(cfg) == &cfg);
        CHECK(cfg.r_u == 2e6);
        CHECK(cfg.layer_rates == std::vector<double>{537.9e3, 420.3e3, 450.5e3});
        CHECK(cfg.layers() == 3);
        CHECK(cfg.period() == doctest::Approx(2000.0 / 15.0));
    }

    TEST_CASE("ordering assumptions are enforced by name")
    {
        ScenarioConfig cfg;
        cfg.R_u = 200;
        cfg.R_v = 400;
        CHECK(mentions(capture(cfg), "R_u must exceed R_v"));

        cfg = {};
        cfg.r_v = cfg.r_u;
        CHECK(mentions(capture(cfg), "r_u must exceed r_v"));

        cfg = {};
        cfg.d = 700;
        CHECK(mentions(capture(cfg), "d must exceed 2*R_u"));
    }

    TEST_CASE("every violation is reported, not only the first")
    {
        ScenarioConfig cfg;
        cfg.rho1 = 0;
        cfg.v2 = -1;
        cfg.layer_rates.clear();
        const auto e = capture(cfg);
        CHECK(e.violations().size() >= 3);
        CHECK(mentions(e, "rho1"));
        CHECK(mentions(e, "v2"));
    }

    TEST_CASE("nonfinite and nonpositive layer rates are rejected")
    {
        ScenarioConfig cfg;
        cfg.layer_rates = {1e5, 0.0};
        CHECK_THROWS_AS(validate_config(cfg), ConfigError);
        cfg.layer_rates = {std::nan("")};
        CHECK_THROWS_AS(validate_config(cfg), ConfigError);
    }

    TEST_CASE("rate strings convert to bit/s")
    {
        CHECK(parse_rate("2Mb/s") == 2e6);
        CHECK(parse_rate("2 Mbps") == 2e6);
        CHECK(parse_rate("537.9kb/s") == doctest::Approx(537900.0));
        CHECK(parse_rate("420.3 Kbps") == doctest::Approx(420300.0));
        CHECK(parse_rate("15b/s") == 15.0);
        CHECK(parse_rate("1000") == 1000.0);
        CHECK_THROWS_AS(parse_rate("fast"), ConfigError);
        CHECK_THROWS_AS(parse_rate("Mb/s"), ConfigError);
        CHECK(parse_rate_list("1Mb/s, 500kb/s") == std::vector<double>{1e6, 5e5});
        CHECK_THROWS_AS(parse_rate_list("1,,2"), ConfigError);
        CHECK_THROWS_AS(parse_rate_list("1,"), ConfigError);
    }

    TEST_CASE("overrides touch only known keys")
    {
        ScenarioConfig cfg;
        apply_override(cfg, "d=4000");
        apply_override(cfg, "r_v=0.5Mb/s");
        apply_override(cfg, "layer_rates=1,2");
        apply_override(cfg, "master_seed=99");
        CHECK(cfg.d == 4000);
        CHECK(cfg.r_v == 5e5);
        CHECK(cfg.layer_rates == std::vector<double>{1, 2});
        CHECK(cfg.master_seed == 99);
        CHECK_THROWS_AS(apply_override(cfg, "L=3"), ConfigError);
        CHECK_THROWS_AS(apply_override(cfg, "d"), ConfigError);
        CHECK_THROWS_AS(apply_override(cfg, "d=abc"), ConfigError);
    }

    TEST_CASE("json round trip is the identity")
    {
        ScenarioConfig cfg;
        cfg.d = 6000;
        cfg.rho2 = 0.0123;
        cfg.layer_rates = {1.5e5, 2.5e5};
        cfg.master_seed = 42;
        const auto back = config_from_json(nlohmann::json::parse(to_json(cfg).dump()));
        CHECK(back == cfg);
        CHECK(validate_config(back) == cfg);
    }

    TEST_CASE("json accepts rate strings and rejects unknown keys")
    {
        auto cfg = config_from_json(nlohmann::json::parse(R"({"r_u": "3Mb/s", "layer_rates": ["100kb/s", 2e5]})"));
        CHECK(cfg.r_u == 3e6);
        CHECK(cfg.layer_rates == std::vector<double>{1e5, 2e5});
        CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"L": 3})")), ConfigError);
        CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"d": "far"})")), ConfigError);
        CHECK_THROWS_AS(config_from_json(nlohmann::json::parse("[1,2]")), ConfigError);
    }

    TEST_CASE("malformed config files report the line")
    {
        const auto path = std::filesystem::temp_directory_path() / "vstream_bad_config.json";
        {
            std::ofstream f(path);
            f << "{\n  \"d\": 2000,\n  \"R_u\": ,\n}\n";
        }
        try
        {
            load_config(path.string());
            FAIL("expected a parse error");
        }
        catch (const ConfigError& e)
        {
            CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        }
        CHECK_THROWS_AS(load_config("/nonexistent/vstream.json"), ConfigError);
        std::filesystem::remove(path);
    }
}
