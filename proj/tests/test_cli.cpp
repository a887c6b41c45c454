#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "vstream/cli.hpp"
#include "vstream/harness.hpp"

using namespace vstream;
namespace fs = std::filesystem;

namespace
{

struct Result
{
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    args.insert(args.begin(), "vstream");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

fs::path scratch(const std::string& name)
{
    return fs::temp_directory_path() / ("vstream_cli_" + name);
}

const std::vector<std::string> kHandTrace{"trace",     "--budgets",   "25,4,10", "--intervals",
                                          "10,10,10", "--set",       "layer_rates=1,1"};

} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("number lists")
    {
        CHECK(parse_number_list("2000,4000") == std::vector<double>{2000, 4000});
        CHECK(parse_number_list("2000:10000:2000") == std::vector<double>{2000, 4000, 6000, 8000, 10000});
        CHECK(parse_number_list("1:2:0.5,7") == std::vector<double>{1, 1.5, 2, 7});
        CHECK(parse_number_list("").empty());
        CHECK_THROWS_AS(parse_number_list("abc"), std::invalid_argument);
        CHECK_THROWS_AS(parse_number_list("5:1:1"), std::invalid_argument);
        CHECK_THROWS_AS(parse_number_list("1:2"), std::invalid_argument);
    }

    TEST_CASE("help and missing subcommand")
    {
        const auto help = run({"--help"});
        CHECK(help.code == exit_ok);
        CHECK(help.out.find("simulate") != std::string::npos);
        CHECK(run({}).code == exit_usage);
        CHECK(run({"fly"}).code == exit_usage);
    }

    TEST_CASE("analyze prints one row per d and mode")
    {
        const auto r = run({"analyze"});
        REQUIRE(r.code == exit_ok);
        std::istringstream in(r.out);
        std::string line;
        std::vector<std::string> lines;
        while (std::getline(in, line))
            lines.push_back(line);
        REQUIRE(lines.size() == 16);
        CHECK(lines[0] == "d,mode,thr_analytic,cs1,cs2,cases");
        CHECK(lines[1].rfind("2000,one-hop,1318", 0) == 0);
        CHECK(lines[13].rfind("10000,one-hop,955", 0) == 0);

        const auto j = nlohmann::json::parse(run({"analyze", "--d", "4000", "--format", "json"}).out);
        REQUIRE(j.size() == 3);
        CHECK(j[1]["mode"] == "cluster");
        double mass = 0.0;
        for (const auto& c : j[1]["cases"])
            mass += c["mass"].get<double>();
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
    }

    TEST_CASE("usage and config errors exit with 2")
    {
        CHECK(run({"analyze", "--d", ""}).code == exit_usage);
        CHECK(run({"analyze", "--d", "2000,x"}).code == exit_usage);
        CHECK(run({"simulate", "--mode", "teleport"}).code == exit_usage);
        CHECK(run({"simulate", "--strategy", "lazy"}).code == exit_usage);
        CHECK(run({"simulate", "--trials", "0"}).code == exit_usage);
        CHECK(run({"simulate", "--format", "xml"}).code == exit_usage);
        CHECK(run({"analyze", "--set", "R_v=500"}).code == exit_usage);
        CHECK(run({"analyze", "--set", "L=4"}).code == exit_usage);
        CHECK(run({"analyze", "--d", "600"}).code == exit_usage);

        const auto bad = scratch("bad.json");
        {
            std::ofstream f(bad);
            f << "{\n  \"d\": 4000\n  \"R_u\": 400\n}\n";
        }
        const auto r = run({"analyze", "--config", bad.string()});
        CHECK(r.code == exit_usage);
        CHECK(r.err.find("line 3") != std::string::npos);
        fs::remove(bad);
    }

    TEST_CASE("runtime failures exit with 1")
    {
        const auto r = run({"analyze", "--out", "/nonexistent-dir/x.csv"});
        CHECK(r.code == exit_runtime);
        CHECK_FALSE(r.err.empty());
    }

    TEST_CASE("config file and overrides")
    {
        const auto path = scratch("cfg.json");
        {
            std::ofstream f(path);
            f << R"({"d": 4000, "r_v": "0.5Mb/s"})";
        }
        const auto a = run({"analyze", "--config", path.string()});
        const auto b = run({"analyze", "--set", "d=4000", "--set", "r_v=500kb/s"});
        CHECK(a.code == exit_ok);
        CHECK(a.out == b.out);
        CHECK(a.out != run({"analyze"}).out);
        // simulate defaults to the configured d
        const auto sim = run({"simulate", "--config", path.string(), "--trials", "3"});
        CHECK(sim.out.find("\n4000,one-hop,bc,3,") != std::string::npos);
        fs::remove(path);
    }

    TEST_CASE("simulate is reproducible and matches the harness")
    {
        const auto p1 = scratch("sim1.csv"), p2 = scratch("sim2.csv");
        const std::vector<std::string> args{"simulate", "--trials", "30", "--seed", "4", "--mode", "cluster"};
        auto a1 = args, a2 = args;
        a1.insert(a1.end(), {"--out", p1.string()});
        a2.insert(a2.end(), {"--out", p2.string(), "--workers", "3"});
        REQUIRE(run(a1).code == exit_ok);
        REQUIRE(run(a2).code == exit_ok);
        CHECK(slurp(p1) == slurp(p2));

        ExperimentSpec spec;
        spec.d_values = {2000};
        spec.modes = {Mode::cluster};
        spec.strategies = {Strategy::back_compensation};
        spec.trials = 30;
        spec.master_seed = 4;
        std::ostringstream direct;
        write_csv(run_experiment(spec), direct);
        CHECK(slurp(p1) == direct.str());
        fs::remove(p1);
        fs::remove(p2);
    }

    TEST_CASE("sweep writes the comparison table")
    {
        const auto cmp = scratch("cmp.json");
        const auto r = run({"sweep", "--trials", "10", "--d", "2000,4000", "--compare", cmp.string(), "--format",
                            "json"});
        REQUIRE(r.code == exit_ok);
        CHECK(nlohmann::json::parse(r.out).size() == 12);
        const auto j = nlohmann::json::parse(slurp(cmp));
        CHECK(j["rows"].size() == 2);
        CHECK(j["checks"].contains("apq_ordering"));
        fs::remove(cmp);
    }

    TEST_CASE("trace of the hand-trace fixture matches the golden file")
    {
        const auto r = run(kHandTrace);
        REQUIRE(r.code == exit_ok);
        const auto golden = slurp(fs::path(VSTREAM_TEST_DATA) / "trace_hand.json");
        CHECK(r.out == golden);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["layers"][1][2]["fill"] == 9);
        CHECK(j["metrics"]["apq"] == 1.3);
        CHECK(j["metrics"]["aqv"] == 1);
    }

    TEST_CASE("simulated traces reproduce and relay-aided uses one source")
    {
        const std::vector<std::string> args{"trace", "--mode", "cluster", "--trial", "7", "--strategy", "greedy"};
        const auto a = run(args);
        REQUIRE(a.code == exit_ok);
        CHECK(a.out == run(args).out);
        CHECK(nlohmann::json::parse(a.out)["cluster_size"].is_number());

        const auto relay = nlohmann::json::parse(run({"trace", "--mode", "relay-aided"}).out);
        for (const auto& range : relay["plan"])
            CHECK(range["source"] == 0);
        CHECK(run({"trace", "--budgets", "1,2", "--intervals", "1"}).code == exit_usage);
    }
}
