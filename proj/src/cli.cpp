#include "vstream/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "vstream/analytics.hpp"
#include "vstream/config.hpp"
#include "vstream/harness.hpp"
#include "vstream/numfmt.hpp"
#include "vstream/scheduler.hpp"
#include "vstream/traffic.hpp"

namespace vstream
{

namespace
{

const std::vector<double> kDefaultSweep{2000, 4000, 6000, 8000, 10000};

struct CommonOptions
{
    std::string config_path;
    std::vector<std::string> sets;
    std::string out_path;
    std::string format = "csv";
};

struct RunOptions
{
    std::string modes;
    std::string strategies;
    std::string d_list;
    std::size_t trials = 2000;
    std::optional<std::uint64_t> seed;
    std::size_t workers = 1;
    std::size_t trial = 0;
    std::string budgets;
    std::string intervals;
    std::string compare_path;
};

class UsageError : public std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

void add_common(CLI::App* cmd, CommonOptions& o)
{
    cmd->add_option("--config", o.config_path, "JSON scenario file");
    cmd->add_option("--set", o.sets, "KEY=VALUE override (repeatable)")->allow_extra_args(false);
    cmd->add_option("--out", o.out_path, "output file (default stdout)");
    cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

ScenarioConfig load(const CommonOptions& o)
{
    ScenarioConfig cfg = o.config_path.empty() ? ScenarioConfig{} : load_config(o.config_path);
    for (const auto& s : o.sets)
        apply_override(cfg, s);
    return cfg;
}

std::vector<std::string> split(std::string_view text)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in{std::string(text)};
    while (std::getline(in, item, ','))
        if (!item.empty())
            out.push_back(item);
    return out;
}

std::vector<Mode> modes_from(std::string_view text, std::vector<Mode> fallback)
{
    if (text.empty())
        return fallback;
    std::vector<Mode> out;
    for (const auto& s : split(text))
        out.push_back(parse_mode(s));
    return out;
}

std::vector<Strategy> strategies_from(std::string_view text, std::vector<Strategy> fallback)
{
    if (text.empty())
        return fallback;
    std::vector<Strategy> out;
    for (const auto& s : split(text))
        out.push_back(parse_strategy(s));
    return out;
}

std::vector<double> d_values(const CLI::App* cmd, const std::string& text, std::vector<double> fallback)
{
    if (cmd->count("--d") == 0)
        return fallback;
    auto ds = parse_number_list(text);
    if (ds.empty())
        throw UsageError("--d needs at least one value");
    return ds;
}

// Rewrites every floating point leaf with 9 significant digits.
void round_numbers(nlohmann::json& j)
{
    if (j.is_number_float())
    {
        const double v = j.get<double>();
        j = std::isfinite(v) ? nlohmann::json::parse(format_number(v)) : nlohmann::json(nullptr);
    }
    else if (j.is_structured())
    {
        for (auto& child : j)
            round_numbers(child);
    }
}

void emit(const CommonOptions& o, std::ostream& out, const std::function<void(std::ostream&)>& write)
{
    if (o.out_path.empty())
    {
        write(out);
        return;
    }
    std::ofstream file(o.out_path, std::ios::binary);
    if (!file)
        throw std::runtime_error("cannot open output file '" + o.out_path + "'");
    write(file);
}

void emit_json(const CommonOptions& o, std::ostream& out, nlohmann::json j)
{
    round_numbers(j);
    emit(o, out, [&](std::ostream& s) { s << j.dump(2) << '\n'; });
}

int cmd_analyze(const CLI::App* cmd, const CommonOptions& o, const RunOptions& r, std::ostream& out)
{
    const ScenarioConfig base = load(o);
    auto ds = d_values(cmd, r.d_list, kDefaultSweep);

    auto rows = nlohmann::json::array();
    std::ostringstream csv;
    csv << "d,mode,thr_analytic,cs1,cs2,cases\n";
    for (double d : ds)
    {
        ScenarioConfig cfg = base;
        cfg.d = d;
        validate_config(cfg);
        const auto th = cs_thresholds(cfg);
        const std::pair<Mode, ThroughputReport> reports[] = {
            {Mode::one_hop, throughput_onehop(cfg)},
            {Mode::cluster, throughput_cluster(cfg)},
            {Mode::relay_aided, throughput_relay_aided(cfg)},
        };
        for (const auto& [mode, rep] : reports)
        {
            auto cases = nlohmann::json::array();
            std::string case_text;
            for (const auto& c : rep.cases)
            {
                cases.push_back({{"case", c.label}, {"mass", c.mass}, {"conditional", c.conditional}});
                if (!case_text.empty())
                    case_text += ';';
                case_text += c.label + ":" + format_number(c.mass);
            }
            rows.push_back({{"d", d},
                            {"mode", to_string(mode)},
                            {"thr_analytic", rep.analytic},
                            {"cs1", th.cs1},
                            {"cs2", th.cs2},
                            {"cases", cases},
                            {"warnings", rep.warnings}});
            csv << format_number(d) << ',' << to_string(mode) << ',' << format_number(rep.analytic) << ','
                << format_number(th.cs1) << ',' << format_number(th.cs2) << ',' << case_text << '\n';
        }
    }
    if (o.format == "json")
        emit_json(o, out, rows);
    else
        emit(o, out, [&](std::ostream& s) { s << csv.str(); });
    return exit_ok;
}

int cmd_run(const CLI::App* cmd, const CommonOptions& o, const RunOptions& r, std::ostream& out, bool sweep)
{
    ExperimentSpec spec;
    spec.base = load(o);
    spec.d_values = d_values(cmd, r.d_list, sweep ? kDefaultSweep : std::vector<double>{spec.base.d});
    spec.modes = modes_from(r.modes, sweep ? spec.modes : std::vector<Mode>{Mode::one_hop});
    spec.strategies = strategies_from(r.strategies, sweep ? spec.strategies
                                                          : std::vector<Strategy>{Strategy::back_compensation});
    spec.trials = r.trials;
    spec.master_seed = r.seed.value_or(spec.base.master_seed);
    spec.workers = r.workers;
    validate_spec(spec);

    const auto rows = run_experiment(spec);
    if (o.format == "json")
        emit_json(o, out, rows_to_json(rows));
    else
        emit(o, out, [&](std::ostream& s) { write_csv(rows, s); });

    if (!r.compare_path.empty())
    {
        auto table = comparison_to_json(compare_report(rows, spec.base.layers()));
        round_numbers(table);
        std::ofstream file(r.compare_path, std::ios::binary);
        if (!file)
            throw std::runtime_error("cannot open comparison file '" + r.compare_path + "'");
        file << table.dump(2) << '\n';
    }
    return exit_ok;
}

int cmd_trace(const CommonOptions& o, const RunOptions& r, std::ostream& out)
{
    const ScenarioConfig cfg = validate_config(load(o));
    const Strategy strategy = strategies_from(r.strategies, {Strategy::back_compensation}).front();
    const std::uint64_t seed = r.seed.value_or(cfg.master_seed);

    EncounterTimeline tl;
    Mode mode = Mode::one_hop;
    const bool injected = !r.budgets.empty() || !r.intervals.empty();
    if (injected)
    {
        tl = make_injected_timeline(parse_number_list(r.budgets), parse_number_list(r.intervals));
    }
    else
    {
        mode = modes_from(r.modes, {Mode::one_hop}).front();
        RngStream rng = trial_stream(seed, cfg.d, mode, r.trial);
        tl = build_encounter_timeline(cfg, mode, rng);
    }
    const Schedule s = run_strategy(strategy, tl, cfg.layer_rates);
    const AllocationPlan plan = allocate_to_links(s, tl);
    const MetricsReport m = evaluate(s, tl);

    nlohmann::json j{
        {"config", to_json(cfg)},
        {"source", injected ? "injected" : "traffic"},
        {"mode", to_string(tl.mode)},
        {"strategy", to_string(strategy)},
        {"seed", seed},
        {"trial", r.trial},
        {"period", tl.period},
        {"cluster_size", tl.cluster_size ? nlohmann::json(*tl.cluster_size) : nlohmann::json(nullptr)},
        {"timeline", timeline_to_json(tl)},
        {"stop", to_string(s.stop)},
        {"layers", grid_to_json(s.grid)},
        {"ledger", ledger_to_json(s.ledger)},
        {"plan", plan_to_json(plan)},
        {"metrics", {{"ir", m.ir}, {"apq", m.apq}, {"aqv", m.aqv}, {"sim_throughput", m.sim_throughput}}},
    };
    emit_json(o, out, std::move(j));
    return exit_ok;
}

} // namespace

std::vector<double> parse_number_list(std::string_view text)
{
    std::vector<double> out;
    auto parse = [](std::string_view s) {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
            throw UsageError("malformed number '" + std::string(s) + "'");
        return v;
    };
    for (const auto& item : split(text))
    {
        std::vector<double> parts;
        std::string_view rest = item;
        for (auto colon = rest.find(':'); colon != std::string_view::npos; colon = rest.find(':'))
        {
            parts.push_back(parse(rest.substr(0, colon)));
            rest.remove_prefix(colon + 1);
        }
        parts.push_back(parse(rest));
        if (parts.size() == 1)
        {
            out.push_back(parts[0]);
        }
        else if (parts.size() == 3 && parts[2] > 0.0 && parts[1] >= parts[0])
        {
            const auto steps = static_cast<std::size_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
            for (std::size_t k = 0; k <= steps; ++k)
                out.push_back(parts[0] + static_cast<double>(k) * parts[2]);
        }
        else
        {
            throw UsageError("range must be start:stop:step with step > 0, got '" + item + "'");
        }
    }
    return out;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Cooperative vehicular video streaming simulator and throughput analysis", "vstream"};
    app.require_subcommand(1);

    CommonOptions common;
    RunOptions run;

    auto* analyze = app.add_subcommand("analyze", "closed-form throughput per d and mode");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo trials at one or more d values");
    auto* sweep = app.add_subcommand("sweep", "full d sweep over modes and strategies");
    auto* trace = app.add_subcommand("trace", "dump one trial as JSON: timeline, grid, ledger, allocation");

    for (auto* cmd : {analyze, simulate, sweep, trace})
        add_common(cmd, common);
    for (auto* cmd : {analyze, simulate, sweep})
        cmd->add_option("--d", run.d_list, "comma separated d values or start:stop:step");
    for (auto* cmd : {simulate, sweep, trace})
    {
        cmd->add_option("--mode", run.modes, "one-hop, cluster, relay-aided (comma separated)");
        cmd->add_option("--strategy", run.strategies, "bc, greedy (comma separated)");
        cmd->add_option("--seed", run.seed, "master seed (default: config master_seed)");
    }
    for (auto* cmd : {simulate, sweep})
    {
        cmd->add_option("--trials", run.trials, "trials per cell")->check(CLI::PositiveNumber);
        cmd->add_option("--workers", run.workers, "worker threads, 0 = all cores");
    }
    sweep->add_option("--compare", run.compare_path, "also write the cross-scheme comparison (JSON)");
    trace->add_option("--trial", run.trial, "trial index");
    trace->add_option("--budgets", run.budgets, "inject D_0..D_n (bits), bypassing traffic");
    trace->add_option("--intervals", run.intervals, "inject t_0..t_n (s), bypassing traffic");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp&)
    {
        out << app.help();
        return exit_ok;
    }
    catch (const CLI::CallForAllHelp&)
    {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    }
    catch (const CLI::ParseError& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    try
    {
        if (analyze->parsed())
            return cmd_analyze(analyze, common, run, out);
        if (simulate->parsed())
            return cmd_run(simulate, common, run, out, false);
        if (sweep->parsed())
            return cmd_run(sweep, common, run, out, true);
        return cmd_trace(common, run, out);
    }
    catch (const ConfigError& e)
    {
        err << "config error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const std::invalid_argument& e)
    {
        err << "usage error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_runtime;
    }
}

} // namespace vstream
