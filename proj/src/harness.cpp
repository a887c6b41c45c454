#include "vstream/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <set>
#include <stdexcept>
#include <thread>

#include "vstream/analytics.hpp"
#include "vstream/numfmt.hpp"
#include "vstream/traffic.hpp"

namespace vstream
{

void validate_spec(const ExperimentSpec& spec)
{
    std::vector<std::string> errors;
    if (spec.trials < 1)
        errors.emplace_back("trials must be at least 1");
    if (spec.d_values.empty())
        errors.emplace_back("sweep needs at least one d value");
    if (spec.modes.empty())
        errors.emplace_back("at least one mode is required");
    if (spec.strategies.empty())
        errors.emplace_back("at least one strategy is required");
    for (double d : spec.d_values)
    {
        ScenarioConfig cfg = spec.base;
        cfg.d = d;
        for (auto& v : config_violations(cfg))
            errors.push_back("d=" + format_number(d) + ": " + v);
    }
    if (!errors.empty())
        throw ConfigError(std::move(errors));
}

RngStream trial_stream(std::uint64_t master_seed, double d, Mode mode, std::size_t trial)
{
    return RngStream(master_seed,
                     derive_stream_id({std::bit_cast<std::uint64_t>(d), static_cast<std::uint64_t>(mode),
                                       static_cast<std::uint64_t>(trial)}));
}

TrialOutcome run_trial_detailed(const ScenarioConfig& cfg, Mode mode, Strategy strategy, RngStream rng)
{
    TrialOutcome out;
    out.timeline = build_encounter_timeline(cfg, mode, rng);
    out.schedule = run_strategy(strategy, out.timeline, cfg.layer_rates);
    out.metrics = evaluate(out.schedule, out.timeline);
    return out;
}

MetricsReport run_trial(const ScenarioConfig& cfg, Mode mode, Strategy strategy, RngStream rng)
{
    return run_trial_detailed(cfg, mode, strategy, std::move(rng)).metrics;
}

std::vector<MetricsReport> run_cell(const ScenarioConfig& cfg, Mode mode, Strategy strategy, std::size_t trials,
                                    std::uint64_t master_seed, std::size_t workers)
{
    validate_config(cfg);
    std::vector<MetricsReport> reports(trials);
    if (workers == 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, std::max<std::size_t>(trials, 1));

    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (std::size_t k = next++; k < trials; k = next++)
            reports[k] = run_trial(cfg, mode, strategy, trial_stream(master_seed, cfg.d, mode, k));
    };
    if (workers <= 1)
    {
        work();
        return reports;
    }
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back(work);
    pool.clear();
    return reports;
}

Summary summarize(const std::vector<double>& xs)
{
    Summary s;
    if (xs.empty())
        return s;
    double sum = 0.0;
    for (double x : xs)
        sum += x;
    s.mean = sum / static_cast<double>(xs.size());
    if (xs.size() < 2)
        return s;
    double ss = 0.0;
    for (double x : xs)
        ss += (x - s.mean) * (x - s.mean);
    const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    s.ci = 1.96 * sd / std::sqrt(static_cast<double>(xs.size()));
    return s;
}

double analytic_throughput(const ScenarioConfig& cfg, Mode mode)
{
    switch (mode)
    {
    case Mode::one_hop: return throughput_onehop(cfg).analytic;
    case Mode::cluster: return throughput_cluster(cfg).analytic;
    case Mode::relay_aided: return throughput_relay_aided(cfg).analytic;
    }
    return 0.0;
}

AggregateRow aggregate(const ScenarioConfig& cfg, Mode mode, Strategy strategy,
                       const std::vector<MetricsReport>& reports)
{
    AggregateRow row;
    row.d = cfg.d;
    row.mode = mode;
    row.strategy = strategy;
    row.trials = reports.size();
    std::vector<double> ir, apq, aqv, thr;
    for (const auto& m : reports)
    {
        ir.push_back(m.ir);
        apq.push_back(m.apq);
        aqv.push_back(static_cast<double>(m.aqv));
        thr.push_back(m.sim_throughput);
    }
    row.ir = summarize(ir);
    row.apq = summarize(apq);
    row.aqv = summarize(aqv);
    row.thr_sim = summarize(thr);
    const double analytic = analytic_throughput(cfg, mode);
    row.thr_analytic = analytic;
    if (analytic > 0.0)
        row.rel_err = std::abs(row.thr_sim.mean - analytic) / analytic;
    return row;
}

std::vector<AggregateRow> run_experiment(const ExperimentSpec& spec)
{
    validate_spec(spec);
    std::vector<AggregateRow> rows;
    for (double d : spec.d_values)
    {
        ScenarioConfig cfg = spec.base;
        cfg.d = d;
        for (Mode mode : spec.modes)
            for (Strategy strategy : spec.strategies)
                rows.push_back(aggregate(cfg, mode, strategy,
                                         run_cell(cfg, mode, strategy, spec.trials, spec.master_seed, spec.workers)));
    }
    return rows;
}

void write_csv(const std::vector<AggregateRow>& rows, std::ostream& out)
{
    out << kCsvHeader << '\n';
    auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
    for (const auto& r : rows)
    {
        out << format_number(r.d) << ',' << to_string(r.mode) << ',' << to_string(r.strategy) << ',' << r.trials << ','
            << format_number(r.ir.mean) << ',' << format_number(r.ir.ci) << ',' << format_number(r.apq.mean) << ','
            << format_number(r.apq.ci) << ',' << format_number(r.aqv.mean) << ',' << format_number(r.aqv.ci) << ','
            << format_number(r.thr_sim.mean) << ',' << format_number(r.thr_sim.ci) << ',' << opt(r.thr_analytic)
            << ',' << opt(r.rel_err) << '\n';
    }
}

nlohmann::json rows_to_json(const std::vector<AggregateRow>& rows)
{
    // Numbers go through format_number so JSON and CSV agree digit for digit.
    auto num = [](double v) {
        return std::isfinite(v) ? nlohmann::json::parse(format_number(v)) : nlohmann::json(nullptr);
    };
    auto opt = [&](const std::optional<double>& v) { return v ? num(*v) : nlohmann::json(nullptr); };
    auto out = nlohmann::json::array();
    for (const auto& r : rows)
    {
        out.push_back({{"d", num(r.d)},
                       {"mode", to_string(r.mode)},
                       {"strategy", to_string(r.strategy)},
                       {"trials", r.trials},
                       {"ir_mean", num(r.ir.mean)},
                       {"ir_ci", num(r.ir.ci)},
                       {"apq_mean", num(r.apq.mean)},
                       {"apq_ci", num(r.apq.ci)},
                       {"aqv_mean", num(r.aqv.mean)},
                       {"aqv_ci", num(r.aqv.ci)},
                       {"thr_sim_mean", num(r.thr_sim.mean)},
                       {"thr_sim_ci", num(r.thr_sim.ci)},
                       {"thr_analytic", opt(r.thr_analytic)},
                       {"rel_err", opt(r.rel_err)}});
    }
    return out;
}

ComparisonTable compare_report(const std::vector<AggregateRow>& rows, std::size_t layers)
{
    std::map<std::pair<Mode, Strategy>, std::set<double>> grids;
    for (const auto& r : rows)
        grids[{r.mode, r.strategy}].insert(r.d);
    if (grids.size() < 2)
        throw std::invalid_argument("comparison needs at least two (mode, strategy) groups");
    const auto& reference = grids.begin()->second;
    for (const auto& [key, ds] : grids)
        if (ds != reference)
            throw std::invalid_argument("groups were run on different d grids");

    ComparisonTable t;
    for (double d : reference)
    {
        ComparisonRow c;
        c.d = d;
        for (const auto& r : rows)
        {
            if (r.d != d)
                continue;
            if (r.strategy == Strategy::back_compensation)
            {
                c.ir_bc[r.mode] = r.ir.mean;
                c.apq_bc[r.mode] = r.apq.mean;
                c.aqv_bc[r.mode] = r.aqv.mean;
            }
            else
            {
                c.ir_greedy[r.mode] = r.ir.mean;
                c.apq_greedy[r.mode] = r.apq.mean;
                c.aqv_greedy[r.mode] = r.aqv.mean;
            }
            c.thr_sim[r.mode] = r.thr_sim.mean;
            if (r.thr_analytic)
                c.thr_analytic[r.mode] = *r.thr_analytic;
        }
        t.rows.push_back(std::move(c));
    }

    for (std::size_t k = 0; k < t.rows.size(); ++k)
    {
        const auto& c = t.rows[k];
        for (Mode m : {Mode::one_hop, Mode::cluster})
            if (c.ir_bc.count(m) && c.ir_bc.at(m) > t.ir_threshold)
                t.ir_bc_cooperative_small = false;
        for (const auto& [m, ir] : c.ir_bc)
            if (c.ir_greedy.count(m) && ir > c.ir_greedy.at(m))
                t.ir_bc_not_above_greedy = false;
        auto apq = [&](Mode m) { return c.apq_bc.count(m) ? std::optional<double>(c.apq_bc.at(m)) : std::nullopt; };
        auto cl = apq(Mode::cluster), oh = apq(Mode::one_hop), ra = apq(Mode::relay_aided);
        if ((cl && oh && *cl < *oh) || (oh && ra && *oh < *ra) || (cl && ra && *cl < *ra))
            t.apq_ordering = false;
        for (const auto& [m, aqv] : c.aqv_bc)
            if (aqv > static_cast<double>(layers))
                t.aqv_bc_bounded = false;
        if (k > 0)
            for (const auto& [m, aqv] : c.aqv_greedy)
                if (t.rows[k - 1].aqv_greedy.count(m) && aqv < t.rows[k - 1].aqv_greedy.at(m))
                    t.aqv_greedy_grows = false;
    }
    return t;
}

nlohmann::json comparison_to_json(const ComparisonTable& t)
{
    auto by_mode = [](const std::map<Mode, double>& m) {
        nlohmann::json j = nlohmann::json::object();
        for (const auto& [mode, v] : m)
            j[std::string(to_string(mode))] = nlohmann::json::parse(format_number(v));
        return j;
    };
    auto rows = nlohmann::json::array();
    for (const auto& c : t.rows)
        rows.push_back({{"d", c.d},
                        {"ir_bc", by_mode(c.ir_bc)},
                        {"ir_greedy", by_mode(c.ir_greedy)},
                        {"apq_bc", by_mode(c.apq_bc)},
                        {"apq_greedy", by_mode(c.apq_greedy)},
                        {"aqv_bc", by_mode(c.aqv_bc)},
                        {"aqv_greedy", by_mode(c.aqv_greedy)},
                        {"thr_sim", by_mode(c.thr_sim)},
                        {"thr_analytic", by_mode(c.thr_analytic)}});
    return {{"rows", rows},
            {"checks",
             {{"ir_bc_cooperative_small", t.ir_bc_cooperative_small},
              {"ir_bc_not_above_greedy", t.ir_bc_not_above_greedy},
              {"apq_ordering", t.apq_ordering},
              {"aqv_bc_bounded", t.aqv_bc_bounded},
              {"aqv_greedy_grows", t.aqv_greedy_grows},
              {"ir_threshold", t.ir_threshold}}}};
}

} // namespace vstream
