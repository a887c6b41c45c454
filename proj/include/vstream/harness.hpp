#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <vector>

#include "json.hpp"
#include "vstream/config.hpp"
#include "vstream/metrics.hpp"
#include "vstream/rng.hpp"
#include "vstream/scheduler.hpp"
#include "vstream/timeline.hpp"

namespace vstream
{

struct ExperimentSpec
{
    ScenarioConfig base;
    std::vector<double> d_values{2000, 4000, 6000, 8000, 10000};
    std::vector<Mode> modes{Mode::one_hop, Mode::cluster, Mode::relay_aided};
    std::vector<Strategy> strategies{Strategy::back_compensation, Strategy::greedy};
    std::size_t trials = 2000;
    std::uint64_t master_seed = 1;
    std::size_t workers = 1; // 0 picks the hardware concurrency
};

/// Throws ConfigError naming every problem with the spec or its sweep points.
void validate_spec(const ExperimentSpec& spec);

/// Stream of one trial. Strategy is not part of the key: both strategies see
/// the same traffic, which makes per-trial comparisons paired.
RngStream trial_stream(std::uint64_t master_seed, double d, Mode mode, std::size_t trial);

struct TrialOutcome
{
    EncounterTimeline timeline;
    Schedule schedule;
    MetricsReport metrics;
};

/// traffic -> scheduler -> metrics for one period.
TrialOutcome run_trial_detailed(const ScenarioConfig& cfg, Mode mode, Strategy strategy, RngStream rng);
MetricsReport run_trial(const ScenarioConfig& cfg, Mode mode, Strategy strategy, RngStream rng);

/// Per-trial reports of one (d, mode, strategy) cell, ordered by trial index.
std::vector<MetricsReport> run_cell(const ScenarioConfig& cfg, Mode mode, Strategy strategy, std::size_t trials,
                                    std::uint64_t master_seed, std::size_t workers = 1);

struct Summary
{
    double mean = 0.0;
    double ci = 0.0; // 95% normal half-width; 0 when only one trial ran
};

Summary summarize(const std::vector<double>& xs);

struct AggregateRow
{
    double d = 0.0;
    Mode mode = Mode::one_hop;
    Strategy strategy = Strategy::back_compensation;
    std::size_t trials = 0;
    Summary ir, apq, aqv, thr_sim;
    std::optional<double> thr_analytic;
    std::optional<double> rel_err;
};

AggregateRow aggregate(const ScenarioConfig& cfg, Mode mode, Strategy strategy,
                       const std::vector<MetricsReport>& reports);

/// Closed-form throughput for a mode at cfg.d.
double analytic_throughput(const ScenarioConfig& cfg, Mode mode);

/// Rows ordered by (d, mode, strategy) as listed in the spec.
std::vector<AggregateRow> run_experiment(const ExperimentSpec& spec);

inline constexpr const char* kCsvHeader =
    "d,mode,strategy,trials,ir_mean,ir_ci,apq_mean,apq_ci,aqv_mean,aqv_ci,thr_sim_mean,thr_sim_ci,thr_analytic,rel_err";

void write_csv(const std::vector<AggregateRow>& rows, std::ostream& out);
nlohmann::json rows_to_json(const std::vector<AggregateRow>& rows);

/// Cross-scheme view at one d. Maps are keyed by mode.
struct ComparisonRow
{
    double d = 0.0;
    std::map<Mode, double> ir_bc, ir_greedy, apq_bc, apq_greedy, aqv_bc, aqv_greedy, thr_sim, thr_analytic;
};

struct ComparisonTable
{
    std::vector<ComparisonRow> rows;
    bool ir_bc_cooperative_small = true; // IR(BC) <= ir_threshold for one-hop and cluster
    bool ir_bc_not_above_greedy = true;
    bool apq_ordering = true;            // cluster >= one-hop >= relay-aided (BC)
    bool aqv_bc_bounded = true;          // mean AQV(BC) <= L
    bool aqv_greedy_grows = true;        // greedy AQV nondecreasing in d
    double ir_threshold = 0.01;
};

/// Throws std::invalid_argument when groups do not share the same d grid or
/// fewer than two (mode, strategy) groups are present.
ComparisonTable compare_report(const std::vector<AggregateRow>& rows, std::size_t layers);

nlohmann::json comparison_to_json(const ComparisonTable& t);

} // namespace vstream
