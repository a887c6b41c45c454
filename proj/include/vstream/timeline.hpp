#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace vstream
{

enum class Mode
{
    one_hop,
    cluster,
    relay_aided,
};

std::string_view to_string(Mode m);
Mode parse_mode(std::string_view text);

/// One opposite-direction carrier met during the V2V phase.
struct CarrierEncounter
{
    std::size_t index = 0;  // 1-based, V_i
    double gap = 0.0;       // l_i, distance to the previous carrier (m)
    double meet_time = 0.0; // seconds from period start
    double budget = 0.0;    // D_i (bits)
};

/// Data budgets D_0..D_n and playback intervals t_0..t_n for one period.
struct EncounterTimeline
{
    Mode mode = Mode::one_hop;
    double period = 0.0;                 // T
    std::vector<double> budgets;         // D_0..D_n
    std::vector<double> intervals;       // t_0..t_n
    std::vector<CarrierEncounter> encounters;
    std::optional<double> cluster_size;  // C_s, cluster-based timelines only
    double v2v_start = 0.0;              // instant the V2V phase may begin

    std::size_t carriers() const { return encounters.size(); }
};

/// Builds a timeline from injected budgets and intervals (no carrier geometry).
/// Throws std::invalid_argument when lengths differ, an interval is not
/// positive, or a budget is negative.
EncounterTimeline make_injected_timeline(std::span<const double> budgets, std::span<const double> intervals);

/// Array of {i, l_i, meet_time, D_i, t_i}; entry 0 is the V2I budget.
nlohmann::json timeline_to_json(const EncounterTimeline& tl);

} // namespace vstream
