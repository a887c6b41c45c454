#include "vstream/timeline.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace vstream
{

std::string_view to_string(Mode m)
{
    switch (m)
    {
    case Mode::one_hop: return "one-hop";
    case Mode::cluster: return "cluster";
    case Mode::relay_aided: return "relay-aided";
    }
    return "unknown";
}

Mode parse_mode(std::string_view text)
{
    if (text == "one-hop" || text == "onehop")
        return Mode::one_hop;
    if (text == "cluster")
        return Mode::cluster;
    if (text == "relay-aided" || text == "relay")
        return Mode::relay_aided;
    throw std::invalid_argument("unknown mode '" + std::string(text) + "'");
}

EncounterTimeline make_injected_timeline(std::span<const double> budgets, std::span<const double> intervals)
{
    if (budgets.empty() || budgets.size() != intervals.size())
        throw std::invalid_argument("budgets and intervals must be non-empty and of equal length");
    for (double t : intervals)
        if (!(t > 0.0))
            throw std::invalid_argument("every interval must be positive");
    for (double b : budgets)
        if (!(b >= 0.0))
            throw std::invalid_argument("budgets must be nonnegative");

    EncounterTimeline tl;
    tl.budgets.assign(budgets.begin(), budgets.end());
    tl.intervals.assign(intervals.begin(), intervals.end());
    tl.period = std::accumulate(intervals.begin(), intervals.end(), 0.0);
    double t = intervals[0];
    tl.v2v_start = t;
    for (std::size_t i = 1; i < budgets.size(); ++i)
    {
        tl.encounters.push_back({i, 0.0, t, budgets[i]});
        t += intervals[i];
    }
    return tl;
}

nlohmann::json timeline_to_json(const EncounterTimeline& tl)
{
    auto out = nlohmann::json::array();
    out.push_back({{"i", 0}, {"l_i", nullptr}, {"meet_time", 0.0}, {"D_i", tl.budgets.at(0)}, {"t_i", tl.intervals.at(0)}});
    for (const auto& e : tl.encounters)
        out.push_back({{"i", e.index}, {"l_i", e.gap}, {"meet_time", e.meet_time}, {"D_i", e.budget}, {"t_i", tl.intervals.at(e.index)}});
    return out;
}

} // namespace vstream
