#include "vstream/metrics.hpp"

#include <algorithm>

namespace vstream
{

double interruption_ratio(const PlaybackGrid& g, double period)
{
    return 1.0 - g.layer_total(0) / period;
}

double average_playback_quality(const PlaybackGrid& g, double period)
{
    double filled = 0.0;
    for (std::size_t q = 0; q < g.layers(); ++q)
        filled += g.layer_total(q);
    return filled / period;
}

std::vector<QualitySegment> quality_profile(const PlaybackGrid& g)
{
    std::vector<QualitySegment> out;
    auto emit = [&](double duration, std::size_t level) {
        if (duration <= 0.0)
            return;
        if (!out.empty() && out.back().level == level)
            out.back().duration += duration;
        else
            out.push_back({duration, level});
    };
    const std::size_t L = g.layers();
    for (std::size_t i = 0; i < g.blocks(); ++i)
    {
        for (std::size_t q = 0; q < L; ++q)
        {
            const double upper = g.fill(q, i);
            const double lower = q + 1 < L ? g.fill(q + 1, i) : 0.0;
            emit(std::max(0.0, upper - lower), q + 1);
        }
        emit(std::max(0.0, g.interval(i) - g.fill(0, i)), 0);
    }
    return out;
}

std::size_t average_quality_variation(const PlaybackGrid& g)
{
    std::size_t changes = 0;
    bool have = false;
    std::size_t level = 0;
    for (const auto& seg : quality_profile(g))
    {
        if (seg.duration < kLevelEpsilon)
            continue;
        if (have && seg.level != level)
            ++changes;
        level = seg.level;
        have = true;
    }
    return changes;
}

double empirical_throughput(const EncounterTimeline& tl)
{
    double total = 0.0;
    for (double b : tl.budgets)
        total += b;
    return total / tl.period;
}

MetricsReport evaluate(const Schedule& s, const EncounterTimeline& tl)
{
    MetricsReport m;
    m.ir = interruption_ratio(s.grid, tl.period);
    m.apq = average_playback_quality(s.grid, tl.period);
    m.aqv = average_quality_variation(s.grid);
    m.sim_throughput = empirical_throughput(tl);
    return m;
}

} // namespace vstream
