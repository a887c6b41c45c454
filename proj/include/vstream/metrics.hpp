#pragma once

#include <vector>

#include "vstream/scheduler.hpp"
#include "vstream/timeline.hpp"

namespace vstream
{

struct MetricsReport
{
    double ir = 1.0;             // interruption ratio, [0, 1]
    double apq = 0.0;            // average playback quality, [0, L]
    std::size_t aqv = 0;         // quality level changes
    double sim_throughput = 0.0; // bit/s
};

/// A stretch of playback at a constant number of decodable layers.
struct QualitySegment
{
    double duration = 0.0;
    std::size_t level = 0;
};

/// Segments shorter than this are treated as rounding noise by AQV.
inline constexpr double kLevelEpsilon = 1e-9;

/// IR = 1 - sum_i fill(0, i) / T.
double interruption_ratio(const PlaybackGrid& g, double period);

/// APQ = sum_q sum_i fill(q, i) / T.
double average_playback_quality(const PlaybackGrid& g, double period);

/// Instantaneous quality over the period. Inside block i the base layer plays
/// from the block start; layer q occupies the last fill(q, i) seconds of the
/// base piece, so higher layers nest inside lower ones.
std::vector<QualitySegment> quality_profile(const PlaybackGrid& g);

/// Number of level changes of quality_profile, transitions to and from 0
/// included.
std::size_t average_quality_variation(const PlaybackGrid& g);

/// sum_i D_i / T, the V2I budget included.
double empirical_throughput(const EncounterTimeline& tl);

MetricsReport evaluate(const Schedule& s, const EncounterTimeline& tl);

} // namespace vstream
