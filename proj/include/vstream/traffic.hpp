#pragma once

#include <vector>

#include "vstream/config.hpp"
#include "vstream/rng.hpp"
#include "vstream/timeline.hpp"

namespace vstream
{

/// I.i.d. Exp(rho) gaps, drawn until their running sum first exceeds horizon.
/// The last gap is the one that crosses the horizon.
std::vector<double> sample_carrier_gaps(double rho, double horizon, RngStream& rng);

struct ClusterSample
{
    double length = 0.0;             // C_s, first to last vehicle
    std::size_t vehicles = 1;        // including the target
    std::vector<double> gaps_ahead;  // accepted gaps, outward from the target
    std::vector<double> gaps_behind;
};

/// Grows the cluster around the target: on each side, keep drawing Exp(rho1)
/// gaps while they are within R_v.
ClusterSample sample_cluster(double rho1, double R_v, RngStream& rng);

/// V2I budget of a cluster-based period, capped at what the cluster can
/// forward to the target before it reaches RSU2 coverage.
double cluster_v2i_delivered(double cluster_size, const ScenarioConfig& cfg);

/// Generates one period. Mode::relay_aided yields the one-hop relay baseline.
EncounterTimeline build_encounter_timeline(const ScenarioConfig& cfg, Mode mode, RngStream& rng);

} // namespace vstream
