#include "vstream/traffic.hpp"

#include <algorithm>
#include <stdexcept>

#include "vstream/link_budget.hpp"
#include "vstream/scheduler.hpp"

namespace vstream
{

std::vector<double> sample_carrier_gaps(double rho, double horizon, RngStream& rng)
{
    if (!(rho > 0.0) || !(horizon > 0.0))
        throw std::invalid_argument("sample_carrier_gaps needs rho > 0 and horizon > 0");
    std::vector<double> gaps;
    double total = 0.0;
    while (total <= horizon)
    {
        double g = rng.exponential(rho);
        gaps.push_back(g);
        total += g;
    }
    return gaps;
}

ClusterSample sample_cluster(double rho1, double R_v, RngStream& rng)
{
    if (!(rho1 > 0.0) || !(R_v > 0.0))
        throw std::invalid_argument("sample_cluster needs rho1 > 0 and R_v > 0");
    ClusterSample c;
    auto grow = [&](std::vector<double>& side) {
        for (;;)
        {
            double g = rng.exponential(rho1);
            if (g > R_v)
                return;
            side.push_back(g);
            c.length += g;
        }
    };
    grow(c.gaps_ahead);
    grow(c.gaps_behind);
    c.vehicles = 1 + c.gaps_ahead.size() + c.gaps_behind.size();
    return c;
}

double cluster_v2i_delivered(double cluster_size, const ScenarioConfig& cfg)
{
    const double forward_cap = (2.0 * cfg.R_u * cfg.r_u + (cfg.d - 2.0 * cfg.R_u) * cfg.r_v) / cfg.v1;
    return std::min(v2i_budget_cluster(cluster_size, cfg), forward_cap);
}

EncounterTimeline build_encounter_timeline(const ScenarioConfig& cfg, Mode mode, RngStream& rng)
{
    if (mode == Mode::relay_aided)
        return relay_aided_timeline(cfg, Mode::one_hop, rng);

    validate_config(cfg);
    EncounterTimeline tl;
    tl.mode = mode;
    tl.period = cfg.period();
    const double exit_time = 2.0 * cfg.R_u / cfg.v1;
    const double vrel = cfg.relative_speed();

    double cluster = 0.0;
    if (mode == Mode::cluster)
    {
        cluster = sample_cluster(cfg.rho1, cfg.R_v, rng).length;
        tl.cluster_size = cluster;
        tl.budgets.push_back(cluster_v2i_delivered(cluster, cfg));
        // The target keeps draining the cluster relays at r_v for C_s r_u / r_v meters.
        tl.v2v_start = exit_time + cluster * cfg.r_u / cfg.r_v / cfg.v1;
    }
    else
    {
        tl.budgets.push_back(v2i_budget_onehop(cfg));
        tl.v2v_start = exit_time;
    }

    std::vector<double> meets{0.0};
    if (tl.v2v_start < tl.period)
    {
        const double horizon = (tl.period - tl.v2v_start) * vrel;
        const auto gaps = sample_carrier_gaps(cfg.rho2, horizon, rng);
        double position = 0.0;
        // The final gap crosses the horizon and is never met.
        for (std::size_t k = 0; k + 1 < gaps.size(); ++k)
        {
            position += gaps[k];
            const double meet = tl.v2v_start + position / vrel;
            if (!(meet < tl.period))
                break;
            double budget = mode == Mode::cluster ? carrier_budget_cluster(gaps[k], cluster, cfg)
                                                  : carrier_budget_onehop(gaps[k], cfg);
            // V2I at RSU2 preempts the contact at the period end.
            budget = std::min(budget, cfg.r_v * (tl.period - meet));
            if (!(meet > meets.back()))
            {
                // Gap below time resolution: fold into the previous block.
                tl.budgets.back() += budget;
                if (!tl.encounters.empty())
                    tl.encounters.back().budget += budget;
                continue;
            }
            tl.encounters.push_back({tl.encounters.size() + 1, gaps[k], meet, budget});
            tl.budgets.push_back(budget);
            meets.push_back(meet);
        }
    }

    for (std::size_t i = 0; i + 1 < meets.size(); ++i)
        tl.intervals.push_back(meets[i + 1] - meets[i]);
    tl.intervals.push_back(tl.period - meets.back());
    return tl;
}

} // namespace vstream
