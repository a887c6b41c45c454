#include "vstream/link_budget.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace vstream
{

double v2i_budget_onehop(const ScenarioConfig& cfg)
{
    return 2.0 * cfg.R_u * cfg.r_u / cfg.v1;
}

double carrier_supply(double gap, const ScenarioConfig& cfg)
{
    return std::min(gap, 2.0 * cfg.R_u) / cfg.v2 * cfg.r_u;
}

double carrier_demand_onehop(double gap, const ScenarioConfig& cfg)
{
    return std::min(gap, 2.0 * cfg.R_v) / (cfg.v1 + cfg.v2) * cfg.r_v;
}

double carrier_budget_onehop(double gap, const ScenarioConfig& cfg)
{
    return carrier_demand_onehop(gap, cfg);
}

double v2i_budget_cluster(double cluster_size, const ScenarioConfig& cfg)
{
    return (cluster_size + 2.0 * cfg.R_u) * cfg.r_u / cfg.v1;
}

double carrier_budget_cluster(double gap, double cluster_size, const ScenarioConfig& cfg)
{
    const double vrel = cfg.v1 + cfg.v2;
    const double supply_cap = 2.0 * cfg.R_u / cfg.v2 * cfg.r_u;
    const double gap_limit = gap / vrel * cfg.r_v;
    const double window_limit = (cluster_size + 2.0 * cfg.R_v) / vrel * cfg.r_v;
    return std::min({supply_cap, gap_limit, window_limit});
}

ContactBudget onehop_contact(double gap, const ScenarioConfig& cfg)
{
    ContactBudget c;
    c.supply = carrier_supply(gap, cfg);
    c.demand = carrier_demand_onehop(gap, cfg);
    c.effective = std::min(c.supply, c.demand);
    return c;
}

double SupplyReport::min_margin() const
{
    double m = std::numeric_limits<double>::infinity();
    for (const auto& c : contacts)
        m = std::min(m, c.margin());
    return m;
}

SupplyReport check_supply_sufficiency(const EncounterTimeline& tl, const ScenarioConfig& cfg)
{
    if (tl.mode != Mode::one_hop)
        throw std::invalid_argument("supply sufficiency applies to one-hop timelines");
    SupplyReport report;
    report.contacts.reserve(tl.encounters.size());
    for (const auto& e : tl.encounters)
    {
        auto c = onehop_contact(e.gap, cfg);
        if (c.demand > c.supply)
            report.violations.push_back(e.index);
        report.contacts.push_back(c);
    }
    return report;
}

} // namespace vstream
