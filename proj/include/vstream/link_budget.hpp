#pragma once

#include <vector>

#include "vstream/config.hpp"
#include "vstream/timeline.hpp"

// Fluid data budgets (bits) for V2I and V2V contacts. Pure functions; they do
// not validate cfg so that boundary cases outside the model can be probed.
namespace vstream
{

/// Bits the target downloads crossing RSU1 coverage alone: 2 R_u r_u / v1.
double v2i_budget_onehop(const ScenarioConfig& cfg);

/// Bits a carrier collects from RSU2 given the gap to its predecessor.
double carrier_supply(double gap, const ScenarioConfig& cfg);

/// Bits the target could pull from a one-hop carrier, ignoring supply.
double carrier_demand_onehop(double gap, const ScenarioConfig& cfg);

/// Effective one-hop contact budget. Supply never binds when R_u > R_v and
/// r_u > r_v, so this equals carrier_demand_onehop.
double carrier_budget_onehop(double gap, const ScenarioConfig& cfg);

/// Bits the target receives from RSU1 directly and through a cluster of length C_s.
double v2i_budget_cluster(double cluster_size, const ScenarioConfig& cfg);

/// min(2 R_u r_u / v2, l r_v / (v1+v2), (C_s + 2 R_v) r_v / (v1+v2)).
double carrier_budget_cluster(double gap, double cluster_size, const ScenarioConfig& cfg);

struct ContactBudget
{
    double supply = 0.0;
    double demand = 0.0;
    double effective = 0.0;

    double margin() const { return supply - demand; }
};

ContactBudget onehop_contact(double gap, const ScenarioConfig& cfg);

struct SupplyReport
{
    std::vector<ContactBudget> contacts; // one per carrier, in encounter order
    std::vector<std::size_t> violations; // 1-based carrier indices with demand > supply

    bool sufficient() const { return violations.empty(); }
    double min_margin() const;
};

/// Recomputes supply and uncapped demand for every carrier of a one-hop
/// timeline and flags any carrier whose demand exceeds its supply.
SupplyReport check_supply_sufficiency(const EncounterTimeline& tl, const ScenarioConfig& cfg);

} // namespace vstream
