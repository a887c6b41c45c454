#include "vstream/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

#include "vstream/link_budget.hpp"
#include "vstream/traffic.hpp"

namespace vstream
{

namespace
{

void check_inputs(std::span<const double> budgets, std::span<const double> intervals,
                  std::span<const double> layer_rates)
{
    if (budgets.empty() || budgets.size() != intervals.size())
        throw std::invalid_argument("budgets and intervals must be non-empty and of equal length");
    if (layer_rates.empty())
        throw std::invalid_argument("at least one layer rate is required");
    for (double b : budgets)
        if (!(b >= 0.0))
            throw std::invalid_argument("budgets must be nonnegative");
    for (double t : intervals)
        if (!(t >= 0.0))
            throw std::invalid_argument("intervals must be nonnegative");
    for (double r : layer_rates)
        if (!(r > 0.0))
            throw std::invalid_argument("layer rates must be positive");
}

FillLedger empty_ledger(std::span<const double> budgets, std::size_t layers)
{
    FillLedger l;
    l.budgets.assign(budgets.begin(), budgets.end());
    l.remaining = l.budgets;
    l.blocks = budgets.size();
    l.cells.resize(layers * l.blocks);
    return l;
}

void credit(std::vector<Contribution>& cell, std::size_t source, double seconds)
{
    if (seconds <= 0.0)
        return;
    if (!cell.empty() && cell.back().source == source)
        cell.back().seconds += seconds;
    else
        cell.push_back({source, seconds});
}

} // namespace

std::string_view to_string(Strategy s)
{
    return s == Strategy::back_compensation ? "bc" : "greedy";
}

Strategy parse_strategy(std::string_view text)
{
    if (text == "bc" || text == "BC")
        return Strategy::back_compensation;
    if (text == "greedy" || text == "gr" || text == "Gr")
        return Strategy::greedy;
    throw std::invalid_argument("unknown strategy '" + std::string(text) + "'");
}

std::string_view to_string(StopReason r)
{
    switch (r)
    {
    case StopReason::data_exhausted: return "data_exhausted";
    case StopReason::last_block_full: return "last_block_full";
    case StopReason::layers_exhausted: return "layers_exhausted";
    }
    return "unknown";
}

PlaybackGrid::PlaybackGrid(std::span<const double> intervals, std::span<const double> layer_rates)
    : blocks_(intervals.size()), rates_(layer_rates.begin(), layer_rates.end()),
      caps_(rates_.size() * blocks_, 0.0), fills_(rates_.size() * blocks_, 0.0)
{
    std::copy(intervals.begin(), intervals.end(), caps_.begin());
}

double PlaybackGrid::period() const
{
    double t = 0.0;
    for (std::size_t i = 0; i < blocks_; ++i)
        t += interval(i);
    return t;
}

double PlaybackGrid::layer_total(std::size_t q) const
{
    double t = 0.0;
    for (std::size_t i = 0; i < blocks_; ++i)
        t += fill(q, i);
    return t;
}

Schedule bc_fill(std::span<const double> budgets, std::span<const double> intervals,
                 std::span<const double> layer_rates)
{
    check_inputs(budgets, intervals, layer_rates);
    Schedule s{PlaybackGrid(intervals, layer_rates), empty_ledger(budgets, layer_rates.size()),
               StopReason::layers_exhausted};
    auto& g = s.grid;
    auto& remaining = s.ledger.remaining;
    const std::size_t layers = g.layers();
    const std::size_t last = g.blocks() - 1;

    for (std::size_t q = 0; q < layers; ++q)
    {
        const double rate = g.rate(q);

        // Each block first takes what arrived with it.
        for (std::size_t i = 0; i <= last; ++i)
        {
            double fill;
            if (remaining[i] >= rate * g.cap(q, i))
            {
                fill = g.cap(q, i);
                remaining[i] -= rate * fill;
            }
            else
            {
                fill = remaining[i] / rate;
                remaining[i] = 0.0;
            }
            g.set_fill(q, i, fill);
            credit(s.ledger.at(q, i), i, fill);
        }

        // Interruptions are compensated from the back, each from the nearest
        // earlier leftovers first.
        for (std::size_t i = last + 1; i-- > 0;)
        {
            if (!(g.fill(q, i) < g.cap(q, i)))
                continue;
            for (std::size_t j = i; j-- > 0;)
            {
                const double missing = g.cap(q, i) - g.fill(q, i);
                if (remaining[j] >= missing * rate)
                {
                    remaining[j] -= missing * rate;
                    g.set_fill(q, i, g.cap(q, i));
                    credit(s.ledger.at(q, i), j, missing);
                    break;
                }
                const double seconds = remaining[j] / rate;
                g.set_fill(q, i, g.fill(q, i) + seconds);
                credit(s.ledger.at(q, i), j, seconds);
                remaining[j] = 0.0;
            }
        }

        if (q + 1 < layers)
            for (std::size_t i = 0; i <= last; ++i)
                g.set_cap(q + 1, i, g.fill(q, i));

        if (std::all_of(remaining.begin(), remaining.end(), [](double r) { return r == 0.0; }))
        {
            s.stop = StopReason::data_exhausted;
            break;
        }
        if (q + 1 == layers && g.fill(q, last) >= g.cap(q, last))
        {
            s.stop = StopReason::last_block_full;
            break;
        }
    }
    return s;
}

Schedule dress_right(Schedule s)
{
    auto& g = s.grid;
    auto& ledger = s.ledger;
    const std::size_t n = g.blocks();

    for (std::size_t q = 1; q < g.layers(); ++q)
    {
        // Latest-first placement of this layer's total inside the (already
        // dressed) layer below.
        double total = 0.0;
        for (std::size_t i = n; i-- > 0;)
            total += g.fill(q, i);
        std::vector<double> placed(n, 0.0);
        double left = total;
        for (std::size_t i = n; i-- > 0 && left > 0.0;)
        {
            placed[i] = std::min(g.fill(q - 1, i), left);
            left -= placed[i];
        }

        // Move ledger mass with a back-to-front monotone coupling, so every
        // second only moves to the same or a later block.
        std::vector<std::vector<Contribution>> moved(n);
        std::size_t target = n;
        double room = 0.0;
        auto next_target = [&]() {
            while (target > 0)
            {
                --target;
                if (placed[target] > 0.0)
                {
                    room = placed[target];
                    return true;
                }
            }
            return false;
        };
        bool have_target = next_target();
        std::optional<std::size_t> last_used;
        for (std::size_t i = n; i-- > 0;)
        {
            const auto& cell = ledger.at(q, i);
            for (auto it = cell.rbegin(); it != cell.rend(); ++it)
            {
                double mass = it->seconds;
                while (mass > 0.0)
                {
                    if (!have_target || target < i)
                    {
                        // Only rounding residue gets here; keep it at or after its block.
                        moved[last_used.value_or(i)].push_back({it->source, mass});
                        break;
                    }
                    const double take = std::min(mass, room);
                    moved[target].push_back({it->source, take});
                    last_used = target;
                    mass -= take;
                    room -= take;
                    if (room <= 0.0)
                        have_target = next_target();
                }
            }
        }

        for (std::size_t i = 0; i < n; ++i)
        {
            auto& cell = ledger.at(q, i);
            cell.clear();
            for (auto it = moved[i].rbegin(); it != moved[i].rend(); ++it)
                credit(cell, it->source, it->seconds);
            g.set_cap(q, i, g.fill(q - 1, i));
            g.set_fill(q, i, placed[i]);
        }
    }
    return s;
}

Schedule bc_schedule(std::span<const double> budgets, std::span<const double> intervals,
                     std::span<const double> layer_rates)
{
    return dress_right(bc_fill(budgets, intervals, layer_rates));
}

Schedule greedy_schedule(std::span<const double> budgets, std::span<const double> intervals,
                         std::span<const double> layer_rates)
{
    check_inputs(budgets, intervals, layer_rates);
    Schedule s{PlaybackGrid(intervals, layer_rates), empty_ledger(budgets, layer_rates.size()),
               StopReason::layers_exhausted};
    auto& g = s.grid;

    struct Stock
    {
        std::size_t source;
        double bits;
    };
    std::deque<Stock> stock; // oldest data is spent first

    for (std::size_t i = 0; i < g.blocks(); ++i)
    {
        if (budgets[i] > 0.0)
            stock.push_back({i, budgets[i]});
        for (std::size_t q = 0; q < g.layers(); ++q)
        {
            const double rate = g.rate(q);
            if (q > 0)
                g.set_cap(q, i, g.fill(q - 1, i));
            double want = g.cap(q, i);
            double filled = 0.0;
            while (want > 0.0 && !stock.empty())
            {
                auto& front = stock.front();
                if (front.bits >= want * rate)
                {
                    front.bits -= want * rate;
                    credit(s.ledger.at(q, i), front.source, want);
                    filled += want;
                    want = 0.0;
                    if (front.bits == 0.0)
                        stock.pop_front();
                }
                else
                {
                    const double seconds = front.bits / rate;
                    credit(s.ledger.at(q, i), front.source, seconds);
                    filled += seconds;
                    want -= seconds;
                    stock.pop_front();
                }
            }
            // Keep the fill bit-exact at capacity when the block was satisfied.
            g.set_fill(q, i, want == 0.0 ? g.cap(q, i) : filled);
        }
    }

    std::fill(s.ledger.remaining.begin(), s.ledger.remaining.end(), 0.0);
    for (const auto& st : stock)
        s.ledger.remaining[st.source] += st.bits;
    bool spent = std::all_of(s.ledger.remaining.begin(), s.ledger.remaining.end(), [](double r) { return r == 0.0; });
    s.stop = spent ? StopReason::data_exhausted : StopReason::layers_exhausted;
    return s;
}

Schedule run_strategy(Strategy st, const EncounterTimeline& tl, std::span<const double> layer_rates)
{
    return st == Strategy::back_compensation ? bc_schedule(tl.budgets, tl.intervals, layer_rates)
                                             : greedy_schedule(tl.budgets, tl.intervals, layer_rates);
}

EncounterTimeline relay_aided_timeline(const ScenarioConfig& cfg, Mode variant, RngStream& rng)
{
    validate_config(cfg);
    EncounterTimeline tl;
    tl.mode = Mode::relay_aided;
    tl.period = cfg.period();
    tl.v2v_start = tl.period;
    if (variant == Mode::cluster)
    {
        const double cs = sample_cluster(cfg.rho1, cfg.R_v, rng).length;
        tl.cluster_size = cs;
        tl.budgets.push_back(cluster_v2i_delivered(cs, cfg));
    }
    else
    {
        tl.budgets.push_back(v2i_budget_onehop(cfg));
    }
    tl.intervals.push_back(tl.period);
    return tl;
}

std::vector<std::string> schedule_violations(const Schedule& s, double tol)
{
    std::vector<std::string> out;
    const auto& g = s.grid;
    const auto& l = s.ledger;
    auto where = [](const char* what, std::size_t q, std::size_t i) {
        return std::string(what) + " at layer " + std::to_string(q) + ", block " + std::to_string(i);
    };
    for (std::size_t q = 0; q < g.layers(); ++q)
    {
        for (std::size_t i = 0; i < g.blocks(); ++i)
        {
            const double f = g.fill(q, i);
            if (f < 0.0 || f > g.cap(q, i) + tol)
                out.push_back(where("fill outside [0, cap]", q, i));
            if (q > 0 && g.cap(q, i) != g.fill(q - 1, i))
                out.push_back(where("capacity differs from fill of the layer below", q, i));
            if (q > 0 && f > g.fill(q - 1, i) + tol)
                out.push_back(where("hierarchy broken", q, i));
            double credited = 0.0;
            for (const auto& c : l.at(q, i))
            {
                if (c.source > i)
                    out.push_back(where("non-causal contribution", q, i));
                credited += c.seconds;
            }
            if (std::abs(credited - f) > tol * std::max(1.0, f))
                out.push_back(where("ledger disagrees with fill", q, i));
        }
    }
    double supplied = 0.0, used = 0.0;
    for (std::size_t j = 0; j < l.budgets.size(); ++j)
    {
        supplied += l.budgets[j];
        used += l.remaining[j];
        if (l.remaining[j] < 0.0)
            out.push_back("negative remaining budget at source " + std::to_string(j));
    }
    for (std::size_t q = 0; q < g.layers(); ++q)
        for (std::size_t i = 0; i < g.blocks(); ++i)
            for (const auto& c : l.at(q, i))
                used += c.seconds * g.rate(q);
    if (std::abs(supplied - used) > tol * std::max(1.0, supplied))
        out.emplace_back("ledger does not conserve budgets");
    return out;
}

double AllocationPlan::total_bits() const
{
    return std::accumulate(source_totals.begin(), source_totals.end(), 0.0);
}

AllocationPlan allocate_to_links(const Schedule& s, const EncounterTimeline& tl)
{
    const auto& g = s.grid;
    const auto& l = s.ledger;
    if (l.budgets.size() != tl.budgets.size() || g.blocks() != tl.budgets.size())
        throw std::invalid_argument("ledger and timeline disagree on the number of sources");

    AllocationPlan plan;
    plan.source_totals.assign(l.budgets.size(), 0.0);
    double offset = 0.0;
    for (std::size_t i = 0; i < g.blocks(); ++i)
    {
        for (std::size_t q = 0; q < g.layers(); ++q)
        {
            for (const auto& c : l.at(q, i))
            {
                if (c.source >= l.budgets.size() || c.source > i)
                    throw std::invalid_argument("ledger references a source that cannot serve this block");
                const double bits = c.seconds * g.rate(q);
                plan.ranges.push_back({c.source, q, i, offset, bits});
                plan.source_totals[c.source] += bits;
                offset += bits;
            }
        }
    }

    for (std::size_t j = 0; j < l.budgets.size(); ++j)
    {
        const double budget = tl.budgets[j];
        const double spent = budget - l.remaining[j];
        if (l.budgets[j] != budget || l.remaining[j] < 0.0 ||
            std::abs(plan.source_totals[j] - spent) > 1e-9 * std::max(1.0, budget))
            throw std::invalid_argument("ledger violates conservation at source " + std::to_string(j));
    }
    return plan;
}

nlohmann::json grid_to_json(const PlaybackGrid& g)
{
    auto layers = nlohmann::json::array();
    for (std::size_t q = 0; q < g.layers(); ++q)
    {
        auto row = nlohmann::json::array();
        for (std::size_t i = 0; i < g.blocks(); ++i)
            row.push_back({{"cap", g.cap(q, i)}, {"fill", g.fill(q, i)}});
        layers.push_back(std::move(row));
    }
    return layers;
}

nlohmann::json ledger_to_json(const FillLedger& l)
{
    auto cells = nlohmann::json::array();
    const std::size_t layers = l.blocks == 0 ? 0 : l.cells.size() / l.blocks;
    for (std::size_t q = 0; q < layers; ++q)
    {
        auto row = nlohmann::json::array();
        for (std::size_t i = 0; i < l.blocks; ++i)
        {
            auto cell = nlohmann::json::array();
            for (const auto& c : l.at(q, i))
                cell.push_back({{"source", c.source}, {"seconds", c.seconds}});
            row.push_back(std::move(cell));
        }
        cells.push_back(std::move(row));
    }
    return {{"contributions", cells}, {"budgets", l.budgets}, {"remaining", l.remaining}};
}

nlohmann::json plan_to_json(const AllocationPlan& p)
{
    auto out = nlohmann::json::array();
    for (const auto& r : p.ranges)
        out.push_back({{"source", r.source},
                       {"layer", r.layer},
                       {"block", r.block},
                       {"offset_bytes", r.offset_bits / 8.0},
                       {"bytes", r.bits / 8.0}});
    return out;
}

} // namespace vstream
