#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "vstream/config.hpp"
#include "vstream/rng.hpp"
#include "vstream/timeline.hpp"

namespace vstream
{

enum class Strategy
{
    back_compensation,
    greedy,
};

std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view text);

/// L x (n+1) buffer blocks. Layer indices are 0-based (layer 0 is the base
/// layer); block i spans playback interval t_i.
///
/// Invariants kept by every scheduler in this module:
///   0 <= fill(q,i) <= cap(q,i), cap(0,i) = t_i, cap(q+1,i) = fill(q,i).
class PlaybackGrid
{
  public:
    PlaybackGrid() = default;
    PlaybackGrid(std::span<const double> intervals, std::span<const double> layer_rates);

    std::size_t layers() const { return rates_.size(); }
    std::size_t blocks() const { return blocks_; }
    double rate(std::size_t q) const { return rates_[q]; }
    const std::vector<double>& layer_rates() const { return rates_; }

    double cap(std::size_t q, std::size_t i) const { return caps_[q * blocks_ + i]; }
    double fill(std::size_t q, std::size_t i) const { return fills_[q * blocks_ + i]; }
    void set_cap(std::size_t q, std::size_t i, double v) { caps_[q * blocks_ + i] = v; }
    void set_fill(std::size_t q, std::size_t i, double v) { fills_[q * blocks_ + i] = v; }

    /// Wall-clock length of block i (the base-layer capacity).
    double interval(std::size_t i) const { return cap(0, i); }
    double period() const;
    double layer_total(std::size_t q) const;

    bool operator==(const PlaybackGrid&) const = default;

  private:
    std::size_t blocks_ = 0;
    std::vector<double> rates_;
    std::vector<double> caps_;
    std::vector<double> fills_;
};

/// Seconds of layer q in block i paid for by budget D_source.
struct Contribution
{
    std::size_t source = 0;
    double seconds = 0.0;

    bool operator==(const Contribution&) const = default;
};

/// Where every filled second came from, and what is left of each budget.
struct FillLedger
{
    std::vector<double> budgets;   // D_j
    std::vector<double> remaining; // D_j^R after scheduling
    std::size_t blocks = 0;
    std::vector<std::vector<Contribution>> cells; // layer-major, layers * blocks

    const std::vector<Contribution>& at(std::size_t q, std::size_t i) const { return cells[q * blocks + i]; }
    std::vector<Contribution>& at(std::size_t q, std::size_t i) { return cells[q * blocks + i]; }

    bool operator==(const FillLedger&) const = default;
};

enum class StopReason
{
    data_exhausted,  // every D_i^R reached zero
    last_block_full, // block (L, n) is full
    layers_exhausted,
};

struct Schedule
{
    PlaybackGrid grid;
    FillLedger ledger;
    StopReason stop = StopReason::layers_exhausted;
};

/// Back Compensation filling passes (own-block fill, then back-to-front gap
/// compensation, layer by layer) without the final dress-right pass.
Schedule bc_fill(std::span<const double> budgets, std::span<const double> intervals,
                 std::span<const double> layer_rates);

/// Right-aligns every enhancement layer inside the layer beneath it. Per-layer
/// totals, causality and hierarchy are preserved; the base layer is untouched.
Schedule dress_right(Schedule s);

/// Full Back Compensation: bc_fill followed by dress_right.
Schedule bc_schedule(std::span<const double> budgets, std::span<const double> intervals,
                     std::span<const double> layer_rates);

/// Baseline: spend each D_i (plus carried-over surplus) on block i only,
/// layer by layer. Surplus carries forward; nothing is compensated backward.
Schedule greedy_schedule(std::span<const double> budgets, std::span<const double> intervals,
                         std::span<const double> layer_rates);

Schedule run_strategy(Strategy s, const EncounterTimeline& tl, std::span<const double> layer_rates);

/// Relay baseline: the target only receives while connected to an RSU, directly
/// or (variant == Mode::cluster) through its same-direction cluster.
EncounterTimeline relay_aided_timeline(const ScenarioConfig& cfg, Mode variant, RngStream& rng);

/// Returns human readable descriptions of every broken grid/ledger invariant.
std::vector<std::string> schedule_violations(const Schedule& s, double tolerance = 1e-9);

/// A contiguous piece of the scheduled stream handed to one source.
struct LinkRange
{
    std::size_t source = 0; // 0 = RSU1, i = carrier V_i
    std::size_t layer = 0;
    std::size_t block = 0;
    double offset_bits = 0.0;
    double bits = 0.0;
};

struct AllocationPlan
{
    std::vector<LinkRange> ranges;     // playback order: block, then layer
    std::vector<double> source_totals; // bits per source

    double total_bits() const;
};

/// Serializes the schedule into playback-ordered ranges of the stream and
/// assigns each to the link that delivers it. Throws std::invalid_argument
/// when the ledger does not conserve the timeline's budgets.
AllocationPlan allocate_to_links(const Schedule& s, const EncounterTimeline& tl);

nlohmann::json grid_to_json(const PlaybackGrid& g);
nlohmann::json ledger_to_json(const FillLedger& l);
nlohmann::json plan_to_json(const AllocationPlan& p);
std::string_view to_string(StopReason r);

} // namespace vstream
