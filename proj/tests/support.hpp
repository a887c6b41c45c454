#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "vstream/rng.hpp"

namespace vstream::testing
{

inline bool close_rel(double a, double b, double rel)
{
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

/// Integer in [lo, hi] from a stream.
inline std::int64_t draw_int(RngStream& rng, std::int64_t lo, std::int64_t hi)
{
    return lo + static_cast<std::int64_t>(rng.next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
}

struct Instance
{
    std::vector<double> budgets;
    std::vector<double> intervals;
    std::vector<double> rates;
};

/// Small scheduling instance. With `integral` set, every quantity is a small
/// integer and rates are 1, so all arithmetic stays exact in double.
inline Instance random_instance(RngStream& rng, std::size_t max_blocks, std::size_t max_layers, bool integral)
{
    Instance in;
    const auto blocks = static_cast<std::size_t>(draw_int(rng, 1, static_cast<std::int64_t>(max_blocks)));
    const auto layers = static_cast<std::size_t>(draw_int(rng, 1, static_cast<std::int64_t>(max_layers)));
    for (std::size_t i = 0; i < blocks; ++i)
    {
        // A third of the budgets are zero so interruptions actually occur.
        const bool empty = draw_int(rng, 0, 2) == 0;
        if (integral)
        {
            in.budgets.push_back(empty ? 0.0 : static_cast<double>(draw_int(rng, 0, 40)));
            in.intervals.push_back(static_cast<double>(draw_int(rng, 1, 15)));
        }
        else
        {
            in.budgets.push_back(empty ? 0.0 : 40.0 * rng.uniform_open());
            in.intervals.push_back(0.1 + 15.0 * rng.uniform_open());
        }
    }
    for (std::size_t q = 0; q < layers; ++q)
        in.rates.push_back(integral ? 1.0 : 0.25 + 2.0 * rng.uniform_open());
    return in;
}

/// Largest causal base-layer fill, by enumerating every cut of the
/// source-to-block transport network: a cut keeps a set S of blocks on the
/// sink side and must then also cut every source that can reach S.
inline double max_causal_fill_bruteforce(const std::vector<double>& budgets, const std::vector<double>& intervals,
                                         double rate)
{
    const std::size_t n = intervals.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask)
    {
        double cut = 0.0;
        std::size_t reach = 0; // sources 0..reach-1 feed some block in S
        for (std::size_t i = 0; i < n; ++i)
        {
            if (mask & (1u << i))
                reach = i + 1;
            else
                cut += intervals[i];
        }
        for (std::size_t j = 0; j < reach; ++j)
            cut += budgets[j] / rate;
        best = std::min(best, cut);
    }
    return best;
}

/// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> a, std::vector<double> b)
{
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    while (i < a.size() && j < b.size())
    {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x)
            ++i;
        while (j < b.size() && b[j] <= x)
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

/// Critical value of the two-sample KS test at significance 0.01.
inline double ks_critical_001(std::size_t na, std::size_t nb)
{
    const double n = static_cast<double>(na), m = static_cast<double>(nb);
    return 1.628 * std::sqrt((n + m) / (n * m));
}

struct MeanSe
{
    double mean = 0.0;
    double se = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& xs)
{
    const double n = static_cast<double>(xs.size());
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : xs)
        ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

} // namespace vstream::testing
