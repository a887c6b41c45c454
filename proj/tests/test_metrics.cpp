#include "doctest.h"
#include "support.hpp"
#include "vstream/harness.hpp"
#include "vstream/metrics.hpp"
#include "vstream/scheduler.hpp"

using namespace vstream;
using namespace vstream::testing;

TEST_SUITE("metrics")
{
    TEST_CASE("hand-trace metrics")
    {
        const std::vector<double> b{25, 4, 10}, t{10, 10, 10}, rates{1, 1};
        const auto tl = make_injected_timeline(b, t);
        const auto bc = evaluate(bc_schedule(b, t, rates), tl);
        CHECK(bc.ir == 0.0);
        CHECK(bc.apq == doctest::Approx(1.3));
        CHECK(bc.aqv == 1);
        CHECK(bc.sim_throughput == doctest::Approx(39.0 / 30.0));

        const auto gr = evaluate(greedy_schedule(b, t, rates), tl);
        CHECK(gr.ir == doctest::Approx(1.0 / 30.0));
        CHECK(gr.aqv == 3);
    }

    TEST_CASE("extreme grids")
    {
        const std::vector<double> t{2, 3}, rates{1, 1, 1};
        PlaybackGrid empty(t, rates);
        CHECK(interruption_ratio(empty, 5) == 1.0);
        CHECK(average_playback_quality(empty, 5) == 0.0);
        CHECK(average_quality_variation(empty) == 0);

        const auto full = bc_schedule(std::vector<double>{100, 100}, t, rates);
        CHECK(interruption_ratio(full.grid, 5) == 0.0);
        CHECK(average_playback_quality(full.grid, 5) == doctest::Approx(3.0));
        CHECK(average_quality_variation(full.grid) == 0);
    }

    TEST_CASE("quality profile tiles the period")
    {
        RngStream rng(71, 0);
        for (int k = 0; k < 1000; ++k)
        {
            const auto in = random_instance(rng, 8, 4, false);
            const auto s = bc_schedule(in.budgets, in.intervals, in.rates);
            double total = 0.0, layered = 0.0;
            for (const auto& seg : quality_profile(s.grid))
            {
                REQUIRE(seg.level <= in.rates.size());
                total += seg.duration;
                layered += seg.duration * static_cast<double>(seg.level);
            }
            const double T = s.grid.period();
            REQUIRE(total == doctest::Approx(T));
            REQUIRE(layered / T == doctest::Approx(average_playback_quality(s.grid, T)));
        }
    }

    TEST_CASE("report ranges and identities on random instances")
    {
        RngStream rng(73, 0);
        for (int k = 0; k < 2000; ++k)
        {
            const auto in = random_instance(rng, 8, 4, k % 2 == 0);
            const auto tl = make_injected_timeline(in.budgets, in.intervals);
            for (auto strategy : {Strategy::back_compensation, Strategy::greedy})
            {
                const auto s = run_strategy(strategy, tl, in.rates);
                const auto m = evaluate(s, tl);
                const double T = tl.period;
                REQUIRE(m.ir >= -1e-12);
                REQUIRE(m.ir <= 1.0);
                REQUIRE(m.apq >= 0.0);
                REQUIRE(m.apq <= static_cast<double>(in.rates.size()) + 1e-12);
                REQUIRE(m.ir + s.grid.layer_total(0) / T == doctest::Approx(1.0));
                if (m.ir < 1.0)
                    REQUIRE(m.apq >= 1.0 - m.ir - 1e-12);
            }
        }
    }

    TEST_CASE("more fill never lowers playback quality")
    {
        RngStream rng(79, 0);
        for (int k = 0; k < 1000; ++k)
        {
            const auto in = random_instance(rng, 6, 3, false);
            auto g = bc_schedule(in.budgets, in.intervals, in.rates).grid;
            const double T = g.period();
            const double before = average_playback_quality(g, T);
            const auto q = static_cast<std::size_t>(draw_int(rng, 0, static_cast<std::int64_t>(g.layers()) - 1));
            const auto i = static_cast<std::size_t>(draw_int(rng, 0, static_cast<std::int64_t>(g.blocks()) - 1));
            g.set_fill(q, i, g.cap(q, i));
            REQUIRE(average_playback_quality(g, T) >= before);
        }
    }

    TEST_CASE("empirical throughput counts every budget")
    {
        const std::vector<double> b{100, 50, 30}, t{1, 2, 2};
        CHECK(empirical_throughput(make_injected_timeline(b, t)) == doctest::Approx(36.0));
        const std::vector<double> z{0, 0}, t2{3, 4};
        CHECK(empirical_throughput(make_injected_timeline(z, t2)) == 0.0);

        ScenarioConfig cfg;
        const auto m = run_trial(cfg, Mode::relay_aided, Strategy::back_compensation, RngStream(1, 1));
        CHECK(m.sim_throughput == doctest::Approx(0.8e6).epsilon(1e-12));
    }
}
