#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <tuple>
#include <vector>

#include "dcp/engine.hpp"
#include "dcp/replicate.hpp"
#include "support/brute.hpp"
#include "support/stats.hpp"

using namespace dcp;

TEST_CASE("step: isolated player dies with probability 1/(1+lambda)") {
    const double lambda = 2.0;
    const int n = 40000;
    TorusGeometry geo = TorusGeometry::cubic(16, 1);
    int deaths = 0;
    for (int r = 0; r < n; ++r) {
        SimState st(Params::standard(lambda, 1.0, 1), geo, {8}, 101, static_cast<std::uint64_t>(r));
        if (st.step().kind == EventRecord::Kind::Death) ++deaths;
    }
    const double p = static_cast<double>(deaths) / n;
    const double expect = 1.0 / (1.0 + lambda);
    CHECK(std::abs(p - expect) < 4.0 * std::sqrt(expect * (1.0 - expect) / n));
}

TEST_CASE("step: hard-core adjacent pair holds for Exp(2) and then someone dies") {
    TorusGeometry geo = TorusGeometry::cubic(16, 1);
    std::vector<double> holds;
    for (int r = 0; r < 20000; ++r) {
        SimState st(Params::hard_core(3.0, 1), geo, {7, 8}, 55, static_cast<std::uint64_t>(r));
        const auto ev = st.step();
        CHECK(ev.kind == EventRecord::Kind::Death);
        holds.push_back(ev.time);
    }
    const double p = teststat::ks_test_pvalue(
        holds, [](double t) { return 1.0 - std::exp(-2.0 * t); });
    CHECK(p > 0.01);
}

TEST_CASE("step: empty lattice is absorbing") {
    TorusGeometry geo = TorusGeometry::cubic(8, 1);
    SimState st(Params::standard(1.0, 0.0, 1), geo, {}, 1, 0);
    CHECK_THROWS_AS(st.step(), AbsorbingStateError);
}

TEST_CASE("run: pure-death chain is extinct at an Exp(1) time") {
    TorusGeometry geo = TorusGeometry::cubic(8, 1);
    StopRule stop;
    stop.horizon = 100.0;
    std::vector<double> times;
    for (int r = 0; r < 20000; ++r) {
        SimState st(Params::standard(0.0, 0.0, 1), geo, {3}, 7, static_cast<std::uint64_t>(r));
        const auto out = run(st, stop);
        REQUIRE(out.reason == StopReason::Extinct);
        REQUIRE(out.extinction_time.has_value());
        CHECK(*out.extinction_time == out.final_time);
        times.push_back(out.final_time);
    }
    const double p = teststat::ks_test_pvalue(
        times, [](double t) { return 1.0 - std::exp(-t); });
    CHECK(p > 0.01);
}

TEST_CASE("run: hard-core from a single seed dies with at most two players") {
    TorusGeometry geo = TorusGeometry::cubic(64, 1);
    StopRule stop;
    stop.horizon = 1e6;
    for (int r = 0; r < 2000; ++r) {
        SimState st(Params::hard_core(2.0, 1), geo, {32}, 4242, static_cast<std::uint64_t>(r));
        const auto out = run(st, stop);
        REQUIRE(out.reason == StopReason::Extinct);
        CHECK(out.max_population <= 2);
        CHECK(out.ever_occupied_count <= static_cast<std::int64_t>(out.tallies.births) + 1);
        CHECK(out.tallies.coalescences == 0);
    }
}

TEST_CASE("run: horizon zero stops immediately with zero events") {
    TorusGeometry geo = TorusGeometry::cubic(8, 1);
    SimState st(Params::standard(2.0, 0.0, 1), geo, {3}, 9, 0);
    const auto out = run(st, StopRule::until(0.0));
    CHECK(out.reason == StopReason::Horizon);
    CHECK(out.final_time == 0.0);
    CHECK(out.event_count == 0);
}

TEST_CASE("run: conservation identities") {
    TorusGeometry geo = TorusGeometry::cubic(32, 1);
    StopRule stop;
    stop.horizon = 30.0;
    for (int r = 0; r < 200; ++r) {
        SimState st(Params::standard(3.5, -0.5, 1), geo, {16}, 31337, static_cast<std::uint64_t>(r));
        const auto out = run(st, stop);
        CHECK(out.ever_occupied_count >= out.max_population);
        CHECK(out.max_population >= st.config().occupied_count());
        CHECK(out.event_count ==
              out.tallies.births + out.tallies.deaths + out.tallies.coalescences);
        CHECK(out.event_count == st.event_count());
    }
}

TEST_CASE("determinism: identical seeds reproduce identical event sequences") {
    TorusGeometry geo = TorusGeometry::cubic(24, 2);
    auto trace = [&](EventMode mode) {
        SimState st(Params::standard(2.5, 0.8, 2), geo, {geo.site_of({12, 12})}, 2024, 3, mode);
        StopRule stop;
        stop.horizon = 8.0;
        std::vector<std::tuple<double, Site, int>> events;
        while (st.time() < 8.0 && st.config().occupied_count() > 0) {
            EventRecord ev;
            if (mode == EventMode::PlayerCentric) {
                ev = st.step();
            } else {
                TransitionIndex ti(st.config(), nullptr);
                ev = st.step_transition(ti);
            }
            events.emplace_back(ev.time, ev.site, static_cast<int>(ev.kind));
            if (events.size() > 3000) break;
        }
        return events;
    };
    CHECK(trace(EventMode::PlayerCentric) == trace(EventMode::PlayerCentric));
    CHECK(trace(EventMode::TransitionDirect) == trace(EventMode::TransitionDirect));
}

TEST_CASE("both event modes generate the same law") {
    TorusGeometry geo = TorusGeometry::cubic(48, 1);
    StopRule stop;
    stop.horizon = 50.0;
    auto extinction_times = [&](EventMode mode, std::uint64_t seed) {
        std::vector<double> ts;
        for (int r = 0; r < 4000; ++r) {
            SimState st(Params::standard(2.0, 0.5, 1), geo, {24}, seed,
                        static_cast<std::uint64_t>(r), mode);
            const auto out = run(st, stop);
            ts.push_back(out.extinction_time.value_or(50.0));
        }
        return ts;
    };
    const double p = teststat::ks_two_sample_pvalue(
        extinction_times(EventMode::PlayerCentric, 11),
        extinction_times(EventMode::TransitionDirect, 12));
    CHECK(p > 0.01);
}

TEST_CASE("transition index matches brute-force fill rates as events flow") {
    TorusGeometry geo = TorusGeometry::cubic(10, 2);
    SimState st(Params::standard(3.0, -2.0, 2), geo,
                {geo.site_of({5, 5}), geo.site_of({5, 6}), geo.site_of({6, 5})}, 77, 0,
                EventMode::TransitionDirect);
    TransitionIndex ti(st.config(), nullptr);
    for (int i = 0; i < 2000 && st.config().occupied_count() > 0; ++i) {
        st.step_transition(ti);
        if (i % 100 == 0) {
            for (Site s = 0; s < geo.num_sites(); ++s) {
                const double expect = st.config().occupied(s)
                                          ? 1.0
                                          : brute::psi(st.config(), s);
                REQUIRE(ti.weight(s) == expect);
            }
        }
    }
}

TEST_CASE("recorder samples the population on the requested grid") {
    TorusGeometry geo = TorusGeometry::cubic(32, 1);
    SimState st(Params::standard(4.0, 0.0, 1), geo, {16}, 5, 0);
    Recorder rec;
    for (double t = 0.0; t <= 10.0; t += 0.5) rec.times.push_back(t);
    std::vector<std::pair<double, std::int64_t>> rows;
    rec.on_sample = [&](const SimState& s, double t, const RunTallies&) {
        rows.emplace_back(t, s.config().occupied_count());
    };
    StopRule stop;
    stop.horizon = 10.0;
    stop.stop_on_extinction = false;
    run(st, stop);
    CHECK(rows.empty());  // recorder not attached: nothing sampled

    SimState st2(Params::standard(4.0, 0.0, 1), geo, {16}, 5, 0);
    run(st2, stop, &rec);
    REQUIRE(rows.size() == rec.times.size());
    CHECK(rows.front().first == 0.0);
    CHECK(rows.front().second == 1);
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(rows[i].first > rows[i - 1].first);
}

TEST_CASE("population cap and escape radius stop reasons") {
    TorusGeometry geo = TorusGeometry::cubic(64, 1);
    SUBCASE("cap") {
        StopRule stop;
        stop.horizon = 1e5;
        stop.population_cap = 10;
        SimState st(Params::standard(6.0, 0.0, 1), geo, {32}, 21, 4);
        const auto out = run(st, stop);
        if (out.reason == StopReason::Capped) CHECK(st.config().occupied_count() >= 10);
    }
    SUBCASE("escape") {
        StopRule stop;
        stop.horizon = 1e5;
        stop.escape_radius = 5;
        SimState st(Params::standard(8.0, 0.0, 1), geo, {0}, 22, 7);
        const auto out = run(st, stop);
        if (out.reason == StopReason::Escaped) {
            bool found = false;
            for (Site s = 0; s < geo.num_sites(); ++s)
                if (st.config().occupied(s) && geo.linf_from_origin(s) >= 5) found = true;
            CHECK(found);
        }
    }
    SUBCASE("no stop condition is rejected") {
        StopRule stop;
        stop.stop_on_extinction = false;
        SimState st(Params::standard(1.0, 0.0, 1), geo, {0}, 1, 1);
        CHECK_THROWS_AS(run(st, stop), DomainError);
    }
}

TEST_CASE("birth window suppression keeps the process inside the window") {
    TorusGeometry geo = TorusGeometry::cubic(12, 1);
    // window {-1,0,1,2} around the origin
    std::vector<Site> window;
    for (int x = -1; x <= 2; ++x) window.push_back(geo.site_of({x}));
    for (auto mode : {EventMode::PlayerCentric, EventMode::TransitionDirect}) {
        SimState st(Params::floor_rate(2.0, 4.0, 1), geo, {geo.site_of({0}), geo.site_of({1})},
                    88, 2, mode);
        st.restrict_births_to(window);
        StopRule stop;
        stop.horizon = 20.0;
        run(st, stop);
        for (Site s = 0; s < geo.num_sites(); ++s) {
            if (!st.config().occupied(s)) continue;
            bool in_window = false;
            for (Site w : window) in_window |= (w == s);
            CHECK(in_window);
        }
    }
}
