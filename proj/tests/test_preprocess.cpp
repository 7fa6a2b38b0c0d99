#include <doctest.h>

#include "oracles.hpp"
#include "proxval/preprocess.hpp"
#include "proxval/simgen.hpp"

using namespace proxval;

namespace {

InteractionEvent ev(std::uint32_t a, std::uint32_t b, Seconds s, Seconds e) {
    return {Dyad::of(BadgeId{a}, BadgeId{b}), s, e};
}

EventLog make(std::size_t n, Seconds seconds, std::vector<InteractionEvent> raw) {
    return normalize(raw, oracle::roster_1_to(n), ObservationWindow(0, seconds));
}

std::vector<InteractionEvent> as_vector(const EventLog& log) { return {log.events().begin(), log.events().end()}; }

bool covers(const EventLog& big, const EventLog& small) {
    const auto b = oracle::membership(big), s = oracle::membership(small);
    for (std::size_t d = 0; d < b.size(); ++d)
        for (std::size_t i = 0; i < b[d].size(); ++i)
            if (s[d][i] && !b[d][i]) return false;
    return true;
}

}  // namespace

TEST_CASE("strategy specs parse and validate") {
    CHECK(parse_strategy("interpolate:75") == StrategySpec{Interpolate{75}});
    CHECK(parse_strategy("min_duration:20") == StrategySpec{MinDuration{20}});
    CHECK(parse_strategy("triadic_closure:2") == StrategySpec{TriadicClosure{2}});
    CHECK(to_string(StrategySpec{Interpolate{75}}) == "interpolate:75");
    CHECK_THROWS_AS(parse_strategy("triadic_closure:0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_strategy("interpolate:-1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_strategy("smooth:3"), std::invalid_argument);
    CHECK_THROWS_AS(parse_strategy("interpolate"), std::invalid_argument);
    CHECK(kind_of(make_strategy(StrategyKind::interpolate, 5)) == StrategyKind::interpolate);
}

TEST_CASE("min_duration_filter") {
    const EventLog log = make(3, 200, {ev(1, 2, 0, 10), ev(1, 3, 50, 80)});
    SUBCASE("cutoff 20 keeps only the 30 s event") {
        const auto out = min_duration_filter(log, 20);
        REQUIRE(out.size() == 1);
        CHECK(out.events()[0] == ev(1, 3, 50, 80));
    }
    SUBCASE("cutoff 0 is identity") { CHECK(min_duration_filter(log, 0) == log); }
    SUBCASE("cutoff equal to duration keeps the event") { CHECK(min_duration_filter(log, 10).size() == 2); }
}

TEST_CASE("min_duration_filter matches a direct scan, is idempotent and never adds seconds") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        const EventLog log = oracle::random_log(rng, 5, 400, 60, 40);
        const Seconds cutoff = std::uniform_int_distribution<Seconds>(0, 40)(rng);
        std::vector<InteractionEvent> expected;
        for (const auto& e : log.events())
            if (e.end - e.start >= cutoff) expected.push_back(e);
        const auto out = min_duration_filter(log, cutoff);
        CHECK(as_vector(out) == expected);
        CHECK(min_duration_filter(out, cutoff) == out);
        CHECK(covers(log, out));
    }
}

TEST_CASE("interpolate boundary") {
    SUBCASE("gap of exactly max_gap merges") {
        const auto out = interpolate(make(2, 100, {ev(1, 2, 0, 10), ev(1, 2, 30, 40)}), 20);
        REQUIRE(out.size() == 1);
        CHECK(out.events()[0] == ev(1, 2, 0, 40));
    }
    SUBCASE("gap of max_gap + 1 does not") {
        const auto log = make(2, 100, {ev(1, 2, 0, 10), ev(1, 2, 31, 40)});
        CHECK(interpolate(log, 20) == log);
    }
    SUBCASE("chains merge transitively") {
        const auto out = interpolate(make(2, 100, {ev(1, 2, 0, 10), ev(1, 2, 15, 20), ev(1, 2, 25, 30)}), 5);
        REQUIRE(out.size() == 1);
        CHECK(out.events()[0] == ev(1, 2, 0, 30));
    }
    SUBCASE("different dyads never merge") {
        const auto log = make(3, 100, {ev(1, 2, 0, 10), ev(1, 3, 12, 20)});
        CHECK(interpolate(log, 50) == log);
    }
}

TEST_CASE("interpolate equals raster gap filling and is idempotent and monotone") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 30; ++trial) {
        const EventLog log = oracle::random_log(rng, 4, 500, 50, 20);
        const Seconds gap = std::uniform_int_distribution<Seconds>(0, 60)(rng);
        const auto out = interpolate(log, gap);
        const auto expected = oracle::runs(oracle::fill_gaps(oracle::membership(log), gap), log.roster(), log.window());
        CHECK(as_vector(out) == expected);
        CHECK(interpolate(out, gap) == out);
        CHECK(covers(out, log));
    }
}

TEST_CASE("interpolate exactly restores truth degraded by bounded gaps") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const Roster roster = oracle::roster_1_to(4);
        // Truth events of one dyad at least 100 s apart.
        std::vector<InteractionEvent> truth_raw, degraded_raw;
        for (std::size_t d = 0; d < roster.dyad_count(); ++d) {
            Seconds t = std::uniform_int_distribution<Seconds>(0, 50)(rng);
            for (int k = 0; k < 3; ++k) {
                const Seconds len = std::uniform_int_distribution<Seconds>(5, 120)(rng);
                truth_raw.push_back({roster.dyad_at(d), t, t + len});
                // punch gaps <= 15 s strictly inside
                Seconds cursor = t;
                for (Seconds p = t + 3; p + 16 < t + len; p += 20) {
                    const Seconds g = std::uniform_int_distribution<Seconds>(1, 15)(rng);
                    degraded_raw.push_back({roster.dyad_at(d), cursor, p});
                    cursor = p + g;
                }
                degraded_raw.push_back({roster.dyad_at(d), cursor, t + len});
                t += len + 100;
            }
        }
        const ObservationWindow w(0, 1000);
        const auto truth = normalize(truth_raw, roster, w);
        const auto degraded = normalize(degraded_raw, roster, w);
        CHECK(interpolate(degraded, 15) == truth);
    }
}

TEST_CASE("triadic closure examples") {
    SUBCASE("two-path A-B, A-C adds B-C on the overlap") {
        const auto out = triadic_closure(make(3, 200, {ev(1, 2, 0, 100), ev(1, 3, 50, 150)}), 1);
        const auto expected = make(3, 200, {ev(1, 2, 0, 100), ev(1, 3, 50, 150), ev(2, 3, 50, 100)});
        CHECK(out == expected);
    }
    SUBCASE("no open two-path is identity") {
        const auto log = make(4, 100, {ev(1, 2, 0, 50), ev(3, 4, 0, 50), ev(1, 3, 60, 70)});
        CHECK(triadic_closure(log, 3) == log);
    }
    SUBCASE("star closes into a clique") {
        const auto out = triadic_closure(make(4, 100, {ev(1, 2, 10, 40), ev(1, 3, 10, 40), ev(1, 4, 10, 40)}), 2);
        CHECK(out.size() == 6);
        for (const auto& e : out.events()) {
            CHECK(e.start == 10);
            CHECK(e.end == 40);
        }
    }
    SUBCASE("one iteration is simultaneous: a path of length 3 gains two edges, not three") {
        const auto out = triadic_closure(make(4, 10, {ev(1, 2, 0, 10), ev(2, 3, 0, 10), ev(3, 4, 0, 10)}), 1);
        CHECK(out.size() == 5);
        CHECK(triadic_closure(out, 1).size() == 6);
    }
}

TEST_CASE("triadic closure equals the per-second closure oracle") {
    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 5 + trial % 3;
        const EventLog log = oracle::random_log(rng, n, 120, 25, 40);
        const int iterations = 1 + trial % 3;
        const auto out = triadic_closure(log, iterations);
        const auto expected = oracle::runs(oracle::close_triads(oracle::membership(log), n, iterations), log.roster(),
                                           log.window());
        CHECK(as_vector(out) == expected);
        CHECK(covers(out, log));
    }
}

TEST_CASE("triadic closure reaches a fixed point of complete components") {
    std::mt19937_64 rng(25);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 6;
        EventLog current = oracle::random_log(rng, n, 80, 20, 30);
        int k = 0;
        while (true) {
            auto next = triadic_closure(current, 1);
            if (next == current) break;
            current = std::move(next);
            REQUIRE(++k < 10);
        }
        CHECK(oracle::components_complete(oracle::membership(current), n));
    }
}

TEST_CASE("apply_pipeline") {
    const EventLog log = make(3, 300, {ev(1, 2, 0, 10), ev(1, 2, 20, 25), ev(1, 3, 100, 104)});
    CHECK(apply_pipeline(log, {}) == log);
    const std::vector<StrategySpec> specs{Interpolate{10}, MinDuration{20}};
    const auto out = apply_pipeline(log, specs);
    REQUIRE(out.size() == 1);
    CHECK(out.events()[0] == ev(1, 2, 0, 25));
    CHECK(apply_pipeline(make(3, 300, {}), specs).empty());
    // Order matters: deleting first removes both fragments.
    const std::vector<StrategySpec> reversed{MinDuration{20}, Interpolate{10}};
    CHECK(apply_pipeline(log, reversed).empty());
}

TEST_CASE("interpolate 75 then min_duration 55 on synthetic flicker") {
    ScenarioParams params;
    const auto scenario = random_scenario(params, 3);
    const EventLog truth = generate_truth(scenario);
    DegradationParams dp;
    dp.dropout_gap_max_s = 60;
    dp.seed = 4;
    const EventLog rfid = degrade(truth, dp);
    const std::vector<StrategySpec> best{Interpolate{75}, MinDuration{55}};
    const auto out = apply_pipeline(rfid, best);
    CHECK(out.size() < rfid.size());
    for (const auto& e : out.events()) CHECK(e.duration() >= 55);
}
