#include <doctest.h>

#include "oracles.hpp"
#include "proxval/simgen.hpp"
#include "proxval/validity.hpp"

using namespace proxval;

namespace {

DyadRaster raster_of(const Roster& roster, const ObservationWindow& w, const oracle::Grid& g) {
    DyadRaster r(roster, w);
    for (std::size_t d = 0; d < g.size(); ++d)
        for (std::size_t s = 0; s < g[d].size(); ++s) r.set(d, s, g[d][s]);
    return r;
}

}  // namespace

TEST_CASE("classify single-dyad example") {
    const Roster roster = oracle::roster_1_to(2);
    const ObservationWindow w(0, 4);
    const auto r = raster_of(roster, w, {{1, 1, 0, 0}});
    const auto v = raster_of(roster, w, {{1, 0, 1, 0}});
    CHECK(classify(r, v) == ClassificationTable{1, 1, 1, 1});
    const auto same = classify(r, r);
    CHECK(same.fp == 0);
    CHECK(same.fn == 0);
}

TEST_CASE("classify rejects mismatched frames") {
    const DyadRaster a(oracle::roster_1_to(3), ObservationWindow(0, 10));
    CHECK_THROWS_AS(classify(a, DyadRaster(oracle::roster_1_to(4), ObservationWindow(0, 10))), std::invalid_argument);
    CHECK_THROWS_AS(classify(a, DyadRaster(oracle::roster_1_to(3), ObservationWindow(0, 11))), std::invalid_argument);
}

TEST_CASE("raster and interval classification agree with the exhaustive count") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        const EventLog m = oracle::random_log(rng, 5, 300, 30, 50);
        const EventLog t = normalize(oracle::random_raw_events(rng, m.roster(), m.window(), 30, 50), m.roster(), m.window());
        const auto expected = oracle::count_cells(oracle::membership(m), oracle::membership(t));
        const auto by_raster = classify(rasterize(m), rasterize(t));
        CHECK(by_raster == ClassificationTable{expected.tp, expected.fp, expected.fn, expected.tn});
        CHECK(classify(m, t) == by_raster);

        // Swapping roles swaps fp and fn and keeps accuracy.
        const auto swapped = classify(t, m);
        CHECK(swapped.fp == by_raster.fn);
        CHECK(swapped.fn == by_raster.fp);
        CHECK(*metrics(swapped).accuracy == doctest::Approx(*metrics(by_raster).accuracy));
    }
}

TEST_CASE("metrics reproduce the reference classification tables") {
    const auto initial = metrics(ClassificationTable{25326, 6086, 25674, 196025});
    CHECK(std::abs(*initial.sensitivity - 0.497) <= 0.0005);
    CHECK(std::abs(*initial.specificity - 0.970) <= 0.0005);
    CHECK(std::abs(*initial.accuracy - 0.875) <= 0.0005);

    const auto interpolated = metrics(ClassificationTable{33446, 10638, 17554, 191473});
    CHECK(std::abs(*interpolated.sensitivity - 0.656) <= 0.0005);
    CHECK(std::abs(*interpolated.specificity - 0.947) <= 0.0005);
    CHECK(std::abs(*interpolated.accuracy - 0.889) <= 0.0005);
    CHECK(*interpolated.sum_sens_spec == doctest::Approx(*interpolated.sensitivity + *interpolated.specificity));
}

TEST_CASE("metrics with empty denominators are undefined, not zero") {
    const auto m = metrics(ClassificationTable{0, 0, 0, 10});
    CHECK_FALSE(m.sensitivity.has_value());
    CHECK(*m.specificity == 1.0);
    CHECK(*m.accuracy == 1.0);
    CHECK_FALSE(m.sum_sens_spec.has_value());
    CHECK_FALSE(metrics(ClassificationTable{}).accuracy.has_value());
}

TEST_CASE("metrics are scale free") {
    const ClassificationTable t{7, 3, 5, 41};
    const ClassificationTable k{70, 30, 50, 410};
    CHECK(*metrics(t).sensitivity == doctest::Approx(*metrics(k).sensitivity));
    CHECK(*metrics(t).specificity == doctest::Approx(*metrics(k).specificity));
    CHECK(*metrics(t).accuracy == doctest::Approx(*metrics(k).accuracy));
}

namespace {

struct SyntheticStudy {
    EventLog truth;
    EventLog rfid;
};

SyntheticStudy synthetic(Seconds gap_max, Seconds quantum, std::uint64_t seed) {
    const auto truth = generate_truth(random_scenario(ScenarioParams{}, seed));
    DegradationParams dp;
    dp.dropout_gap_max_s = gap_max;
    dp.dropout_gap_mean_s = 25;
    dp.dropout_rate_per_min = 1.5;
    dp.min_quantum_s = quantum;
    dp.seed = seed + 100;
    return {truth, degrade(truth, dp)};
}

}  // namespace

TEST_CASE("sweep basics") {
    const auto study = synthetic(40, 10, 5);
    const std::vector<std::int64_t> zero{0};
    const auto r = sweep(study.rfid, study.truth, StrategyKind::min_duration, zero);
    REQUIRE(r.points.size() == 1);
    CHECK(r.points[0].table == r.baseline_table);

    const std::vector<std::int64_t> bad{10, 5};
    CHECK_THROWS_AS(sweep(study.rfid, study.truth, StrategyKind::interpolate, bad), std::invalid_argument);
    const std::vector<std::int64_t> invalid{0};
    CHECK_THROWS_AS(sweep(study.rfid, study.truth, StrategyKind::triadic_closure, invalid), std::invalid_argument);

    const auto empty = sweep(study.rfid, study.truth, StrategyKind::interpolate, {});
    CHECK(empty.points.empty());
    CHECK_FALSE(best_by_accuracy(empty).has_value());
}

TEST_CASE("interpolate sweep peaks at exact recovery once the grid passes the injected gap") {
    const auto study = synthetic(40, 0, 6);
    std::vector<std::int64_t> values;
    for (std::int64_t v = 5; v <= 150; v += 5) values.push_back(v);
    const auto r = sweep(study.rfid, study.truth, StrategyKind::interpolate, values);
    double previous_sensitivity = 0.0;
    for (const auto& p : r.points) {
        CHECK(*p.metrics.sensitivity >= previous_sensitivity);
        previous_sensitivity = *p.metrics.sensitivity;
        if (p.value >= 40) {
            CHECK(*p.metrics.accuracy == 1.0);
        }
    }
    CHECK(*r.baseline.accuracy < 1.0);
}

TEST_CASE("min_duration sweep sensitivity is non-increasing") {
    const auto study = synthetic(40, 10, 7);
    std::vector<std::int64_t> values;
    for (std::int64_t v = 5; v <= 120; v += 5) values.push_back(v);
    const auto r = sweep(study.rfid, study.truth, StrategyKind::min_duration, values);
    double previous = 1.0;
    for (const auto& p : r.points) {
        CHECK(*p.metrics.sensitivity <= previous);
        previous = *p.metrics.sensitivity;
    }
}

TEST_CASE("closure sweep on fixed-point data is flat") {
    const auto truth = generate_truth(random_scenario(ScenarioParams{}, 8));
    const std::vector<std::int64_t> iterations{1, 2, 3, 4};
    const auto r = sweep(truth, truth, StrategyKind::triadic_closure, iterations);
    for (const auto& p : r.points) CHECK(p.table == r.baseline_table);
}

TEST_CASE("sweep_combined") {
    const auto study = synthetic(40, 10, 9);
    const std::vector<std::int64_t> values{10, 30, 55};
    SUBCASE("empty base equals sweep") {
        const auto a = sweep_combined(study.rfid, study.truth, {}, StrategyKind::min_duration, values);
        const auto b = sweep(study.rfid, study.truth, StrategyKind::min_duration, values);
        for (std::size_t k = 0; k < values.size(); ++k) CHECK(a.points[k].table == b.points[k].table);
    }
    SUBCASE("base pipeline is applied first") {
        const std::vector<StrategySpec> base{Interpolate{75}};
        const auto a = sweep_combined(study.rfid, study.truth, base, StrategyKind::min_duration, values);
        for (std::size_t k = 0; k < values.size(); ++k) {
            const auto expected = classify(min_duration_filter(interpolate(study.rfid, 75), values[k]), study.truth);
            CHECK(a.points[k].table == expected);
        }
    }
    SUBCASE("closure iterations after deletion cover monotonically more seconds") {
        const std::vector<StrategySpec> base{MinDuration{20}};
        const std::vector<std::int64_t> its{1, 2, 3, 4};
        const auto a = sweep_combined(study.rfid, study.truth, base, StrategyKind::triadic_closure, its);
        std::uint64_t previous = 0;
        for (const auto& p : a.points) {
            CHECK(p.table.tp + p.table.fp >= previous);
            previous = p.table.tp + p.table.fp;
        }
    }
}
