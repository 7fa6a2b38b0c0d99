#include "proxval/validity.hpp"

#include <algorithm>
#include <fmt/format.h>

#include "parallel.hpp"

namespace proxval {

namespace {

void require_same_frame(const Roster& r1, const ObservationWindow& w1, const Roster& r2,
                        const ObservationWindow& w2) {
    if (!(r1 == r2)) throw std::invalid_argument("classify: roster mismatch");
    if (!(w1 == w2)) {
        throw std::invalid_argument(fmt::format("classify: window mismatch [{}, {}) vs [{}, {})", w1.t0(), w1.t_end(),
                                                w2.t0(), w2.t_end()));
    }
}

std::optional<double> ratio(std::uint64_t num, std::uint64_t den) {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ClassificationTable classify(const DyadRaster& measured, const DyadRaster& truth) {
    require_same_frame(measured.roster(), measured.window(), truth.roster(), truth.window());
    const auto r = measured.cells();
    const auto v = truth.cells();
    ClassificationTable t;
    for (std::size_t k = 0; k < r.size(); ++k) {
        // Bucket index 2R + V: 0 -> tn, 1 -> fn, 2 -> fp, 3 -> tp.
        switch ((r[k] << 1) | v[k]) {
            case 0: ++t.tn; break;
            case 1: ++t.fn; break;
            case 2: ++t.fp; break;
            default: ++t.tp; break;
        }
    }
    return t;
}

ClassificationTable classify(const EventLog& measured, const EventLog& truth) {
    require_same_frame(measured.roster(), measured.window(), truth.roster(), truth.window());
    // Both logs are sorted by (dyad, start) with disjoint per-dyad intervals,
    // so a merge walk yields per-dyad overlap.
    const auto m = measured.events();
    const auto v = truth.events();
    std::uint64_t overlap = 0;
    std::size_t i = 0, j = 0;
    while (i < m.size() && j < v.size()) {
        if (m[i].dyad != v[j].dyad) {
            if (m[i].dyad < v[j].dyad) ++i;
            else ++j;
            continue;
        }
        const Seconds lo = std::max(m[i].start, v[j].start);
        const Seconds hi = std::min(m[i].end, v[j].end);
        if (hi > lo) overlap += static_cast<std::uint64_t>(hi - lo);
        if (m[i].end < v[j].end) ++i;
        else ++j;
    }
    const auto measured_pos = static_cast<std::uint64_t>(measured.covered_seconds());
    const auto truth_pos = static_cast<std::uint64_t>(truth.covered_seconds());
    const std::uint64_t total =
        static_cast<std::uint64_t>(measured.roster().dyad_count()) * static_cast<std::uint64_t>(measured.window().seconds());
    ClassificationTable t;
    t.tp = overlap;
    t.fp = measured_pos - overlap;
    t.fn = truth_pos - overlap;
    t.tn = total - t.tp - t.fp - t.fn;
    return t;
}

ValidityMetrics metrics(const ClassificationTable& t) {
    ValidityMetrics m;
    m.sensitivity = ratio(t.tp, t.tp + t.fn);
    m.specificity = ratio(t.tn, t.tn + t.fp);
    m.accuracy = ratio(t.tp + t.tn, t.total());
    if (m.sensitivity && m.specificity) m.sum_sens_spec = *m.sensitivity + *m.specificity;
    return m;
}

SweepResult sweep_combined(const EventLog& measured, const EventLog& truth,
                           std::span<const StrategySpec> base_pipeline, StrategyKind kind,
                           std::span<const std::int64_t> values) {
    for (std::size_t k = 1; k < values.size(); ++k) {
        if (values[k] <= values[k - 1]) throw std::invalid_argument("sweep values must be strictly increasing");
    }
    std::vector<StrategySpec> specs;
    specs.reserve(values.size());
    for (auto v : values) specs.push_back(make_strategy(kind, v));

    SweepResult result{kind, classify(measured, truth), {}, {}};
    result.baseline = metrics(result.baseline_table);

    const EventLog base = apply_pipeline(measured, base_pipeline);
    result.points.resize(values.size());
    detail::parallel_for(values.size(), [&](std::size_t k) {
        const auto table = classify(apply_strategy(base, specs[k]), truth);
        result.points[k] = SweepPoint{values[k], table, metrics(table)};
    });
    return result;
}

SweepResult sweep(const EventLog& measured, const EventLog& truth, StrategyKind kind,
                  std::span<const std::int64_t> values) {
    return sweep_combined(measured, truth, {}, kind, values);
}

std::optional<SweepPoint> best_by_accuracy(const SweepResult& result) {
    std::optional<SweepPoint> best;
    for (const auto& p : result.points) {
        if (!p.metrics.accuracy) continue;
        if (!best || *p.metrics.accuracy > *best->metrics.accuracy) best = p;
    }
    return best;
}

}  // namespace proxval
