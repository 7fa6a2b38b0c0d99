// Second-level agreement between a measured contact stream and ground truth.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "proxval/core.hpp"
#include "proxval/preprocess.hpp"

namespace proxval {

/// Confusion counts in dyad-seconds; measured is the "test", truth the reference.
struct ClassificationTable {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tn = 0;

    std::uint64_t total() const { return tp + fp + fn + tn; }
    friend bool operator==(const ClassificationTable&, const ClassificationTable&) = default;
};

/// Ratios with an empty denominator are nullopt, never coerced to 0 or 1.
struct ValidityMetrics {
    std::optional<double> sensitivity;   // tp / (tp + fn)
    std::optional<double> specificity;   // tn / (tn + fp)
    std::optional<double> accuracy;      // (tp + tn) / total
    std::optional<double> sum_sens_spec;
};

/// Throws std::invalid_argument when the rasters differ in roster or window.
ClassificationTable classify(const DyadRaster& measured, const DyadRaster& truth);

/// Interval-based equivalent of classify(rasterize(measured), rasterize(truth)).
ClassificationTable classify(const EventLog& measured, const EventLog& truth);

ValidityMetrics metrics(const ClassificationTable& table);

struct SweepPoint {
    std::int64_t value = 0;
    ClassificationTable table;
    ValidityMetrics metrics;
};

struct SweepResult {
    StrategyKind kind;
    ClassificationTable baseline_table;  // unprocessed measured vs truth
    ValidityMetrics baseline;
    std::vector<SweepPoint> points;      // strictly increasing value
};

/// Applies `kind` at each value to measured and scores it against truth.
/// Values must be strictly increasing and valid for kind. Points are
/// evaluated in parallel; output order follows values.
SweepResult sweep(const EventLog& measured, const EventLog& truth, StrategyKind kind,
                  std::span<const std::int64_t> values);

/// As sweep, with base_pipeline applied before the swept strategy.
SweepResult sweep_combined(const EventLog& measured, const EventLog& truth,
                           std::span<const StrategySpec> base_pipeline, StrategyKind kind,
                           std::span<const std::int64_t> values);

/// Point with the highest accuracy; earliest value wins ties. nullopt when empty.
std::optional<SweepPoint> best_by_accuracy(const SweepResult& result);

}  // namespace proxval
