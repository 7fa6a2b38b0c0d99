// Flat key=value run configuration shared by every subcommand.
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "proxval/aggregate.hpp"
#include "proxval/preprocess.hpp"
#include "proxval/simgen.hpp"

namespace proxval {

struct SweepGrid {
    std::int64_t first = 0;
    std::int64_t last = 0;
    std::int64_t step = 1;

    std::vector<std::int64_t> values() const;
};

/// "first:last:step", or an explicit comma list "5,10,20".
std::vector<std::int64_t> parse_grid(std::string_view text);

struct RunConfig {
    // inputs
    std::string rfid;
    std::string truth;
    std::string nominations;
    std::string respondents;
    std::string scenario;
    std::string ratings;
    std::string roster;  // optional id list file

    // time frame; empty means inferred
    std::string date;  // YYYY-MM-DD for clock-only timestamps
    std::string window_start;
    std::string window_end;

    std::vector<StrategySpec> pipeline{Interpolate{75}, MinDuration{55}};

    std::vector<StrategyKind> sweep_kinds{StrategyKind::min_duration, StrategyKind::interpolate,
                                          StrategyKind::triadic_closure};
    std::string grid_min_duration = "5:120:5";
    std::string grid_interpolate = "5:340:5";
    std::string grid_triadic_closure = "1:4:1";
    std::vector<StrategySpec> sweep_base;

    /// Preprocessing variants compared by `regress`; an empty entry is raw data.
    std::vector<std::vector<StrategySpec>> datasets{{}, {MinDuration{20}}, {Interpolate{75}}, {TriadicClosure{1}}};
    Symmetrization symmetrize = Symmetrization::none;

    std::string out_dir = "proxval_out";
    std::uint64_t seed = 1;
    bool permissive = false;

    ScenarioParams scenario_params;
    DegradationParams degradation;
    NominationParams nominations_model;

    std::vector<std::int64_t> grid(StrategyKind kind) const;
};

/// Applies one key=value setting; throws std::invalid_argument for unknown
/// keys or bad values.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Reads a config file: one key=value per line, '#' starts a comment.
RunConfig load_config(const std::filesystem::path& path);
void apply_config_text(RunConfig& config, std::istream& in);

/// Every key except out_dir with its resolved value, one per line in a
/// fixed order, so identical runs into different directories match.
std::string format_config(const RunConfig& config);

std::string format_pipeline(const std::vector<StrategySpec>& specs);
std::vector<StrategySpec> parse_pipeline(std::string_view text);

}  // namespace proxval
