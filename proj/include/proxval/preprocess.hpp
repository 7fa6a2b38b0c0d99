// Signal-repair strategies for badge contact streams. Each is a pure
// EventLog -> EventLog transform.
#pragma once

#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "proxval/core.hpp"

namespace proxval {

enum class StrategyKind { min_duration, interpolate, triadic_closure };

struct MinDuration {
    Seconds cutoff = 0;
    friend bool operator==(const MinDuration&, const MinDuration&) = default;
};
struct Interpolate {
    Seconds max_gap = 0;
    friend bool operator==(const Interpolate&, const Interpolate&) = default;
};
struct TriadicClosure {
    int iterations = 1;
    friend bool operator==(const TriadicClosure&, const TriadicClosure&) = default;
};

using StrategySpec = std::variant<MinDuration, Interpolate, TriadicClosure>;

StrategyKind kind_of(const StrategySpec& spec);
std::string_view to_string(StrategyKind kind);
StrategyKind parse_strategy_kind(std::string_view name);

/// Builds and validates a spec from a kind and its single parameter.
StrategySpec make_strategy(StrategyKind kind, std::int64_t value);

/// "interpolate:75", "min_duration:20", "triadic_closure:1".
StrategySpec parse_strategy(std::string_view text);
std::string to_string(const StrategySpec& spec);

/// Drops events shorter than cutoff (duration < cutoff).
EventLog min_duration_filter(const EventLog& log, Seconds cutoff);

/// Merges consecutive same-dyad events whose end-to-start gap is at most
/// max_gap. Chains merge transitively.
EventLog interpolate(const EventLog& log, Seconds max_gap);

/// Per second: whenever A-B and A-C are active and B-C is not, B-C becomes
/// active. Each iteration reads only the previous iteration's state.
EventLog triadic_closure(const EventLog& log, int iterations);

EventLog apply_strategy(const EventLog& log, const StrategySpec& spec);
EventLog apply_pipeline(const EventLog& log, std::span<const StrategySpec> specs);

}  // namespace proxval
