// Canonical interaction-stream types: dyads, events, normalized logs and
// per-second dyad rasters.
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace proxval {

/// Timestamps and durations, whole seconds.
using Seconds = std::int64_t;

struct BadgeId {
    std::uint32_t value = 0;

    constexpr BadgeId() = default;
    constexpr explicit BadgeId(std::uint32_t v) : value(v) {}

    friend constexpr auto operator<=>(BadgeId, BadgeId) = default;
};

/// Unordered badge pair stored as (a, b) with a < b.
class Dyad {
public:
    /// Canonicalizes the pair; throws std::invalid_argument on a self-loop.
    static Dyad of(BadgeId x, BadgeId y);

    BadgeId a() const { return a_; }
    BadgeId b() const { return b_; }
    bool contains(BadgeId id) const { return id == a_ || id == b_; }

    friend auto operator<=>(const Dyad&, const Dyad&) = default;

private:
    Dyad(BadgeId a, BadgeId b) : a_(a), b_(b) {}
    BadgeId a_;
    BadgeId b_;
};

/// One contact interval, half-open [start, end).
struct InteractionEvent {
    Dyad dyad;
    Seconds start = 0;
    Seconds end = 0;

    Seconds duration() const { return end - start; }

    friend bool operator==(const InteractionEvent&, const InteractionEvent&) = default;
};

/// Observation period [t0, t_end); seconds() is the raster length.
class ObservationWindow {
public:
    ObservationWindow(Seconds t0, Seconds t_end);

    Seconds t0() const { return t0_; }
    Seconds t_end() const { return t_end_; }
    Seconds seconds() const { return t_end_ - t0_; }
    bool contains(Seconds start, Seconds end) const { return start >= t0_ && end <= t_end_; }

    friend bool operator==(const ObservationWindow&, const ObservationWindow&) = default;

private:
    Seconds t0_;
    Seconds t_end_;
};

/// Sorted, duplicate-free participant list. Dyads are indexed in
/// lexicographic (a, b) order over the sorted ids.
class Roster {
public:
    Roster() = default;
    explicit Roster(std::vector<BadgeId> ids);

    std::span<const BadgeId> ids() const { return ids_; }
    std::size_t size() const { return ids_.size(); }
    std::size_t dyad_count() const { return ids_.size() * (ids_.size() - (ids_.empty() ? 0 : 1)) / 2; }

    bool contains(BadgeId id) const;
    /// Position of id in ids(); throws std::out_of_range if absent.
    std::size_t index_of(BadgeId id) const;
    std::size_t dyad_index(const Dyad& d) const;
    std::size_t dyad_index(std::size_t i, std::size_t j) const;
    Dyad dyad_at(std::size_t index) const;

    friend bool operator==(const Roster&, const Roster&) = default;

private:
    std::vector<BadgeId> ids_;
};

class NormalizeError : public std::invalid_argument {
public:
    NormalizeError(std::size_t event_index, const std::string& what)
        : std::invalid_argument(what), event_index_(event_index) {}
    std::size_t event_index() const { return event_index_; }

private:
    std::size_t event_index_;
};

/// Normalized event collection, checked on construction. Events name
/// roster dyads and sit inside the window with positive duration. They are
/// sorted by (dyad, start); same-dyad events neither overlap nor touch.
class EventLog {
public:
    EventLog(Roster roster, ObservationWindow window, std::vector<InteractionEvent> events);

    const Roster& roster() const { return roster_; }
    const ObservationWindow& window() const { return window_; }
    std::span<const InteractionEvent> events() const { return events_; }
    std::size_t size() const { return events_.size(); }
    bool empty() const { return events_.empty(); }

    /// Total covered dyad-seconds.
    Seconds covered_seconds() const;

    /// Copy of this log with the same roster/window but different events;
    /// the events are normalized first.
    EventLog with_events(std::vector<InteractionEvent> events) const;

    friend bool operator==(const EventLog&, const EventLog&) = default;

private:
    Roster roster_;
    ObservationWindow window_;
    std::vector<InteractionEvent> events_;
};

/// Sorts events after dropping zero-length ones and uniting overlapping or
/// abutting same-dyad intervals. A reversed event or one leaving the window
/// throws NormalizeError carrying the offending input index; so does an id
/// missing from the roster. Self-loops cannot reach this point because
/// Dyad::of rejects them.
EventLog normalize(std::span<const InteractionEvent> raw_events, const Roster& roster,
                   const ObservationWindow& window);

/// Per-second binary presence matrix, one row per roster dyad.
/// Cell (d, i) covers second [t0 + i, t0 + i + 1).
class DyadRaster {
public:
    DyadRaster(Roster roster, ObservationWindow window);

    const Roster& roster() const { return roster_; }
    const ObservationWindow& window() const { return window_; }
    std::size_t rows() const { return roster_.dyad_count(); }
    std::size_t cols() const { return static_cast<std::size_t>(window_.seconds()); }

    std::span<const std::uint8_t> row(std::size_t dyad_index) const;
    std::span<std::uint8_t> row(std::size_t dyad_index);
    std::uint8_t at(std::size_t dyad_index, std::size_t second) const {
        return cells_[dyad_index * cols() + second];
    }
    void set(std::size_t dyad_index, std::size_t second, bool value) {
        cells_[dyad_index * cols() + second] = value ? 1 : 0;
    }
    std::span<const std::uint8_t> cells() const { return cells_; }

    std::uint64_t count_ones() const;

    friend bool operator==(const DyadRaster&, const DyadRaster&) = default;

private:
    Roster roster_;
    ObservationWindow window_;
    std::vector<std::uint8_t> cells_;
};

DyadRaster rasterize(const EventLog& log);

/// Maximal runs of ones become events.
EventLog extract_events(const DyadRaster& raster);

/// Smallest roster containing every id that appears in events.
Roster roster_of(std::span<const InteractionEvent> events);

std::string to_string(const Dyad& d);

}  // namespace proxval

template <>
struct std::hash<proxval::BadgeId> {
    std::size_t operator()(proxval::BadgeId id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};
