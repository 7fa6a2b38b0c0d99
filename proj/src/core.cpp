#include "proxval/core.hpp"

#include <algorithm>
#include <fmt/format.h>

namespace proxval {

Dyad Dyad::of(BadgeId x, BadgeId y) {
    if (x == y) {
        throw std::invalid_argument(fmt::format("self-loop dyad on badge {}", x.value));
    }
    return x < y ? Dyad(x, y) : Dyad(y, x);
}

ObservationWindow::ObservationWindow(Seconds t0, Seconds t_end) : t0_(t0), t_end_(t_end) {
    if (t_end <= t0) {
        throw std::invalid_argument(fmt::format("empty observation window [{}, {})", t0, t_end));
    }
}

Roster::Roster(std::vector<BadgeId> ids) : ids_(std::move(ids)) {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

bool Roster::contains(BadgeId id) const { return std::binary_search(ids_.begin(), ids_.end(), id); }

std::size_t Roster::index_of(BadgeId id) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) {
        throw std::out_of_range(fmt::format("badge {} not in roster", id.value));
    }
    return static_cast<std::size_t>(it - ids_.begin());
}

std::size_t Roster::dyad_index(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    const std::size_t n = ids_.size();
    return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

std::size_t Roster::dyad_index(const Dyad& d) const { return dyad_index(index_of(d.a()), index_of(d.b())); }

Dyad Roster::dyad_at(std::size_t index) const {
    const std::size_t n = ids_.size();
    std::size_t i = 0;
    while (i + 1 < n && index >= n - i - 1) {
        index -= n - i - 1;
        ++i;
    }
    if (i + 1 >= n) throw std::out_of_range("dyad index out of range");
    return Dyad::of(ids_[i], ids_[i + 1 + index]);
}

namespace {

bool event_order(const InteractionEvent& x, const InteractionEvent& y) {
    if (x.dyad != y.dyad) return x.dyad < y.dyad;
    if (x.start != y.start) return x.start < y.start;
    return x.end < y.end;
}

// Sorts and unions same-dyad intervals that overlap or touch; drops empties.
std::vector<InteractionEvent> merge_sorted(std::vector<InteractionEvent> events) {
    std::erase_if(events, [](const InteractionEvent& e) { return e.end <= e.start; });
    std::sort(events.begin(), events.end(), event_order);
    std::vector<InteractionEvent> out;
    out.reserve(events.size());
    for (const auto& e : events) {
        if (!out.empty() && out.back().dyad == e.dyad && e.start <= out.back().end) {
            out.back().end = std::max(out.back().end, e.end);
        } else {
            out.push_back(e);
        }
    }
    return out;
}

}  // namespace

EventLog::EventLog(Roster roster, ObservationWindow window, std::vector<InteractionEvent> events)
    : roster_(std::move(roster)), window_(window), events_(std::move(events)) {
    for (std::size_t k = 0; k < events_.size(); ++k) {
        const auto& e = events_[k];
        if (!roster_.contains(e.dyad.a()) || !roster_.contains(e.dyad.b())) {
            throw NormalizeError(k, fmt::format("event {} dyad {} outside roster", k, to_string(e.dyad)));
        }
        if (e.end <= e.start || !window_.contains(e.start, e.end)) {
            throw NormalizeError(k, fmt::format("event {} [{}, {}) empty or outside window", k, e.start, e.end));
        }
        if (k > 0) {
            const auto& p = events_[k - 1];
            if (p.dyad > e.dyad || (p.dyad == e.dyad && e.start <= p.end)) {
                throw NormalizeError(k, fmt::format("event {} breaks (dyad, start) order or touches its predecessor", k));
            }
        }
    }
}

Seconds EventLog::covered_seconds() const {
    Seconds total = 0;
    for (const auto& e : events_) total += e.duration();
    return total;
}

EventLog EventLog::with_events(std::vector<InteractionEvent> events) const {
    return EventLog(roster_, window_, merge_sorted(std::move(events)));
}

EventLog normalize(std::span<const InteractionEvent> raw_events, const Roster& roster,
                   const ObservationWindow& window) {
    std::vector<InteractionEvent> events;
    events.reserve(raw_events.size());
    for (std::size_t k = 0; k < raw_events.size(); ++k) {
        const auto& e = raw_events[k];
        if (!roster.contains(e.dyad.a()) || !roster.contains(e.dyad.b())) {
            throw NormalizeError(k, fmt::format("event {} dyad {} outside roster", k, to_string(e.dyad)));
        }
        if (e.end < e.start) {
            throw NormalizeError(k, fmt::format("event {} ends before it starts", k));
        }
        if (!window.contains(e.start, e.end)) {
            throw NormalizeError(k, fmt::format("event {} [{}, {}) outside window [{}, {})", k, e.start, e.end,
                                                window.t0(), window.t_end()));
        }
        events.push_back(e);
    }
    return EventLog(roster, window, merge_sorted(std::move(events)));
}

DyadRaster::DyadRaster(Roster roster, ObservationWindow window)
    : roster_(std::move(roster)), window_(window), cells_(roster_.dyad_count() * cols(), 0) {}

std::span<const std::uint8_t> DyadRaster::row(std::size_t dyad_index) const {
    return std::span<const std::uint8_t>(cells_).subspan(dyad_index * cols(), cols());
}

std::span<std::uint8_t> DyadRaster::row(std::size_t dyad_index) {
    return std::span<std::uint8_t>(cells_).subspan(dyad_index * cols(), cols());
}

std::uint64_t DyadRaster::count_ones() const {
    return static_cast<std::uint64_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

DyadRaster rasterize(const EventLog& log) {
    DyadRaster raster(log.roster(), log.window());
    const Seconds t0 = log.window().t0();
    for (const auto& e : log.events()) {
        auto row = raster.row(log.roster().dyad_index(e.dyad));
        std::fill(row.begin() + (e.start - t0), row.begin() + (e.end - t0), std::uint8_t{1});
    }
    return raster;
}

EventLog extract_events(const DyadRaster& raster) {
    std::vector<InteractionEvent> events;
    const Seconds t0 = raster.window().t0();
    const std::size_t cols = raster.cols();
    for (std::size_t d = 0; d < raster.rows(); ++d) {
        const Dyad dyad = raster.roster().dyad_at(d);
        auto row = raster.row(d);
        std::size_t i = 0;
        while (i < cols) {
            if (row[i] == 0) {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j < cols && row[j] != 0) ++j;
            events.push_back(InteractionEvent{dyad, t0 + static_cast<Seconds>(i), t0 + static_cast<Seconds>(j)});
            i = j;
        }
    }
    // Row order is dyad order, so events are already sorted and disjoint.
    return EventLog(raster.roster(), raster.window(), std::move(events));
}

Roster roster_of(std::span<const InteractionEvent> events) {
    std::vector<BadgeId> ids;
    ids.reserve(events.size() * 2);
    for (const auto& e : events) {
        ids.push_back(e.dyad.a());
        ids.push_back(e.dyad.b());
    }
    return Roster(std::move(ids));
}

std::string to_string(const Dyad& d) { return fmt::format("({},{})", d.a().value, d.b().value); }

}  // namespace proxval
