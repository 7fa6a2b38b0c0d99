#include "proxval/preprocess.hpp"

#include <algorithm>
#include <charconv>
#include <fmt/format.h>
#include <map>
#include <set>

namespace proxval {

StrategyKind kind_of(const StrategySpec& spec) {
    return std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, MinDuration>) return StrategyKind::min_duration;
            else if constexpr (std::is_same_v<T, Interpolate>) return StrategyKind::interpolate;
            else return StrategyKind::triadic_closure;
        },
        spec);
}

std::string_view to_string(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::min_duration: return "min_duration";
        case StrategyKind::interpolate: return "interpolate";
        case StrategyKind::triadic_closure: return "triadic_closure";
    }
    return "unknown";
}

StrategyKind parse_strategy_kind(std::string_view name) {
    if (name == "min_duration") return StrategyKind::min_duration;
    if (name == "interpolate") return StrategyKind::interpolate;
    if (name == "triadic_closure") return StrategyKind::triadic_closure;
    throw std::invalid_argument(fmt::format("unknown strategy '{}'", name));
}

StrategySpec make_strategy(StrategyKind kind, std::int64_t value) {
    switch (kind) {
        case StrategyKind::min_duration:
            if (value < 0) throw std::invalid_argument("min_duration cutoff must be >= 0");
            return MinDuration{value};
        case StrategyKind::interpolate:
            if (value < 0) throw std::invalid_argument("interpolate max_gap must be >= 0");
            return Interpolate{value};
        case StrategyKind::triadic_closure:
            if (value < 1 || value > 1'000'000) throw std::invalid_argument("triadic_closure iterations must be >= 1");
            return TriadicClosure{static_cast<int>(value)};
    }
    throw std::invalid_argument("unknown strategy kind");
}

StrategySpec parse_strategy(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw std::invalid_argument(fmt::format("strategy '{}' must look like kind:value", text));
    }
    const auto kind = parse_strategy_kind(text.substr(0, colon));
    const auto digits = text.substr(colon + 1);
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
        throw std::invalid_argument(fmt::format("strategy '{}' has a non-integer parameter", text));
    }
    return make_strategy(kind, value);
}

std::string to_string(const StrategySpec& spec) {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, MinDuration>) return fmt::format("min_duration:{}", s.cutoff);
            else if constexpr (std::is_same_v<T, Interpolate>) return fmt::format("interpolate:{}", s.max_gap);
            else return fmt::format("triadic_closure:{}", s.iterations);
        },
        spec);
}

EventLog min_duration_filter(const EventLog& log, Seconds cutoff) {
    std::vector<InteractionEvent> kept;
    kept.reserve(log.size());
    for (const auto& e : log.events()) {
        if (e.duration() >= cutoff) kept.push_back(e);
    }
    return EventLog(log.roster(), log.window(), std::move(kept));
}

EventLog interpolate(const EventLog& log, Seconds max_gap) {
    std::vector<InteractionEvent> out;
    out.reserve(log.size());
    for (const auto& e : log.events()) {
        if (!out.empty() && out.back().dyad == e.dyad && e.start - out.back().end <= max_gap) {
            out.back().end = e.end;
        } else {
            out.push_back(e);
        }
    }
    return EventLog(log.roster(), log.window(), std::move(out));
}

namespace {

// Closes open two-paths on one static contact graph. Nodes are roster
// indices; adjacency is a dense n x n matrix.
std::vector<std::pair<std::size_t, std::size_t>> close_static_graph(
    const std::vector<std::pair<std::size_t, std::size_t>>& edges, int iterations) {
    std::vector<std::size_t> nodes;
    for (auto [i, j] : edges) {
        nodes.push_back(i);
        nodes.push_back(j);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    const std::size_t n = nodes.size();
    auto local = [&](std::size_t id) {
        return static_cast<std::size_t>(std::lower_bound(nodes.begin(), nodes.end(), id) - nodes.begin());
    };

    std::vector<std::uint8_t> adj(n * n, 0);
    for (auto [i, j] : edges) {
        const auto a = local(i), b = local(j);
        adj[a * n + b] = adj[b * n + a] = 1;
    }
    const std::vector<std::uint8_t> original = adj;

    std::vector<std::size_t> neighbors;
    for (int it = 0; it < iterations; ++it) {
        std::vector<std::uint8_t> next = adj;
        bool changed = false;
        for (std::size_t a = 0; a < n; ++a) {
            neighbors.clear();
            for (std::size_t b = 0; b < n; ++b) {
                if (adj[a * n + b]) neighbors.push_back(b);
            }
            for (std::size_t x = 0; x < neighbors.size(); ++x) {
                for (std::size_t y = x + 1; y < neighbors.size(); ++y) {
                    const auto b = neighbors[x], c = neighbors[y];
                    if (!adj[b * n + c] && !next[b * n + c]) {
                        next[b * n + c] = next[c * n + b] = 1;
                        changed = true;
                    }
                }
            }
        }
        adj = std::move(next);
        if (!changed) break;
    }

    std::vector<std::pair<std::size_t, std::size_t>> added;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            if (adj[a * n + b] && !original[a * n + b]) added.emplace_back(nodes[a], nodes[b]);
        }
    }
    return added;
}

}  // namespace

EventLog triadic_closure(const EventLog& log, int iterations) {
    if (iterations < 1) throw std::invalid_argument("triadic_closure iterations must be >= 1");
    const Roster& roster = log.roster();

    // The contact graph is constant between consecutive event boundaries,
    // so closing it once per elementary segment equals closing it per second.
    std::map<Seconds, std::vector<std::size_t>> starts, ends;
    for (std::size_t k = 0; k < log.size(); ++k) {
        starts[log.events()[k].start].push_back(k);
        ends[log.events()[k].end].push_back(k);
    }
    std::set<Seconds> boundaries;
    for (const auto& [t, _] : starts) boundaries.insert(t);
    for (const auto& [t, _] : ends) boundaries.insert(t);

    std::vector<InteractionEvent> out(log.events().begin(), log.events().end());
    std::set<std::pair<std::size_t, std::size_t>> active;
    for (auto it = boundaries.begin(); it != boundaries.end(); ++it) {
        const Seconds t = *it;
        if (auto e = ends.find(t); e != ends.end()) {
            for (auto k : e->second) {
                const auto& ev = log.events()[k];
                active.erase({roster.index_of(ev.dyad.a()), roster.index_of(ev.dyad.b())});
            }
        }
        if (auto s = starts.find(t); s != starts.end()) {
            for (auto k : s->second) {
                const auto& ev = log.events()[k];
                active.insert({roster.index_of(ev.dyad.a()), roster.index_of(ev.dyad.b())});
            }
        }
        auto next = std::next(it);
        if (next == boundaries.end() || active.size() < 2) continue;
        const std::vector<std::pair<std::size_t, std::size_t>> edges(active.begin(), active.end());
        for (auto [i, j] : close_static_graph(edges, iterations)) {
            out.push_back(InteractionEvent{Dyad::of(roster.ids()[i], roster.ids()[j]), t, *next});
        }
    }
    return log.with_events(std::move(out));
}

EventLog apply_strategy(const EventLog& log, const StrategySpec& spec) {
    return std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, MinDuration>) return min_duration_filter(log, s.cutoff);
            else if constexpr (std::is_same_v<T, Interpolate>) return interpolate(log, s.max_gap);
            else return triadic_closure(log, s.iterations);
        },
        spec);
}

EventLog apply_pipeline(const EventLog& log, std::span<const StrategySpec> specs) {
    EventLog current = log;
    for (const auto& spec : specs) current = apply_strategy(current, spec);
    return current;
}

}  // namespace proxval
