#include "proxval/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numeric>

namespace proxval {

WeightedNetwork::WeightedNetwork(Roster roster, std::vector<double> minutes)
    : roster_(std::move(roster)), minutes_(std::move(minutes)) {
    if (minutes_.size() != roster_.dyad_count()) {
        throw std::invalid_argument("weighted network needs one weight per roster dyad");
    }
}

double WeightedNetwork::total() const { return std::accumulate(minutes_.begin(), minutes_.end(), 0.0); }

WeightedNetwork aggregate_minutes(const EventLog& log) {
    std::vector<Seconds> seconds(log.roster().dyad_count(), 0);
    for (const auto& e : log.events()) seconds[log.roster().dyad_index(e.dyad)] += e.duration();
    std::vector<double> minutes(seconds.size());
    std::transform(seconds.begin(), seconds.end(), minutes.begin(),
                   [](Seconds s) { return static_cast<double>(s) / 60.0; });
    return WeightedNetwork(log.roster(), std::move(minutes));
}

NominationNetwork::NominationNetwork(Roster roster, std::vector<BadgeId> respondents)
    : roster_(std::move(roster)),
      respondent_(roster_.size(), 0),
      cells_(roster_.size() * roster_.size(), TieState::missing) {
    for (auto id : respondents) respondent_[roster_.index_of(id)] = 1;
    const std::size_t n = roster_.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!respondent_[i]) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) cells_[i * n + j] = TieState::absent;
        }
    }
}

std::size_t NominationNetwork::respondent_count() const {
    return static_cast<std::size_t>(std::count(respondent_.begin(), respondent_.end(), std::uint8_t{1}));
}

void NominationNetwork::set_tie(std::size_t ego, std::size_t alter, TieState state) {
    if (ego == alter) throw std::invalid_argument("nomination networks have no diagonal");
    cells_[ego * roster_.size() + alter] = state;
}

void NominationNetwork::nominate(BadgeId ego, BadgeId alter) {
    const auto i = roster_.index_of(ego);
    const auto j = roster_.index_of(alter);
    if (i == j) throw std::invalid_argument(fmt::format("self-nomination by {}", ego.value));
    if (!respondent_[i]) throw std::invalid_argument(fmt::format("badge {} is not a respondent", ego.value));
    set_tie(i, j, TieState::present);
}

std::size_t NominationNetwork::out_degree(std::size_t ego) const {
    const std::size_t n = roster_.size();
    return static_cast<std::size_t>(
        std::count(cells_.begin() + static_cast<std::ptrdiff_t>(ego * n),
                   cells_.begin() + static_cast<std::ptrdiff_t>((ego + 1) * n), TieState::present));
}

bool NominationNetwork::is_symmetric() const {
    const std::size_t n = roster_.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (tie(i, j) != tie(j, i)) return false;
        }
    }
    return true;
}

namespace {

TieState weak_or(TieState x, TieState y) {
    if (x == TieState::present || y == TieState::present) return TieState::present;
    if (x == TieState::missing || y == TieState::missing) return TieState::missing;
    return TieState::absent;
}

TieState strong_and(TieState x, TieState y) {
    if (x == TieState::missing || y == TieState::missing) return TieState::missing;
    return (x == TieState::present && y == TieState::present) ? TieState::present : TieState::absent;
}

}  // namespace

NominationNetwork symmetrize(const NominationNetwork& net, Symmetrization mode) {
    if (mode == Symmetrization::none) return net;
    NominationNetwork out = net;
    const std::size_t n = net.roster().size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const TieState s = mode == Symmetrization::weak ? weak_or(net.tie(i, j), net.tie(j, i))
                                                            : strong_and(net.tie(i, j), net.tie(j, i));
            out.set_tie(i, j, s);
            out.set_tie(j, i, s);
        }
    }
    return out;
}

Symmetrization parse_symmetrization(std::string_view name) {
    if (name == "none") return Symmetrization::none;
    if (name == "weak") return Symmetrization::weak;
    if (name == "strong") return Symmetrization::strong;
    throw std::invalid_argument(fmt::format("unknown symmetrization '{}'", name));
}

std::string_view to_string(Symmetrization mode) {
    switch (mode) {
        case Symmetrization::none: return "none";
        case Symmetrization::weak: return "weak";
        case Symmetrization::strong: return "strong";
    }
    return "unknown";
}

Summary summarize(std::span<const double> values) {
    Summary s;
    s.n = values.size();
    if (values.empty()) return s;
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    s.mean = mean;
    if (values.size() >= 2) {
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        s.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return s;
}

Descriptives descriptives(const EventLog& log) {
    Descriptives d;
    if (log.empty()) return d;

    std::vector<double> durations;
    durations.reserve(log.size());
    for (const auto& e : log.events()) durations.push_back(static_cast<double>(e.duration()));
    d.interaction_duration_s = summarize(durations);

    const WeightedNetwork net = aggregate_minutes(log);
    std::vector<double> dyadic;
    std::vector<double> individual(log.roster().size(), 0.0);
    std::vector<std::uint8_t> seen(log.roster().dyad_count(), 0);
    for (const auto& e : log.events()) seen[log.roster().dyad_index(e.dyad)] = 1;
    for (std::size_t k = 0; k < seen.size(); ++k) {
        if (!seen[k]) continue;
        const double w = net.minutes()[k];
        dyadic.push_back(w);
        const Dyad dy = log.roster().dyad_at(k);
        individual[log.roster().index_of(dy.a())] += w;
        individual[log.roster().index_of(dy.b())] += w;
    }
    d.aggregated_dyadic_duration_min = summarize(dyadic);
    d.individual_total_duration_min = summarize(individual);
    return d;
}

std::vector<RankHit> rank_hit_rate(const WeightedNetwork& net, const NominationNetwork& nominations) {
    if (!(net.roster() == nominations.roster())) throw std::invalid_argument("rank_hit_rate: roster mismatch");
    const std::size_t n = net.roster().size();
    std::vector<RankHit> hits(n > 0 ? n - 1 : 0);
    for (std::size_t r = 0; r < hits.size(); ++r) hits[r].rank = r + 1;

    std::vector<std::size_t> alters;
    for (std::size_t ego = 0; ego < n; ++ego) {
        if (!nominations.is_respondent(ego)) continue;
        alters.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (j != ego) alters.push_back(j);
        }
        std::stable_sort(alters.begin(), alters.end(),
                         [&](std::size_t x, std::size_t y) { return net.weight(ego, x) > net.weight(ego, y); });
        for (std::size_t r = 0; r < alters.size(); ++r) {
            const double w = net.weight(ego, alters[r]);
            const bool tied = (r > 0 && net.weight(ego, alters[r - 1]) == w) ||
                              (r + 1 < alters.size() && net.weight(ego, alters[r + 1]) == w);
            const TieState tie = nominations.tie(ego, alters[r]);
            if (tied || tie == TieState::missing) continue;
            ++hits[r].egos;
            if (tie == TieState::present) ++hits[r].reported;
        }
    }
    std::vector<RankHit> out;
    for (auto& h : hits) {
        if (h.egos == 0) continue;
        h.percent = 100.0 * static_cast<double>(h.reported) / static_cast<double>(h.egos);
        out.push_back(h);
    }
    return out;
}

std::vector<DesignRow> design_table(const WeightedNetwork& net, const NominationNetwork& nominations) {
    if (!(net.roster() == nominations.roster())) throw std::invalid_argument("design_table: roster mismatch");
    const auto ids = net.roster().ids();
    std::vector<DesignRow> rows;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (!nominations.is_respondent(i)) continue;
        for (std::size_t j = 0; j < ids.size(); ++j) {
            if (i == j) continue;
            const TieState tie = nominations.tie(i, j);
            if (tie == TieState::missing) continue;
            rows.push_back(DesignRow{ids[i], ids[j], net.weight(i, j), tie == TieState::present});
        }
    }
    return rows;
}

}  // namespace proxval
