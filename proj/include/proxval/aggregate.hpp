// Dyad-level aggregation of contact logs and self-reported nomination
// networks.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "proxval/core.hpp"

namespace proxval {

/// Symmetric contact minutes per roster dyad.
class WeightedNetwork {
public:
    WeightedNetwork(Roster roster, std::vector<double> minutes);

    const Roster& roster() const { return roster_; }
    double weight(const Dyad& d) const { return minutes_[roster_.dyad_index(d)]; }
    double weight(std::size_t i, std::size_t j) const { return i == j ? 0.0 : minutes_[roster_.dyad_index(i, j)]; }
    std::span<const double> minutes() const { return minutes_; }
    double total() const;

private:
    Roster roster_;
    std::vector<double> minutes_;
};

WeightedNetwork aggregate_minutes(const EventLog& log);

enum class TieState : std::uint8_t { absent, present, missing };

/// Directed binary adjacency over a roster with a respondent mask. Rows of
/// non-respondents are missing, not absent.
class NominationNetwork {
public:
    /// All cells absent for respondents, missing for everyone else.
    NominationNetwork(Roster roster, std::vector<BadgeId> respondents);

    const Roster& roster() const { return roster_; }
    bool is_respondent(std::size_t i) const { return respondent_[i] != 0; }
    std::size_t respondent_count() const;

    TieState tie(std::size_t ego, std::size_t alter) const { return cells_[ego * roster_.size() + alter]; }
    void set_tie(std::size_t ego, std::size_t alter, TieState state);
    /// Marks ego -> alter present; ego must be a respondent.
    void nominate(BadgeId ego, BadgeId alter);

    std::size_t out_degree(std::size_t ego) const;
    bool is_symmetric() const;

    friend bool operator==(const NominationNetwork&, const NominationNetwork&) = default;

private:
    Roster roster_;
    std::vector<std::uint8_t> respondent_;
    std::vector<TieState> cells_;
};

enum class Symmetrization { none, weak, strong };

/// weak: present if either side reported, else missing if either side is
/// missing. strong: missing if either side is missing, else present only
/// if both reported.
NominationNetwork symmetrize(const NominationNetwork& net, Symmetrization mode);
Symmetrization parse_symmetrization(std::string_view name);
std::string_view to_string(Symmetrization mode);

struct Summary {
    std::optional<double> mean;
    std::optional<double> sd;  // sample sd, needs n >= 2
    std::size_t n = 0;
};

Summary summarize(std::span<const double> values);

struct Descriptives {
    Summary interaction_duration_s;       // over events
    Summary aggregated_dyadic_duration_min;  // over dyads with >= 1 event
    Summary individual_total_duration_min;   // over every roster member
};

Descriptives descriptives(const EventLog& log);

struct RankHit {
    std::size_t rank = 0;
    std::size_t egos = 0;     // egos with an untied, observed alter at this rank
    std::size_t reported = 0;
    double percent = 0.0;
};

/// Per respondent ego, alters are ranked by decreasing minutes (rank 1 =
/// longest). Alters whose weight ties another alter's are dropped, as are
/// alters with a missing tie. Ranks with no contributing ego are omitted.
std::vector<RankHit> rank_hit_rate(const WeightedNetwork& net, const NominationNetwork& nominations);

/// One ordered (ego, alter) row per respondent ego and observed tie.
struct DesignRow {
    BadgeId ego;
    BadgeId alter;
    double minutes = 0.0;
    bool reported = false;
};

std::vector<DesignRow> design_table(const WeightedNetwork& net, const NominationNetwork& nominations);

}  // namespace proxval
