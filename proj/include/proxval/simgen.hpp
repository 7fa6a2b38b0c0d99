// Synthetic ground truth and a badge degradation model.
//
// Truth comes from clique schedules: every member of a scheduled group is
// in contact with every other member for the group's span, and nobody is
// in two groups at once. Degradation punches within-interval dropout gaps
// per dyad and applies the firmware's minimum-event quantum. The gap model
// (Poisson count, truncated exponential length) is a modeling choice, not
// a measured property of the hardware.
#pragma once

#include <cstdint>
#include <vector>

#include "proxval/aggregate.hpp"
#include "proxval/core.hpp"

namespace proxval {

struct GeometryParams {
    double max_edge_distance_m = 1.61;
    double distance_sd_m = 0.35;
    double half_angle_deg = 32.6;
    double half_angle_sd_deg = 7.56;
    double reader_range_clear_m = 50.0;
    double reader_range_person_m = 26.8;
};

/// Deterministic threshold test: distance <= max_edge_distance_m and both
/// facing angles within half_angle_deg. Throws on negative distance or an
/// angle outside [0, 180].
bool detect_edge(double distance_m, double angle_a_deg, double angle_b_deg, const GeometryParams& geometry = {});

/// Stochastic variant: each badge pair gets its own distance and angle
/// thresholds drawn from the geometry's normal distributions, keyed by
/// (seed, dyad) so repeated queries for one pair agree.
class StochasticEdgeDetector {
public:
    StochasticEdgeDetector(GeometryParams geometry, std::uint64_t seed) : geometry_(geometry), seed_(seed) {}

    bool operator()(const Dyad& pair, double distance_m, double angle_a_deg, double angle_b_deg) const;
    std::pair<double, double> thresholds(const Dyad& pair) const;

private:
    GeometryParams geometry_;
    std::uint64_t seed_;
};

struct GroupSpan {
    std::vector<BadgeId> members;
    Seconds start = 0;
    Seconds end = 0;
};

struct Scenario {
    Roster roster;
    ObservationWindow window{0, 1};
    std::vector<GroupSpan> groups;
};

/// Throws std::invalid_argument for groups with fewer than two members,
/// unknown ids, spans outside the window, or overlapping membership.
void validate_scenario(const Scenario& scenario);

/// Clique expansion of every group.
EventLog generate_truth(const Scenario& scenario);

struct ScenarioParams {
    std::size_t roster_size = 11;
    Seconds duration_s = 77 * 60;
    std::size_t group_size_min = 2;
    std::size_t group_size_max = 4;
    double mean_group_duration_s = 240.0;
    Seconds min_group_duration_s = 30;
    double mean_idle_s = 60.0;
    /// Minimum silence between two contacts of one dyad. It sits above the
    /// default interpolation grid (up to 340 s) so that no grid value can
    /// merge two distinct truth contacts.
    Seconds min_regroup_gap_s = 360;
};

/// Random unimodal clique schedule over badges 1..roster_size, window [0, duration_s).
Scenario random_scenario(const ScenarioParams& params, std::uint64_t seed);

struct DegradationParams {
    double dropout_gap_mean_s = 20.0;
    Seconds dropout_gap_max_s = 60;
    double dropout_rate_per_min = 1.0;
    /// Coefficient of variation of a per-dyad multiplier on the dropout
    /// rate (gamma, mean 1). Pairs differ in how stably they detect each
    /// other; 0 gives every dyad the same rate.
    double dropout_rate_cv = 0.0;
    Seconds min_quantum_s = 10;  // 0 disables quantization
    std::uint64_t seed = 0;
};

/// Punches interior gaps (each at most dropout_gap_max_s, separated by at
/// least one surviving second) into every truth event, then stretches
/// fragments shorter than min_quantum_s to that length.
EventLog degrade(const EventLog& truth, const DegradationParams& params);

/// Drops each event independently with the given probability.
EventLog delete_edges(const EventLog& log, double probability, std::uint64_t seed);

struct NominationParams {
    double intercept = -2.0;
    double slope_per_min = 0.1;
    double response_rate = 1.0;
};

/// Self-reports driven by contact time: each respondent names each alter
/// independently with probability logistic(intercept + slope * minutes).
/// Respondents are drawn with response_rate; draws are keyed by (seed, ego).
NominationNetwork simulate_nominations(const WeightedNetwork& contact, const NominationParams& params,
                                       std::uint64_t seed);

/// splitmix64 finalizer; derives independent sub-seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace proxval
