#include "proxval/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <map>
#include <random>

namespace proxval {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

std::uint64_t dyad_salt(const Dyad& d) {
    return (static_cast<std::uint64_t>(d.a().value) << 32) | d.b().value;
}

void check_geometry_input(double distance_m, double angle_a_deg, double angle_b_deg) {
    if (distance_m < 0.0) throw std::invalid_argument("detect_edge: negative distance");
    for (double a : {angle_a_deg, angle_b_deg}) {
        if (a < 0.0 || a > 180.0) throw std::invalid_argument("detect_edge: angle outside [0, 180]");
    }
}

}  // namespace

bool detect_edge(double distance_m, double angle_a_deg, double angle_b_deg, const GeometryParams& geometry) {
    check_geometry_input(distance_m, angle_a_deg, angle_b_deg);
    return distance_m <= geometry.max_edge_distance_m && angle_a_deg <= geometry.half_angle_deg &&
           angle_b_deg <= geometry.half_angle_deg;
}

std::pair<double, double> StochasticEdgeDetector::thresholds(const Dyad& pair) const {
    std::mt19937_64 rng(mix_seed(seed_, dyad_salt(pair)));
    std::normal_distribution<double> distance(geometry_.max_edge_distance_m, geometry_.distance_sd_m);
    std::normal_distribution<double> angle(geometry_.half_angle_deg, geometry_.half_angle_sd_deg);
    const double d = std::max(0.0, distance(rng));
    const double a = std::clamp(angle(rng), 0.0, 180.0);
    return {d, a};
}

bool StochasticEdgeDetector::operator()(const Dyad& pair, double distance_m, double angle_a_deg,
                                        double angle_b_deg) const {
    check_geometry_input(distance_m, angle_a_deg, angle_b_deg);
    const auto [max_distance, half_angle] = thresholds(pair);
    return distance_m <= max_distance && angle_a_deg <= half_angle && angle_b_deg <= half_angle;
}

void validate_scenario(const Scenario& s) {
    std::map<BadgeId, std::vector<std::pair<Seconds, Seconds>>> spans;
    for (std::size_t g = 0; g < s.groups.size(); ++g) {
        const auto& group = s.groups[g];
        if (group.end <= group.start || !s.window.contains(group.start, group.end)) {
            throw std::invalid_argument(fmt::format("group {} span [{}, {}) empty or outside window", g, group.start,
                                                    group.end));
        }
        std::vector<BadgeId> members = group.members;
        std::sort(members.begin(), members.end());
        if (std::adjacent_find(members.begin(), members.end()) != members.end()) {
            throw std::invalid_argument(fmt::format("group {} lists a member twice", g));
        }
        if (members.size() < 2) throw std::invalid_argument(fmt::format("group {} has fewer than two members", g));
        for (auto id : members) {
            if (!s.roster.contains(id)) throw std::invalid_argument(fmt::format("group {} member {} not in roster", g, id.value));
            spans[id].emplace_back(group.start, group.end);
        }
    }
    for (auto& [id, list] : spans) {
        std::sort(list.begin(), list.end());
        for (std::size_t k = 1; k < list.size(); ++k) {
            if (list[k].first < list[k - 1].second) {
                throw std::invalid_argument(
                    fmt::format("badge {} is in two groups at once near t={}", id.value, list[k].first));
            }
        }
    }
}

EventLog generate_truth(const Scenario& scenario) {
    validate_scenario(scenario);
    std::vector<InteractionEvent> events;
    for (const auto& group : scenario.groups) {
        for (std::size_t i = 0; i < group.members.size(); ++i) {
            for (std::size_t j = i + 1; j < group.members.size(); ++j) {
                events.push_back(InteractionEvent{Dyad::of(group.members[i], group.members[j]), group.start, group.end});
            }
        }
    }
    return normalize(events, scenario.roster, scenario.window);
}

Scenario random_scenario(const ScenarioParams& p, std::uint64_t seed) {
    if (p.roster_size < 2) throw std::invalid_argument("random_scenario: need at least two badges");
    if (p.group_size_min < 2 || p.group_size_max < p.group_size_min) {
        throw std::invalid_argument("random_scenario: group sizes must satisfy 2 <= min <= max");
    }
    std::vector<BadgeId> ids;
    for (std::uint32_t k = 1; k <= p.roster_size; ++k) ids.emplace_back(k);
    Scenario s{Roster(ids), ObservationWindow(0, p.duration_s), {}};
    const Seconds t_end = p.duration_s;

    std::mt19937_64 rng(mix_seed(seed, 0x5ce0));
    std::exponential_distribution<double> idle(1.0 / std::max(1.0, p.mean_idle_s));
    std::exponential_distribution<double> length(1.0 / std::max(1.0, p.mean_group_duration_s));
    std::uniform_int_distribution<std::size_t> size_draw(p.group_size_min, p.group_size_max);
    auto idle_draw = [&] { return std::max<Seconds>(1, static_cast<Seconds>(std::llround(idle(rng)))); };

    const std::size_t n = p.roster_size;
    std::vector<Seconds> free_at(n);
    for (auto& f : free_at) f = idle_draw() - 1;
    constexpr Seconds kNever = std::numeric_limits<Seconds>::min() / 2;
    std::vector<Seconds> last_contact(n * n, kNever);

    // Badges that fail to find partners stay available and retry at the
    // next release or after kRetry seconds, whichever comes first.
    constexpr Seconds kRetry = 10;
    Seconds t = *std::min_element(free_at.begin(), free_at.end());
    while (t < t_end) {
        std::vector<std::size_t> available;
        for (std::size_t k = 0; k < n; ++k) {
            if (free_at[k] <= t) available.push_back(k);
        }
        std::shuffle(available.begin(), available.end(), rng);
        std::vector<std::uint8_t> used(n, 0);
        for (std::size_t seed_member : available) {
            if (used[seed_member]) continue;
            used[seed_member] = 1;
            std::vector<std::size_t> group{seed_member};
            const std::size_t want = size_draw(rng);
            for (std::size_t q : available) {
                if (group.size() >= want) break;
                if (used[q]) continue;
                const bool rested = std::all_of(group.begin(), group.end(), [&](std::size_t m) {
                    return t - last_contact[m * n + q] > p.min_regroup_gap_s;
                });
                if (!rested) continue;
                group.push_back(q);
                used[q] = 1;
            }
            if (group.size() < 2) continue;
            const Seconds span = std::max({Seconds{1}, p.min_group_duration_s, static_cast<Seconds>(std::llround(length(rng)))});
            const Seconds end = std::min(t_end, t + span);
            GroupSpan g{{}, t, end};
            for (auto m : group) {
                g.members.push_back(ids[m]);
                free_at[m] = end + idle_draw();
                for (auto o : group) last_contact[m * n + o] = end;
            }
            s.groups.push_back(std::move(g));
        }
        Seconds next = t + kRetry;
        for (auto f : free_at) {
            if (f > t) next = std::min(next, f);
        }
        t = next;
    }
    return s;
}

EventLog degrade(const EventLog& truth, const DegradationParams& params) {
    if (params.min_quantum_s < 0 || params.dropout_rate_per_min < 0 || params.dropout_gap_max_s < 0 ||
        params.dropout_rate_cv < 0) {
        throw std::invalid_argument("degrade: negative parameter");
    }
    const Seconds t_end = truth.window().t_end();
    std::vector<InteractionEvent> out;
    out.reserve(truth.size() * 2);

    std::size_t k = 0;
    const auto events = truth.events();
    while (k < events.size()) {
        const Dyad dyad = events[k].dyad;
        std::mt19937_64 rng(mix_seed(params.seed, dyad_salt(dyad)));
        double rate = params.dropout_rate_per_min;
        if (params.dropout_rate_cv > 0.0) {
            // Mean-one gamma multiplier from its own stream, so cv = 0
            // leaves every other draw untouched.
            std::mt19937_64 spread(mix_seed(params.seed ^ 0xca11b4a7e, dyad_salt(dyad)));
            const double shape = 1.0 / (params.dropout_rate_cv * params.dropout_rate_cv);
            rate *= std::gamma_distribution<double>(shape, 1.0 / shape)(spread);
        }
        for (; k < events.size() && events[k].dyad == dyad; ++k) {
            const auto& e = events[k];
            std::vector<std::pair<Seconds, Seconds>> gaps;
            // Interior gaps need at least one surviving second on both sides.
            if (params.dropout_gap_max_s > 0 && rate > 0 && e.duration() >= 3) {
                std::poisson_distribution<int> count(rate * static_cast<double>(e.duration()) / 60.0);
                std::uniform_int_distribution<Seconds> where(e.start + 1, e.end - 2);
                std::exponential_distribution<double> length(1.0 / std::max(1.0, params.dropout_gap_mean_s));
                const int c = count(rng);
                for (int g = 0; g < c; ++g) {
                    const Seconds at = where(rng);
                    const Seconds len = std::clamp<Seconds>(static_cast<Seconds>(std::llround(length(rng))), 1,
                                                            params.dropout_gap_max_s);
                    gaps.emplace_back(at, at + len);
                }
                std::sort(gaps.begin(), gaps.end());
            }
            Seconds cursor = e.start;
            Seconds last_gap_end = e.start;
            for (auto [gs, ge] : gaps) {
                if (gs <= last_gap_end || ge >= e.end) continue;
                out.push_back(InteractionEvent{dyad, cursor, gs});
                cursor = last_gap_end = ge;
            }
            out.push_back(InteractionEvent{dyad, cursor, e.end});
        }
    }
    if (params.min_quantum_s > 0) {
        for (auto& e : out) {
            if (e.duration() < params.min_quantum_s) e.end = std::min(t_end, e.start + params.min_quantum_s);
        }
    }
    return truth.with_events(std::move(out));
}

EventLog delete_edges(const EventLog& log, double probability, std::uint64_t seed) {
    if (probability < 0.0 || probability > 1.0) throw std::invalid_argument("delete_edges: probability outside [0, 1]");
    std::mt19937_64 rng(mix_seed(seed, 0xde1e7e));
    std::bernoulli_distribution drop(probability);
    std::vector<InteractionEvent> kept;
    for (const auto& e : log.events()) {
        if (!drop(rng)) kept.push_back(e);
    }
    return log.with_events(std::move(kept));
}

NominationNetwork simulate_nominations(const WeightedNetwork& contact, const NominationParams& params,
                                       std::uint64_t seed) {
    if (!(params.response_rate >= 0.0 && params.response_rate <= 1.0)) {
        throw std::invalid_argument("simulate_nominations: response_rate outside [0, 1]");
    }
    const Roster& roster = contact.roster();
    std::mt19937_64 pick(mix_seed(seed, 0x7e5));
    std::bernoulli_distribution respond(params.response_rate);
    std::vector<BadgeId> respondents;
    for (auto id : roster.ids()) {
        if (respond(pick)) respondents.push_back(id);
    }
    NominationNetwork net(roster, respondents);
    for (auto ego : respondents) {
        std::mt19937_64 rng(mix_seed(seed, ego.value));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const std::size_t i = roster.index_of(ego);
        for (std::size_t j = 0; j < roster.size(); ++j) {
            if (j == i) continue;
            const double eta = params.intercept + params.slope_per_min * contact.weight(i, j);
            if (u(rng) < 1.0 / (1.0 + std::exp(-eta))) net.nominate(ego, roster.ids()[j]);
        }
    }
    return net;
}

}  // namespace proxval
