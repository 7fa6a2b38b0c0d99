#include "proxval/commands.hpp"

#include <algorithm>
#include <array>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <sstream>

#include "proxval/preprocess.hpp"
#include "proxval/simgen.hpp"
#include "proxval/stats.hpp"
#include "proxval/validity.hpp"

namespace proxval {

namespace {

constexpr std::array<std::string_view, 7> kCommands{"preprocess", "validate", "sweep", "aggregate",
                                                    "regress",    "kappa",    "simulate"};

struct Run {
    const RunConfig& config;
    OutputSet outputs;
    std::string summary;
    bool rejected = false;
};

std::ifstream open(const std::string& path, std::string_view what) {
    if (path.empty()) throw std::invalid_argument(fmt::format("config key '{}' is required", what));
    std::ifstream in(path);
    if (!in) throw std::runtime_error(fmt::format("cannot open {} file '{}'", what, path));
    return in;
}

Seconds day_base(const RunConfig& c) { return c.date.empty() ? 0 : parse_date(c.date); }

EdgelistOptions frame_options(const RunConfig& c) {
    EdgelistOptions o;
    o.day_base = day_base(c);
    if (!c.window_start.empty() || !c.window_end.empty()) {
        if (c.window_start.empty() || c.window_end.empty()) {
            throw std::invalid_argument("window_start and window_end must be set together");
        }
        o.window = ObservationWindow(parse_timestamp(c.window_start, o.day_base), parse_timestamp(c.window_end, o.day_base));
    }
    if (!c.roster.empty()) {
        auto in = open(c.roster, "roster");
        o.roster = Roster(parse_id_list(in));
    }
    return o;
}

EventLog load_edgelist(Run& run, const std::string& path, std::string_view what, const EdgelistOptions& options) {
    auto in = open(path, what);
    auto parsed = parse_edgelist(in, options);
    run.outputs.add(fmt::format("parse_report_{}.csv", what), format_parse_report(parsed.report));
    if (parsed.report.rejected() > 0) {
        run.summary += fmt::format("{}: {} rejected rows\n", what, parsed.report.rejected());
        if (!run.config.permissive) run.rejected = true;
    }
    return std::move(parsed.log);
}

// Loads two edgelists onto a common roster and window.
std::pair<EventLog, EventLog> load_pair(Run& run) {
    const auto options = frame_options(run.config);
    EventLog measured = load_edgelist(run, run.config.rfid, "rfid", options);
    EventLog truth = load_edgelist(run, run.config.truth, "truth", options);
    if (measured.roster() == truth.roster() && measured.window() == truth.window()) return {measured, truth};

    std::vector<BadgeId> ids(measured.roster().ids().begin(), measured.roster().ids().end());
    ids.insert(ids.end(), truth.roster().ids().begin(), truth.roster().ids().end());
    const Roster roster(std::move(ids));
    const ObservationWindow window(std::min(measured.window().t0(), truth.window().t0()),
                                   std::max(measured.window().t_end(), truth.window().t_end()));
    return {normalize(measured.events(), roster, window), normalize(truth.events(), roster, window)};
}

std::string label_of(std::size_t index, const std::vector<StrategySpec>& specs) {
    std::string s = format_pipeline(specs);
    std::replace(s.begin(), s.end(), ':', '-');
    std::replace(s.begin(), s.end(), ',', '+');
    return fmt::format("d{}_{}", index, s);
}

NominationNetwork load_nominations(Run& run, const Roster& roster) {
    auto in = open(run.config.nominations, "nominations");
    std::optional<std::vector<BadgeId>> respondents;
    if (!run.config.respondents.empty()) {
        auto rin = open(run.config.respondents, "respondents");
        respondents = parse_id_list(rin);
    }
    auto parsed = parse_nominations(in, roster, respondents);
    run.outputs.add("parse_report_nominations.csv", format_parse_report(parsed.report));
    if (parsed.report.rejected() > 0) {
        run.summary += fmt::format("nominations: {} rejected rows\n", parsed.report.rejected());
        if (!run.config.permissive) run.rejected = true;
    }
    return symmetrize(parsed.network, run.config.symmetrize);
}

void cmd_simulate(Run& run) {
    const auto& c = run.config;
    Scenario scenario;
    if (!c.scenario.empty()) {
        auto in = open(c.scenario, "scenario");
        std::vector<BadgeId> ids;
        for (std::uint32_t k = 1; k <= c.scenario_params.roster_size; ++k) ids.emplace_back(k);
        scenario = Scenario{Roster(ids), ObservationWindow(0, c.scenario_params.duration_s),
                            parse_scenario_groups(in, day_base(c))};
    } else {
        scenario = random_scenario(c.scenario_params, c.seed);
    }
    const EventLog truth = generate_truth(scenario);
    DegradationParams degradation = c.degradation;
    degradation.seed = mix_seed(c.seed, 1);
    const EventLog rfid = degrade(truth, degradation);

    run.outputs.add("scenario.csv", format_scenario_groups(scenario));
    run.outputs.add("truth.csv", format_edgelist(truth));
    run.outputs.add("rfid.csv", format_edgelist(rfid));
    run.outputs.add("descriptives_truth.csv", format_descriptives(descriptives(truth)));
    run.outputs.add("descriptives_rfid.csv", format_descriptives(descriptives(rfid)));
    run.outputs.add("classification.csv", format_classification(classify(rfid, truth)));
    const auto nominations = simulate_nominations(aggregate_minutes(truth), c.nominations_model, mix_seed(c.seed, 2));
    run.outputs.add("nominations.csv", format_nominations(nominations));
    run.summary += fmt::format("simulated {} groups, {} truth events, {} rfid events\n", scenario.groups.size(),
                               truth.size(), rfid.size());
}

void cmd_preprocess(Run& run) {
    const EventLog log = load_edgelist(run, run.config.rfid, "rfid", frame_options(run.config));
    if (run.rejected) return;
    const EventLog processed = apply_pipeline(log, run.config.pipeline);
    run.outputs.add("processed.csv", format_edgelist(processed));
    run.outputs.add("descriptives_raw.csv", format_descriptives(descriptives(log)));
    run.outputs.add("descriptives_processed.csv", format_descriptives(descriptives(processed)));
    run.summary += fmt::format("{} events -> {} events after {}\n", log.size(), processed.size(),
                               format_pipeline(run.config.pipeline));
}

void cmd_validate(Run& run) {
    const auto [measured, truth] = load_pair(run);
    if (run.rejected) return;
    const auto raw = classify(measured, truth);
    run.outputs.add("classification_raw.csv", format_classification(raw));
    run.outputs.add("metrics_raw.csv", format_metrics(metrics(raw)));
    if (!run.config.pipeline.empty()) {
        const auto processed = classify(apply_pipeline(measured, run.config.pipeline), truth);
        run.outputs.add("classification_pipeline.csv", format_classification(processed));
        run.outputs.add("metrics_pipeline.csv", format_metrics(metrics(processed)));
    }
    const auto m = metrics(raw);
    run.summary += fmt::format("raw accuracy {}\n", m.accuracy ? fmt::format("{:.4f}", *m.accuracy) : "NA");
}

void cmd_sweep(Run& run) {
    const auto [measured, truth] = load_pair(run);
    if (run.rejected) return;
    std::string best = "strategy,value,accuracy\n";
    for (auto kind : run.config.sweep_kinds) {
        const auto values = run.config.grid(kind);
        const auto result = sweep_combined(measured, truth, run.config.sweep_base, kind, values);
        run.outputs.add(fmt::format("sweep_{}.csv", to_string(kind)), format_sweep(result));
        if (auto b = best_by_accuracy(result)) {
            best += fmt::format("{},{},{:.4f}\n", to_string(kind), b->value, *b->metrics.accuracy);
        }
    }
    run.outputs.add("sweep_best.csv", best);
    run.summary += fmt::format("{} sweep curves\n", run.config.sweep_kinds.size());
}

void cmd_aggregate(Run& run) {
    const EventLog log = load_edgelist(run, run.config.rfid, "rfid", frame_options(run.config));
    std::optional<NominationNetwork> nominations;
    if (!run.config.nominations.empty()) nominations = load_nominations(run, log.roster());
    if (run.rejected) return;
    if (nominations) run.outputs.add("nominations_matrix.csv", format_nomination_matrix(*nominations));
    for (std::size_t k = 0; k < run.config.datasets.size(); ++k) {
        const auto label = label_of(k, run.config.datasets[k]);
        const EventLog processed = apply_pipeline(log, run.config.datasets[k]);
        const WeightedNetwork net = aggregate_minutes(processed);
        run.outputs.add(fmt::format("adjacency_{}.csv", label), format_weighted_matrix(net));
        run.outputs.add(fmt::format("descriptives_{}.csv", label), format_descriptives(descriptives(processed)));
        if (nominations) {
            run.outputs.add(fmt::format("rank_hits_{}.csv", label), format_rank_hits(rank_hit_rate(net, *nominations)));
        }
    }
    run.summary += fmt::format("aggregated {} datasets over {} badges\n", run.config.datasets.size(), log.roster().size());
}

void cmd_regress(Run& run) {
    const EventLog log = load_edgelist(run, run.config.rfid, "rfid", frame_options(run.config));
    const NominationNetwork nominations = load_nominations(run, log.roster());
    if (run.rejected) return;

    std::vector<LogitFit> fits;
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < run.config.datasets.size(); ++k) {
        const auto label = label_of(k, run.config.datasets[k]);
        const auto rows = design_table(aggregate_minutes(apply_pipeline(log, run.config.datasets[k])), nominations);
        std::vector<int> outcome;
        std::vector<double> minutes, reported, unreported;
        for (const auto& r : rows) {
            outcome.push_back(r.reported ? 1 : 0);
            minutes.push_back(r.minutes);
            (r.reported ? reported : unreported).push_back(r.minutes);
        }
        run.outputs.add(fmt::format("design_{}.csv", label), format_design_table(rows));
        if (rows.size() < 2) throw std::invalid_argument(fmt::format("dataset {} has fewer than two design rows", label));
        const LogitFit fit = fit_logistic(outcome, minutes);
        run.outputs.add(fmt::format("fit_{}.csv", label), format_fit(fit));
        if (reported.size() >= 2 && unreported.size() >= 2) {
            run.outputs.add(fmt::format("ttest_{}.csv", label), format_t_test(t_test_cohen_d(unreported, reported)));
        }
        fits.push_back(fit);
        labels.push_back(label);
        run.summary += fmt::format("{}: slope {:.4f} McFadden R2 {:.4f} (n = {})\n", label, fit.slope, fit.mcfadden_r2, fit.n);
    }
    // Same-data models with equal parameter counts are not nested; the
    // chi-square is reported as a heuristic next to the AIC difference.
    std::string lrt = "model_a,model_b,chi2,df,p,nested,delta_aic\n";
    for (std::size_t i = 0; i < fits.size(); ++i) {
        for (std::size_t j = i + 1; j < fits.size(); ++j) {
            const auto lr = likelihood_ratio_test(fits[i], fits[j]);
            lrt += fmt::format("{},{},{:.10g},{},{:.10g},{},{:.10g}\n", labels[i], labels[j], lr.chi2, lr.df, lr.p,
                               lr.nested, lr.delta_aic);
        }
    }
    run.outputs.add("likelihood_ratio.csv", lrt);
}

void cmd_kappa(Run& run) {
    auto in = open(run.config.ratings, "ratings");
    const auto [a, b] = parse_ratings(in);
    const auto k = cohens_kappa<std::string>(a, b);
    run.outputs.add("kappa.csv", format_kappa(k));
    run.summary += fmt::format("kappa {}\n", k.kappa ? fmt::format("{:.4f}", *k.kappa) : "NA");
}

}  // namespace

std::span<const std::string_view> command_names() { return kCommands; }

CommandResult run_command(std::string_view name, const RunConfig& config) {
    static const std::array<std::pair<std::string_view, std::function<void(Run&)>>, 7> table{{
        {"preprocess", cmd_preprocess},
        {"validate", cmd_validate},
        {"sweep", cmd_sweep},
        {"aggregate", cmd_aggregate},
        {"regress", cmd_regress},
        {"kappa", cmd_kappa},
        {"simulate", cmd_simulate},
    }};
    const auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == name; });
    if (it == table.end()) throw std::invalid_argument(fmt::format("unknown subcommand '{}'", name));

    prepare_output_dir(config.out_dir);
    Run run{config, {}, {}, false};
    run.outputs.add("config.resolved", format_config(config));
    it->second(run);

    CommandResult result;
    result.manifest = emit_outputs(run.outputs, config.out_dir);
    result.summary = std::move(run.summary);
    result.exit_code = run.rejected ? 2 : 0;
    return result;
}

}  // namespace proxval
