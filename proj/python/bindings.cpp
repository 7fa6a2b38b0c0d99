#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "proxval/commands.hpp"
#include "proxval/io.hpp"

namespace py = pybind11;
using namespace proxval;

namespace {

using Row = std::tuple<std::uint32_t, std::uint32_t, Seconds, Seconds>;

EventLog make_log(const std::vector<Row>& rows, std::optional<std::vector<std::uint32_t>> roster_ids,
                  std::optional<std::pair<Seconds, Seconds>> window) {
    std::vector<InteractionEvent> events;
    std::vector<BadgeId> ids;
    Seconds lo = std::numeric_limits<Seconds>::max(), hi = std::numeric_limits<Seconds>::min();
    for (const auto& [a, b, s, e] : rows) {
        events.push_back({Dyad::of(BadgeId{a}, BadgeId{b}), s, e});
        ids.push_back(BadgeId{a});
        ids.push_back(BadgeId{b});
        lo = std::min(lo, s);
        hi = std::max(hi, e);
    }
    if (roster_ids) {
        ids.clear();
        for (auto v : *roster_ids) ids.push_back(BadgeId{v});
    }
    if (!window) {
        if (rows.empty()) throw std::invalid_argument("window is required for an empty event list");
        window = std::pair{lo, hi};
    }
    return normalize(events, Roster(ids), ObservationWindow(window->first, window->second));
}

std::vector<Row> rows_of(const EventLog& log) {
    std::vector<Row> out;
    for (const auto& e : log.events()) out.emplace_back(e.dyad.a().value, e.dyad.b().value, e.start, e.end);
    return out;
}

py::dict metrics_dict(const ClassificationTable& t) {
    const auto m = metrics(t);
    py::dict d;
    d["tp"] = t.tp;
    d["fp"] = t.fp;
    d["fn"] = t.fn;
    d["tn"] = t.tn;
    d["sensitivity"] = m.sensitivity;
    d["specificity"] = m.specificity;
    d["accuracy"] = m.accuracy;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Validation toolkit for badge proximity interaction logs";

    py::class_<EventLog>(m, "EventLog")
        .def(py::init(&make_log), py::arg("events"), py::arg("roster") = py::none(), py::arg("window") = py::none())
        .def_property_readonly("events", &rows_of)
        .def_property_readonly("roster", [](const EventLog& l) {
            std::vector<std::uint32_t> ids;
            for (auto id : l.roster().ids()) ids.push_back(id.value);
            return ids;
        })
        .def_property_readonly("window", [](const EventLog& l) { return std::pair{l.window().t0(), l.window().t_end()}; })
        .def("covered_seconds", &EventLog::covered_seconds)
        .def("__len__", &EventLog::size)
        .def("__eq__", [](const EventLog& a, const EventLog& b) { return a == b; });

    m.def("read_edgelist", [](const std::filesystem::path& path) { return parse_edgelist(path).log; }, py::arg("path"));
    m.def("format_edgelist", &format_edgelist);

    m.def("min_duration_filter", &min_duration_filter, py::arg("log"), py::arg("cutoff"));
    m.def("interpolate", &interpolate, py::arg("log"), py::arg("max_gap"));
    m.def("triadic_closure", &triadic_closure, py::arg("log"), py::arg("iterations"));
    m.def(
        "apply_pipeline",
        [](const EventLog& log, const std::string& spec) { return apply_pipeline(log, parse_pipeline(spec)); },
        py::arg("log"), py::arg("pipeline"));

    m.def(
        "classify", [](const EventLog& measured, const EventLog& truth) { return metrics_dict(classify(measured, truth)); },
        py::arg("measured"), py::arg("truth"));
    m.def(
        "table_metrics",
        [](std::uint64_t tp, std::uint64_t fp, std::uint64_t fn, std::uint64_t tn) {
            return metrics_dict(ClassificationTable{tp, fp, fn, tn});
        },
        py::arg("tp"), py::arg("fp"), py::arg("fn"), py::arg("tn"));
    m.def(
        "sweep",
        [](const EventLog& measured, const EventLog& truth, const std::string& kind, std::vector<std::int64_t> values) {
            const auto r = sweep(measured, truth, parse_strategy_kind(kind), values);
            std::vector<std::pair<std::int64_t, py::dict>> out;
            for (const auto& p : r.points) out.emplace_back(p.value, metrics_dict(p.table));
            return out;
        },
        py::arg("measured"), py::arg("truth"), py::arg("kind"), py::arg("values"));

    m.def(
        "fit_logistic",
        [](std::vector<int> y, std::vector<double> x) {
            const auto f = fit_logistic(y, x);
            py::dict d;
            d["intercept"] = f.intercept;
            d["slope"] = f.slope;
            d["se_intercept"] = f.se_intercept;
            d["se_slope"] = f.se_slope;
            d["log_likelihood"] = f.log_likelihood;
            d["mcfadden_r2"] = f.mcfadden_r2;
            d["converged"] = f.converged;
            d["separated"] = f.separated;
            return d;
        },
        py::arg("outcome"), py::arg("predictor"));
    m.def(
        "cohens_kappa",
        [](std::vector<std::string> a, std::vector<std::string> b) {
            return cohens_kappa<std::string>(a, b).kappa;
        },
        py::arg("a"), py::arg("b"));

    m.def(
        "simulate_truth",
        [](std::size_t roster_size, Seconds duration_s, std::uint64_t seed) {
            ScenarioParams p;
            p.roster_size = roster_size;
            p.duration_s = duration_s;
            return generate_truth(random_scenario(p, seed));
        },
        py::arg("roster_size") = 11, py::arg("duration_s") = 77 * 60, py::arg("seed") = 1);
    m.def(
        "degrade",
        [](const EventLog& truth, Seconds gap_max_s, double rate_per_min, Seconds quantum_s, std::uint64_t seed) {
            DegradationParams p;
            p.dropout_gap_max_s = gap_max_s;
            p.dropout_rate_per_min = rate_per_min;
            p.min_quantum_s = quantum_s;
            p.seed = seed;
            return degrade(truth, p);
        },
        py::arg("truth"), py::arg("gap_max_s") = 60, py::arg("rate_per_min") = 1.0, py::arg("quantum_s") = 10,
        py::arg("seed") = 0);

    m.def(
        "run_command",
        [](const std::string& name, const std::map<std::string, std::string>& settings) {
            RunConfig config;
            for (const auto& [k, v] : settings) apply_setting(config, k, v);
            const auto r = run_command(name, config);
            std::vector<std::tuple<std::string, std::string, std::size_t>> manifest;
            for (const auto& e : r.manifest) manifest.emplace_back(e.name, e.sha256, e.bytes);
            return py::make_tuple(r.exit_code, manifest);
        },
        py::arg("name"), py::arg("settings"));
}
