#include "proxval/config.hpp"

#include <charconv>
#include <fmt/format.h>
#include <fstream>
#include <istream>

namespace proxval {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char delim) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = s.find(delim, pos);
        out.push_back(trim(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos)));
        if (next == std::string_view::npos) return out;
        pos = next + 1;
    }
}

template <typename T>
T to_number(std::string_view key, std::string_view value) {
    T out{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size() || value.empty()) {
        throw std::invalid_argument(fmt::format("config key '{}': '{}' is not a number", key, value));
    }
    return out;
}

bool to_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw std::invalid_argument(fmt::format("config key '{}': '{}' is not a boolean", key, value));
}

}  // namespace

std::vector<std::int64_t> SweepGrid::values() const {
    if (step <= 0) throw std::invalid_argument("grid step must be positive");
    if (last < first) throw std::invalid_argument("grid last must not precede first");
    std::vector<std::int64_t> out;
    for (auto v = first; v <= last; v += step) out.push_back(v);
    return out;
}

std::vector<std::int64_t> parse_grid(std::string_view text) {
    text = trim(text);
    if (text.empty()) return {};
    if (text.find(':') != std::string_view::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3) throw std::invalid_argument(fmt::format("grid '{}' must be first:last:step", text));
        return SweepGrid{to_number<std::int64_t>("grid", parts[0]), to_number<std::int64_t>("grid", parts[1]),
                         to_number<std::int64_t>("grid", parts[2])}
            .values();
    }
    std::vector<std::int64_t> out;
    for (auto p : split(text, ',')) out.push_back(to_number<std::int64_t>("grid", p));
    return out;
}

std::vector<std::int64_t> RunConfig::grid(StrategyKind kind) const {
    switch (kind) {
        case StrategyKind::min_duration: return parse_grid(grid_min_duration);
        case StrategyKind::interpolate: return parse_grid(grid_interpolate);
        case StrategyKind::triadic_closure: return parse_grid(grid_triadic_closure);
    }
    return {};
}

std::vector<StrategySpec> parse_pipeline(std::string_view text) {
    text = trim(text);
    std::vector<StrategySpec> out;
    if (text.empty() || text == "raw" || text == "none") return out;
    for (auto part : split(text, ',')) out.push_back(parse_strategy(part));
    return out;
}

std::string format_pipeline(const std::vector<StrategySpec>& specs) {
    if (specs.empty()) return "raw";
    std::string s;
    for (std::size_t k = 0; k < specs.size(); ++k) s += (k ? "," : "") + to_string(specs[k]);
    return s;
}

void apply_setting(RunConfig& c, std::string_view key, std::string_view value) {
    key = trim(key);
    value = trim(value);
    const std::string v(value);
    if (key == "rfid") c.rfid = v;
    else if (key == "truth") c.truth = v;
    else if (key == "nominations") c.nominations = v;
    else if (key == "respondents") c.respondents = v;
    else if (key == "scenario") c.scenario = v;
    else if (key == "ratings") c.ratings = v;
    else if (key == "roster") c.roster = v;
    else if (key == "date") c.date = v;
    else if (key == "window_start") c.window_start = v;
    else if (key == "window_end") c.window_end = v;
    else if (key == "pipeline") c.pipeline = parse_pipeline(value);
    else if (key == "sweep.kinds") {
        c.sweep_kinds.clear();
        for (auto k : split(value, ',')) {
            if (!k.empty()) c.sweep_kinds.push_back(parse_strategy_kind(k));
        }
    } else if (key == "sweep.min_duration") { parse_grid(value); c.grid_min_duration = v; }
    else if (key == "sweep.interpolate") { parse_grid(value); c.grid_interpolate = v; }
    else if (key == "sweep.triadic_closure") { parse_grid(value); c.grid_triadic_closure = v; }
    else if (key == "sweep.base") c.sweep_base = parse_pipeline(value);
    else if (key == "regress.datasets") {
        c.datasets.clear();
        for (auto d : split(value, ';')) c.datasets.push_back(parse_pipeline(d));
    } else if (key == "symmetrize") c.symmetrize = parse_symmetrization(value);
    else if (key == "out_dir") c.out_dir = v;
    else if (key == "seed") c.seed = to_number<std::uint64_t>(key, value);
    else if (key == "permissive") c.permissive = to_bool(key, value);
    else if (key == "sim.roster_size") c.scenario_params.roster_size = to_number<std::size_t>(key, value);
    else if (key == "sim.duration_s") c.scenario_params.duration_s = to_number<Seconds>(key, value);
    else if (key == "sim.group_size_min") c.scenario_params.group_size_min = to_number<std::size_t>(key, value);
    else if (key == "sim.group_size_max") c.scenario_params.group_size_max = to_number<std::size_t>(key, value);
    else if (key == "sim.mean_group_duration_s") c.scenario_params.mean_group_duration_s = to_number<double>(key, value);
    else if (key == "sim.min_group_duration_s") c.scenario_params.min_group_duration_s = to_number<Seconds>(key, value);
    else if (key == "sim.mean_idle_s") c.scenario_params.mean_idle_s = to_number<double>(key, value);
    else if (key == "sim.min_regroup_gap_s") c.scenario_params.min_regroup_gap_s = to_number<Seconds>(key, value);
    else if (key == "degrade.gap_mean_s") c.degradation.dropout_gap_mean_s = to_number<double>(key, value);
    else if (key == "degrade.gap_max_s") c.degradation.dropout_gap_max_s = to_number<Seconds>(key, value);
    else if (key == "degrade.rate_per_min") c.degradation.dropout_rate_per_min = to_number<double>(key, value);
    else if (key == "degrade.rate_cv") c.degradation.dropout_rate_cv = to_number<double>(key, value);
    else if (key == "degrade.quantum_s") c.degradation.min_quantum_s = to_number<Seconds>(key, value);
    else if (key == "nom.intercept") c.nominations_model.intercept = to_number<double>(key, value);
    else if (key == "nom.slope_per_min") c.nominations_model.slope_per_min = to_number<double>(key, value);
    else if (key == "nom.response_rate") c.nominations_model.response_rate = to_number<double>(key, value);
    else throw std::invalid_argument(fmt::format("unknown config key '{}'", key));
}

void apply_config_text(RunConfig& config, std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view s = line;
        if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string_view::npos) {
            throw std::invalid_argument(fmt::format("config line {}: expected key=value", line_no));
        }
        try {
            apply_setting(config, s.substr(0, eq), s.substr(eq + 1));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(fmt::format("config line {}: {}", line_no, e.what()));
        }
    }
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(fmt::format("cannot open config '{}'", path.string()));
    RunConfig c;
    apply_config_text(c, in);
    return c;
}

std::string format_config(const RunConfig& c) {
    std::string kinds;
    for (std::size_t k = 0; k < c.sweep_kinds.size(); ++k) kinds += (k ? "," : "") + std::string(to_string(c.sweep_kinds[k]));
    std::string datasets;
    for (std::size_t k = 0; k < c.datasets.size(); ++k) datasets += (k ? ";" : "") + format_pipeline(c.datasets[k]);

    std::string s;
    auto kv = [&](std::string_view key, const auto& value) { s += fmt::format("{}={}\n", key, value); };
    kv("rfid", c.rfid);
    kv("truth", c.truth);
    kv("nominations", c.nominations);
    kv("respondents", c.respondents);
    kv("scenario", c.scenario);
    kv("ratings", c.ratings);
    kv("roster", c.roster);
    kv("date", c.date);
    kv("window_start", c.window_start);
    kv("window_end", c.window_end);
    kv("pipeline", format_pipeline(c.pipeline));
    kv("sweep.kinds", kinds);
    kv("sweep.min_duration", c.grid_min_duration);
    kv("sweep.interpolate", c.grid_interpolate);
    kv("sweep.triadic_closure", c.grid_triadic_closure);
    kv("sweep.base", format_pipeline(c.sweep_base));
    kv("regress.datasets", datasets);
    kv("symmetrize", to_string(c.symmetrize));
    kv("seed", c.seed);
    kv("permissive", c.permissive ? "true" : "false");
    kv("sim.roster_size", c.scenario_params.roster_size);
    kv("sim.duration_s", c.scenario_params.duration_s);
    kv("sim.group_size_min", c.scenario_params.group_size_min);
    kv("sim.group_size_max", c.scenario_params.group_size_max);
    kv("sim.mean_group_duration_s", c.scenario_params.mean_group_duration_s);
    kv("sim.min_group_duration_s", c.scenario_params.min_group_duration_s);
    kv("sim.mean_idle_s", c.scenario_params.mean_idle_s);
    kv("sim.min_regroup_gap_s", c.scenario_params.min_regroup_gap_s);
    kv("degrade.gap_mean_s", c.degradation.dropout_gap_mean_s);
    kv("degrade.gap_max_s", c.degradation.dropout_gap_max_s);
    kv("degrade.rate_per_min", c.degradation.dropout_rate_per_min);
    kv("degrade.rate_cv", c.degradation.dropout_rate_cv);
    kv("degrade.quantum_s", c.degradation.min_quantum_s);
    kv("nom.intercept", c.nominations_model.intercept);
    kv("nom.slope_per_min", c.nominations_model.slope_per_min);
    kv("nom.response_rate", c.nominations_model.response_rate);
    return s;
}

}  // namespace proxval
