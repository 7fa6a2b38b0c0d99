#include "proxval/io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fmt/format.h>
#include <fstream>
#include <istream>
#include <map>
#include <openssl/evp.h>
#include <sstream>

namespace proxval {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error(fmt::format("line {}: {}", line, what)), line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '"'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
        const auto next = line.find(delim, pos);
        fields.push_back(trim(line.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos)));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return fields;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
    Int value{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return value;
}

// "HH:MM:SS" with optional fraction, as seconds since midnight.
std::optional<Seconds> parse_clock(std::string_view s) {
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        const auto frac = s.substr(dot + 1);
        if (frac.empty() || !std::all_of(frac.begin(), frac.end(), [](char c) { return c >= '0' && c <= '9'; })) {
            return std::nullopt;
        }
        s = s.substr(0, dot);
    }
    const auto parts = split(s, ':');
    if (parts.size() != 3) return std::nullopt;
    const auto h = parse_int<int>(parts[0]);
    const auto m = parse_int<int>(parts[1]);
    const auto sec = parse_int<int>(parts[2]);
    if (!h || !m || !sec || *h < 0 || *h > 23 || *m < 0 || *m > 59 || *sec < 0 || *sec > 59) return std::nullopt;
    if (parts[1].size() != 2 || parts[2].size() != 2) return std::nullopt;
    return Seconds{*h} * 3600 + Seconds{*m} * 60 + Seconds{*sec};
}

std::optional<Seconds> parse_ymd(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    const auto y = parse_int<int>(s.substr(0, 4));
    const auto m = parse_int<unsigned>(s.substr(5, 2));
    const auto d = parse_int<unsigned>(s.substr(8, 2));
    if (!y || !m || !d) return std::nullopt;
    const std::chrono::year_month_day ymd{std::chrono::year{*y}, std::chrono::month{*m}, std::chrono::day{*d}};
    if (!ymd.ok()) return std::nullopt;
    return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::sys_days{ymd}.time_since_epoch()).count();
}

std::string fixed4(const std::optional<double>& v) { return v ? fmt::format("{:.4f}", *v) : "NA"; }
std::string full(double v) { return std::isfinite(v) ? fmt::format("{:.10g}", v) : (std::isnan(v) ? "NA" : (v > 0 ? "Inf" : "-Inf")); }
std::string full(const std::optional<double>& v) { return v ? full(*v) : "NA"; }

bool getline_any(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", path.string()));
    return in;
}

}  // namespace

Seconds parse_timestamp(std::string_view text, Seconds day_base) {
    const auto s = trim(text);
    if (s.empty()) throw std::invalid_argument("empty timestamp");
    if (auto epoch = parse_int<Seconds>(s)) return *epoch;
    if (s.size() >= 19 && s[4] == '-' && (s[10] == 'T' || s[10] == ' ')) {
        auto clock = s.substr(11);
        if (!clock.empty() && (clock.back() == 'Z' || clock.back() == 'z')) clock.remove_suffix(1);
        const auto date = parse_ymd(s.substr(0, 10));
        const auto secs = parse_clock(clock);
        if (date && secs) return *date + *secs;
    } else if (auto secs = parse_clock(s)) {
        return day_base + *secs;
    }
    throw std::invalid_argument(fmt::format("malformed timestamp '{}'", s));
}

Seconds parse_date(std::string_view text) {
    if (auto d = parse_ymd(trim(text))) return *d;
    throw std::invalid_argument(fmt::format("malformed date '{}' (want YYYY-MM-DD)", text));
}

std::string_view to_string(IssueAction action) {
    switch (action) {
        case IssueAction::rejected: return "rejected";
        case IssueAction::dropped: return "dropped";
        case IssueAction::clipped: return "clipped";
        case IssueAction::warning: return "warning";
    }
    return "unknown";
}

std::size_t ParseReport::count(IssueAction action) const {
    return static_cast<std::size_t>(
        std::count_if(issues.begin(), issues.end(), [&](const ParseIssue& i) { return i.action == action; }));
}

ParsedEdgelist parse_edgelist(std::istream& in, const EdgelistOptions& options) {
    std::string line;
    std::size_t line_no = 0;
    std::string header;
    while (getline_any(in, line)) {
        ++line_no;
        if (!trim(line).empty()) {
            header = line;
            break;
        }
    }
    if (header.empty()) throw ParseError(line_no == 0 ? 1 : line_no, "missing header row");
    const char delim = header.find('\t') != std::string::npos ? '\t' : ',';
    if (split(header, delim).size() != 4) {
        throw ParseError(line_no, "header must have four columns: start, id_a, id_b, end");
    }

    ParseReport report;
    std::vector<InteractionEvent> events;
    while (getline_any(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        ++report.rows;
        const auto fields = split(line, delim);
        if (fields.size() != 4) throw ParseError(line_no, fmt::format("expected 4 fields, found {}", fields.size()));
        Seconds start = 0, end = 0;
        try {
            start = parse_timestamp(fields[0], options.day_base);
            end = parse_timestamp(fields[3], options.day_base);
        } catch (const std::invalid_argument& e) {
            throw ParseError(line_no, e.what());
        }
        const auto a = parse_int<std::uint32_t>(fields[1]);
        const auto b = parse_int<std::uint32_t>(fields[2]);
        if (!a || !b) throw ParseError(line_no, "badge ids must be non-negative integers");
        for (auto id : {*a, *b}) {
            if (options.roster && !options.roster->contains(BadgeId{id})) {
                throw ParseError(line_no, fmt::format("unknown badge id {}", id));
            }
        }
        if (*a == *b) {
            report.issues.push_back({line_no, IssueAction::rejected, fmt::format("self-loop on badge {}", *a)});
            continue;
        }
        if (end < start) {
            report.issues.push_back({line_no, IssueAction::rejected, "end before start"});
            continue;
        }
        if (end == start) {
            report.issues.push_back({line_no, IssueAction::dropped, "zero duration"});
            continue;
        }
        if (options.window) {
            const auto& w = *options.window;
            if (end <= w.t0() || start >= w.t_end()) {
                report.issues.push_back({line_no, IssueAction::dropped, "outside window"});
                continue;
            }
            if (start < w.t0() || end > w.t_end()) {
                report.issues.push_back({line_no, IssueAction::clipped, "clipped to window"});
                start = std::max(start, w.t0());
                end = std::min(end, w.t_end());
            }
        }
        events.push_back(InteractionEvent{Dyad::of(BadgeId{*a}, BadgeId{*b}), start, end});
    }

    ObservationWindow window(options.day_base, options.day_base + 1);
    if (options.window) {
        window = *options.window;
    } else if (!events.empty()) {
        Seconds lo = events.front().start, hi = events.front().end;
        for (const auto& e : events) {
            lo = std::min(lo, e.start);
            hi = std::max(hi, e.end);
        }
        window = ObservationWindow(lo, hi);
    }
    Roster roster = options.roster ? *options.roster : roster_of(events);
    return ParsedEdgelist{normalize(events, roster, window), std::move(report)};
}

ParsedEdgelist parse_edgelist(const std::filesystem::path& path, const EdgelistOptions& options) {
    auto in = open_input(path);
    return parse_edgelist(in, options);
}

void write_edgelist(std::ostream& out, const EventLog& log) { out << format_edgelist(log); }

std::string format_edgelist(const EventLog& log) {
    std::string s = "start,id_a,id_b,end\n";
    for (const auto& e : log.events()) {
        s += fmt::format("{},{},{},{}\n", e.start, e.dyad.a().value, e.dyad.b().value, e.end);
    }
    return s;
}

std::string format_nominations(const NominationNetwork& net) {
    const Roster& roster = net.roster();
    std::string s = "ego,alter\n";
    for (std::size_t i = 0; i < roster.size(); ++i) {
        if (!net.is_respondent(i)) continue;
        bool any = false;
        for (std::size_t j = 0; j < roster.size(); ++j) {
            if (j != i && net.tie(i, j) == TieState::present) {
                s += fmt::format("{},{}\n", roster.ids()[i].value, roster.ids()[j].value);
                any = true;
            }
        }
        if (!any) s += fmt::format("{},\n", roster.ids()[i].value);
    }
    return s;
}

ParsedNominations parse_nominations(std::istream& in, const Roster& roster,
                                    const std::optional<std::vector<BadgeId>>& respondents) {
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (!have_header && getline_any(in, line)) {
        ++line_no;
        have_header = !trim(line).empty();
    }
    if (!have_header) throw ParseError(1, "missing header row");
    const char delim = line.find('\t') != std::string::npos ? '\t' : ',';

    struct Row {
        std::size_t line;
        BadgeId ego;
        std::optional<BadgeId> alter;
    };
    ParseReport report;
    std::vector<Row> rows;
    while (getline_any(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        ++report.rows;
        const auto fields = split(line, delim);
        if (fields.size() != 2) throw ParseError(line_no, fmt::format("expected 2 fields, found {}", fields.size()));
        const auto ego = parse_int<std::uint32_t>(fields[0]);
        if (!ego) throw ParseError(line_no, "ego must be a badge id");
        std::optional<BadgeId> alter;
        if (!fields[1].empty()) {
            const auto a = parse_int<std::uint32_t>(fields[1]);
            if (!a) throw ParseError(line_no, "alter must be a badge id or empty");
            alter = BadgeId{*a};
        }
        rows.push_back(Row{line_no, BadgeId{*ego}, alter});
    }

    std::vector<BadgeId> who;
    if (respondents) {
        for (auto id : *respondents) {
            if (!roster.contains(id)) throw std::invalid_argument(fmt::format("respondent {} not in roster", id.value));
        }
        who = *respondents;
    } else {
        for (const auto& r : rows) {
            if (roster.contains(r.ego)) who.push_back(r.ego);
        }
    }
    NominationNetwork net(roster, who);
    for (const auto& r : rows) {
        if (!roster.contains(r.ego)) {
            report.issues.push_back({r.line, IssueAction::rejected, fmt::format("ego {} not in roster", r.ego.value)});
            continue;
        }
        if (!net.is_respondent(roster.index_of(r.ego))) {
            report.issues.push_back({r.line, IssueAction::rejected, fmt::format("ego {} is not a respondent", r.ego.value)});
            continue;
        }
        if (!r.alter) continue;
        if (*r.alter == r.ego) {
            report.issues.push_back({r.line, IssueAction::rejected, fmt::format("self-nomination by {}", r.ego.value)});
            continue;
        }
        if (!roster.contains(*r.alter)) {
            report.issues.push_back({r.line, IssueAction::rejected, fmt::format("alter {} not in roster", r.alter->value)});
            continue;
        }
        net.nominate(r.ego, *r.alter);
    }
    for (std::size_t i = 0; i < roster.size(); ++i) {
        if (net.out_degree(i) > kNominationWarningThreshold) {
            report.issues.push_back({0, IssueAction::warning,
                                     fmt::format("ego {} nominated {} alters (more than {})", roster.ids()[i].value,
                                                 net.out_degree(i), kNominationWarningThreshold)});
        }
    }
    return ParsedNominations{std::move(net), std::move(report)};
}

ParsedNominations parse_nominations(const std::filesystem::path& path, const Roster& roster,
                                    const std::optional<std::vector<BadgeId>>& respondents) {
    auto in = open_input(path);
    return parse_nominations(in, roster, respondents);
}

std::vector<BadgeId> parse_id_list(std::istream& in) {
    std::vector<BadgeId> ids;
    std::string line;
    std::size_t line_no = 0;
    while (getline_any(in, line)) {
        ++line_no;
        const auto s = trim(line);
        if (s.empty()) continue;
        const auto id = parse_int<std::uint32_t>(s);
        if (!id) {
            if (line_no == 1) continue;
            throw ParseError(line_no, fmt::format("'{}' is not a badge id", s));
        }
        ids.emplace_back(*id);
    }
    return ids;
}

std::vector<GroupSpan> parse_scenario_groups(std::istream& in, Seconds day_base) {
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (!have_header && getline_any(in, line)) {
        ++line_no;
        have_header = !trim(line).empty();
    }
    if (!have_header) throw ParseError(1, "missing header row");
    std::vector<GroupSpan> groups;
    while (getline_any(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != 3) throw ParseError(line_no, "expected start,end,members");
        GroupSpan g;
        try {
            g.start = parse_timestamp(fields[0], day_base);
            g.end = parse_timestamp(fields[1], day_base);
        } catch (const std::invalid_argument& e) {
            throw ParseError(line_no, e.what());
        }
        for (auto m : split(fields[2], ' ')) {
            if (m.empty()) continue;
            const auto id = parse_int<std::uint32_t>(m);
            if (!id) throw ParseError(line_no, fmt::format("'{}' is not a badge id", m));
            g.members.emplace_back(*id);
        }
        groups.push_back(std::move(g));
    }
    return groups;
}

std::string format_scenario_groups(const Scenario& scenario) {
    std::string s = "start,end,members\n";
    for (const auto& g : scenario.groups) {
        s += fmt::format("{},{},", g.start, g.end);
        for (std::size_t k = 0; k < g.members.size(); ++k) {
            s += fmt::format("{}{}", k ? " " : "", g.members[k].value);
        }
        s += '\n';
    }
    return s;
}

std::pair<std::vector<std::string>, std::vector<std::string>> parse_ratings(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (!have_header && getline_any(in, line)) {
        ++line_no;
        have_header = !trim(line).empty();
    }
    if (!have_header) throw ParseError(1, "missing header row");
    const char delim = line.find('\t') != std::string::npos ? '\t' : ',';
    std::pair<std::vector<std::string>, std::vector<std::string>> out;
    while (getline_any(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split(line, delim);
        if (fields.size() != 2) throw ParseError(line_no, "expected two ratings per row");
        out.first.emplace_back(fields[0]);
        out.second.emplace_back(fields[1]);
    }
    return out;
}

std::string format_parse_report(const ParseReport& report) {
    std::string s = fmt::format("rows,{}\nrejected,{}\ndropped,{}\nclipped,{}\nwarnings,{}\nline,action,reason\n",
                                report.rows, report.count(IssueAction::rejected), report.count(IssueAction::dropped),
                                report.count(IssueAction::clipped), report.count(IssueAction::warning));
    for (const auto& i : report.issues) s += fmt::format("{},{},{}\n", i.line, to_string(i.action), i.reason);
    return s;
}

std::string format_classification(const ClassificationTable& t) {
    return fmt::format("cell,seconds\ntp,{}\nfp,{}\nfn,{}\ntn,{}\ntotal,{}\n", t.tp, t.fp, t.fn, t.tn, t.total());
}

std::string format_metrics(const ValidityMetrics& m) {
    return fmt::format("metric,value\nsensitivity,{}\nspecificity,{}\naccuracy,{}\nsum_sens_spec,{}\n",
                       fixed4(m.sensitivity), fixed4(m.specificity), fixed4(m.accuracy), fixed4(m.sum_sens_spec));
}

std::string format_sweep(const SweepResult& r) {
    std::string s = fmt::format("# strategy={}\nvalue,tp,fp,fn,tn,sensitivity,specificity,accuracy,sum_sens_spec\n",
                                to_string(r.kind));
    auto row = [&](const std::string& value, const ClassificationTable& t, const ValidityMetrics& m) {
        s += fmt::format("{},{},{},{},{},{},{},{},{}\n", value, t.tp, t.fp, t.fn, t.tn, fixed4(m.sensitivity),
                         fixed4(m.specificity), fixed4(m.accuracy), fixed4(m.sum_sens_spec));
    };
    row("none", r.baseline_table, r.baseline);
    for (const auto& p : r.points) row(std::to_string(p.value), p.table, p.metrics);
    return s;
}

std::string format_descriptives(const Descriptives& d) {
    std::string s = "quantity,unit,mean,sd,n\n";
    auto row = [&](std::string_view name, std::string_view unit, const Summary& x) {
        s += fmt::format("{},{},{},{},{}\n", name, unit, full(x.mean), full(x.sd), x.n);
    };
    row("interaction_duration", "s", d.interaction_duration_s);
    row("aggregated_dyadic_duration", "min", d.aggregated_dyadic_duration_min);
    row("individual_total_duration", "min", d.individual_total_duration_min);
    return s;
}

std::string format_weighted_matrix(const WeightedNetwork& net) {
    const auto ids = net.roster().ids();
    std::string s = "id";
    for (auto id : ids) s += fmt::format(",{}", id.value);
    s += '\n';
    for (std::size_t i = 0; i < ids.size(); ++i) {
        s += std::to_string(ids[i].value);
        for (std::size_t j = 0; j < ids.size(); ++j) s += "," + full(net.weight(i, j));
        s += '\n';
    }
    return s;
}

std::string format_nomination_matrix(const NominationNetwork& net) {
    const auto ids = net.roster().ids();
    std::string s = "id";
    for (auto id : ids) s += fmt::format(",{}", id.value);
    s += '\n';
    for (std::size_t i = 0; i < ids.size(); ++i) {
        s += std::to_string(ids[i].value);
        for (std::size_t j = 0; j < ids.size(); ++j) {
            if (i == j) {
                s += ",";
                continue;
            }
            const auto t = net.tie(i, j);
            s += t == TieState::missing ? ",NA" : (t == TieState::present ? ",1" : ",0");
        }
        s += '\n';
    }
    return s;
}

std::string format_rank_hits(const std::vector<RankHit>& hits) {
    std::string s = "rank,egos,reported,percent\n";
    for (const auto& h : hits) s += fmt::format("{},{},{},{:.4f}\n", h.rank, h.egos, h.reported, h.percent);
    return s;
}

std::string format_design_table(const std::vector<DesignRow>& rows) {
    std::string s = "ego,alter,minutes,reported\n";
    for (const auto& r : rows) s += fmt::format("{},{},{},{}\n", r.ego.value, r.alter.value, full(r.minutes), r.reported ? 1 : 0);
    return s;
}

std::string format_fit(const LogitFit& f) {
    return fmt::format(
        "key,value\nn,{}\nparameters,{}\nintercept,{}\nintercept_display,{:.2f}\nse_intercept,{}\nslope,{}\n"
        "slope_display,{:.2f}\nse_slope,{}\nlog_likelihood,{}\nnull_log_likelihood,{}\nmcfadden_r2,{}\n"
        "aic,{}\niterations,{}\nconverged,{}\ndegenerate,{}\nseparated,{}\n",
        f.n, f.parameters, full(f.intercept), f.intercept, full(f.se_intercept), full(f.slope), f.slope,
        full(f.se_slope), full(f.log_likelihood), full(f.null_log_likelihood), full(f.mcfadden_r2), full(f.aic()),
        f.iterations, f.converged, f.degenerate, f.separated);
}

std::string format_likelihood_ratio(const LikelihoodRatio& lr) {
    return fmt::format("chi2,{}\ndf,{}\np,{}\nnested,{}\ndelta_aic,{}\n", full(lr.chi2), lr.df, full(lr.p), lr.nested,
                       full(lr.delta_aic));
}

std::string format_t_test(const TTestResult& t) {
    return fmt::format("key,value\nt,{}\ndf,{}\np,{}\ncohen_d,{}\nmean0,{}\nmean1,{}\n", full(t.t), t.df, full(t.p),
                       full(t.cohen_d), full(t.mean0), full(t.mean1));
}

std::string format_kappa(const KappaResult& k) {
    return fmt::format("key,value\nkappa,{}\nobserved_agreement,{}\nchance_agreement,{}\nn,{}\n", full(k.kappa),
                       full(k.observed_agreement), full(k.chance_agreement), k.n);
}

void OutputSet::add(std::string name, std::string content) {
    for (auto& [n, c] : files_) {
        if (n == name) {
            c = std::move(content);
            return;
        }
    }
    files_.emplace_back(std::move(name), std::move(content));
}

void prepare_output_dir(const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error(fmt::format("cannot create output directory '{}': {}", out_dir.string(), ec.message()));
    const auto probe = out_dir / ".write_probe";
    {
        std::ofstream out(probe);
        if (!out || !(out << "probe")) {
            throw std::runtime_error(fmt::format("output directory '{}' is not writable", out_dir.string()));
        }
    }
    std::filesystem::remove(probe, ec);
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    std::string hex;
    hex.reserve(length * 2);
    for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
    return hex;
}

std::vector<ManifestEntry> emit_outputs(const OutputSet& outputs, const std::filesystem::path& out_dir) {
    prepare_output_dir(out_dir);
    std::vector<ManifestEntry> manifest;
    for (const auto& [name, content] : outputs.files()) {
        const auto path = out_dir / name;
        std::filesystem::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::binary);
        if (!out || !(out << content)) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
        manifest.push_back(ManifestEntry{name, sha256_hex(content), content.size()});
    }
    std::sort(manifest.begin(), manifest.end(), [](const auto& x, const auto& y) { return x.name < y.name; });
    std::string text = "name\tsha256\tbytes\n";
    for (const auto& m : manifest) text += fmt::format("{}\t{}\t{}\n", m.name, m.sha256, m.bytes);
    std::ofstream out(out_dir / "MANIFEST.tsv", std::ios::binary);
    if (!out || !(out << text)) throw std::runtime_error("cannot write MANIFEST.tsv");
    return manifest;
}

}  // namespace proxval
