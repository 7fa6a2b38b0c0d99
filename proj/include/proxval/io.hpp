// Delimited-text formats: edgelists, nominations, scenarios, ratings, and
// the result tables written by the command line tool.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "proxval/aggregate.hpp"
#include "proxval/core.hpp"
#include "proxval/simgen.hpp"
#include "proxval/stats.hpp"
#include "proxval/validity.hpp"

namespace proxval {

/// Malformed input that stops parsing; carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Integer epoch seconds, "HH:MM:SS" (offset by day_base), or ISO-8601
/// "YYYY-MM-DDTHH:MM:SS" (a space may replace the T; optional trailing Z).
/// Fractional seconds are floored. Throws std::invalid_argument.
Seconds parse_timestamp(std::string_view text, Seconds day_base = 0);

/// Midnight UTC of "YYYY-MM-DD" as epoch seconds.
Seconds parse_date(std::string_view text);

enum class IssueAction { rejected, dropped, clipped, warning };
std::string_view to_string(IssueAction action);

struct ParseIssue {
    std::size_t line = 0;
    IssueAction action = IssueAction::rejected;
    std::string reason;
};

struct ParseReport {
    std::size_t rows = 0;
    std::vector<ParseIssue> issues;

    std::size_t count(IssueAction action) const;
    std::size_t rejected() const { return count(IssueAction::rejected); }
};

struct EdgelistOptions {
    std::optional<ObservationWindow> window;  // inferred from the rows when absent
    std::optional<Roster> roster;             // inferred from the rows when absent
    Seconds day_base = 0;                     // date for HH:MM:SS timestamps
};

struct ParsedEdgelist {
    EventLog log;
    ParseReport report;
};

/// Header row required with columns start, id_a, id_b, end. The delimiter
/// (comma or tab) is detected from the header. Reversed intervals and
/// self-loops are rejected rows; zero-length rows are dropped. Against a
/// configured window, partial rows are clipped and outside rows dropped.
/// A file with no usable rows and no configured window gets the
/// one-second window [day_base, day_base + 1).
ParsedEdgelist parse_edgelist(std::istream& in, const EdgelistOptions& options = {});
ParsedEdgelist parse_edgelist(const std::filesystem::path& path, const EdgelistOptions& options = {});

/// start,id_a,id_b,end with integer timestamps.
void write_edgelist(std::ostream& out, const EventLog& log);
std::string format_edgelist(const EventLog& log);

/// ego,alter rows; a respondent without nominations gets "ego," so the
/// respondent set survives a round trip.
std::string format_nominations(const NominationNetwork& net);

struct ParsedNominations {
    NominationNetwork network;
    ParseReport report;
};

/// Header "ego,alter". A row with an empty alter declares a respondent
/// without nominations. When respondents is absent, every ego that appears
/// is a respondent. Self-nominations and ids outside the roster are
/// rejected rows; more than 20 nominations by one ego is a warning.
ParsedNominations parse_nominations(std::istream& in, const Roster& roster,
                                    const std::optional<std::vector<BadgeId>>& respondents = std::nullopt);
ParsedNominations parse_nominations(const std::filesystem::path& path, const Roster& roster,
                                    const std::optional<std::vector<BadgeId>>& respondents = std::nullopt);

/// One badge id per line; a non-numeric first line is treated as a header.
std::vector<BadgeId> parse_id_list(std::istream& in);

inline constexpr std::size_t kNominationWarningThreshold = 20;

/// Header "start,end,members"; members separated by spaces.
std::vector<GroupSpan> parse_scenario_groups(std::istream& in, Seconds day_base = 0);
std::string format_scenario_groups(const Scenario& scenario);

/// Header "rater_a,rater_b"; one categorical label per rater per row.
std::pair<std::vector<std::string>, std::vector<std::string>> parse_ratings(std::istream& in);

std::string format_parse_report(const ParseReport& report);
std::string format_classification(const ClassificationTable& table);
std::string format_metrics(const ValidityMetrics& m);
std::string format_sweep(const SweepResult& result);
std::string format_descriptives(const Descriptives& d);
std::string format_weighted_matrix(const WeightedNetwork& net);
std::string format_nomination_matrix(const NominationNetwork& net);
std::string format_rank_hits(const std::vector<RankHit>& hits);
std::string format_design_table(const std::vector<DesignRow>& rows);
std::string format_fit(const LogitFit& fit);
std::string format_likelihood_ratio(const LikelihoodRatio& lr);
std::string format_t_test(const TTestResult& t);
std::string format_kappa(const KappaResult& k);

/// Named text artifacts collected during a run.
class OutputSet {
public:
    void add(std::string name, std::string content);
    const std::vector<std::pair<std::string, std::string>>& files() const { return files_; }

private:
    std::vector<std::pair<std::string, std::string>> files_;
};

struct ManifestEntry {
    std::string name;
    std::string sha256;
    std::size_t bytes = 0;
};

/// Creates out_dir if needed and proves it is writable; throws
/// std::runtime_error otherwise. Run before any computation.
void prepare_output_dir(const std::filesystem::path& out_dir);

/// Writes every artifact plus MANIFEST.tsv (name, sha256, bytes; sorted by
/// name) and returns the manifest entries.
std::vector<ManifestEntry> emit_outputs(const OutputSet& outputs, const std::filesystem::path& out_dir);

std::string sha256_hex(std::string_view data);

}  // namespace proxval
