#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "proxval/io.hpp"

using namespace proxval;

namespace {

ParsedEdgelist parse(const std::string& text, const EdgelistOptions& options = {}) {
    std::istringstream in(text);
    return parse_edgelist(in, options);
}

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("proxval_test_" + name);
    std::filesystem::remove_all(p);
    return p;
}

const char* kOpeningRows =
    "Start,ID Badge A,ID Badge B,End\n"
    "18:19:46,3,5,18:19:58\n"
    "18:19:47,1,10,18:20:15\n"
    "18:19:47,1,8,18:22:32\n"
    "18:19:49,10,8,18:22:35\n"
    "18:19:53,2,5,18:20:37\n"
    "18:20:04,6,11,18:20:14\n";

}  // namespace

TEST_CASE("timestamps") {
    CHECK(parse_timestamp("18:19:46") == 18 * 3600 + 19 * 60 + 46);
    CHECK(parse_timestamp("18:19:46.9") == 18 * 3600 + 19 * 60 + 46);
    CHECK(parse_timestamp("1700000000") == 1700000000);
    CHECK(parse_timestamp("1970-01-02T00:00:01Z") == 86401);
    CHECK(parse_timestamp("1970-01-02 00:00:01") == 86401);
    CHECK(parse_timestamp("00:00:05", parse_date("1970-01-02")) == 86405);
    CHECK_THROWS_AS(parse_timestamp("18:61:00"), std::invalid_argument);
    CHECK_THROWS_AS(parse_timestamp("noon"), std::invalid_argument);
    CHECK_THROWS_AS(parse_date("2024-13-01"), std::invalid_argument);
}

TEST_CASE("the six opening rows of the edgelist") {
    const auto parsed = parse(kOpeningRows);
    CHECK(parsed.log.size() == 6);
    CHECK(parsed.log.roster().size() == 8);
    CHECK(parsed.report.issues.empty());
    const auto first = std::find_if(parsed.log.events().begin(), parsed.log.events().end(),
                                    [](const auto& e) { return e.dyad == Dyad::of(BadgeId{3}, BadgeId{5}); });
    REQUIRE(first != parsed.log.events().end());
    CHECK(first->duration() == 12);
    CHECK(parsed.log.window().t0() == parse_timestamp("18:19:46"));
    CHECK(parsed.log.window().t_end() == parse_timestamp("18:22:35"));
}

TEST_CASE("tab delimited input") {
    const auto parsed = parse("start\ta\tb\tend\n0\t1\t2\t10\n");
    CHECK(parsed.log.size() == 1);
}

TEST_CASE("edgelist edge cases") {
    SUBCASE("header only") {
        const auto parsed = parse("start,a,b,end\n");
        CHECK(parsed.log.empty());
        CHECK(parsed.log.window().seconds() == 1);
    }
    SUBCASE("header only with a configured window keeps the window") {
        EdgelistOptions o;
        o.window = ObservationWindow(0, 500);
        CHECK(parse("start,a,b,end\n", o).log.window().seconds() == 500);
    }
    SUBCASE("reversed interval is a rejected row with its line number") {
        const auto parsed = parse("start,a,b,end\n0,1,2,10\n20,1,2,15\n");
        CHECK(parsed.log.size() == 1);
        REQUIRE(parsed.report.rejected() == 1);
        CHECK(parsed.report.issues[0].line == 3);
    }
    SUBCASE("self-loop is rejected") { CHECK(parse("start,a,b,end\n0,4,4,10\n").report.rejected() == 1); }
    SUBCASE("zero-length row is dropped") {
        const auto parsed = parse("start,a,b,end\n5,1,2,5\n");
        CHECK(parsed.report.count(IssueAction::dropped) == 1);
        CHECK(parsed.report.rejected() == 0);
    }
    SUBCASE("malformed timestamp stops with the line number") {
        try {
            parse("start,a,b,end\n0,1,2,10\nxx,1,2,10\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 3);
        }
    }
    SUBCASE("unknown roster id stops parsing") {
        EdgelistOptions o;
        o.roster = oracle::roster_1_to(3);
        CHECK_THROWS_AS(parse("start,a,b,end\n0,1,7,10\n", o), ParseError);
    }
    SUBCASE("window clipping") {
        EdgelistOptions o;
        o.window = ObservationWindow(10, 20);
        const auto parsed = parse("start,a,b,end\n5,1,2,15\n30,1,2,40\n", o);
        REQUIRE(parsed.log.size() == 1);
        CHECK(parsed.log.events()[0].start == 10);
        CHECK(parsed.report.count(IssueAction::clipped) == 1);
        CHECK(parsed.report.count(IssueAction::dropped) == 1);
    }
    SUBCASE("wrong header") { CHECK_THROWS_AS(parse("start,a,end\n"), ParseError); }
}

TEST_CASE("edgelist round trip") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 10; ++trial) {
        const EventLog log = oracle::random_log(rng, 6, 1000, 40, 100);
        EdgelistOptions o;
        o.window = log.window();
        o.roster = log.roster();
        CHECK(parse(format_edgelist(log), o).log == log);
    }
}

TEST_CASE("nominations") {
    const Roster roster = oracle::roster_1_to(4);
    SUBCASE("basic with an explicit non-nominating respondent") {
        std::istringstream in("ego,alter\n1,2\n1,3\n2,\n");
        const auto parsed = parse_nominations(in, roster);
        CHECK(parsed.network.respondent_count() == 2);
        CHECK(parsed.network.tie(0, 1) == TieState::present);
        CHECK(parsed.network.tie(1, 0) == TieState::absent);
        CHECK(parsed.network.tie(2, 0) == TieState::missing);
    }
    SUBCASE("self nomination and unknown alter are rejected rows") {
        std::istringstream in("ego,alter\n1,1\n1,9\n1,2\n");
        const auto parsed = parse_nominations(in, roster);
        CHECK(parsed.report.rejected() == 2);
        CHECK(parsed.network.out_degree(0) == 1);
    }
    SUBCASE("ego outside the respondent list is rejected") {
        std::istringstream in("ego,alter\n3,1\n");
        const auto parsed = parse_nominations(in, roster, std::vector<BadgeId>{BadgeId{1}});
        CHECK(parsed.report.rejected() == 1);
    }
    SUBCASE("many nominations warn") {
        const Roster big = oracle::roster_1_to(30);
        std::string text = "ego,alter\n";
        for (int a = 2; a <= 25; ++a) text += "1," + std::to_string(a) + "\n";
        std::istringstream in(text);
        const auto parsed = parse_nominations(in, big);
        CHECK(parsed.report.count(IssueAction::warning) == 1);
        CHECK(parsed.network.out_degree(0) == 24);
    }
}

TEST_CASE("scenario groups and ratings") {
    std::istringstream groups("start,end,members\n0,60,1 2 3\n100,160,2 4\n");
    const auto spans = parse_scenario_groups(groups);
    REQUIRE(spans.size() == 2);
    CHECK(spans[0].members.size() == 3);
    const Scenario s{oracle::roster_1_to(4), ObservationWindow(0, 200), spans};
    std::istringstream again(format_scenario_groups(s));
    const auto reread = parse_scenario_groups(again);
    CHECK(reread.size() == 2);
    CHECK(reread[1].end == 160);

    std::istringstream ratings("rater_a,rater_b\nyes,yes\nno,yes\n");
    const auto [a, b] = parse_ratings(ratings);
    CHECK(a == std::vector<std::string>{"yes", "no"});
    CHECK(b == std::vector<std::string>{"yes", "yes"});

    std::istringstream ids("id\n4\n2\n");
    CHECK(parse_id_list(ids) == std::vector<BadgeId>{BadgeId{4}, BadgeId{2}});
}

TEST_CASE("report formatting") {
    const std::string m = format_metrics(metrics(ClassificationTable{25326, 6086, 25674, 196025}));
    CHECK(m.find("accuracy,0.8745") != std::string::npos);
    CHECK(m.find("sensitivity,0.4966") != std::string::npos);
    CHECK(format_metrics(metrics(ClassificationTable{0, 0, 0, 5})).find("sensitivity,NA") != std::string::npos);
    CHECK(format_classification(ClassificationTable{1, 2, 3, 4}).find("tp,1") != std::string::npos);
}

TEST_CASE("outputs and manifest") {
    OutputSet set;
    set.add("b.csv", "two\n");
    set.add("a.csv", "one\n");
    const auto dir1 = scratch("manifest1"), dir2 = scratch("manifest2");
    const auto m1 = emit_outputs(set, dir1);
    const auto m2 = emit_outputs(set, dir2);
    REQUIRE(m1.size() == 2);
    CHECK(m1[0].name == "a.csv");
    CHECK(m1[0].bytes == 4);
    CHECK(m1[0].sha256 == sha256_hex("one\n"));

    auto slurp = [](const std::filesystem::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    CHECK(slurp(dir1 / "MANIFEST.tsv") == slurp(dir2 / "MANIFEST.tsv"));
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    std::filesystem::remove_all(dir1);
    std::filesystem::remove_all(dir2);
}

TEST_CASE("output directory that cannot be created") {
    const auto file = scratch("blocker");
    std::ofstream(file) << "x";
    CHECK_THROWS_AS(prepare_output_dir(file / "sub"), std::runtime_error);
    std::filesystem::remove(file);
}

TEST_CASE("nominations round trip keeps silent respondents") {
    const Roster roster = oracle::roster_1_to(5);
    NominationNetwork net(roster, {BadgeId{1}, BadgeId{2}, BadgeId{4}});
    net.nominate(BadgeId{1}, BadgeId{3});
    net.nominate(BadgeId{4}, BadgeId{1});
    std::istringstream in(format_nominations(net));
    CHECK(parse_nominations(in, roster).network == net);
}
