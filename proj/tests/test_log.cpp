#include <doctest.h>

#include <sstream>

#include "exmine/csv.hpp"
#include "exmine/error.hpp"
#include "exmine/format.hpp"
#include "exmine/log.hpp"

using namespace exmine;

namespace {

EventLog parse(const std::string& text, LogSchema schema = {}) {
    std::istringstream in(text);
    return parse_event_log(in, schema);
}

std::size_t error_line(const std::string& text) {
    try {
        parse(text);
    } catch (const InputError& e) {
        return e.line().value_or(0);
    }
    return 0;
}

}  // namespace

TEST_CASE("csv reader handles quotes, embedded newlines and CRLF") {
    std::istringstream in("\xEF\xBB\xBF" "a,b\r\n\"x,1\",\"say \"\"hi\"\"\"\r\n\r\n\"multi\nline\",z\n");
    csv::Reader r(in);
    auto h = r.next();
    REQUIRE(h);
    CHECK(h->fields == std::vector<std::string>{"a", "b"});
    auto r1 = r.next();
    REQUIRE(r1);
    CHECK(r1->fields == std::vector<std::string>{"x,1", "say \"hi\""});
    CHECK(r1->line == 2);
    auto r2 = r.next();
    REQUIRE(r2);
    CHECK(r2->fields == std::vector<std::string>{"multi\nline", "z"});
    CHECK(r2->line == 4);
    CHECK_FALSE(r.next());
}

TEST_CASE("csv escape round-trips through the reader") {
    const std::vector<std::string> row{"plain", "with,comma", "q\"uote", "", "new\nline"};
    std::istringstream in(csv::join_row(row) + "\n");
    csv::Reader r(in);
    auto rec = r.next();
    REQUIRE(rec);
    CHECK(rec->fields == row);
    CHECK(csv::escape("plain") == "plain");
}

TEST_CASE("timestamps") {
    CHECK(parse_rfc3339("1970-01-01T00:00:00Z")->micros == 0);
    CHECK(parse_rfc3339("2011-01-01T00:00:00Z")->micros == 1'293'840'000'000'000);
    CHECK(parse_rfc3339("2011-01-01 00:00:00")->micros == 1'293'840'000'000'000);
    CHECK(parse_rfc3339("2011-01-01T02:00:00+02:00")->micros == 1'293'840'000'000'000);
    CHECK(parse_rfc3339("2010-12-31T23:00:00-01:00")->micros == 1'293'840'000'000'000);
    CHECK(parse_rfc3339("2011-01-01T00:00:00.25Z")->micros == 1'293'840'000'250'000);
    CHECK_FALSE(parse_rfc3339("not-a-date"));
    CHECK_FALSE(parse_rfc3339("2011-02-30T00:00:00Z"));
    CHECK_FALSE(parse_rfc3339("2011-01-01T25:00:00Z"));
    CHECK(parse_epoch_seconds("86400")->micros == 86'400'000'000);
    CHECK(parse_epoch_seconds("-5")->micros == -5'000'000);
    CHECK_FALSE(parse_epoch_seconds("12a"));
    CHECK(detect_timestamp_format("1293840000") == TimestampFormat::EpochSeconds);
    CHECK(detect_timestamp_format("2011-01-01T00:00:00Z") == TimestampFormat::Rfc3339);
    CHECK(format_rfc3339(Instant::from_seconds(1'293'840'000 + 3661)) == "2011-01-01T01:01:01Z");
    CHECK(format_date(Instant::from_seconds(-1)) == "1969-12-31");
}

TEST_CASE("format_number") {
    CHECK(format_number(3.857142857) == "3.85714");
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(1234567.0) == "1.23457e+06");
    CHECK(format_number(std::optional<double>{}) == "NA");
    CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "NA");
    // 0.125 is exact in binary: half-even at the sixth digit keeps the even neighbour.
    CHECK(format_number(1.000125) == "1.00012");
    CHECK(parse_duration_unit("weeks") == DurationUnit::Weeks);
    CHECK_FALSE(parse_duration_unit("fortnights"));
    CHECK(to_unit(86400.0 * 14, DurationUnit::Weeks) == doctest::Approx(2.0));
}

TEST_CASE("parse_event_log: direct mapping") {
    const auto log = parse("case_id,activity,timestamp\nc1,A,2011-01-01T00:00:00Z\nc1,B,2011-01-01T01:00:00Z\n"
                           "c1,C,2011-01-01T02:00:00Z\n");
    CHECK(log.cases.size() == 1);
    CHECK(log.event_count() == 3);
    CHECK(log.row_count == 3);
    CHECK(log.cases[0].events[2].row_index == 4);
}

TEST_CASE("parse_event_log: errors") {
    CHECK(error_line("case_id,activity,timestamp\nc1,A,0\nc1,B,5\nc1,C,not-a-date\n") == 4);
    CHECK(error_line("case_id,activity,timestamp\nc1,A,2011-01-01T00:00:00Z\nc1,B,not-a-date\n") == 3);
    CHECK_THROWS_WITH_AS(parse("case_id,timestamp\nc1,0\n"), doctest::Contains("missing column 'activity'"),
                         InputError);
    CHECK_THROWS_AS(parse(""), InputError);
    CHECK_THROWS_AS(parse("case_id,activity,timestamp\n"), InputError);
}

TEST_CASE("parse_event_log: attributes, first non-empty value wins") {
    LogSchema schema;
    schema.attribute_columns = {"outcome"};
    const auto log = parse("case_id,activity,timestamp,outcome\nc1,A,0,\nc1,B,1,ok\nc1,C,2,late\n", schema);
    CHECK(log.cases[0].attributes.at("outcome") == "ok");
    CHECK_THROWS_AS(parse("case_id,activity,timestamp\nc1,A,0\n", schema), InputError);
}

TEST_CASE("build_traces: ordering, ties and throughput") {
    const auto log = parse("case_id,activity,timestamp\nc1,late,10\nc1,early,5\nc2,X,0\nc2,Y,0\nc2,Z,86400\n");
    const auto traces = build_traces(log);
    REQUIRE(traces.size() == 2);
    CHECK(traces[0].path == Path{"early", "late"});
    CHECK(traces[0].throughput == 5.0);
    CHECK(traces[1].path == Path{"X", "Y", "Z"});
    CHECK(traces[1].throughput == 86400.0);
}

TEST_CASE("filter_by_completion keeps [from, to)") {
    const auto traces =
        build_traces(parse("case_id,activity,timestamp\na,A,0\na,B,10\nb,A,0\nb,B,20\nc,A,0\nc,B,30\n"));
    const auto kept = filter_by_completion(traces, Instant::from_seconds(20), Instant::from_seconds(30));
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].case_id == "b");
    CHECK(filter_by_completion(traces, std::nullopt, std::nullopt).size() == 3);
}

namespace {

Trace make_trace(std::string id, Path path) {
    Trace t;
    t.case_id = std::move(id);
    t.path = std::move(path);
    return t;
}

}  // namespace

TEST_CASE("extract_variants and top_k") {
    const std::vector<Trace> traces{make_trace("1", {"A", "B"}), make_trace("2", {"A", "B"}),
                                    make_trace("3", {"A", "C"})};
    const auto table = extract_variants(traces);
    REQUIRE(table.size() == 2);
    CHECK(table[0].path == Path{"A", "B"});
    CHECK(table[0].case_count == 2);
    CHECK(table[0].case_ids == std::vector<std::string>{"1", "2"});
    CHECK(table[0].case_share == doctest::Approx(2.0 / 3.0));
    CHECK(table[1].case_share == doctest::Approx(1.0 / 3.0));
    CHECK(extract_variants({}).empty());

    const auto top = top_k_variants(table);
    CHECK(top.rows.size() == 2);
    CHECK(top.rows[1].rank == 2);
    CHECK_THROWS_AS(top_k_variants(table, 0), AnalysisError);
    CHECK(format_path({"A", "B"}) == "A > B");
}

TEST_CASE("variant order: count, then length, then lexicographic") {
    std::vector<Trace> traces;
    for (int i = 0; i < 6; ++i) traces.push_back(make_trace("p" + std::to_string(i), {"A", "B", "C"}));
    for (int i = 0; i < 3; ++i) traces.push_back(make_trace("q" + std::to_string(i), {"A", "Z"}));
    for (int i = 0; i < 3; ++i) traces.push_back(make_trace("r" + std::to_string(i), {"A", "C"}));
    traces.push_back(make_trace("s", {"B"}));
    const auto table = extract_variants(traces);
    CHECK(table[0].path == Path{"A", "B", "C"});
    CHECK(table[1].path == Path{"A", "C"});
    CHECK(table[2].path == Path{"A", "Z"});
    CHECK(table[3].path == Path{"B"});
    const auto top = top_k_variants(table, 15);
    for (std::size_t i = 1; i < top.rows.size(); ++i) CHECK(top.rows[i].case_share <= top.rows[i - 1].case_share);
}

TEST_CASE("tail statistic: 197 of 200 variants under 1%") {
    // Three big variants with 100 cases each and 197 singletons: N = 497, 1/497 < 1%, 100/497 > 1%.
    std::vector<Trace> traces;
    int id = 0;
    for (int v = 0; v < 3; ++v)
        for (int i = 0; i < 100; ++i) traces.push_back(make_trace(std::to_string(id++), {"big" + std::to_string(v)}));
    for (int v = 0; v < 197; ++v) traces.push_back(make_trace(std::to_string(id++), {"s" + std::to_string(v)}));
    const auto top = top_k_variants(extract_variants(traces), 15);
    CHECK(top.tail_fraction == doctest::Approx(0.985).epsilon(1e-12));
}
