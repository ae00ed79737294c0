#include <doctest.h>

#include <algorithm>

#include "isc/ingest.hpp"
#include "isc/model.hpp"
#include "isc/recommender.hpp"
#include "../support/expect.hpp"
#include "../support/fixtures.hpp"
#include "../support/gen.hpp"

using namespace isc;
using namespace isc::testing;

namespace {

std::vector<DataType> dtypes(const DataTable& t) {
    std::vector<DataType> out;
    for (const auto& c : t.columns) out.push_back(c.dtype);
    return out;
}

std::string csv_message(std::string_view bytes) {
    const auto e = error_of([&] { parse_csv(bytes); });
    REQUIRE(e);
    CHECK(e->code() == ErrorCode::CsvParse);
    return e->what();
}

}  // namespace

TEST_CASE("parse_csv infers column types") {
    const DataTable t = parse_csv("name,quiz,forum\nAda,9,14\nBo,7,3");
    CHECK(t.column_names() == std::vector<std::string>{"name", "quiz", "forum"});
    CHECK(dtypes(t) == std::vector{DataType::Categorical, DataType::Numerical, DataType::Numerical});
    CHECK(t.row_count == 2);
    CHECK(t.columns[0].values == std::vector<std::string>{"Ada", "Bo"});
    CHECK(validate_table(t).empty());
}

TEST_CASE("parse_csv errors") {
    CHECK(csv_message("") == "empty input");
    CHECK(csv_message("a,b\n1,2\n3") == "row 3: expected 2 fields, found 1");
    CHECK(csv_message("\n") == "no header row");
    CHECK(csv_message("a,A\n1,2") == "duplicate header name 'A'");
    CHECK(csv_message("a,,c\n") == "header column 2: empty name");
    CHECK(csv_message("a\n\"open") == "row 2: unterminated quoted field");
    CHECK(csv_message("a\nx\"y\n") == "row 2: unexpected quote inside unquoted field");
    CHECK(csv_message("a\n\"x\"y\n") == "row 2: unexpected character after closing quote");
    CHECK(csv_message("a\n\xff\n") == "invalid UTF-8 at byte 2");
    CHECK(csv_message("a\n\xc0\xaf\n") == "invalid UTF-8 at byte 2");
}

TEST_CASE("parse_csv row error carries a row path") {
    const auto e = error_of([] { parse_csv("a,b\n1,2\n3"); });
    REQUIRE(e);
    CHECK(has_violation(e->details(), "csv.rows[3]", "expected 2 fields"));
    CHECK(http_status(e->code()) == 422);
}

TEST_CASE("parse_csv quoting, line endings and BOM") {
    const DataTable t = parse_csv("\xEF\xBB\xBFname,note\r\n\"Lee, A\",\"said \"\"hi\"\"\"\r\n\"multi\nline\",\r\n");
    CHECK(t.column_names() == std::vector<std::string>{"name", "note"});
    REQUIRE(t.row_count == 2);
    CHECK(t.columns[0].values == std::vector<std::string>{"Lee, A", "multi\nline"});
    CHECK(t.columns[1].values == std::vector<std::string>{"said \"hi\"", ""});
}

TEST_CASE("parse_csv header only") {
    const DataTable t = parse_csv("a,b\n");
    CHECK(t.row_count == 0);
    CHECK(dtypes(t) == std::vector{DataType::Categorical, DataType::Categorical});
}

TEST_CASE("parse_csv size limits") {
    std::string big = "a\n";
    for (std::size_t i = 0; i < kMaxCsvRows; ++i) big += "1\n";
    CHECK(parse_csv(big).row_count == kMaxCsvRows);
    big += "1\n";
    auto e = error_of([&] { parse_csv(big); });
    REQUIRE(e);
    CHECK(e->code() == ErrorCode::TooLarge);

    const std::string huge(kMaxCsvBytes + 1, 'a');
    e = error_of([&] { parse_csv(huge); });
    REQUIRE(e);
    CHECK(e->code() == ErrorCode::TooLarge);
    CHECK(http_status(e->code()) == 413);
}

TEST_CASE("infer_column_type") {
    using V = std::vector<std::string>;
    CHECK(infer_column_type(V{"9", "7", "12.5"}) == DataType::Numerical);
    CHECK(infer_column_type(V{"A", "B", "A"}) == DataType::Categorical);
    CHECK(infer_column_type(V{"1", "x", "3"}) == DataType::Categorical);
    CHECK(infer_column_type(V{"1", "", "-3"}) == DataType::Numerical);
    CHECK(infer_column_type(V{"", ""}) == DataType::Categorical);
    CHECK(infer_column_type(V{}) == DataType::Categorical);
    CHECK(infer_column_type(V{"1,000"}) == DataType::Categorical);
    CHECK(infer_column_type(V{"1e5"}) == DataType::Categorical);
}

TEST_CASE("inference ignores row order") {
    Gen g(17);
    for (int i = 0; i < 1000; ++i) {
        std::vector<std::string> values;
        const int n = g.range(0, 8);
        for (int k = 0; k < n; ++k) values.push_back(g.cell(g.chance(0.8) ? DataType::Numerical : DataType::Categorical));
        const auto before = infer_column_type(values);
        g.shuffle(values);
        CHECK(infer_column_type(values) == before);
        CHECK(before != DataType::CategoricalOrdered);
    }
}

TEST_CASE("prepopulate_table") {
    const std::vector<DataRequirement> reqs{{"student", DataType::Categorical}, {"grade", DataType::Numerical}};
    const DataTable t = prepopulate_table(reqs);
    CHECK(t.column_names() == std::vector<std::string>{"student", "grade"});
    CHECK(dtypes(t) == std::vector{DataType::Categorical, DataType::Numerical});
    CHECK(t.row_count == 3);
    CHECK(t.columns[0].values == std::vector<std::string>{"Item 1", "Item 2", "Item 3"});
    CHECK(t.columns[1].values == std::vector<std::string>{"10", "20", "30"});
    CHECK(validate_table(t).empty());

    const DataTable w = prepopulate_table(std::vector<DataRequirement>{{"week", DataType::CategoricalOrdered}});
    REQUIRE(w.columns.size() == 1);
    CHECK(w.columns[0].name == "week");
    CHECK(w.columns[0].values == std::vector<std::string>{"Level 1", "Level 2", "Level 3"});
}

TEST_CASE("serialize_csv quotes only when needed") {
    DataTable t{{{"a", DataType::Categorical, {"a,b", "plain", "q\"x", "two\nlines"}}}, 4};
    CHECK(serialize_csv(t) == "a\n\"a,b\"\nplain\n\"q\"\"x\"\n\"two\nlines\"\n");
}

TEST_CASE("csv round-trip on generated tables") {
    Gen g(99);
    for (int i = 0; i < 500; ++i) {
        DataTable t = g.table(1, 5, 10);
        if (t.row_count == 0) t = g.table_of({DataType::Numerical, DataType::Categorical}, 1);
        make_inference_stable(t);
        const DataTable back = parse_csv(serialize_csv(t));
        CHECK(back.column_names() == t.column_names());
        CHECK(back.row_count == t.row_count);
        for (std::size_t c = 0; c < t.columns.size(); ++c) {
            CHECK(back.columns[c].values == t.columns[c].values);
            const DataType want =
                t.columns[c].dtype == DataType::CategoricalOrdered ? DataType::Categorical : t.columns[c].dtype;
            CHECK(back.columns[c].dtype == want);
        }
    }
}

TEST_CASE("ordered columns come back categorical") {
    DataTable t{{{"week", DataType::CategoricalOrdered, {"W1", "W2"}}, {"n", DataType::Numerical, {"1", "2"}}}, 2};
    CHECK(parse_csv(serialize_csv(t)).columns[0].dtype == DataType::Categorical);
}

TEST_CASE("parse_csv on arbitrary bytes returns a table or a structured error") {
    Gen g(4242);
    static const std::vector<std::string> pieces{",", "\"", "\n", "\r", "a", "1", "\xff", "\xc3\xa9", " ", ""};
    for (int i = 0; i < 3000; ++i) {
        std::string bytes;
        if (g.chance(0.5)) {
            bytes = g.bytes(64);
        } else {
            const int n = g.range(0, 40);
            for (int k = 0; k < n; ++k) bytes += g.pick(pieces);
        }
        try {
            const DataTable t = parse_csv(bytes);
            CHECK(validate_table(t).empty());
        } catch (const Error& e) {
            CHECK((e.code() == ErrorCode::CsvParse || e.code() == ErrorCode::TooLarge));
            CHECK_FALSE(e.details().empty());
        }
    }
}

TEST_CASE("edit_table") {
    const DataTable t = quiz_table();

    SUBCASE("add row appends empty cells") {
        const DataTable out = edit_table(t, edit::AddRow{});
        CHECK(out.row_count == 3);
        for (const auto& c : out.columns) CHECK(c.values.back().empty());
    }
    SUBCASE("add column backfills") {
        const DataTable out = edit_table(t, edit::AddColumn{"week", DataType::CategoricalOrdered});
        CHECK(out.columns.back().values == std::vector<std::string>{"", ""});
        CHECK(validate_table(out).empty());
        CHECK(error_of([&] { edit_table(t, edit::AddColumn{"QUIZ", DataType::Numerical}); }));
        CHECK(error_of([&] { edit_table(t, edit::AddColumn{"", DataType::Numerical}); }));
    }
    SUBCASE("remove row") {
        const DataTable out = edit_table(t, edit::RemoveRow{0});
        CHECK(out.row_count == 1);
        CHECK(out.columns[0].values == std::vector<std::string>{"Bo"});
        CHECK(error_of([&] { edit_table(t, edit::RemoveRow{2}); }));
    }
    SUBCASE("remove column then the signature loses a categorical") {
        const DataTable out = edit_table(t, edit::RemoveColumn{"name"});
        CHECK(signature_of(out) == DataSignature::of(0, 2));
        CHECK(error_of([&] { edit_table(t, edit::RemoveColumn{"nope"}); }));
    }
    SUBCASE("set cell") {
        CHECK(edit_table(t, edit::SetCell{1, "name", "Cy"}).columns[0].values[1] == "Cy");
        CHECK(edit_table(t, edit::SetCell{1, "quiz", ""}).columns[1].values[1].empty());
        const auto e = error_of([&] { edit_table(t, edit::SetCell{1, "quiz", "abs"}); });
        REQUIRE(e);
        CHECK(has_violation(e->details(), "table.columns[1].values[1]"));
        CHECK(error_of([&] { edit_table(t, edit::SetCell{5, "name", "x"}); }));
    }
    SUBCASE("set column type to numerical lists offending rows") {
        DataTable s = edit_table(t, edit::SetColumnType{"quiz", DataType::Categorical});
        s = edit_table(s, edit::SetCell{0, "quiz", "abs"});
        const auto e = error_of([&] { edit_table(s, edit::SetColumnType{"quiz", DataType::Numerical}); });
        REQUIRE(e);
        CHECK(e->details().size() == 1);
        CHECK(has_violation(e->details(), "table.columns[1].values[0]", "abs"));
        CHECK(e->context()["rows"] == nlohmann::json::array({0}));
        CHECK(edit_table(t, edit::SetColumnType{"name", DataType::CategoricalOrdered}).columns[0].dtype ==
              DataType::CategoricalOrdered);
    }
    SUBCASE("rename column") {
        CHECK(edit_table(t, edit::RenameColumn{"quiz", "Quiz"}).columns[1].name == "Quiz");
        CHECK(error_of([&] { edit_table(t, edit::RenameColumn{"quiz", "forum"}); }));
        CHECK(error_of([&] { edit_table(t, edit::RenameColumn{"x", "y"}); }));
    }
}

TEST_CASE("edits keep table invariants or fail leaving the input untouched") {
    Gen g(8);
    for (int i = 0; i < 2000; ++i) {
        DataTable t = g.table(0, 4, 4);
        const DataTable before = t;
        const auto name = t.columns.empty() ? std::string("missing") : g.pick(t.columns).name;
        const std::size_t row = static_cast<std::size_t>(g.range(0, 5));
        TableEdit e;
        switch (g.range(0, 6)) {
            case 0: e = edit::AddRow{}; break;
            case 1: e = edit::AddColumn{g.chance(0.3) ? name : g.column_name(9), g.pick(kAllDataTypes)}; break;
            case 2: e = edit::RemoveRow{row}; break;
            case 3: e = edit::RemoveColumn{name}; break;
            case 4: e = edit::SetCell{row, name, g.cell(g.chance(0.5) ? DataType::Numerical : DataType::Categorical)}; break;
            case 5: e = edit::SetColumnType{name, g.pick(kAllDataTypes)}; break;
            default: {
                const bool clash = !t.columns.empty() && g.chance(0.3);
                e = edit::RenameColumn{name, clash ? t.columns[0].name : g.column_name(7)};
                break;
            }
        }
        try {
            const DataTable out = edit_table(t, e);
            CHECK(validate_table(out).empty());
        } catch (const Error& err) {
            CHECK(err.code() == ErrorCode::Validation);
        }
        CHECK(t == before);
    }
}

TEST_CASE("table edits read from JSON") {
    using nlohmann::json;
    CHECK(std::holds_alternative<edit::AddRow>(read_table_edit(json{{"op", "add_row"}}, "edit")));
    const auto cell = read_table_edit(json{{"op", "set_cell"}, {"row", 0}, {"column", "quiz"}, {"text", "9"}}, "edit");
    REQUIRE(std::holds_alternative<edit::SetCell>(cell));
    CHECK(std::get<edit::SetCell>(cell).column == "quiz");
    const auto type = read_table_edit(json{{"op", "set_column_type"}, {"name", "w"}, {"dtype", "categorical_ordered"}}, "edit");
    CHECK(std::get<edit::SetColumnType>(type).dtype == DataType::CategoricalOrdered);

    auto e = error_of([] { read_table_edit(json{{"op", "explode"}}, "edits[0]"); });
    REQUIRE(e);
    CHECK(has_violation(e->details(), "edits[0].op"));
    e = error_of([] { read_table_edit(json{{"op", "remove_row"}, {"index", -1}}, "edit"); });
    REQUIRE(e);
    CHECK(has_violation(e->details(), "edit.index"));
}
