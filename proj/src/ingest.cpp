#include "isc/ingest.hpp"

#include <algorithm>
#include <cstdint>

#include "isc/model.hpp"

namespace isc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void csv_error(std::string message, std::string path = "csv") {
    throw Error(ErrorCode::CsvParse, message, {{std::move(path), message}});
}

/// Offset of the first invalid byte, or npos.
std::size_t invalid_utf8_at(std::string_view s) {
    std::size_t i = 0;
    const auto* p = reinterpret_cast<const unsigned char*>(s.data());
    const std::size_t n = s.size();
    while (i < n) {
        const unsigned char c = p[i];
        if (c < 0x80) {
            ++i;
            continue;
        }
        std::size_t len = 0;
        std::uint32_t cp = 0;
        if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp = c & 0x07;
        } else {
            return i;
        }
        if (i + len > n) return i;
        for (std::size_t k = 1; k < len; ++k) {
            if ((p[i + k] & 0xC0) != 0x80) return i;
            cp = (cp << 6) | (p[i + k] & 0x3F);
        }
        const bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
                              (len == 4 && cp < 0x10000);
        if (overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return i;
        i += len;
    }
    return std::string_view::npos;
}

std::vector<std::vector<std::string>> read_records(std::string_view s) {
    enum class State { FieldStart, Unquoted, Quoted, AfterQuote };
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    State state = State::FieldStart;
    bool record_started = false;

    auto row_number = [&] { return records.size() + 1; };
    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        state = State::FieldStart;
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(record));
        record.clear();
        record_started = false;
        if (records.size() > kMaxCsvRows + 1) {
            throw Error(ErrorCode::TooLarge,
                        "too many rows (limit " + std::to_string(kMaxCsvRows) + ")",
                        {{"csv", "more than " + std::to_string(kMaxCsvRows) + " data rows"}});
        }
    };

    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        record_started = true;
        switch (state) {
            case State::FieldStart:
            case State::Unquoted:
                if (c == ',') {
                    end_field();
                } else if (c == '\n' || c == '\r') {
                    if (c == '\r' && i + 1 < s.size() && s[i + 1] == '\n') ++i;
                    end_record();
                } else if (c == '"') {
                    if (state != State::FieldStart) {
                        csv_error("row " + std::to_string(row_number()) +
                                  ": unexpected quote inside unquoted field");
                    }
                    state = State::Quoted;
                } else {
                    field += c;
                    state = State::Unquoted;
                }
                break;
            case State::Quoted:
                if (c == '"') {
                    if (i + 1 < s.size() && s[i + 1] == '"') {
                        field += '"';
                        ++i;
                    } else {
                        state = State::AfterQuote;
                    }
                } else {
                    field += c;
                }
                break;
            case State::AfterQuote:
                if (c == ',') {
                    end_field();
                } else if (c == '\n' || c == '\r') {
                    if (c == '\r' && i + 1 < s.size() && s[i + 1] == '\n') ++i;
                    end_record();
                } else {
                    csv_error("row " + std::to_string(row_number()) +
                              ": unexpected character after closing quote");
                }
                break;
        }
    }
    if (state == State::Quoted) {
        csv_error("row " + std::to_string(row_number()) + ": unterminated quoted field");
    }
    if (record_started) end_record();
    return records;
}

std::string quote_csv(const std::string& cell) {
    if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::size_t column_index(const DataTable& table, std::string_view name) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (table.columns[i].name == name) return i;
    }
    const std::string n(name);
    throw Error(ErrorCode::Validation, "unknown column '" + n + "'", {{"column", "unknown column '" + n + "'"}});
}

void require_new_name(const DataTable& table, const std::string& name, std::size_t except) {
    if (name.empty()) {
        throw Error(ErrorCode::Validation, "column name must not be empty", {{"name", "must not be empty"}});
    }
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i != except && iequals(table.columns[i].name, name)) {
            throw Error(ErrorCode::Validation, "duplicate column name '" + name + "'",
                        {{"name", "duplicate column name '" + name + "'"}});
        }
    }
}

std::string cell_path(std::size_t column, std::size_t row) {
    return "table.columns[" + std::to_string(column) + "].values[" + std::to_string(row) + "]";
}

}  // namespace

DataType infer_column_type(std::span<const std::string> values) {
    bool any = false;
    for (const auto& v : values) {
        if (v.empty()) continue;
        if (!is_number(v)) return DataType::Categorical;
        any = true;
    }
    return any ? DataType::Numerical : DataType::Categorical;
}

DataTable parse_csv(std::string_view bytes) {
    if (bytes.size() > kMaxCsvBytes) {
        throw Error(ErrorCode::TooLarge,
                    "upload exceeds " + std::to_string(kMaxCsvBytes) + " bytes",
                    {{"csv", "larger than " + std::to_string(kMaxCsvBytes) + " bytes"}});
    }
    if (bytes.substr(0, 3) == "\xEF\xBB\xBF") bytes.remove_prefix(3);
    if (bytes.empty()) csv_error("empty input");
    if (auto bad = invalid_utf8_at(bytes); bad != std::string_view::npos) {
        csv_error("invalid UTF-8 at byte " + std::to_string(bad));
    }

    auto records = read_records(bytes);
    if (records.empty() || (records.front().size() == 1 && records.front().front().empty())) {
        csv_error("no header row", "csv.header");
    }

    const auto& header = records.front();
    DataTable table;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const auto& name = header[i];
        if (name.empty()) {
            csv_error("header column " + std::to_string(i + 1) + ": empty name", "csv.header");
        }
        for (std::size_t k = 0; k < i; ++k) {
            if (iequals(header[k], name)) {
                csv_error("duplicate header name '" + name + "'", "csv.header");
            }
        }
        table.columns.push_back(Column{name, DataType::Categorical, {}});
    }

    const std::size_t width = header.size();
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.size() != width) {
            csv_error("row " + std::to_string(r + 1) + ": expected " + std::to_string(width) +
                          " fields, found " + std::to_string(rec.size()),
                      "csv.rows[" + std::to_string(r + 1) + "]");
        }
        for (std::size_t c = 0; c < width; ++c) table.columns[c].values.push_back(rec[c]);
    }
    table.row_count = records.size() - 1;
    for (auto& col : table.columns) col.dtype = infer_column_type(col.values);
    return table;
}

DataTable prepopulate_table(std::span<const DataRequirement> requirements) {
    if (requirements.empty()) {
        throw Error(ErrorCode::Validation, "at least one data requirement is needed",
                    {{"requirements", "must not be empty"}});
    }
    DataTable table;
    table.row_count = kSampleRows;
    for (const auto& req : requirements) {
        Column col{req.name, req.dtype, {}};
        for (std::size_t i = 1; i <= kSampleRows; ++i) {
            switch (req.dtype) {
                case DataType::Categorical: col.values.push_back("Item " + std::to_string(i)); break;
                case DataType::CategoricalOrdered: col.values.push_back("Level " + std::to_string(i)); break;
                case DataType::Numerical: col.values.push_back(std::to_string(i * 10)); break;
            }
        }
        table.columns.push_back(std::move(col));
    }
    return table;
}

std::string serialize_csv(const DataTable& table) {
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c > 0) out += ',';
        out += quote_csv(table.columns[c].name);
    }
    out += '\n';
    for (std::size_t r = 0; r < table.row_count; ++r) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            if (c > 0) out += ',';
            out += quote_csv(table.columns[c].values[r]);
        }
        out += '\n';
    }
    return out;
}

DataTable edit_table(const DataTable& input, const TableEdit& change) {
    DataTable table = input;
    std::visit(
        overloaded{
            [&](const edit::AddRow&) {
                for (auto& col : table.columns) col.values.emplace_back();
                ++table.row_count;
            },
            [&](const edit::AddColumn& e) {
                require_new_name(table, e.name, table.columns.size());
                table.columns.push_back(
                    Column{e.name, e.dtype, std::vector<std::string>(table.row_count)});
            },
            [&](const edit::RemoveRow& e) {
                if (e.index >= table.row_count) {
                    const auto msg = "row " + std::to_string(e.index) + " does not exist (table has " +
                                     std::to_string(table.row_count) + " rows)";
                    throw Error(ErrorCode::Validation, msg, {{"row", msg}});
                }
                for (auto& col : table.columns) {
                    col.values.erase(col.values.begin() + static_cast<long>(e.index));
                }
                --table.row_count;
            },
            [&](const edit::RemoveColumn& e) {
                const auto idx = column_index(table, e.name);
                table.columns.erase(table.columns.begin() + static_cast<long>(idx));
            },
            [&](const edit::SetCell& e) {
                const auto idx = column_index(table, e.column);
                if (e.row >= table.row_count) {
                    const auto msg = "row " + std::to_string(e.row) + " does not exist (table has " +
                                     std::to_string(table.row_count) + " rows)";
                    throw Error(ErrorCode::Validation, msg, {{"row", msg}});
                }
                auto& col = table.columns[idx];
                if (col.dtype == DataType::Numerical && !e.text.empty() && !is_number(e.text)) {
                    const auto msg = "'" + e.text + "' is not a number";
                    throw Error(ErrorCode::Validation, "column '" + col.name + "' is numerical: " + msg,
                                {{cell_path(idx, e.row), msg}});
                }
                col.values[e.row] = e.text;
            },
            [&](const edit::SetColumnType& e) {
                const auto idx = column_index(table, e.name);
                auto& col = table.columns[idx];
                if (e.dtype == DataType::Numerical) {
                    ValidationReport report;
                    nlohmann::json rows = nlohmann::json::array();
                    for (std::size_t r = 0; r < col.values.size(); ++r) {
                        if (!col.values[r].empty() && !is_number(col.values[r])) {
                            report.push_back({cell_path(idx, r), "'" + col.values[r] + "' is not a number"});
                            rows.push_back(r);
                        }
                    }
                    if (!report.empty()) {
                        throw Error(ErrorCode::Validation,
                                    "column '" + col.name + "' has non-numerical cells in rows " +
                                        rows.dump(),
                                    std::move(report), {{"rows", rows}});
                    }
                }
                col.dtype = e.dtype;
            },
            [&](const edit::RenameColumn& e) {
                const auto idx = column_index(table, e.old_name);
                require_new_name(table, e.new_name, idx);
                table.columns[idx].name = e.new_name;
            },
        },
        change);
    return table;
}

TableEdit read_table_edit(const nlohmann::json& j, const std::string& path) {
    auto fail = [&](const std::string& field, const std::string& message) -> void {
        const auto p = field.empty() ? path : path + "." + field;
        throw Error(ErrorCode::Validation, "invalid edit at " + p + ": " + message, {{p, message}});
    };
    auto text = [&](const char* key) {
        auto it = j.find(key);
        if (it == j.end() || !it->is_string()) fail(key, "expected a string");
        return it->get<std::string>();
    };
    auto index = [&](const char* key) {
        auto it = j.find(key);
        if (it == j.end() || !it->is_number_integer() || it->get<std::int64_t>() < 0) {
            fail(key, "expected a non-negative integer");
        }
        return it->get<std::size_t>();
    };
    auto dtype = [&](const char* key) {
        auto it = j.find(key);
        if (it == j.end()) fail(key, "missing field");
        return read_data_type(*it, path + "." + key);
    };

    if (!j.is_object()) fail("", "expected an object");
    const auto op = text("op");
    if (op == "add_row") return edit::AddRow{};
    if (op == "add_column") return edit::AddColumn{text("name"), dtype("dtype")};
    if (op == "remove_row") return edit::RemoveRow{index("index")};
    if (op == "remove_column") return edit::RemoveColumn{text("name")};
    if (op == "set_cell") return edit::SetCell{index("row"), text("column"), text("text")};
    if (op == "set_column_type") return edit::SetColumnType{text("name"), dtype("dtype")};
    if (op == "rename_column") return edit::RenameColumn{text("old_name"), text("new_name")};
    fail("op", "unknown edit '" + op + "'");
    return edit::AddRow{};
}

}  // namespace isc
