#include "isc/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace isc {

using nlohmann::json;

namespace {

bool blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

[[noreturn]] void schema_error(const std::string& path, const std::string& message) {
    throw Error(ErrorCode::Validation, "schema violation at " + path + ": " + message,
                {{path, message}});
}

std::string member(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
}

const json& require(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) schema_error(path.empty() ? "" : path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) schema_error(member(path, key), "missing field");
    return *it;
}

std::string read_string(const json& j, const std::string& path) {
    if (!j.is_string()) schema_error(path, "expected a string");
    return j.get<std::string>();
}

std::string optional_string(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return {};
    return read_string(*it, member(path, key));
}

std::vector<std::string> read_string_list(const json& j, const std::string& path) {
    if (!j.is_array()) schema_error(path, "expected an array of strings");
    std::vector<std::string> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(read_string(j[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

Timestamp read_timestamp(const json& j, const std::string& path) {
    auto t = parse_timestamp(read_string(j, path));
    if (!t) schema_error(path, "expected an RFC 3339 UTC timestamp");
    return *t;
}

}  // namespace

std::optional<double> parse_number(std::string_view cell) {
    while (!cell.empty() && cell.front() == ' ') cell.remove_prefix(1);
    while (!cell.empty() && cell.back() == ' ') cell.remove_suffix(1);
    if (cell.empty()) return std::nullopt;

    std::size_t i = 0;
    const bool negative = cell[0] == '-';
    if (cell[0] == '+' || cell[0] == '-') ++i;
    std::size_t digits = 0, points = 0;
    for (std::size_t k = i; k < cell.size(); ++k) {
        if (cell[k] >= '0' && cell[k] <= '9') {
            ++digits;
        } else if (cell[k] == '.') {
            ++points;
        } else {
            return std::nullopt;
        }
    }
    if (digits == 0 || points > 1) return std::nullopt;

    // from_chars rejects a leading '+'; the sign is applied by hand.
    std::string_view body = cell.substr(i);
    double value = 0.0;
    auto res = std::from_chars(body.data(), body.data() + body.size(), value,
                               std::chars_format::fixed);
    if (res.ec != std::errc{} || res.ptr != body.data() + body.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return negative ? -value : value;
}

ValidationReport validate_goal_question(const GoalQuestion& gq) {
    ValidationReport report;
    if (blank(gq.goal)) report.push_back({"goal", "must not be empty"});
    if (blank(gq.question)) report.push_back({"question", "must not be empty"});
    if (gq.requirements.size() < kMinRequirements) {
        report.push_back({"requirements", "need at least " + std::to_string(kMinRequirements) +
                                              ", found " + std::to_string(gq.requirements.size())});
    }
    for (std::size_t i = 0; i < gq.requirements.size(); ++i) {
        const auto& name = gq.requirements[i].name;
        const auto path = "requirements[" + std::to_string(i) + "].name";
        if (blank(name)) {
            report.push_back({path, "must not be empty"});
            continue;
        }
        for (std::size_t k = 0; k < i; ++k) {
            if (iequals(gq.requirements[k].name, name)) {
                report.push_back(
                    {path, "duplicate requirement name '" + gq.requirements[k].name + "'"});
                break;
            }
        }
    }
    return report;
}

ValidationReport validate_table(const DataTable& table, std::string_view prefix) {
    ValidationReport report;
    const std::string base(prefix);
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        const auto& col = table.columns[i];
        const auto path = base + ".columns[" + std::to_string(i) + "]";
        if (col.name.empty()) {
            report.push_back({path + ".name", "must not be empty"});
        }
        for (std::size_t k = 0; k < i; ++k) {
            if (!col.name.empty() && iequals(table.columns[k].name, col.name)) {
                report.push_back({path + ".name", "duplicate column name '" + col.name + "'"});
                break;
            }
        }
        if (col.values.size() != table.row_count) {
            report.push_back({path + ".values", "expected " + std::to_string(table.row_count) +
                                                    " values, found " +
                                                    std::to_string(col.values.size())});
        }
        if (col.dtype == DataType::Numerical) {
            for (std::size_t r = 0; r < col.values.size(); ++r) {
                if (!col.values[r].empty() && !is_number(col.values[r])) {
                    report.push_back({path + ".values[" + std::to_string(r) + "]",
                                      "'" + col.values[r] + "' is not a number"});
                }
            }
        }
    }
    return report;
}

ValidationReport validate_card(const Card& card, RuleView rules) {
    ValidationReport report;
    if (!is_valid_id(card.id)) report.push_back({"id", "must be 32 lowercase hex characters"});
    if (blank(card.name)) report.push_back({"name", "must not be empty"});
    for (auto& v : validate_goal_question(card.goal_question)) {
        report.push_back({"goal_question." + v.path, v.message});
    }
    if (card.version < 1) report.push_back({"version", "must be positive"});
    auto table_report = validate_table(card.table, "table");
    const bool table_ok = table_report.empty();
    report.insert(report.end(), table_report.begin(), table_report.end());
    if (table_ok) {
        auto binding_report = validate_binding(card.idiom, card.table, card.binding, rules);
        report.insert(report.end(), binding_report.begin(), binding_report.end());
    }
    return report;
}

json to_json(const DataRequirement& req) {
    return {{"name", req.name}, {"dtype", std::string(to_id(req.dtype))}};
}

json to_json(const GoalQuestion& gq) {
    json reqs = json::array();
    for (const auto& r : gq.requirements) reqs.push_back(to_json(r));
    return {{"goal", gq.goal}, {"question", gq.question}, {"idea", gq.idea}, {"requirements", reqs}};
}

json to_json(const DataTable& table) {
    json cols = json::array();
    for (const auto& c : table.columns) {
        cols.push_back({{"name", c.name}, {"dtype", std::string(to_id(c.dtype))}, {"values", c.values}});
    }
    return {{"columns", cols}, {"row_count", table.row_count}};
}

json to_json(const AxisBinding& binding) {
    return {
        {"x_column", binding.x_column},
        {"y_columns", binding.y_columns},
        {"labels",
         {{"title", binding.labels.title},
          {"x_label", binding.labels.x_label},
          {"y_label", binding.labels.y_label}}},
    };
}

json to_json(const Card& card) {
    return {
        {"id", card.id},
        {"name", card.name},
        {"goal_question", to_json(card.goal_question)},
        {"task", card.task ? json(std::string(to_id(*card.task))) : json(nullptr)},
        {"idiom", std::string(to_id(card.idiom))},
        {"table", to_json(card.table)},
        {"binding", to_json(card.binding)},
        {"created_at", format_timestamp(card.created_at)},
        {"updated_at", format_timestamp(card.updated_at)},
        {"version", card.version},
    };
}

DataType read_data_type(const json& j, const std::string& path) {
    auto t = j.is_string() ? parse_data_type(j.get<std::string>()) : std::nullopt;
    if (!t) schema_error(path, "unknown data type " + j.dump());
    return *t;
}

TaskType read_task_type(const json& j, const std::string& path) {
    auto t = j.is_string() ? parse_task_type(j.get<std::string>()) : std::nullopt;
    if (!t) schema_error(path, "unknown task " + j.dump());
    return *t;
}

IdiomType read_idiom_type(const json& j, const std::string& path) {
    auto t = j.is_string() ? parse_idiom_type(j.get<std::string>()) : std::nullopt;
    if (!t) schema_error(path, "unknown idiom " + j.dump());
    return *t;
}

GoalQuestion read_goal_question(const json& j, const std::string& path) {
    GoalQuestion gq;
    gq.goal = read_string(require(j, "goal", path), member(path, "goal"));
    gq.question = read_string(require(j, "question", path), member(path, "question"));
    gq.idea = optional_string(j, "idea", path);
    const auto& reqs = require(j, "requirements", path);
    if (!reqs.is_array()) schema_error(member(path, "requirements"), "expected an array");
    for (std::size_t i = 0; i < reqs.size(); ++i) {
        const auto p = member(path, "requirements") + "[" + std::to_string(i) + "]";
        DataRequirement r;
        r.name = read_string(require(reqs[i], "name", p), p + ".name");
        r.dtype = read_data_type(require(reqs[i], "dtype", p), p + ".dtype");
        gq.requirements.push_back(std::move(r));
    }
    return gq;
}

DataTable read_table(const json& j, const std::string& path) {
    DataTable table;
    const auto& cols = require(j, "columns", path);
    if (!cols.is_array()) schema_error(path + ".columns", "expected an array");
    for (std::size_t i = 0; i < cols.size(); ++i) {
        const auto p = path + ".columns[" + std::to_string(i) + "]";
        Column c;
        c.name = read_string(require(cols[i], "name", p), p + ".name");
        c.dtype = read_data_type(require(cols[i], "dtype", p), p + ".dtype");
        c.values = read_string_list(require(cols[i], "values", p), p + ".values");
        table.columns.push_back(std::move(c));
    }
    const auto& rows = require(j, "row_count", path);
    if (!rows.is_number_unsigned()) schema_error(path + ".row_count", "expected a non-negative integer");
    table.row_count = rows.get<std::size_t>();
    return table;
}

AxisBinding read_binding(const json& j, const std::string& path) {
    AxisBinding b;
    b.x_column = read_string(require(j, "x_column", path), path + ".x_column");
    b.y_columns = read_string_list(require(j, "y_columns", path), path + ".y_columns");
    if (auto it = j.find("labels"); it != j.end() && !it->is_null()) {
        const auto p = path + ".labels";
        if (!it->is_object()) schema_error(p, "expected an object");
        b.labels.title = optional_string(*it, "title", p);
        b.labels.x_label = optional_string(*it, "x_label", p);
        b.labels.y_label = optional_string(*it, "y_label", p);
    }
    return b;
}

Card read_card(const json& j) {
    if (!j.is_object()) schema_error("$", "expected a card object");
    Card card;
    card.id = read_string(require(j, "id", ""), "id");
    card.name = read_string(require(j, "name", ""), "name");
    card.goal_question = read_goal_question(require(j, "goal_question", ""), "goal_question");
    const auto& task = require(j, "task", "");
    if (!task.is_null()) card.task = read_task_type(task, "task");
    card.idiom = read_idiom_type(require(j, "idiom", ""), "idiom");
    card.table = read_table(require(j, "table", ""), "table");
    card.binding = read_binding(require(j, "binding", ""), "binding");
    card.created_at = read_timestamp(require(j, "created_at", ""), "created_at");
    card.updated_at = read_timestamp(require(j, "updated_at", ""), "updated_at");
    const auto& version = require(j, "version", "");
    if (!version.is_number_integer()) schema_error("version", "expected an integer");
    card.version = version.get<std::int64_t>();
    return card;
}

std::string serialize_card(const Card& card) { return to_json(card).dump(); }

json parse_json(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Validation, std::string("malformed JSON: ") + e.what(),
                    {{"", "malformed JSON"}});
    }
}

Card parse_card(std::string_view text, RuleView rules) {
    Card card = read_card(parse_json(text));
    throw_if_invalid(validate_card(card, rules), "invalid card");
    return card;
}

}  // namespace isc
