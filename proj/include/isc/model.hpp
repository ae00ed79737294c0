#pragma once

// Validation and canonical JSON for the card types. Canonical means object
// keys in lexicographic order and no whitespace, so equal cards serialize to
// equal bytes.

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "isc/error.hpp"
#include "isc/recommender.hpp"
#include "isc/types.hpp"

namespace isc {

inline constexpr std::size_t kMinRequirements = 2;

ValidationReport validate_goal_question(const GoalQuestion& gq);

/// Unique non-empty names, equal column lengths matching row_count, and
/// numerical cells that parse. Paths are prefixed with `prefix`.
ValidationReport validate_table(const DataTable& table, std::string_view prefix = "table");

/// Every card invariant, including the binding against `rules`.
ValidationReport validate_card(const Card& card, RuleView rules);

/// Numeric cell grammar: optional sign, digits, at most one decimal point.
/// Surrounding spaces are ignored; exponents and separators are not numbers.
std::optional<double> parse_number(std::string_view cell);
inline bool is_number(std::string_view cell) { return parse_number(cell).has_value(); }

nlohmann::json to_json(const DataRequirement& req);
nlohmann::json to_json(const GoalQuestion& gq);
nlohmann::json to_json(const DataTable& table);
nlohmann::json to_json(const AxisBinding& binding);
nlohmann::json to_json(const Card& card);

// Readers throw Error(Validation) with the offending path in the details.
GoalQuestion read_goal_question(const nlohmann::json& j, const std::string& path);
DataTable read_table(const nlohmann::json& j, const std::string& path);
AxisBinding read_binding(const nlohmann::json& j, const std::string& path);
Card read_card(const nlohmann::json& j);

// Enum readers shared with other modules' wire formats.
DataType read_data_type(const nlohmann::json& j, const std::string& path);
TaskType read_task_type(const nlohmann::json& j, const std::string& path);
IdiomType read_idiom_type(const nlohmann::json& j, const std::string& path);

std::string serialize_card(const Card& card);

/// Parses and fully validates a card. Malformed JSON, schema violations and
/// invariant violations all throw Error(Validation).
Card parse_card(std::string_view text, RuleView rules = default_rules());

/// Parses JSON text, throwing Error(Validation) on malformed input.
nlohmann::json parse_json(std::string_view text);

}  // namespace isc
