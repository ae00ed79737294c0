#pragma once

// Rule-based chart recommendation: maps an analysis task and/or a data
// signature onto the idiom gallery, and constrains which table columns may be
// bound to each chart axis.

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "isc/error.hpp"
#include "isc/types.hpp"

namespace isc {

/// How many columns the y channel takes. Histograms bin their x column and
/// take no y column at all.
enum class YArity { None, One, Many };

std::string_view to_id(YArity v);
std::optional<YArity> parse_y_arity(std::string_view id);

struct ChannelSpec {
    std::vector<DataType> x;
    std::vector<DataType> y;
    YArity y_arity{YArity::One};

    [[nodiscard]] bool accepts_x(DataType t) const;
    [[nodiscard]] bool accepts_y(DataType t) const;

    friend bool operator==(const ChannelSpec&, const ChannelSpec&) = default;
};

struct IdiomRule {
    IdiomType idiom{IdiomType::BarChart};
    /// Minimum number of columns of each type.
    DataSignature requirement;
    /// Lets categorical (ordered) columns fill categorical slots.
    bool ordered_satisfies_categorical{true};
    std::optional<DataSignature> max_counts;
    /// Sorted by enum order, no duplicates.
    std::vector<TaskType> tasks;
    ChannelSpec channels;
    std::string description;

    [[nodiscard]] bool serves(TaskType t) const;

    friend bool operator==(const IdiomRule&, const IdiomRule&) = default;
};

using RuleSet = std::vector<IdiomRule>;
using RuleView = std::span<const IdiomRule>;

/// The built-in table, compiled from rules/default_rules.json.
const RuleSet& default_rules();

/// Violations of a single rule's invariants (paths relative to the rule).
ValidationReport check_rule(const IdiomRule& rule);

/// Parses and checks a rules document. Throws Error(Validation) whose details
/// carry `rules[i].field` paths for the first offending rules.
RuleSet load_rules(std::string_view json_text);
RuleSet load_rules_file(const std::filesystem::path& path);

nlohmann::json to_json(const IdiomRule& rule);
nlohmann::json to_json(RuleView rules);

const IdiomRule* find_rule(RuleView rules, IdiomType idiom);

DataSignature signature_of(std::span<const DataRequirement> requirements);
DataSignature signature_of(const DataTable& table);

/// Whether the available columns can fill the required slots. Ordered columns
/// may each be assigned to a categorical slot when `ordered_satisfies_categorical`
/// holds; max counts must hold under at least one such assignment.
bool satisfies(const DataSignature& available, const DataSignature& required,
               bool ordered_satisfies_categorical,
               const std::optional<DataSignature>& max_counts = std::nullopt);
bool satisfies(const DataSignature& available, const IdiomRule& rule);

struct Recommendation {
    IdiomType idiom{IdiomType::BarChart};
    bool task_fit{false};
    bool data_fit{false};
    int rank{0};
    std::string provenance;

    friend bool operator==(const Recommendation&, const Recommendation&) = default;
};

nlohmann::json to_json(const Recommendation& rec);

/// One entry per rule, ranked: both fits, then data-only, then task-only,
/// then neither; ties by idiom declaration order.
std::vector<Recommendation> recommend_idioms(std::optional<TaskType> task,
                                             const DataSignature& signature, RuleView rules);

struct AxisCandidates {
    std::vector<std::string> x;
    std::vector<std::string> y;

    friend bool operator==(const AxisCandidates&, const AxisCandidates&) = default;
};

/// Columns (in table order) whose dtype the idiom accepts on each axis.
/// Throws Error(Validation) when `idiom` has no rule.
AxisCandidates axis_candidates(IdiomType idiom, const DataTable& table, RuleView rules);

ValidationReport validate_binding(IdiomType idiom, const DataTable& table,
                                  const AxisBinding& binding, RuleView rules);

}  // namespace isc
