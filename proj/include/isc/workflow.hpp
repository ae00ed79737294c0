#pragma once

// Draft lifecycle. A draft starts from a valid goal/question and accepts the
// task, idiom, table and binding steps in any order; the chosen path only
// changes which step is suggested next.

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "isc/recommender.hpp"
#include "isc/types.hpp"

namespace isc {

enum class DraftPath { Visualization, Dataset };

std::string_view to_id(DraftPath p);
std::optional<DraftPath> parse_draft_path(std::string_view id);

inline constexpr std::size_t kMaxStepLog = 200;

struct Draft {
    std::string id;
    GoalQuestion goal_question;
    std::optional<DraftPath> path;
    std::optional<TaskType> task;
    std::optional<IdiomType> idiom;
    std::optional<DataTable> table;
    /// Present only when idiom and table are, and valid against both.
    std::optional<AxisBinding> binding;
    std::vector<std::string> step_log;
    /// Notes produced by the most recent step, e.g. a dropped binding.
    std::vector<std::string> warnings;

    friend bool operator==(const Draft&, const Draft&) = default;
};

namespace step {
struct SetTask {
    std::optional<TaskType> task;
};
struct SetIdiom {
    IdiomType idiom{IdiomType::BarChart};
};
struct SetTable {
    DataTable table;
};
struct SetBinding {
    AxisBinding binding;
};
struct ClearTask {};
struct ClearIdiom {};
}  // namespace step

using Step = std::variant<step::SetTask, step::SetIdiom, step::SetTable, step::SetBinding,
                          step::ClearTask, step::ClearIdiom>;

/// Throws Error(Validation) carrying the goal/question report.
Draft start_draft(const GoalQuestion& gq);

Draft choose_path(const Draft& draft, DraftPath path);

/// Returns the updated draft or throws Error(Validation); the input draft is
/// never modified.
Draft apply_step(const Draft& draft, const Step& step, RuleView rules);

/// Attaches the sample table built from the goal's requirements if the draft
/// has no table yet.
Draft open_data_step(const Draft& draft);

/// Remaining steps in suggested order, ending with "finalize".
std::vector<std::string> next_steps(const Draft& draft);

/// The attached table's columns once there is one, the goal's requirements
/// before that.
DataSignature recommendation_signature(const Draft& draft);

std::vector<Recommendation> next_recommendations(const Draft& draft, RuleView rules);

/// Builds a version-1 card. Throws Error(Validation) whose details list
/// exactly the missing or invalid fields among name, idiom, table, binding.
Card finalize(const Draft& draft, std::string_view name, RuleView rules, const Clock& clock);

nlohmann::json to_json(const Draft& draft);
Draft read_draft(const nlohmann::json& j);
Step read_step(const nlohmann::json& j);

}  // namespace isc
