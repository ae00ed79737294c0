#include "isc/workflow.hpp"

#include <algorithm>

#include "isc/ingest.hpp"
#include "isc/model.hpp"

namespace isc {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void log_step(Draft& d, std::string entry) {
    d.step_log.push_back(std::move(entry));
    if (d.step_log.size() > kMaxStepLog) {
        d.step_log.erase(d.step_log.begin(),
                         d.step_log.begin() + static_cast<long>(d.step_log.size() - kMaxStepLog));
    }
}

// Drops a binding that no longer fits the idiom/table pair.
void revalidate_binding(Draft& d, RuleView rules) {
    if (!d.binding) return;
    if (!d.idiom || !d.table) {
        d.binding.reset();
        d.warnings.push_back("binding dropped: idiom and table are both required");
        return;
    }
    auto report = validate_binding(*d.idiom, *d.table, *d.binding, rules);
    if (!report.empty()) {
        d.binding.reset();
        d.warnings.push_back("binding dropped: " + report.front().to_string());
    }
}

template <typename T, typename Reader>
std::optional<T> optional_field(const json& j, const char* key, Reader read) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return read(*it, std::string(key));
}

}  // namespace

std::string_view to_id(DraftPath p) {
    return p == DraftPath::Visualization ? "visualization" : "dataset";
}

std::optional<DraftPath> parse_draft_path(std::string_view id) {
    if (id == "visualization") return DraftPath::Visualization;
    if (id == "dataset") return DraftPath::Dataset;
    return std::nullopt;
}

Draft start_draft(const GoalQuestion& gq) {
    throw_if_invalid(validate_goal_question(gq), "invalid goal/question");
    Draft d;
    d.id = new_id();
    d.goal_question = gq;
    d.step_log = {"goal"};
    return d;
}

Draft choose_path(const Draft& draft, DraftPath path) {
    Draft d = draft;
    d.warnings.clear();
    d.path = path;
    log_step(d, "path:" + std::string(to_id(path)));
    return d;
}

Draft apply_step(const Draft& draft, const Step& s, RuleView rules) {
    Draft d = draft;
    d.warnings.clear();
    std::visit(
        overloaded{
            [&](const step::SetTask& e) {
                d.task = e.task;
                log_step(d, "task:" + (e.task ? std::string(to_id(*e.task)) : std::string("none")));
            },
            [&](const step::SetIdiom& e) {
                if (find_rule(rules, e.idiom) == nullptr) {
                    throw Error(ErrorCode::Validation,
                                "no rule for idiom '" + std::string(to_id(e.idiom)) + "'",
                                {{"idiom", "unknown idiom"}});
                }
                d.idiom = e.idiom;
                revalidate_binding(d, rules);
                log_step(d, "idiom:" + std::string(to_id(e.idiom)));
            },
            [&](const step::SetTable& e) {
                throw_if_invalid(validate_table(e.table), "invalid table");
                d.table = e.table;
                revalidate_binding(d, rules);
                log_step(d, "table");
            },
            [&](const step::SetBinding& e) {
                ValidationReport missing;
                if (!d.idiom) missing.push_back({"idiom", "idiom required"});
                if (!d.table) missing.push_back({"table", "table required"});
                throw_if_invalid(missing, "cannot bind axes");
                throw_if_invalid(validate_binding(*d.idiom, *d.table, e.binding, rules),
                                 "invalid binding");
                d.binding = e.binding;
                log_step(d, "binding");
            },
            [&](const step::ClearTask&) {
                d.task.reset();
                log_step(d, "clear_task");
            },
            [&](const step::ClearIdiom&) {
                d.idiom.reset();
                revalidate_binding(d, rules);
                log_step(d, "clear_idiom");
            },
        },
        s);
    return d;
}

Draft open_data_step(const Draft& draft) {
    if (draft.table) return draft;
    Draft d = draft;
    d.warnings.clear();
    d.table = prepopulate_table(d.goal_question.requirements);
    log_step(d, "table:prepopulated");
    return d;
}

std::vector<std::string> next_steps(const Draft& draft) {
    std::vector<std::string> order;
    if (!draft.path) order.push_back("path");
    if (draft.path == DraftPath::Dataset) {
        order.insert(order.end(), {"data", "task", "idiom"});
    } else {
        order.insert(order.end(), {"task", "idiom", "data"});
    }
    order.push_back("binding");

    std::vector<std::string> out;
    for (const auto& s : order) {
        const bool done = (s == "task" && draft.task) || (s == "idiom" && draft.idiom) ||
                          (s == "data" && draft.table) || (s == "binding" && draft.binding);
        if (!done) out.push_back(s);
    }
    out.push_back("finalize");
    return out;
}

DataSignature recommendation_signature(const Draft& draft) {
    return draft.table ? signature_of(*draft.table) : signature_of(draft.goal_question.requirements);
}

std::vector<Recommendation> next_recommendations(const Draft& draft, RuleView rules) {
    return recommend_idioms(draft.task, recommendation_signature(draft), rules);
}

Card finalize(const Draft& draft, std::string_view name, RuleView rules, const Clock& clock) {
    ValidationReport report;
    if (std::all_of(name.begin(), name.end(), [](unsigned char c) { return std::isspace(c); })) {
        report.push_back({"name", "must not be empty"});
    }
    if (!draft.idiom) report.push_back({"idiom", "required"});
    if (!draft.table) {
        report.push_back({"table", "required"});
    } else if (!validate_table(*draft.table).empty()) {
        report.push_back({"table", "invalid"});
    }
    if (!draft.binding) {
        report.push_back({"binding", "required"});
    } else if (draft.idiom && draft.table &&
               !validate_binding(*draft.idiom, *draft.table, *draft.binding, rules).empty()) {
        report.push_back({"binding", "invalid for the selected idiom and table"});
    }
    throw_if_invalid(report, "draft cannot be finalized");

    Card card;
    card.id = new_id();
    card.name = std::string(name);
    card.goal_question = draft.goal_question;
    card.task = draft.task;
    card.idiom = *draft.idiom;
    card.table = *draft.table;
    card.binding = *draft.binding;
    card.created_at = card.updated_at = clock();
    card.version = 1;
    return card;
}

json to_json(const Draft& draft) {
    return {
        {"id", draft.id},
        {"goal_question", to_json(draft.goal_question)},
        {"path", draft.path ? json(std::string(to_id(*draft.path))) : json(nullptr)},
        {"task", draft.task ? json(std::string(to_id(*draft.task))) : json(nullptr)},
        {"idiom", draft.idiom ? json(std::string(to_id(*draft.idiom))) : json(nullptr)},
        {"table", draft.table ? to_json(*draft.table) : json(nullptr)},
        {"binding", draft.binding ? to_json(*draft.binding) : json(nullptr)},
        {"step_log", draft.step_log},
        {"warnings", draft.warnings},
        {"next_steps", next_steps(draft)},
    };
}

Draft read_draft(const json& j) {
    auto fail = [](const std::string& path, const std::string& msg) {
        throw Error(ErrorCode::Validation, "invalid draft at " + path + ": " + msg, {{path, msg}});
    };
    if (!j.is_object()) fail("$", "expected an object");
    Draft d;
    auto id = j.find("id");
    if (id == j.end() || !id->is_string() || !is_valid_id(id->get<std::string>())) fail("id", "invalid id");
    d.id = id->get<std::string>();
    auto gq = j.find("goal_question");
    if (gq == j.end()) fail("goal_question", "missing field");
    d.goal_question = read_goal_question(*gq, "goal_question");
    if (auto p = j.find("path"); p != j.end() && !p->is_null()) {
        auto parsed = p->is_string() ? parse_draft_path(p->get<std::string>()) : std::nullopt;
        if (!parsed) fail("path", "expected visualization or dataset");
        d.path = parsed;
    }
    d.task = optional_field<TaskType>(j, "task", read_task_type);
    d.idiom = optional_field<IdiomType>(j, "idiom", read_idiom_type);
    d.table = optional_field<DataTable>(j, "table", read_table);
    d.binding = optional_field<AxisBinding>(j, "binding", read_binding);
    for (const char* key : {"step_log", "warnings"}) {
        auto it = j.find(key);
        if (it == j.end()) continue;
        if (!it->is_array()) fail(key, "expected an array of strings");
        auto& target = std::string_view(key) == "step_log" ? d.step_log : d.warnings;
        for (const auto& e : *it) {
            if (!e.is_string()) fail(key, "expected an array of strings");
            target.push_back(e.get<std::string>());
        }
    }
    return d;
}

Step read_step(const json& j) {
    auto fail = [](const std::string& path, const std::string& msg) {
        throw Error(ErrorCode::Validation, "invalid step at " + path + ": " + msg, {{path, msg}});
    };
    if (!j.is_object()) fail("$", "expected an object");
    auto type_it = j.find("type");
    if (type_it == j.end() || !type_it->is_string()) fail("type", "expected a step type");
    const auto type = type_it->get<std::string>();
    auto field = [&](const char* key) -> const json& {
        auto it = j.find(key);
        if (it == j.end()) fail(key, "missing field");
        return *it;
    };

    if (type == "set_task") {
        const auto& t = field("task");
        return step::SetTask{t.is_null() ? std::nullopt : std::optional(read_task_type(t, "task"))};
    }
    if (type == "set_idiom") return step::SetIdiom{read_idiom_type(field("idiom"), "idiom")};
    if (type == "set_table") return step::SetTable{read_table(field("table"), "table")};
    if (type == "set_binding") return step::SetBinding{read_binding(field("binding"), "binding")};
    if (type == "clear_task") return step::ClearTask{};
    if (type == "clear_idiom") return step::ClearIdiom{};
    fail("type", "unknown step type '" + type + "'");
    return step::ClearTask{};
}

}  // namespace isc
