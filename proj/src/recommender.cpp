#include "isc/recommender.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include "isc/model.hpp"

namespace isc {

namespace {

#include "default_rules.inc"

using nlohmann::json;

std::string join_types(const std::vector<DataType>& types) {
    std::string out;
    for (std::size_t i = 0; i < types.size(); ++i) {
        if (i > 0) out += " or ";
        out += display_name(types[i]);
    }
    return out;
}

bool contains(const std::vector<DataType>& types, DataType t) {
    return std::find(types.begin(), types.end(), t) != types.end();
}

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw Error(ErrorCode::Validation, "invalid rules: " + path + ": " + message, {{path, message}});
}

const json& member(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path + "." + key, "missing field");
    return *it;
}

DataSignature read_signature(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object of data type counts");
    DataSignature sig;
    for (const auto& [key, value] : j.items()) {
        auto t = parse_data_type(key);
        if (!t) fail(path + "." + key, "unknown data type '" + key + "'");
        if (!value.is_number_integer() || value.get<long long>() < 0 ||
            value.get<long long>() > 1000) {
            fail(path + "." + key, "expected a non-negative integer");
        }
        sig.add(*t, value.get<int>());
    }
    return sig;
}

std::vector<DataType> read_type_list(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of data types");
    std::vector<DataType> types;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto p = path + "[" + std::to_string(i) + "]";
        if (!j[i].is_string()) fail(p, "expected a data type string");
        auto t = parse_data_type(j[i].get<std::string>());
        if (!t) fail(p, "unknown data type '" + j[i].get<std::string>() + "'");
        if (!contains(types, *t)) types.push_back(*t);
    }
    return types;
}

IdiomRule read_rule(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    IdiomRule rule;

    const auto& idiom = member(j, "idiom", path);
    if (!idiom.is_string() || !parse_idiom_type(idiom.get<std::string>())) {
        fail(path + ".idiom", "unknown idiom " + idiom.dump());
    }
    rule.idiom = *parse_idiom_type(idiom.get<std::string>());

    rule.requirement = read_signature(member(j, "requirement", path), path + ".requirement");

    if (auto it = j.find("ordered_satisfies_categorical"); it != j.end()) {
        if (!it->is_boolean()) fail(path + ".ordered_satisfies_categorical", "expected a boolean");
        rule.ordered_satisfies_categorical = it->get<bool>();
    }
    if (auto it = j.find("max_counts"); it != j.end() && !it->is_null()) {
        rule.max_counts = read_signature(*it, path + ".max_counts");
    }

    const auto& tasks = member(j, "tasks", path);
    if (!tasks.is_array()) fail(path + ".tasks", "expected an array of tasks");
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const auto p = path + ".tasks[" + std::to_string(i) + "]";
        auto t = tasks[i].is_string() ? parse_task_type(tasks[i].get<std::string>()) : std::nullopt;
        if (!t) fail(p, "unknown task " + tasks[i].dump());
        rule.tasks.push_back(*t);
    }
    std::sort(rule.tasks.begin(), rule.tasks.end());
    rule.tasks.erase(std::unique(rule.tasks.begin(), rule.tasks.end()), rule.tasks.end());

    const auto cpath = path + ".channel_spec";
    const auto& channels = member(j, "channel_spec", path);
    if (!channels.is_object()) fail(cpath, "expected an object");
    rule.channels.x = read_type_list(member(channels, "x", cpath), cpath + ".x");
    rule.channels.y = read_type_list(member(channels, "y", cpath), cpath + ".y");
    const auto& arity = member(channels, "y_arity", cpath);
    auto parsed_arity = arity.is_string() ? parse_y_arity(arity.get<std::string>()) : std::nullopt;
    if (!parsed_arity) fail(cpath + ".y_arity", "expected one of none, one, many");
    rule.channels.y_arity = *parsed_arity;

    const auto& description = member(j, "description", path);
    if (!description.is_string()) fail(path + ".description", "expected a string");
    rule.description = description.get<std::string>();
    return rule;
}

json signature_json(const DataSignature& sig) {
    json out = json::object();
    for (DataType t : kAllDataTypes) {
        if (sig.count(t) > 0) out[std::string(to_id(t))] = sig.count(t);
    }
    return out;
}

json type_list_json(const std::vector<DataType>& types) {
    json out = json::array();
    for (DataType t : types) out.push_back(std::string(to_id(t)));
    return out;
}

int fit_tier(bool task_fit, bool data_fit) {
    if (task_fit && data_fit) return 0;
    if (data_fit) return 1;
    if (task_fit) return 2;
    return 3;
}

std::string provenance_text(std::optional<TaskType> task, bool task_fit, bool data_fit,
                            const IdiomRule& rule, const DataSignature& signature) {
    const std::string requirement = rule.requirement.describe();
    std::string task_part;
    if (task_fit) task_part = "task: " + std::string(to_id(*task));
    if (data_fit) {
        std::string data_part = "data: " + requirement;
        return task_part.empty() ? data_part : task_part + "; " + data_part;
    }
    std::string shortfall =
        "data needs " + requirement + ", available " + signature.describe();
    if (task_fit) return task_part + "; " + shortfall;
    std::string out = "not recommended: ";
    if (task) out += "task " + std::string(to_id(*task)) + " not served; ";
    return out + shortfall;
}

}  // namespace

std::string_view to_id(YArity v) {
    switch (v) {
        case YArity::None: return "none";
        case YArity::One: return "one";
        case YArity::Many: return "many";
    }
    return "one";
}

std::optional<YArity> parse_y_arity(std::string_view id) {
    if (id == "none") return YArity::None;
    if (id == "one") return YArity::One;
    if (id == "many") return YArity::Many;
    return std::nullopt;
}

bool ChannelSpec::accepts_x(DataType t) const { return contains(x, t); }
bool ChannelSpec::accepts_y(DataType t) const { return contains(y, t); }

bool IdiomRule::serves(TaskType t) const {
    return std::binary_search(tasks.begin(), tasks.end(), t);
}

const RuleSet& default_rules() {
    static const RuleSet rules = load_rules(kDefaultRulesJson);
    return rules;
}

ValidationReport check_rule(const IdiomRule& rule) {
    ValidationReport report;
    if (rule.tasks.empty()) report.push_back({"tasks", "must name at least one task"});
    for (int c : rule.requirement.counts) {
        if (c < 0) report.push_back({"requirement", "counts must be non-negative"});
    }
    if (rule.requirement.total() < 1) {
        report.push_back({"requirement", "must require at least one column"});
    }
    if (rule.max_counts) {
        for (DataType t : kAllDataTypes) {
            if (rule.max_counts->count(t) < rule.requirement.count(t)) {
                report.push_back({"max_counts." + std::string(to_id(t)), "below the required count"});
            }
        }
    }

    const auto& ch = rule.channels;
    if (ch.x.empty()) report.push_back({"channel_spec.x", "must accept at least one data type"});
    if (ch.y_arity == YArity::None && !ch.y.empty()) {
        report.push_back({"channel_spec.y", "must be empty when y_arity is none"});
    }
    if (ch.y_arity != YArity::None && ch.y.empty()) {
        report.push_back({"channel_spec.y", "must accept at least one data type"});
    }

    // Each required column must land on a channel that accepts its type, with
    // x holding exactly one column and y holding 0, 1 or any number.
    const int y_capacity = ch.y_arity == YArity::None ? 0
                           : ch.y_arity == YArity::One
                               ? 1
                               : std::numeric_limits<int>::max() / 2;
    int x_only = 0, y_only = 0, either = 0;
    for (DataType t : kAllDataTypes) {
        const int n = rule.requirement.count(t);
        if (n <= 0) continue;
        const bool on_x = ch.accepts_x(t);
        const bool on_y = ch.accepts_y(t);
        if (!on_x && !on_y) {
            report.push_back({"channel_spec", "required " + std::string(display_name(t)) +
                                                  " is not accepted by any channel"});
        } else if (on_x && on_y) {
            either += n;
        } else if (on_x) {
            x_only += n;
        } else {
            y_only += n;
        }
    }
    if (x_only > 1 || y_only > y_capacity || x_only + y_only + either > 1 + y_capacity) {
        report.push_back({"channel_spec", "required columns exceed the channels' capacity"});
    }
    return report;
}

RuleSet load_rules(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail("rules", std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_array()) fail("rules", "expected an array of rules");

    RuleSet rules;
    ValidationReport report;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto path = "rules[" + std::to_string(i) + "]";
        IdiomRule rule = read_rule(doc[i], path);
        if (find_rule(rules, rule.idiom) != nullptr) {
            fail(path + ".idiom", "duplicate idiom '" + std::string(to_id(rule.idiom)) + "'");
        }
        for (auto& v : check_rule(rule)) {
            report.push_back({path + "." + v.path, v.message});
        }
        rules.push_back(std::move(rule));
    }
    if (!report.empty()) {
        throw Error(ErrorCode::Validation, "invalid rules: " + report.front().to_string(), report);
    }
    return rules;
}

RuleSet load_rules_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Validation, "cannot read rules file " + path.string(),
                    {{"rules_file", "cannot be opened"}});
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_rules(buf.str());
}

json to_json(const IdiomRule& rule) {
    json tasks = json::array();
    for (TaskType t : rule.tasks) tasks.push_back(std::string(to_id(t)));
    return {
        {"idiom", std::string(to_id(rule.idiom))},
        {"requirement", signature_json(rule.requirement)},
        {"ordered_satisfies_categorical", rule.ordered_satisfies_categorical},
        {"max_counts", rule.max_counts ? signature_json(*rule.max_counts) : json(nullptr)},
        {"tasks", tasks},
        {"channel_spec",
         {{"x", type_list_json(rule.channels.x)},
          {"y", type_list_json(rule.channels.y)},
          {"y_arity", std::string(to_id(rule.channels.y_arity))}}},
        {"description", rule.description},
    };
}

json to_json(RuleView rules) {
    json out = json::array();
    for (const auto& r : rules) out.push_back(to_json(r));
    return out;
}

const IdiomRule* find_rule(RuleView rules, IdiomType idiom) {
    auto it = std::find_if(rules.begin(), rules.end(),
                           [&](const IdiomRule& r) { return r.idiom == idiom; });
    return it == rules.end() ? nullptr : &*it;
}

DataSignature signature_of(std::span<const DataRequirement> requirements) {
    DataSignature sig;
    for (const auto& r : requirements) sig.add(r.dtype);
    return sig;
}

DataSignature signature_of(const DataTable& table) {
    DataSignature sig;
    for (const auto& c : table.columns) sig.add(c.dtype);
    return sig;
}

bool satisfies(const DataSignature& available, const DataSignature& required,
               bool ordered_satisfies_categorical, const std::optional<DataSignature>& max_counts) {
    const int categorical = available.count(DataType::Categorical);
    const int numerical = available.count(DataType::Numerical);
    const int ordered = available.count(DataType::CategoricalOrdered);
    const int movable = ordered_satisfies_categorical ? ordered : 0;

    // k ordered columns act as categorical ones.
    for (int k = 0; k <= movable; ++k) {
        const DataSignature effective = DataSignature::of(categorical + k, numerical, ordered - k);
        bool ok = true;
        for (DataType t : kAllDataTypes) {
            if (effective.count(t) < required.count(t)) ok = false;
            if (max_counts && effective.count(t) > max_counts->count(t)) ok = false;
        }
        if (ok) return true;
    }
    return false;
}

bool satisfies(const DataSignature& available, const IdiomRule& rule) {
    return satisfies(available, rule.requirement, rule.ordered_satisfies_categorical,
                     rule.max_counts);
}

json to_json(const Recommendation& rec) {
    return {
        {"idiom", std::string(to_id(rec.idiom))},
        {"task_fit", rec.task_fit},
        {"data_fit", rec.data_fit},
        {"rank", rec.rank},
        {"provenance", rec.provenance},
    };
}

std::vector<Recommendation> recommend_idioms(std::optional<TaskType> task,
                                             const DataSignature& signature, RuleView rules) {
    std::vector<Recommendation> out;
    out.reserve(rules.size());
    for (const auto& rule : rules) {
        Recommendation rec;
        rec.idiom = rule.idiom;
        rec.task_fit = task.has_value() && rule.serves(*task);
        rec.data_fit = satisfies(signature, rule);
        rec.provenance = provenance_text(task, rec.task_fit, rec.data_fit, rule, signature);
        out.push_back(std::move(rec));
    }
    std::sort(out.begin(), out.end(), [](const Recommendation& a, const Recommendation& b) {
        const int ta = fit_tier(a.task_fit, a.data_fit);
        const int tb = fit_tier(b.task_fit, b.data_fit);
        if (ta != tb) return ta < tb;
        return a.idiom < b.idiom;
    });
    for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = static_cast<int>(i) + 1;
    return out;
}

AxisCandidates axis_candidates(IdiomType idiom, const DataTable& table, RuleView rules) {
    const IdiomRule* rule = find_rule(rules, idiom);
    if (rule == nullptr) {
        throw Error(ErrorCode::Validation, "no rule for idiom '" + std::string(to_id(idiom)) + "'",
                    {{"idiom", "unknown idiom"}});
    }
    AxisCandidates out;
    for (const auto& c : table.columns) {
        if (rule->channels.accepts_x(c.dtype)) out.x.push_back(c.name);
        if (rule->channels.accepts_y(c.dtype)) out.y.push_back(c.name);
    }
    return out;
}

ValidationReport validate_binding(IdiomType idiom, const DataTable& table,
                                  const AxisBinding& binding, RuleView rules) {
    ValidationReport report;
    const IdiomRule* rule = find_rule(rules, idiom);
    if (rule == nullptr) {
        report.push_back({"idiom", "no rule for idiom '" + std::string(to_id(idiom)) + "'"});
        return report;
    }
    const auto& ch = rule->channels;

    if (const Column* x = table.find(binding.x_column); x == nullptr) {
        report.push_back({"binding.x_column", "'" + binding.x_column + "' not in table"});
    } else if (!ch.accepts_x(x->dtype)) {
        report.push_back({"binding.x_column", "x-axis requires " + join_types(ch.x)});
    }

    const std::size_t ny = binding.y_columns.size();
    if (ch.y_arity == YArity::None && ny != 0) {
        report.push_back({"binding.y_columns", "y arity must be 0"});
    } else if (ch.y_arity == YArity::One && ny != 1) {
        report.push_back({"binding.y_columns", "y arity must be 1"});
    } else if (ch.y_arity == YArity::Many && ny == 0) {
        report.push_back({"binding.y_columns", "y arity must be at least 1"});
    }

    for (std::size_t i = 0; i < ny; ++i) {
        const auto& name = binding.y_columns[i];
        const auto path = "binding.y_columns[" + std::to_string(i) + "]";
        if (std::find(binding.y_columns.begin(), binding.y_columns.begin() + static_cast<long>(i),
                      name) != binding.y_columns.begin() + static_cast<long>(i)) {
            report.push_back({path, "duplicate y column '" + name + "'"});
            continue;
        }
        const Column* y = table.find(name);
        if (y == nullptr) {
            report.push_back({path, "'" + name + "' not in table"});
        } else if (ch.y_arity != YArity::None && !ch.accepts_y(y->dtype)) {
            report.push_back({path, "y-axis requires " + join_types(ch.y)});
        }
    }
    return report;
}

}  // namespace isc
