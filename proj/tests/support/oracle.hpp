#pragma once

// Independent reference evaluator for the recommendation rules. It reads the
// rules document as plain JSON and shares no code with the recommender.

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace isc::oracle {

// Declaration order of the idiom gallery; ties are broken by position here.
inline const std::vector<std::string> kIdiomOrder = {
    "bar_chart",  "grouped_bar_chart", "stacked_bar_chart", "line_chart",
    "area_chart", "pie_chart",         "donut_chart",       "scatter_plot",
    "histogram",  "box_plot",          "heatmap"};

struct Counts {
    int categorical = 0;
    int numerical = 0;
    int ordered = 0;
};

struct RawRule {
    std::string idiom;
    Counts min;
    std::optional<Counts> max;
    bool ordered_as_categorical = true;
    std::set<std::string> tasks;
};

struct Expected {
    std::string idiom;
    bool task_fit = false;
    bool data_fit = false;
    int rank = 0;
};

inline Counts read_counts(const nlohmann::json& j) {
    Counts c;
    c.categorical = j.value("categorical", 0);
    c.numerical = j.value("numerical", 0);
    c.ordered = j.value("categorical_ordered", 0);
    return c;
}

inline std::vector<RawRule> read_rules(const nlohmann::json& doc) {
    std::vector<RawRule> out;
    for (const auto& r : doc) {
        RawRule rule;
        rule.idiom = r.at("idiom").get<std::string>();
        rule.min = read_counts(r.at("requirement"));
        if (r.contains("max_counts") && !r.at("max_counts").is_null()) rule.max = read_counts(r.at("max_counts"));
        rule.ordered_as_categorical = r.value("ordered_satisfies_categorical", true);
        for (const auto& t : r.at("tasks")) rule.tasks.insert(t.get<std::string>());
        out.push_back(rule);
    }
    return out;
}

inline std::vector<RawRule> read_rules_file(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return read_rules(nlohmann::json::parse(ss.str()));
}

/// Tries every role for every ordered column one column at a time.
inline bool brute_satisfies(const Counts& have, const RawRule& rule) {
    const int n = have.ordered;
    const int roles = rule.ordered_as_categorical ? (1 << n) : 1;
    for (int mask = 0; mask < roles; ++mask) {
        Counts eff{have.categorical, have.numerical, 0};
        for (int i = 0; i < n; ++i) {
            if (mask & (1 << i)) {
                ++eff.categorical;
            } else {
                ++eff.ordered;
            }
        }
        bool ok = eff.categorical >= rule.min.categorical && eff.numerical >= rule.min.numerical &&
                  eff.ordered >= rule.min.ordered;
        if (rule.max) {
            ok = ok && eff.categorical <= rule.max->categorical && eff.numerical <= rule.max->numerical &&
                 eff.ordered <= rule.max->ordered;
        }
        if (ok) return true;
    }
    return false;
}

inline std::vector<Expected> brute_recommend(const std::optional<std::string>& task, const Counts& have,
                                             const std::vector<RawRule>& rules) {
    std::vector<Expected> out;
    for (const auto& r : rules) {
        out.push_back({r.idiom, task && r.tasks.count(*task) > 0, brute_satisfies(have, r), 0});
    }
    auto tier = [](const Expected& e) {
        if (e.task_fit && e.data_fit) return 0;
        if (e.data_fit) return 1;
        if (e.task_fit) return 2;
        return 3;
    };
    auto pos = [](const std::string& idiom) {
        return std::find(kIdiomOrder.begin(), kIdiomOrder.end(), idiom) - kIdiomOrder.begin();
    };
    // Insertion sort keyed by (tier, gallery position).
    for (std::size_t i = 1; i < out.size(); ++i) {
        for (std::size_t k = i; k > 0; --k) {
            const auto& a = out[k - 1];
            const auto& b = out[k];
            if (tier(a) > tier(b) || (tier(a) == tier(b) && pos(a.idiom) > pos(b.idiom))) {
                std::swap(out[k - 1], out[k]);
            } else {
                break;
            }
        }
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = static_cast<int>(i) + 1;
    return out;
}

}  // namespace isc::oracle
