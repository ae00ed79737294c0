#include <doctest.h>

#include <algorithm>
#include <set>

#include "isc/ingest.hpp"
#include "isc/model.hpp"
#include "isc/workflow.hpp"
#include "../support/expect.hpp"
#include "../support/fixtures.hpp"
#include "../support/gen.hpp"

using namespace isc;
using namespace isc::testing;

namespace {

const RuleView kRules = default_rules();

Timestamp fixed_now() { return *parse_timestamp("2024-06-01T12:00:00Z"); }

Draft apply_all(Draft d, const std::vector<Step>& steps) {
    for (const auto& s : steps) d = apply_step(d, s, kRules);
    return d;
}

std::vector<std::string> field_paths(const Error& e) {
    std::vector<std::string> out;
    for (const auto& v : e.details()) out.push_back(v.path);
    return out;
}

}  // namespace

TEST_CASE("start_draft") {
    const Draft d = start_draft(grades_goal());
    CHECK(is_valid_id(d.id));
    CHECK_FALSE(d.task);
    CHECK_FALSE(d.idiom);
    CHECK_FALSE(d.table);
    CHECK_FALSE(d.binding);
    CHECK_FALSE(d.path);
    CHECK(d.step_log == std::vector<std::string>{"goal"});
    CHECK(start_draft(grades_goal()).id != d.id);

    GoalQuestion one = grades_goal();
    one.requirements.pop_back();
    const auto e = error_of([&] { start_draft(one); });
    REQUIRE(e);
    CHECK(has_violation(e->details(), "requirements", "need at least 2"));
}

TEST_CASE("choose_path") {
    const Draft d = start_draft(grades_goal());
    CHECK(next_steps(d).front() == "path");

    const Draft vis = choose_path(d, DraftPath::Visualization);
    CHECK(vis.path == DraftPath::Visualization);
    CHECK(next_steps(vis) == std::vector<std::string>{"task", "idiom", "data", "binding", "finalize"});

    const Draft data = choose_path(d, DraftPath::Dataset);
    CHECK(next_steps(data).front() == "data");
    const Draft opened = open_data_step(data);
    REQUIRE(opened.table);
    CHECK(*opened.table == prepopulate_table(grades_goal().requirements));
    CHECK(open_data_step(apply_step(data, step::SetTable{quiz_table()}, kRules)).table == quiz_table());

    const Draft back = choose_path(opened, DraftPath::Visualization);
    CHECK(back.path == DraftPath::Visualization);
    CHECK(back.table == opened.table);
    CHECK(back.goal_question == opened.goal_question);
}

TEST_CASE("task-driven order") {
    const Draft d = apply_all(start_draft(grades_goal()),
                              {step::SetTask{TaskType::Distribution}, step::SetIdiom{IdiomType::BarChart},
                               step::SetTable{quiz_table()}, step::SetBinding{{"name", {"quiz"}, {}}}});
    CHECK(d.step_log == std::vector<std::string>{"goal", "task:distribution", "idiom:bar_chart", "table", "binding"});
    const Card c = finalize(d, "Grade distribution", kRules, fixed_now);
    CHECK(c.version == 1);
    CHECK(c.created_at == fixed_now());
    CHECK(c.updated_at == c.created_at);
    CHECK(c.task == TaskType::Distribution);
    CHECK(validate_card(c, kRules).empty());
}

TEST_CASE("visualization-driven order never sets a task") {
    const Draft d = apply_all(start_draft(grades_goal()), {step::SetIdiom{IdiomType::BarChart},
                                                           step::SetTable{quiz_table()},
                                                           step::SetBinding{{"name", {"quiz"}, {}}}});
    const Card c = finalize(d, "No task", kRules, fixed_now);
    CHECK_FALSE(c.task);
}

TEST_CASE("binding needs idiom and table") {
    const Draft d = start_draft(grades_goal());
    auto e = error_of([&] { apply_step(d, step::SetBinding{{"name", {"quiz"}, {}}}, kRules); });
    REQUIRE(e);
    CHECK(has_violation(e->details(), "table", "table required"));
    CHECK(has_violation(e->details(), "idiom", "idiom required"));

    const Draft with_idiom = apply_step(d, step::SetIdiom{IdiomType::BarChart}, kRules);
    e = error_of([&] { apply_step(with_idiom, step::SetBinding{{"name", {"quiz"}, {}}}, kRules); });
    REQUIRE(e);
    CHECK(std::string(e->what()).find("table required") != std::string::npos);
}

TEST_CASE("invalid binding is rejected and the draft is unchanged") {
    const Draft d = apply_all(start_draft(grades_goal()), {step::SetIdiom{IdiomType::BarChart}, step::SetTable{quiz_table()}});
    const Draft copy = d;
    const auto e = error_of([&] { apply_step(d, step::SetBinding{{"quiz", {"name"}, {}}}, kRules); });
    REQUIRE(e);
    CHECK(has_violation(e->details(), "binding.x_column"));
    CHECK(d == copy);
}

TEST_CASE("changing the idiom drops a binding that no longer fits") {
    Draft d = apply_all(start_draft(grades_goal()), {step::SetIdiom{IdiomType::BarChart}, step::SetTable{quiz_table()},
                                                     step::SetBinding{{"name", {"quiz", "forum"}, {}}}});
    REQUIRE(d.binding);

    const Draft grouped = apply_step(d, step::SetIdiom{IdiomType::GroupedBarChart}, kRules);
    CHECK(grouped.binding == d.binding);
    CHECK(grouped.warnings.empty());

    const Draft pie = apply_step(d, step::SetIdiom{IdiomType::PieChart}, kRules);
    CHECK_FALSE(pie.binding);
    REQUIRE(pie.warnings.size() == 1);
    CHECK(pie.warnings[0].rfind("binding dropped", 0) == 0);

    const Draft new_table = apply_step(d, step::SetTable{prepopulate_table(grades_goal().requirements)}, kRules);
    CHECK_FALSE(new_table.binding);

    const Draft cleared = apply_step(d, step::ClearIdiom{}, kRules);
    CHECK_FALSE(cleared.idiom);
    CHECK_FALSE(cleared.binding);
}

TEST_CASE("task can be cleared") {
    Draft d = apply_step(start_draft(grades_goal()), step::SetTask{TaskType::Trend}, kRules);
    CHECK(d.task == TaskType::Trend);
    d = apply_step(d, step::ClearTask{}, kRules);
    CHECK_FALSE(d.task);
    CHECK(d.step_log.back() == "clear_task");
}

TEST_CASE("step log is capped") {
    Draft d = start_draft(grades_goal());
    for (int i = 0; i < 250; ++i) d = apply_step(d, step::SetTask{kAllTaskTypes[static_cast<std::size_t>(i) % 7]}, kRules);
    CHECK(d.step_log.size() == kMaxStepLog);
    CHECK(d.step_log.back() == "task:" + std::string(to_id(kAllTaskTypes[249 % 7])));
}

TEST_CASE("recommendations use requirements until a table is attached") {
    Draft d = apply_step(start_draft(grades_goal()), step::SetTask{TaskType::Distribution}, kRules);
    auto recs = next_recommendations(d, kRules);
    CHECK(recs.front().idiom == IdiomType::BarChart);
    CHECK(recs.front().task_fit);
    CHECK(recs.front().data_fit);

    Draft data = apply_step(start_draft(grades_goal()), step::SetTable{quiz_table()}, kRules);
    CHECK(recommendation_signature(data) == DataSignature::of(1, 2));
    recs = next_recommendations(data, kRules);
    CHECK(std::none_of(recs.begin(), recs.end(), [](const auto& r) { return r.task_fit; }));
    CHECK(recs == recommend_idioms(std::nullopt, DataSignature::of(1, 2), kRules));
}

TEST_CASE("finalize reports exactly the missing fields") {
    const Draft bare = start_draft(grades_goal());
    auto e = error_of([&] { finalize(bare, "", kRules, fixed_now); });
    REQUIRE(e);
    CHECK(field_paths(*e) == std::vector<std::string>{"name", "idiom", "table", "binding"});

    const Draft no_binding = apply_all(bare, {step::SetIdiom{IdiomType::BarChart}, step::SetTable{quiz_table()}});
    e = error_of([&] { finalize(no_binding, "Grades", kRules, fixed_now); });
    REQUIRE(e);
    CHECK(field_paths(*e) == std::vector<std::string>{"binding"});
}

TEST_CASE("identical drafts finalize to cards differing only in id") {
    const std::vector<Step> steps{step::SetIdiom{IdiomType::BarChart}, step::SetTable{quiz_table()},
                                  step::SetBinding{{"name", {"quiz"}, {}}}};
    Card a = finalize(apply_all(start_draft(grades_goal()), steps), "Same", kRules, fixed_now);
    Card b = finalize(apply_all(start_draft(grades_goal()), steps), "Same", kRules, fixed_now);
    CHECK(a.id != b.id);
    b.id = a.id;
    CHECK(a == b);
}

TEST_CASE("draft safety over random step sequences") {
    Gen g(77);
    for (int run = 0; run < 200; ++run) {
        Draft d = start_draft(g.goal_question());
        for (int i = 0; i < 12; ++i) {
            Step s;
            switch (g.range(0, 5)) {
                case 0: s = step::SetTask{g.chance(0.8) ? std::optional(g.pick(kAllTaskTypes)) : std::nullopt}; break;
                case 1: s = step::SetIdiom{g.pick(kAllIdiomTypes)}; break;
                case 2: s = step::SetTable{g.table(1, 4, 4)}; break;
                case 3: {
                    AxisBinding b;
                    if (d.table && !d.table->columns.empty()) {
                        b.x_column = g.pick(d.table->columns).name;
                        for (int k = g.range(0, 2); k > 0; --k) b.y_columns.push_back(g.pick(d.table->columns).name);
                    }
                    s = step::SetBinding{b};
                    break;
                }
                case 4: s = step::ClearTask{}; break;
                default: s = step::ClearIdiom{}; break;
            }
            try {
                d = apply_step(d, s, kRules);
            } catch (const Error& e) {
                CHECK(e.code() == ErrorCode::Validation);
            }
            CHECK(validate_goal_question(d.goal_question).empty());
            if (d.binding) {
                REQUIRE(d.idiom);
                REQUIRE(d.table);
                CHECK(validate_binding(*d.idiom, *d.table, *d.binding, kRules).empty());
            }
        }
    }
}

TEST_CASE("step order does not change the finalized card") {
    Gen g(1234);
    for (int i = 0; i < 200; ++i) {
        const GoalQuestion gq = g.goal_question();
        const IdiomType idiom = g.pick(kAllIdiomTypes);
        const std::optional<TaskType> task = g.chance(0.7) ? std::optional(g.pick(kAllTaskTypes)) : std::nullopt;
        auto b = g.bindable(idiom, kRules, static_cast<std::size_t>(g.range(0, 6)));

        std::vector<Step> steps{step::SetTask{task}, step::SetIdiom{idiom}, step::SetTable{b.table}};
        std::vector<int> order{0, 1, 2};
        std::optional<Card> first;
        do {
            std::vector<Step> seq;
            for (int k : order) seq.push_back(steps[static_cast<std::size_t>(k)]);
            seq.push_back(step::SetBinding{b.binding});
            Card c = finalize(apply_all(start_draft(gq), seq), "Card", kRules, fixed_now);
            c.id.clear();
            if (!first) {
                first = c;
            } else {
                CHECK(c == *first);
            }
        } while (std::next_permutation(order.begin(), order.end()));
    }
}

TEST_CASE("draft JSON round-trip and steps from JSON") {
    Draft d = apply_all(choose_path(start_draft(grades_goal()), DraftPath::Dataset),
                        {step::SetIdiom{IdiomType::BarChart}, step::SetTable{quiz_table()},
                         step::SetBinding{{"name", {"quiz"}, {"T", "X", "Y"}}}});
    const auto j = to_json(d);
    CHECK(j["path"] == "dataset");
    CHECK(j["next_steps"] == nlohmann::json::array({"task", "finalize"}));
    CHECK(read_draft(j) == d);

    using nlohmann::json;
    CHECK(std::holds_alternative<step::SetTask>(read_step(json{{"type", "set_task"}, {"task", "trend"}})));
    const auto none = read_step(json{{"type", "set_task"}, {"task", nullptr}});
    CHECK_FALSE(std::get<step::SetTask>(none).task);
    CHECK(std::get<step::SetIdiom>(read_step(json{{"type", "set_idiom"}, {"idiom", "heatmap"}})).idiom ==
          IdiomType::Heatmap);
    CHECK(std::holds_alternative<step::ClearIdiom>(read_step(json{{"type", "clear_idiom"}})));
    auto e = error_of([] { read_step(json{{"type", "teleport"}}); });
    REQUIRE(e);
    e = error_of([] { read_step(json{{"type", "set_idiom"}, {"idiom", "gauge"}}); });
    REQUIRE(e);
    CHECK(has_violation(e->details(), "idiom"));
}
