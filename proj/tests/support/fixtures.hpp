#pragma once

#include <string>
#include <vector>

#include "isc/types.hpp"

namespace isc::testing {

inline GoalQuestion grades_goal() {
    return {"monitor grades", "how are grades distributed?", "",
            {{"student", DataType::Categorical}, {"grade", DataType::Numerical}}};
}

/// name:Categorical, quiz:Numerical, forum:Numerical
inline DataTable quiz_table() {
    return {{{"name", DataType::Categorical, {"Ada", "Bo"}},
             {"quiz", DataType::Numerical, {"9", "7"}},
             {"forum", DataType::Numerical, {"14", "3"}}},
            2};
}

inline Card quiz_card() {
    Card c;
    c.id = "0123456789abcdef0123456789abcdef";
    c.name = "Grade distribution";
    c.goal_question = grades_goal();
    c.task = TaskType::Distribution;
    c.idiom = IdiomType::BarChart;
    c.table = quiz_table();
    c.binding = {"name", {"quiz"}, {"", "", ""}};
    c.created_at = *parse_timestamp("2024-05-01T09:30:00.000000Z");
    c.updated_at = c.created_at;
    c.version = 1;
    return c;
}

}  // namespace isc::testing
