#include "isc/types.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <random>

namespace isc {

namespace {

struct DataTypeInfo {
    DataType value;
    std::string_view id;
    std::string_view label;
};

constexpr std::array kDataTypeInfo{
    DataTypeInfo{DataType::Categorical, "categorical", "categorical"},
    DataTypeInfo{DataType::Numerical, "numerical", "numerical"},
    DataTypeInfo{DataType::CategoricalOrdered, "categorical_ordered", "categorical (ordered)"},
};

struct TaskInfo {
    TaskType value;
    std::string_view id;
    std::string_view label;
    std::string_view description;
};

constexpr std::array kTaskInfo{
    TaskInfo{TaskType::Distribution, "distribution", "Distribution",
             "Show the distribution of values: how they spread across a range or across categories."},
    TaskInfo{TaskType::Trend, "trend", "Trend",
             "Show how a value changes over time or along an ordered sequence."},
    TaskInfo{TaskType::Correlation, "correlation", "Correlation",
             "Show whether and how two measures relate to each other."},
    TaskInfo{TaskType::Comparison, "comparison", "Comparison",
             "Compare values between categories or groups."},
    TaskInfo{TaskType::PartToWhole, "part_to_whole", "Part-to-whole",
             "Show how parts make up a total."},
    TaskInfo{TaskType::Ranking, "ranking", "Ranking",
             "Order items by a value to show which are highest or lowest."},
    TaskInfo{TaskType::Deviation, "deviation", "Deviation",
             "Show how values differ from a reference such as an average or target."},
};

struct IdiomInfo {
    IdiomType value;
    std::string_view id;
    std::string_view label;
};

constexpr std::array kIdiomInfo{
    IdiomInfo{IdiomType::BarChart, "bar_chart", "Bar chart"},
    IdiomInfo{IdiomType::GroupedBarChart, "grouped_bar_chart", "Grouped bar chart"},
    IdiomInfo{IdiomType::StackedBarChart, "stacked_bar_chart", "Stacked bar chart"},
    IdiomInfo{IdiomType::LineChart, "line_chart", "Line chart"},
    IdiomInfo{IdiomType::AreaChart, "area_chart", "Area chart"},
    IdiomInfo{IdiomType::PieChart, "pie_chart", "Pie chart"},
    IdiomInfo{IdiomType::DonutChart, "donut_chart", "Donut chart"},
    IdiomInfo{IdiomType::ScatterPlot, "scatter_plot", "Scatter plot"},
    IdiomInfo{IdiomType::Histogram, "histogram", "Histogram"},
    IdiomInfo{IdiomType::BoxPlot, "box_plot", "Box plot"},
    IdiomInfo{IdiomType::Heatmap, "heatmap", "Heatmap"},
};

template <typename Table, typename Enum>
const auto& info_for(const Table& table, Enum v) {
    return table[static_cast<std::size_t>(v)];
}

template <typename Table>
auto parse_with(const Table& table, std::string_view id)
    -> std::optional<decltype(table[0].value)> {
    for (const auto& entry : table) {
        if (entry.id == id) return entry.value;
    }
    return std::nullopt;
}

}  // namespace

std::string_view to_id(DataType v) { return info_for(kDataTypeInfo, v).id; }
std::string_view to_id(TaskType v) { return info_for(kTaskInfo, v).id; }
std::string_view to_id(IdiomType v) { return info_for(kIdiomInfo, v).id; }

std::optional<DataType> parse_data_type(std::string_view id) { return parse_with(kDataTypeInfo, id); }
std::optional<TaskType> parse_task_type(std::string_view id) { return parse_with(kTaskInfo, id); }
std::optional<IdiomType> parse_idiom_type(std::string_view id) { return parse_with(kIdiomInfo, id); }

std::string_view display_name(DataType v) { return info_for(kDataTypeInfo, v).label; }
std::string_view display_name(TaskType v) { return info_for(kTaskInfo, v).label; }
std::string_view display_name(IdiomType v) { return info_for(kIdiomInfo, v).label; }
std::string_view describe(TaskType v) { return info_for(kTaskInfo, v).description; }

int DataSignature::total() const {
    int sum = 0;
    for (int c : counts) sum += c;
    return sum;
}

std::string DataSignature::describe() const {
    std::string out;
    for (DataType t : kAllDataTypes) {
        if (count(t) == 0) continue;
        if (!out.empty()) out += " + ";
        out += std::to_string(count(t));
        out += ' ';
        out += display_name(t);
    }
    return out.empty() ? "no data" : out;
}

DataSignature DataSignature::of(int categorical, int numerical, int ordered) {
    DataSignature s;
    s.add(DataType::Categorical, categorical);
    s.add(DataType::Numerical, numerical);
    s.add(DataType::CategoricalOrdered, ordered);
    return s;
}

const Column* DataTable::find(std::string_view name) const {
    auto it = std::find_if(columns.begin(), columns.end(),
                           [&](const Column& c) { return c.name == name; });
    return it == columns.end() ? nullptr : &*it;
}

std::vector<std::string> DataTable::column_names() const {
    std::vector<std::string> names;
    names.reserve(columns.size());
    for (const auto& c : columns) names.push_back(c.name);
    return names;
}

Timestamp system_now() {
    return std::chrono::time_point_cast<std::chrono::microseconds>(std::chrono::system_clock::now());
}

std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    const auto day = floor<days>(t);
    const year_month_day ymd{day};
    const hh_mm_ss hms{t - day};
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%06lldZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()),
                  static_cast<long long>(hms.subseconds().count()));
    return buf;
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
    using namespace std::chrono;
    // YYYY-MM-DDTHH:MM:SS[.f{1,6}]Z
    if (text.size() < 20 || text.back() != 'Z') return std::nullopt;
    auto digits = [&](std::size_t pos, std::size_t n, int& out) {
        if (pos + n > text.size()) return false;
        auto res = std::from_chars(text.data() + pos, text.data() + pos + n, out);
        return res.ec == std::errc{} && res.ptr == text.data() + pos + n;
    };
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    if (!digits(0, 4, y) || text[4] != '-' || !digits(5, 2, mo) || text[7] != '-' ||
        !digits(8, 2, d) || (text[10] != 'T' && text[10] != 't') || !digits(11, 2, h) ||
        text[13] != ':' || !digits(14, 2, mi) || text[16] != ':' || !digits(17, 2, s)) {
        return std::nullopt;
    }
    long long micros = 0;
    std::size_t pos = 19;
    if (text[pos] == '.') {
        ++pos;
        std::size_t n = 0;
        while (pos < text.size() - 1) {
            char c = text[pos];
            if (c < '0' || c > '9' || n == 6) return std::nullopt;
            micros = micros * 10 + (c - '0');
            ++n;
            ++pos;
        }
        if (n == 0) return std::nullopt;
        for (; n < 6; ++n) micros *= 10;
    }
    if (pos != text.size() - 1) return std::nullopt;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || h > 23 || mi > 59 || s > 59) return std::nullopt;
    return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s} + microseconds{micros};
}

std::string new_id() {
    thread_local std::mt19937_64 engine = [] {
        std::random_device rd;
        std::seed_seq seq{rd(), rd(), rd(), rd(), rd(), rd(), rd(), rd()};
        return std::mt19937_64(seq);
    }();
    char buf[33];
    std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(engine()),
                  static_cast<unsigned long long>(engine()));
    return buf;
}

bool is_valid_id(std::string_view id) {
    return id.size() == 32 && std::all_of(id.begin(), id.end(), [](char c) {
               return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
           });
}

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) ==
                      std::tolower(static_cast<unsigned char>(y));
           });
}

}  // namespace isc
