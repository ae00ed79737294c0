#pragma once

// Domain vocabulary shared by every module: data types, tasks, idioms,
// tables, bindings and the Indicator Specification Card itself.

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace isc {

enum class DataType { Categorical, Numerical, CategoricalOrdered };

inline constexpr std::array kAllDataTypes{
    DataType::Categorical, DataType::Numerical, DataType::CategoricalOrdered};

/// Analysis intent (the "Why?" of a card).
enum class TaskType { Distribution, Trend, Correlation, Comparison, PartToWhole, Ranking, Deviation };

inline constexpr std::array kAllTaskTypes{
    TaskType::Distribution, TaskType::Trend,   TaskType::Correlation, TaskType::Comparison,
    TaskType::PartToWhole,  TaskType::Ranking, TaskType::Deviation};

/// Chart type (the "How?" of a card). Declaration order is the recommendation
/// tie-break order.
enum class IdiomType {
    BarChart,
    GroupedBarChart,
    StackedBarChart,
    LineChart,
    AreaChart,
    PieChart,
    DonutChart,
    ScatterPlot,
    Histogram,
    BoxPlot,
    Heatmap,
};

inline constexpr std::array kAllIdiomTypes{
    IdiomType::BarChart,   IdiomType::GroupedBarChart, IdiomType::StackedBarChart,
    IdiomType::LineChart,  IdiomType::AreaChart,       IdiomType::PieChart,
    IdiomType::DonutChart, IdiomType::ScatterPlot,     IdiomType::Histogram,
    IdiomType::BoxPlot,    IdiomType::Heatmap};

// Stable lowercase snake_case identifiers used on the wire.
std::string_view to_id(DataType v);
std::string_view to_id(TaskType v);
std::string_view to_id(IdiomType v);
std::optional<DataType> parse_data_type(std::string_view id);
std::optional<TaskType> parse_task_type(std::string_view id);
std::optional<IdiomType> parse_idiom_type(std::string_view id);

// Human-facing labels ("categorical (ordered)", "Part-to-whole", "Bar chart").
std::string_view display_name(DataType v);
std::string_view display_name(TaskType v);
std::string_view display_name(IdiomType v);
std::string_view describe(TaskType v);

constexpr std::size_t index_of(DataType v) { return static_cast<std::size_t>(v); }

/// Multiset of data types. Absent entries count as zero.
struct DataSignature {
    std::array<int, kAllDataTypes.size()> counts{};

    [[nodiscard]] int count(DataType t) const { return counts[index_of(t)]; }
    void add(DataType t, int n = 1) { counts[index_of(t)] += n; }
    [[nodiscard]] int total() const;
    /// "1 categorical + 2 numerical"; "no data" when empty.
    [[nodiscard]] std::string describe() const;

    static DataSignature of(int categorical, int numerical, int ordered = 0);

    friend bool operator==(const DataSignature&, const DataSignature&) = default;
};

struct DataRequirement {
    std::string name;
    DataType dtype{DataType::Categorical};

    friend bool operator==(const DataRequirement&, const DataRequirement&) = default;
};

struct GoalQuestion {
    std::string goal;
    std::string question;
    std::string idea;
    std::vector<DataRequirement> requirements;

    friend bool operator==(const GoalQuestion&, const GoalQuestion&) = default;
};

/// Cells are kept as the user typed them; the column dtype governs how they
/// are read. An empty cell is a missing value.
struct Column {
    std::string name;
    DataType dtype{DataType::Categorical};
    std::vector<std::string> values;

    friend bool operator==(const Column&, const Column&) = default;
};

struct DataTable {
    std::vector<Column> columns;
    std::size_t row_count{0};

    [[nodiscard]] const Column* find(std::string_view name) const;
    [[nodiscard]] std::vector<std::string> column_names() const;

    friend bool operator==(const DataTable&, const DataTable&) = default;
};

struct ChartLabels {
    std::string title;
    std::string x_label;
    std::string y_label;

    friend bool operator==(const ChartLabels&, const ChartLabels&) = default;
};

struct AxisBinding {
    std::string x_column;
    std::vector<std::string> y_columns;
    ChartLabels labels;

    friend bool operator==(const AxisBinding&, const AxisBinding&) = default;
};

using Timestamp = std::chrono::sys_time<std::chrono::microseconds>;
using Clock = std::function<Timestamp()>;

Timestamp system_now();
/// RFC 3339, UTC, microsecond precision: `2024-05-01T09:30:00.000000Z`.
std::string format_timestamp(Timestamp t);
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// 128 random bits as 32 lowercase hex characters.
std::string new_id();
bool is_valid_id(std::string_view id);

struct IndicatorSpecificationCard {
    std::string id;
    std::string name;
    GoalQuestion goal_question;
    std::optional<TaskType> task;
    IdiomType idiom{IdiomType::BarChart};
    DataTable table;
    AxisBinding binding;
    Timestamp created_at{};
    Timestamp updated_at{};
    std::int64_t version{1};

    friend bool operator==(const IndicatorSpecificationCard&,
                           const IndicatorSpecificationCard&) = default;
};

using Card = IndicatorSpecificationCard;

/// True if `a` and `b` are equal ignoring ASCII case.
bool iequals(std::string_view a, std::string_view b);

}  // namespace isc
