#pragma once

// Human-facing artifacts of a card: the four-section preview document, the
// renderer-neutral chart specification consumed by the web client, and the
// standalone SVG / JSON exports.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "isc/types.hpp"

namespace isc {

inline constexpr std::size_t kPreviewRowLimit = 50;

struct CardSection {
    std::string heading;
    std::string body;

    friend bool operator==(const CardSection&, const CardSection&) = default;
};

struct ColumnSummary {
    std::string name;
    DataType dtype{DataType::Categorical};

    friend bool operator==(const ColumnSummary&, const ColumnSummary&) = default;
};

struct TableSummary {
    std::vector<ColumnSummary> columns;
    std::size_t row_count{0};
    /// Row-major cells; only present for tables of at most kPreviewRowLimit rows.
    std::optional<std::vector<std::vector<std::string>>> rows;

    friend bool operator==(const TableSummary&, const TableSummary&) = default;
};

struct CardDocument {
    std::string card_id;
    std::string title;
    /// Goal/Question, Task Abstraction (Why?), Data Abstraction (What?), Idiom (How?).
    std::vector<CardSection> sections;
    std::string chart_spec_ref;
    TableSummary table;

    friend bool operator==(const CardDocument&, const CardDocument&) = default;
};

inline constexpr const char* kGoalQuestionHeading = "Goal/Question";
inline constexpr const char* kTaskHeading = "Task Abstraction (Why?)";
inline constexpr const char* kDataHeading = "Data Abstraction (What?)";
inline constexpr const char* kIdiomHeading = "Idiom (How?)";

CardDocument render_card(const Card& card);
nlohmann::json to_json(const CardDocument& doc);

struct Series {
    std::string name;
    /// One entry per category (or per row for scatter plots); nullopt = missing.
    std::vector<std::optional<double>> points;
    /// Scatter plots only: the x value of each point.
    std::vector<std::optional<double>> x;

    friend bool operator==(const Series&, const Series&) = default;
};

struct ChartSpec {
    IdiomType idiom{IdiomType::BarChart};
    std::vector<std::string> categories;
    std::vector<Series> series;
    ChartLabels labels;

    friend bool operator==(const ChartSpec&, const ChartSpec&) = default;
};

/// Everything except scatter plots is keyed by categories along x.
bool is_category_keyed(IdiomType idiom);

/// Transcribes the bound columns in row order. Histograms are binned here.
/// Throws Error(Validation) for negative pie/donut values and Error(Internal)
/// for unparseable numbers in a numerical column.
ChartSpec build_chart_spec(const Card& card);
nlohmann::json to_json(const ChartSpec& spec);

/// Standalone SVG 1.1 (800x450). Every data point is drawn as exactly one
/// element carrying the `datum` class.
std::string export_chart_svg(const ChartSpec& spec);

/// Identical to serialize_card.
std::string export_card_json(const Card& card);

}  // namespace isc
