#pragma once

// CSV import/export, column type inference and the table editing operations.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "isc/error.hpp"
#include "isc/types.hpp"

namespace isc {

inline constexpr std::size_t kMaxCsvBytes = 5 * 1024 * 1024;
inline constexpr std::size_t kMaxCsvRows = 10'000;
inline constexpr std::size_t kSampleRows = 3;

/// Parses UTF-8, comma-delimited CSV with a mandatory header row.
/// Throws Error(CsvParse) for malformed input and Error(TooLarge) past the
/// size or row limits. Never throws anything else.
DataTable parse_csv(std::string_view bytes);

/// Numerical iff at least one cell is non-empty and every non-empty cell is a
/// number; categorical otherwise. Never yields categorical (ordered).
DataType infer_column_type(std::span<const std::string> values);

/// Sample table with one column per requirement and three placeholder rows.
DataTable prepopulate_table(std::span<const DataRequirement> requirements);

/// RFC 4180 output; cells are quoted only when they contain a comma, a quote
/// or a line break. Rows end with "\n".
std::string serialize_csv(const DataTable& table);

namespace edit {
struct AddRow {};
struct AddColumn {
    std::string name;
    DataType dtype{DataType::Categorical};
};
struct RemoveRow {
    std::size_t index{0};
};
struct RemoveColumn {
    std::string name;
};
struct SetCell {
    std::size_t row{0};
    std::string column;
    std::string text;
};
struct SetColumnType {
    std::string name;
    DataType dtype{DataType::Categorical};
};
struct RenameColumn {
    std::string old_name;
    std::string new_name;
};
}  // namespace edit

using TableEdit = std::variant<edit::AddRow, edit::AddColumn, edit::RemoveRow, edit::RemoveColumn,
                               edit::SetCell, edit::SetColumnType, edit::RenameColumn>;

/// Returns the edited table; the input is never modified. Throws
/// Error(Validation) listing the offending cells or names.
DataTable edit_table(const DataTable& table, const TableEdit& edit);

/// `{"op": "add_row"}`, `{"op": "set_cell", "row": 0, "column": "quiz", "text": "9"}`, ...
TableEdit read_table_edit(const nlohmann::json& j, const std::string& path);

}  // namespace isc
