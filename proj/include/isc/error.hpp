#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace isc {

/// One problem found while validating a value, located by a JSON-style path
/// such as `table.columns[1].dtype`.
struct Violation {
    std::string path;
    std::string message;

    [[nodiscard]] std::string to_string() const {
        return path.empty() ? message : path + ": " + message;
    }

    friend bool operator==(const Violation&, const Violation&) = default;
};

using ValidationReport = std::vector<Violation>;

enum class ErrorCode {
    Validation,   // 400
    NotFound,     // 404
    Conflict,     // 409
    TooLarge,     // 413
    CsvParse,     // 422
    Storage,      // 500
    Internal,     // 500
};

std::string_view to_id(ErrorCode code);
int http_status(ErrorCode code);

/// The single exception type thrown across module boundaries. Carries the
/// machine-readable parts of the HTTP error body.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message, ValidationReport details = {},
          nlohmann::json context = nlohmann::json::object());

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    [[nodiscard]] const ValidationReport& details() const noexcept { return details_; }
    [[nodiscard]] const nlohmann::json& context() const noexcept { return context_; }

    /// `{code, message, details[]}` plus any context keys.
    [[nodiscard]] nlohmann::json to_json() const;

private:
    ErrorCode code_;
    ValidationReport details_;
    nlohmann::json context_;
};

/// Throws a Validation error if `report` is non-empty.
void throw_if_invalid(const ValidationReport& report, std::string_view what);

}  // namespace isc
