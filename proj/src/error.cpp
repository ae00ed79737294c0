#include "isc/error.hpp"

namespace isc {

std::string_view to_id(ErrorCode code) {
    switch (code) {
        case ErrorCode::Validation: return "validation_error";
        case ErrorCode::NotFound: return "not_found";
        case ErrorCode::Conflict: return "version_conflict";
        case ErrorCode::TooLarge: return "payload_too_large";
        case ErrorCode::CsvParse: return "csv_parse_error";
        case ErrorCode::Storage: return "storage_error";
        case ErrorCode::Internal: return "internal_error";
    }
    return "internal_error";
}

int http_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::Validation: return 400;
        case ErrorCode::NotFound: return 404;
        case ErrorCode::Conflict: return 409;
        case ErrorCode::TooLarge: return 413;
        case ErrorCode::CsvParse: return 422;
        case ErrorCode::Storage:
        case ErrorCode::Internal: return 500;
    }
    return 500;
}

Error::Error(ErrorCode code, std::string message, ValidationReport details, nlohmann::json context)
    : std::runtime_error(std::move(message)),
      code_(code),
      details_(std::move(details)),
      context_(std::move(context)) {}

nlohmann::json Error::to_json() const {
    nlohmann::json body = context_.is_object() ? context_ : nlohmann::json::object();
    body["code"] = std::string(to_id(code_));
    body["message"] = what();
    auto details = nlohmann::json::array();
    for (const auto& v : details_) {
        details.push_back({{"path", v.path}, {"message", v.message}});
    }
    body["details"] = std::move(details);
    return body;
}

void throw_if_invalid(const ValidationReport& report, std::string_view what) {
    if (report.empty()) return;
    std::string message(what);
    message += ": ";
    message += report.front().to_string();
    if (report.size() > 1) {
        message += " (and " + std::to_string(report.size() - 1) + " more)";
    }
    throw Error(ErrorCode::Validation, std::move(message), report);
}

}  // namespace isc
