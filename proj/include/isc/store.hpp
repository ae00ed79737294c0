#pragma once

// Directory-backed storage for saved cards and in-progress drafts:
//
//   <data_dir>/cards/<id>.json    canonical card JSON
//   <data_dir>/drafts/<id>.json   draft JSON
//
// Every write goes to a temporary file that is fsynced and then renamed over
// the target, so a crash leaves either the old or the new record.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "isc/keyed_mutex.hpp"
#include "isc/recommender.hpp"
#include "isc/types.hpp"
#include "isc/workflow.hpp"

namespace isc {

struct CardSummary {
    std::string id;
    std::string name;
    IdiomType idiom{IdiomType::BarChart};
    std::optional<TaskType> task;
    Timestamp updated_at{};
    std::int64_t version{1};

    friend bool operator==(const CardSummary&, const CardSummary&) = default;
};

nlohmann::json to_json(const CardSummary& summary);

/// Writes `content` to `target` via temp file, fsync and rename.
void write_file_atomic(const std::filesystem::path& target, std::string_view content);

class FileStore {
public:
    /// Creates the directory layout and checks that it is writable.
    /// Throws Error(Storage) otherwise.
    FileStore(std::filesystem::path data_dir, RuleSet rules, Clock clock = system_now);

    FileStore(const FileStore&) = delete;
    FileStore& operator=(const FileStore&) = delete;

    /// Persists a new card with version 1. Throws Conflict if the id exists,
    /// Validation if the card is invalid.
    Card save_card(Card card);

    [[nodiscard]] std::optional<Card> find_card(const std::string& id) const;
    /// Throws Error(NotFound).
    [[nodiscard]] Card get_card(const std::string& id) const;

    /// Most recently updated first; ties by id.
    [[nodiscard]] std::vector<CardSummary> list_cards() const;

    /// Replaces the content of `id` if `expected_version` matches the stored
    /// version. id, created_at and version are controlled by the store.
    /// A mismatch throws Conflict carrying `current_version`.
    Card update_card(const std::string& id, Card content, std::int64_t expected_version);

    Card duplicate_card(const std::string& id);

    /// Idempotent.
    void delete_card(const std::string& id);

    void save_draft(const Draft& draft);
    [[nodiscard]] std::optional<Draft> find_draft(const std::string& id) const;
    [[nodiscard]] Draft get_draft(const std::string& id) const;
    void delete_draft(const std::string& id);

    [[nodiscard]] const std::filesystem::path& data_dir() const { return data_dir_; }
    [[nodiscard]] RuleView rules() const { return rules_; }
    [[nodiscard]] Timestamp now() const { return clock_(); }

private:
    [[nodiscard]] std::filesystem::path card_path(const std::string& id) const;
    [[nodiscard]] std::filesystem::path draft_path(const std::string& id) const;
    void write_card(const Card& card);

    std::filesystem::path data_dir_;
    RuleSet rules_;
    Clock clock_;
    mutable KeyedMutex card_locks_;
    mutable KeyedMutex draft_locks_;
};

}  // namespace isc
