#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "isc/ingest.hpp"
#include "isc/keyed_mutex.hpp"
#include "isc/store.hpp"
#include "isc/workflow.hpp"

namespace isc {

/// Persistent drafts with a single writer per draft id: every mutation loads
/// the draft, applies one pure workflow operation and saves the result while
/// holding that draft's lock.
class DraftEngine {
public:
    explicit DraftEngine(FileStore& store) : store_(store) {}

    Draft start(const GoalQuestion& gq);
    [[nodiscard]] Draft get(const std::string& id) const { return store_.get_draft(id); }
    void discard(const std::string& id) { store_.delete_draft(id); }

    Draft choose_path(const std::string& id, DraftPath path);
    Draft apply(const std::string& id, const Step& step);
    Draft open_data_step(const std::string& id);

    /// Applies the edits in order to the draft's table (the sample table if
    /// none is attached yet); all or nothing.
    Draft edit_table(const std::string& id, std::span<const TableEdit> edits);
    Draft upload_csv(const std::string& id, std::string_view bytes);

    /// `task_override`, when given, replaces the draft's task for this query
    /// only.
    [[nodiscard]] std::vector<Recommendation> recommendations(
        const std::string& id, std::optional<TaskType> task_override = std::nullopt) const;

    /// Uses the draft's idiom when `idiom` is absent.
    [[nodiscard]] AxisCandidates axis_candidates(const std::string& id,
                                                 std::optional<IdiomType> idiom) const;

    /// Finalizes and saves the card. The draft is kept.
    Card finalize(const std::string& id, std::string_view name);

private:
    template <typename F>
    Draft mutate(const std::string& id, F&& change) {
        auto lock = locks_.lock(id);
        Draft next = change(store_.get_draft(id));
        store_.save_draft(next);
        return next;
    }

    FileStore& store_;
    KeyedMutex locks_;
};

}  // namespace isc
