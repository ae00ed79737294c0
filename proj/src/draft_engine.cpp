#include "isc/draft_engine.hpp"

namespace isc {

Draft DraftEngine::start(const GoalQuestion& gq) {
    Draft d = start_draft(gq);
    store_.save_draft(d);
    return d;
}

Draft DraftEngine::choose_path(const std::string& id, DraftPath path) {
    return mutate(id, [&](const Draft& d) { return isc::choose_path(d, path); });
}

Draft DraftEngine::apply(const std::string& id, const Step& step) {
    return mutate(id, [&](const Draft& d) { return apply_step(d, step, store_.rules()); });
}

Draft DraftEngine::open_data_step(const std::string& id) {
    return mutate(id, [](const Draft& d) { return isc::open_data_step(d); });
}

Draft DraftEngine::edit_table(const std::string& id, std::span<const TableEdit> edits) {
    return mutate(id, [&](const Draft& d) {
        Draft opened = isc::open_data_step(d);
        DataTable table = *opened.table;
        for (const auto& e : edits) table = isc::edit_table(table, e);
        return apply_step(opened, step::SetTable{std::move(table)}, store_.rules());
    });
}

Draft DraftEngine::upload_csv(const std::string& id, std::string_view bytes) {
    DataTable table = parse_csv(bytes);
    return mutate(id, [&](const Draft& d) {
        return apply_step(d, step::SetTable{table}, store_.rules());
    });
}

std::vector<Recommendation> DraftEngine::recommendations(const std::string& id,
                                                         std::optional<TaskType> task_override) const {
    Draft d = get(id);
    if (task_override) d.task = task_override;
    return next_recommendations(d, store_.rules());
}

AxisCandidates DraftEngine::axis_candidates(const std::string& id,
                                            std::optional<IdiomType> idiom) const {
    const Draft d = get(id);
    if (!idiom) idiom = d.idiom;
    ValidationReport missing;
    if (!idiom) missing.push_back({"idiom", "idiom required"});
    if (!d.table) missing.push_back({"table", "table required"});
    throw_if_invalid(missing, "cannot compute axis candidates");
    return isc::axis_candidates(*idiom, *d.table, store_.rules());
}

Card DraftEngine::finalize(const std::string& id, std::string_view name) {
    auto lock = locks_.lock(id);
    const Draft d = store_.get_draft(id);
    Card card = isc::finalize(d, name, store_.rules(), [this] { return store_.now(); });
    return store_.save_card(std::move(card));
}

}  // namespace isc
