#include "amlas/process.hpp"

#include "amlas/stages.hpp"

#include <algorithm>
#include <deque>

namespace amlas {

StageReadiness stage_readiness(const Registry& registry, int stage)
{
    StageReadiness result{stage, true, {}};
    std::vector<ArtefactKind> inputs = stage_spec(stage).inputs;
    std::sort(inputs.begin(), inputs.end());
    for (ArtefactKind kind : inputs) {
        if (registry.current(kind).empty()) {
            result.missing.push_back(kind);
        }
    }
    result.ready = result.missing.empty();
    return result;
}

std::set<ArtefactKind> downstream_kinds(ArtefactKind changed)
{
    std::set<ArtefactKind> reached;
    std::deque<ArtefactKind> queue{changed};
    while (!queue.empty()) {
        const ArtefactKind kind = queue.front();
        queue.pop_front();
        for (int stage : consuming_stages(kind)) {
            for (ArtefactKind output : stage_spec(stage).outputs) {
                if (reached.insert(output).second) {
                    queue.push_back(output);
                }
            }
        }
    }
    reached.erase(changed);
    return reached;
}

Expected<ImpactResult> impact(const Registry& registry, std::string_view changed)
{
    const ArtefactRecord* record = registry.find(changed);
    if (record == nullptr) {
        return Error::make(ErrorCode::UnknownArtefact, "no artefact with this id", {std::string{changed}});
    }

    ImpactResult result;
    result.changed = record->id;
    const auto reachable = downstream_kinds(record->kind);
    for (const auto& candidate : registry.records()) {
        if (candidate.id != record->id && reachable.contains(candidate.kind)) {
            result.stale.push_back(candidate.id);
            result.revisit.insert(candidate.stage);
        }
    }

    if (const auto* results = std::get_if<VerificationResults>(&record->payload)) {
        result.verification_failure =
            std::any_of(results->entries.begin(), results->entries.end(),
                        [](const VerificationEntry& e) { return e.result == VerificationOutcome::Fail; });
        if (result.verification_failure) {
            result.revisit.insert({2, 3, 4});
        }
    }
    return result;
}

Registry apply_impact(Registry registry, const ImpactResult& result)
{
    for (const auto& id : result.stale) {
        (void)registry.set_status(id, ArtefactStatus::Stale);
    }
    return registry;
}

std::vector<Diagnostic> check_activity_record(const Registry& registry, const ActivityRecord& record)
{
    std::vector<Diagnostic> out;
    const std::string subject = "activity " + std::to_string(record.activity);
    auto report = [&](std::string message, std::string id) {
        out.push_back({std::string{kActivityContractRule}, Severity::Error, std::move(message), {subject, std::move(id)},
                       std::nullopt});
    };

    const auto activity = activity_spec(record.activity);
    if (!activity) {
        report("unknown activity id " + std::to_string(record.activity), "");
        return out;
    }
    const StageSpec& stage = stage_spec(activity->stage);
    auto listed = [](const std::vector<ArtefactKind>& kinds, ArtefactKind kind) {
        return std::find(kinds.begin(), kinds.end(), kind) != kinds.end();
    };

    for (const auto& id : record.consumed) {
        const ArtefactRecord* artefact = registry.find(id);
        if (artefact == nullptr) {
            report("consumed artefact " + id + " is not registered", id);
        } else if (!listed(stage.inputs, artefact->kind) && !listed(stage.outputs, artefact->kind)) {
            report("stage " + std::to_string(stage.number) + " does not consume kind " +
                       std::string{to_string(artefact->kind)},
                   id);
        }
    }
    for (const auto& id : record.produced) {
        const ArtefactRecord* artefact = registry.find(id);
        if (artefact == nullptr) {
            report("produced artefact " + id + " is not registered", id);
        } else if (!listed(stage.outputs, artefact->kind)) {
            report("stage " + std::to_string(stage.number) + " does not produce kind " +
                       std::string{to_string(artefact->kind)},
                   id);
        }
    }
    return out;
}

}  // namespace amlas
