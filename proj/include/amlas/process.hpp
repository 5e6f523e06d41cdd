#pragma once

#include "amlas/artefacts.hpp"
#include "amlas/diagnostic.hpp"
#include "amlas/result.hpp"

#include <set>
#include <string>
#include <vector>

namespace amlas {

struct StageReadiness {
    int stage = 0;
    bool ready = false;
    std::vector<ArtefactKind> missing;  // input kinds with no Current record, in kind order

    bool operator==(const StageReadiness&) const = default;
};

/// Ready iff every input kind of `stage` has at least one Current record.
[[nodiscard]] StageReadiness stage_readiness(const Registry& registry, int stage);

/// Kinds reachable from `changed` through the stages that consume it, transitively.
/// Does not include `changed` itself.
[[nodiscard]] std::set<ArtefactKind> downstream_kinds(ArtefactKind changed);

struct ImpactResult {
    std::string changed;
    std::vector<std::string> stale;  // artefact ids, sorted
    std::set<int> revisit;           // stages to revisit
    bool verification_failure = false;

    bool operator==(const ImpactResult&) const = default;
};

/// Downstream invalidation for a change to artefact `changed`. A Z record holding a
/// Fail entry additionally suggests revisiting stages 2, 3 and 4.
[[nodiscard]] Expected<ImpactResult> impact(const Registry& registry, std::string_view changed);

/// Copy of `registry` with every stale record marked Stale.
[[nodiscard]] Registry apply_impact(Registry registry, const ImpactResult& result);

struct ActivityRecord {
    int activity = 0;
    std::string performed_at;
    std::set<std::string> consumed;
    std::set<std::string> produced;
    std::string notes;

    bool operator==(const ActivityRecord&) const = default;
};

inline constexpr std::string_view kActivityContractRule = "ACT-CONTRACT";

/// Checks that the record's consumed and produced artefacts exist and match the
/// owning stage's contract.
[[nodiscard]] std::vector<Diagnostic> check_activity_record(const Registry& registry, const ActivityRecord& record);

}  // namespace amlas
