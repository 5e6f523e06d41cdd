#pragma once

#include "amlas/artefacts.hpp"

#include <array>
#include <optional>
#include <string_view>
#include <vector>

namespace amlas {

struct StageSpec {
    int number = 0;
    std::string_view name;
    std::vector<ArtefactKind> inputs;
    std::vector<ArtefactKind> outputs;
    std::vector<int> activities;
};

struct ActivitySpec {
    int id = 0;
    int stage = 0;
    std::string_view name;
};

/// The six stages with their artefact inputs and outputs.
[[nodiscard]] const std::array<StageSpec, 6>& stage_table();
[[nodiscard]] const StageSpec& stage_spec(int stage);
/// Activities 1..17.
[[nodiscard]] const std::array<ActivitySpec, 17>& activity_table();
[[nodiscard]] std::optional<ActivitySpec> activity_spec(int id);

/// The stage whose outputs include `kind`, if any. Externally supplied kinds
/// (A, B, C, D, EE and the six patterns) have none.
[[nodiscard]] std::optional<int> producing_stage(ArtefactKind kind);
/// Stages that list `kind` among their inputs.
[[nodiscard]] std::vector<int> consuming_stages(ArtefactKind kind);
/// A record of `kind` may declare `stage` if that stage produces the kind, or, for
/// externally supplied kinds, if that stage consumes it.
[[nodiscard]] bool kind_stage_consistent(ArtefactKind kind, int stage);

}  // namespace amlas
