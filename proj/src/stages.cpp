#include "amlas/stages.hpp"

#include <algorithm>

namespace amlas {

namespace {

using K = ArtefactKind;

}  // namespace

const std::array<StageSpec, 6>& stage_table()
{
    static const std::array<StageSpec, 6> table{{
        {1, "ML Safety Assurance Scoping", {K::A, K::B, K::C, K::D, K::F}, {K::E, K::G}, {1, 2}},
        {2, "ML Safety Requirements Assurance", {K::E, K::I}, {K::H, K::J, K::K}, {3, 4, 5}},
        {3,
         "Data Management",
         {K::H, K::R},
         {K::L, K::M, K::N, K::O, K::P, K::Q, K::S, K::T},
         {6, 7, 8, 9}},
        {4, "Model Learning", {K::H, K::N, K::O, K::W}, {K::V, K::X, K::Y, K::U}, {10, 11, 12}},
        {5, "Model Verification", {K::H, K::P, K::V, K::BB}, {K::Z, K::AA, K::CC}, {13, 14}},
        {6, "Model Deployment", {K::A, K::B, K::C, K::V, K::GG, K::EE}, {K::DD, K::FF, K::HH}, {15, 16, 17}},
    }};
    return table;
}

const StageSpec& stage_spec(int stage)
{
    return stage_table().at(static_cast<std::size_t>(stage - 1));
}

const std::array<ActivitySpec, 17>& activity_table()
{
    static const std::array<ActivitySpec, 17> table{{
        {1, 1, "Define the safety assurance scope for the ML component"},
        {2, 1, "Instantiate ML safety assurance scoping argument pattern"},
        {3, 2, "Develop ML safety requirements"},
        {4, 2, "Validate ML safety requirements"},
        {5, 2, "Instantiate ML safety requirements argument pattern"},
        {6, 3, "Define data requirements"},
        {7, 3, "Generate ML data"},
        {8, 3, "Validate ML data"},
        {9, 3, "Instantiate ML data argument pattern"},
        {10, 4, "Create ML model"},
        {11, 4, "Test ML model"},
        {12, 4, "Instantiate ML learning argument pattern"},
        {13, 5, "Verify ML model"},
        {14, 5, "Instantiate ML verification argument pattern"},
        {15, 6, "Integrate ML model"},
        {16, 6, "Test the integration"},
        {17, 6, "Instantiate ML deployment argument pattern"},
    }};
    return table;
}

std::optional<ActivitySpec> activity_spec(int id)
{
    if (id < 1 || id > 17) {
        return std::nullopt;
    }
    return activity_table()[static_cast<std::size_t>(id - 1)];
}

std::optional<int> producing_stage(ArtefactKind kind)
{
    for (const auto& stage : stage_table()) {
        if (std::find(stage.outputs.begin(), stage.outputs.end(), kind) != stage.outputs.end()) {
            return stage.number;
        }
    }
    return std::nullopt;
}

std::vector<int> consuming_stages(ArtefactKind kind)
{
    std::vector<int> out;
    for (const auto& stage : stage_table()) {
        if (std::find(stage.inputs.begin(), stage.inputs.end(), kind) != stage.inputs.end()) {
            out.push_back(stage.number);
        }
    }
    return out;
}

bool kind_stage_consistent(ArtefactKind kind, int stage)
{
    if (auto producer = producing_stage(kind)) {
        return *producer == stage;
    }
    const auto consumers = consuming_stages(kind);
    return std::find(consumers.begin(), consumers.end(), stage) != consumers.end();
}

}  // namespace amlas
