#include "amlas/process.hpp"
#include "amlas/stages.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

namespace amlas {
namespace {

Registry with_kinds(std::initializer_list<ArtefactKind> kinds)
{
    Registry registry;
    for (ArtefactKind kind : kinds) {
        ArtefactRecord record;
        record.id = std::string{to_string(kind)};
        record.kind = kind;
        record.content = ContentRef{ContentType::Inline, record.id};
        if (auto stage = producing_stage(kind)) {
            record.stage = *stage;
        } else {
            record.stage = consuming_stages(kind).front();
        }
        EXPECT_TRUE(registry.add(record));
    }
    return registry;
}

Registry fixture_with_arguments()
{
    return testing::evaluate(testing::fixture_manifest()).registry;
}

TEST(Stages, TableShape)
{
    EXPECT_EQ(stage_table().size(), 6u);
    EXPECT_EQ(activity_table().size(), 17u);
    EXPECT_EQ(producing_stage(ArtefactKind::CC), 5);
    EXPECT_FALSE(producing_stage(ArtefactKind::A).has_value());
    EXPECT_EQ(consuming_stages(ArtefactKind::H), (std::vector<int>{3, 4, 5}));
    EXPECT_TRUE(kind_stage_consistent(ArtefactKind::A, 6));
    EXPECT_FALSE(kind_stage_consistent(ArtefactKind::A, 2));
}

TEST(Readiness, ScopingInputsOnly)
{
    const Registry registry = with_kinds({ArtefactKind::A, ArtefactKind::B, ArtefactKind::C, ArtefactKind::D,
                                          ArtefactKind::F});
    EXPECT_TRUE(stage_readiness(registry, 1).ready);
    const auto second = stage_readiness(registry, 2);
    EXPECT_FALSE(second.ready);
    EXPECT_EQ(second.missing, (std::vector<ArtefactKind>{ArtefactKind::E, ArtefactKind::I}));
}

TEST(Readiness, FixtureIsReadyEverywhere)
{
    const Registry registry = fixture_with_arguments();
    for (int stage = 1; stage <= 6; ++stage) {
        EXPECT_TRUE(stage_readiness(registry, stage).ready) << stage;
    }
}

TEST(Readiness, MissingRecordBlocks)
{
    Registry registry = with_kinds({ArtefactKind::E, ArtefactKind::I});
    ASSERT_TRUE(registry.set_status("I", ArtefactStatus::Missing));
    const auto second = stage_readiness(registry, 2);
    EXPECT_FALSE(second.ready);
    EXPECT_EQ(second.missing, (std::vector<ArtefactKind>{ArtefactKind::I}));
}

TEST(Readiness, RemovingAnyInputBlocks)
{
    for (const auto& stage : stage_table()) {
        for (ArtefactKind removed : stage.inputs) {
            Registry registry;
            for (ArtefactKind kind : stage.inputs) {
                if (kind == removed) {
                    continue;
                }
                ArtefactRecord record;
                record.id = std::string{to_string(kind)};
                record.kind = kind;
                record.stage = producing_stage(kind).value_or(stage.number);
                record.content = ContentRef{ContentType::Inline, record.id};
                ASSERT_TRUE(registry.add(record));
            }
            const auto readiness = stage_readiness(registry, stage.number);
            EXPECT_FALSE(readiness.ready);
            EXPECT_EQ(readiness.missing, (std::vector<ArtefactKind>{removed}));
        }
        const Registry full = [&] {
            Registry r;
            for (ArtefactKind kind : stage.inputs) {
                ArtefactRecord record;
                record.id = std::string{to_string(kind)};
                record.kind = kind;
                record.stage = producing_stage(kind).value_or(stage.number);
                record.content = ContentRef{ContentType::Inline, record.id};
                EXPECT_TRUE(r.add(record));
            }
            return r;
        }();
        EXPECT_TRUE(stage_readiness(full, stage.number).ready);
    }
}

TEST(Impact, RequirementsChangeReachesLaterStages)
{
    const auto result = impact(fixture_with_arguments(), "H");
    ASSERT_TRUE(result);
    EXPECT_EQ(result->revisit, (std::set<int>{3, 4, 5, 6}));
    for (const std::string id : {"L", "M", "N", "O", "P", "Q", "S", "T", "U", "V", "X", "Y", "Z", "AA", "CC", "DD",
                                 "FF", "HH"}) {
        EXPECT_NE(std::find(result->stale.begin(), result->stale.end(), id), result->stale.end()) << id;
    }
    for (const std::string id : {"H", "R", "A", "E", "G", "K", "J"}) {
        EXPECT_EQ(std::find(result->stale.begin(), result->stale.end(), id), result->stale.end()) << id;
    }
    EXPECT_TRUE(std::is_sorted(result->stale.begin(), result->stale.end()));
}

TEST(Impact, TerminalArgumentHasNoConsumers)
{
    const auto result = impact(fixture_with_arguments(), "HH");
    ASSERT_TRUE(result);
    EXPECT_TRUE(result->stale.empty());
    EXPECT_TRUE(result->revisit.empty());
}

TEST(Impact, FailedVerificationFeedsBack)
{
    Json document = testing::fixture_document();
    testing::payload_list(document, "Z", "entries")[2]["result"] = "Fail";
    const auto registry = testing::evaluate(testing::manifest_from(document)).registry;
    const auto result = impact(registry, "Z");
    ASSERT_TRUE(result);
    EXPECT_TRUE(result->verification_failure);
    for (int stage : {2, 3, 4}) {
        EXPECT_TRUE(result->revisit.contains(stage)) << stage;
    }
}

TEST(Impact, UnknownArtefact)
{
    const auto result = impact(Registry{}, "nope");
    ASSERT_FALSE(result);
    EXPECT_EQ(result.error().code, ErrorCode::UnknownArtefact);
}

TEST(Impact, ApplyMarksStale)
{
    const Registry registry = fixture_with_arguments();
    const auto result = impact(registry, "V");
    ASSERT_TRUE(result);
    const Registry applied = apply_impact(registry, *result);
    for (const auto& record : applied.records()) {
        const bool stale = std::find(result->stale.begin(), result->stale.end(), record.id) != result->stale.end();
        EXPECT_EQ(record.status == ArtefactStatus::Stale, stale) << record.id;
    }
}

TEST(Downstream, ExcludesChangedKind)
{
    EXPECT_FALSE(downstream_kinds(ArtefactKind::V).contains(ArtefactKind::V));
    EXPECT_TRUE(downstream_kinds(ArtefactKind::V).contains(ArtefactKind::HH));
    EXPECT_TRUE(downstream_kinds(ArtefactKind::HH).empty());
}

TEST(Activities, ContractChecked)
{
    const Registry registry = fixture_with_arguments();
    EXPECT_TRUE(check_activity_record(registry, {13, "2024-03-01", {"H", "P", "V"}, {"Z", "AA"}, ""}).empty());
    const auto wrong = check_activity_record(registry, {13, "", {"A"}, {"L"}, ""});
    ASSERT_EQ(wrong.size(), 2u);
    EXPECT_EQ(wrong[0].rule_id, kActivityContractRule);
    EXPECT_EQ(check_activity_record(registry, {99, "", {}, {}, ""}).size(), 1u);
    EXPECT_EQ(check_activity_record(registry, {13, "", {"nope"}, {}, ""}).size(), 1u);
}

}  // namespace
}  // namespace amlas
