#include "amlas/artefacts.hpp"
#include "amlas/stages.hpp"

#include <gtest/gtest.h>

namespace amlas {
namespace {

ArtefactRecord text_record(std::string id, ArtefactKind kind, int stage, std::string text)
{
    ArtefactRecord record;
    record.id = std::move(id);
    record.kind = kind;
    record.stage = stage;
    record.title = record.id;
    record.content = ContentRef{ContentType::Inline, std::move(text)};
    return record;
}

ArtefactRecord dataset(std::string id, ArtefactKind kind, std::set<std::string> samples)
{
    ArtefactRecord record = text_record(std::move(id), kind, 3, "dataset");
    DatasetDescriptor descriptor;
    descriptor.role = kind == ArtefactKind::N   ? DatasetRole::Development
                      : kind == ArtefactKind::O ? DatasetRole::InternalTest
                                                : DatasetRole::Verification;
    descriptor.sample_ids = std::move(samples);
    record.payload = descriptor;
    return record;
}

TEST(KindTable, LettersRoundTrip)
{
    EXPECT_EQ(all_artefact_kinds().size(), 34u);
    for (ArtefactKind kind : all_artefact_kinds()) {
        EXPECT_EQ(artefact_kind_from_string(to_string(kind)), kind);
        EXPECT_FALSE(artefact_name(kind).empty());
    }
    EXPECT_FALSE(artefact_kind_from_string("II").has_value());
    EXPECT_EQ(argument_for_pattern(ArtefactKind::BB), ArtefactKind::CC);
    EXPECT_FALSE(argument_for_pattern(ArtefactKind::A).has_value());
}

TEST(Digest, Sha256OfKnownInput)
{
    EXPECT_EQ(content_digest("abc"), "sha256:ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Register, AllocatedRequirementIntoEmptyRegistry)
{
    ArtefactRecord record = text_record("E", ArtefactKind::E, 1, "allocated");
    record.payload = RequirementSet{{SafetyRequirement{
        "SR-1", "Identify pedestrians that are on or close to the crossing", RequirementLevel::Allocated,
        MlRequirementType::Other, {}, {}, "", ""}}};
    auto registry = register_artefact({}, record);
    ASSERT_TRUE(registry);
    EXPECT_EQ(registry->size(), 1u);
    EXPECT_EQ(registry->find("E")->digest, content_digest("allocated"));
}

TEST(Register, DuplicateId)
{
    Registry registry;
    ASSERT_TRUE(registry.add(text_record("A", ArtefactKind::A, 1, "x")));
    auto again = registry.add(text_record("A", ArtefactKind::A, 1, "y"));
    ASSERT_FALSE(again);
    EXPECT_EQ(again.error().code, ErrorCode::DuplicateId);
}

TEST(Register, KindStageMismatch)
{
    auto result = register_artefact({}, text_record("Z", ArtefactKind::Z, 3, "results"));
    ASSERT_FALSE(result);
    EXPECT_EQ(result.error().code, ErrorCode::KindStageMismatch);
    EXPECT_TRUE(register_artefact({}, text_record("Z", ArtefactKind::Z, 5, "results")));
}

TEST(Register, ProducedByMustBelongToStage)
{
    ArtefactRecord record = text_record("Z", ArtefactKind::Z, 5, "results");
    record.produced_by = 13;
    EXPECT_TRUE(register_artefact({}, record));
    record.produced_by = 3;
    auto wrong = register_artefact({}, record);
    ASSERT_FALSE(wrong);
    EXPECT_EQ(wrong.error().code, ErrorCode::KindStageMismatch);
}

TEST(Register, DigestVerifiedAgainstBytes)
{
    ArtefactRecord record = text_record("V", ArtefactKind::V, 4, "");
    record.content = ContentRef{ContentType::File, "model.bin"};
    EXPECT_TRUE(register_artefact({}, record, std::string_view{"weights"}));
    record.digest = content_digest("other");
    auto mismatch = register_artefact({}, record, std::string_view{"weights"});
    ASSERT_FALSE(mismatch);
    EXPECT_EQ(mismatch.error().code, ErrorCode::DigestMismatch);
    record.digest.clear();
    auto unread = register_artefact({}, record);
    ASSERT_FALSE(unread);
    EXPECT_EQ(unread.error().code, ErrorCode::DigestMismatch);
}

TEST(Register, PayloadInvariants)
{
    ArtefactRecord record = text_record("H", ArtefactKind::H, 2, "ml");
    SafetyRequirement requirement{"MLSR-1", "text", RequirementLevel::ML, MlRequirementType::Performance, {}, {}, "", ""};
    record.payload = RequirementSet{{requirement}};
    auto untraced = register_artefact({}, record);
    ASSERT_FALSE(untraced);
    EXPECT_EQ(untraced.error().code, ErrorCode::InvalidPayload);

    requirement.derived_note = "derived from a hazard analysis";
    record.payload = RequirementSet{{requirement, requirement}};
    auto duplicated = register_artefact({}, record);
    ASSERT_FALSE(duplicated);
    EXPECT_EQ(duplicated.error().code, ErrorCode::InvalidPayload);

    record.payload = RequirementSet{{requirement}};
    EXPECT_TRUE(register_artefact({}, record));

    record.payload = AssumptionSet{};
    auto misfit = register_artefact({}, record);
    ASSERT_FALSE(misfit);
    EXPECT_EQ(misfit.error().code, ErrorCode::InvalidPayload);

    ArtefactRecord data = dataset("N", ArtefactKind::N, {"h1"});
    std::get<DatasetDescriptor>(data.payload).role = DatasetRole::Verification;
    EXPECT_FALSE(register_artefact({}, data));
}

TEST(Lookup, SingleDatasetOfKind)
{
    Registry registry;
    ASSERT_TRUE(registry.add(dataset("N", ArtefactKind::N, {"h1"})));
    ASSERT_TRUE(registry.add(dataset("O", ArtefactKind::O, {"h2"})));
    ASSERT_TRUE(registry.add(dataset("P", ArtefactKind::P, {"h3"})));
    EXPECT_EQ(lookup_all(registry, ArtefactKind::N).size(), 1u);
}

TEST(Lookup, EmptyRegistry)
{
    EXPECT_TRUE(lookup_all(Registry{}, ArtefactKind::H).empty());
}

TEST(Lookup, TwoIterationsOrderedById)
{
    Registry registry;
    for (std::string id : {"H-iter2", "H-iter1"}) {
        ArtefactRecord record = text_record(id, ArtefactKind::H, 2, id);
        record.payload = RequirementSet{};
        ASSERT_TRUE(registry.add(record));
    }
    const auto found = lookup_all(registry, ArtefactKind::H);
    ASSERT_EQ(found.size(), 2u);
    EXPECT_EQ(found[0].id, "H-iter1");
    EXPECT_EQ(found[1].id, "H-iter2");
}

TEST(Status, CurrentExcludesStale)
{
    Registry registry;
    ASSERT_TRUE(registry.add(text_record("A", ArtefactKind::A, 1, "a")));
    EXPECT_EQ(registry.current(ArtefactKind::A).size(), 1u);
    ASSERT_TRUE(registry.set_status("A", ArtefactStatus::Stale));
    EXPECT_TRUE(registry.current(ArtefactKind::A).empty());
    auto unknown = registry.set_status("nope", ArtefactStatus::Stale);
    ASSERT_FALSE(unknown);
    EXPECT_EQ(unknown.error().code, ErrorCode::UnknownArtefact);
}

TEST(Overlap, SharedDigest)
{
    DatasetDescriptor dev;
    dev.sample_ids = {"h1", "h2", "h3"};
    DatasetDescriptor verif;
    verif.sample_ids = {"h3", "h4"};
    EXPECT_EQ(dataset_overlap(dev, verif), (std::set<std::string>{"h3"}));
}

TEST(Overlap, Disjoint)
{
    DatasetDescriptor a;
    a.sample_ids = {"h1"};
    DatasetDescriptor b;
    b.sample_ids = {"h2"};
    EXPECT_TRUE(dataset_overlap(a, b).empty());
}

TEST(Overlap, IdenticalSets)
{
    DatasetDescriptor a;
    a.sample_ids = {"h1", "h2"};
    EXPECT_EQ(dataset_overlap(a, a), a.sample_ids);
}

TEST(Items, CategoriesSelectEntries)
{
    ArtefactRecord z = text_record("Z", ArtefactKind::Z, 5, "z");
    z.payload = VerificationResults{{
        VerificationEntry{"VE-1", "MLSR-1", VerificationMethod::TestBased, VerificationOutcome::Pass, "", ""},
        VerificationEntry{"VE-2", "MLSR-1", VerificationMethod::Formal, VerificationOutcome::Fail, "", "j"},
    }};
    const auto tests = items_of(z, "TestBased");
    ASSERT_EQ(tests.size(), 1u);
    EXPECT_EQ(tests[0].id, "VE-1");
    EXPECT_EQ(tests[0].requirement, "MLSR-1");
    EXPECT_EQ(items_of(z, "VerificationEntry").size(), 2u);
    EXPECT_TRUE(items_of(z, "Performance").empty());
}

}  // namespace
}  // namespace amlas
