#pragma once

#include "amlas/result.hpp"

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace amlas {

/// The 34 lettered artefacts of the six-stage process, in letter order.
enum class ArtefactKind {
    A, B, C, D, E, F, G, H, I, J, K, L, M, N, O, P, Q, R, S, T, U, V, W, X, Y, Z,
    AA, BB, CC, DD, EE, FF, GG, HH,
};

inline constexpr std::size_t kArtefactKindCount = 34;

[[nodiscard]] const std::array<ArtefactKind, kArtefactKindCount>& all_artefact_kinds();
[[nodiscard]] std::string_view to_string(ArtefactKind kind);
[[nodiscard]] std::optional<ArtefactKind> artefact_kind_from_string(std::string_view letters);
/// Long name, e.g. "ML Safety Requirements" for H.
[[nodiscard]] std::string_view artefact_name(ArtefactKind kind);

/// The six argument-pattern kinds (F, I, R, W, BB, GG), in stage order.
[[nodiscard]] const std::array<ArtefactKind, 6>& pattern_kinds();
[[nodiscard]] bool is_pattern_kind(ArtefactKind kind);
/// Pattern -> instantiated argument kind (F -> G, I -> K, ...).
[[nodiscard]] std::optional<ArtefactKind> argument_for_pattern(ArtefactKind pattern);

enum class ArtefactStatus { Current, Stale, Missing };

std::string_view to_string(ArtefactStatus status);
std::optional<ArtefactStatus> artefact_status_from_string(std::string_view text);

// ---------------------------------------------------------------------------
// Structured payloads

enum class RequirementLevel { Allocated, ML };
enum class MlRequirementType { Performance, Robustness, Other };

std::string_view to_string(MlRequirementType type);
std::optional<MlRequirementType> ml_requirement_type_from_string(std::string_view text);

struct SafetyRequirement {
    std::string id;
    std::string text;
    RequirementLevel level = RequirementLevel::Allocated;
    MlRequirementType type = MlRequirementType::Other;  // meaningful for ML level only
    std::vector<std::string> traces_to;
    std::vector<std::string> assumptions;
    std::string derived_note;   // ML: explains a requirement with no allocated parent
    std::string justification;  // Allocated: why it is not (fully) carried into ML requirements

    bool operator==(const SafetyRequirement&) const = default;
};

struct Assumption {
    std::string id;
    std::string text;
    std::string monitor;

    bool operator==(const Assumption&) const = default;
};

enum class DatasetRole { Development, InternalTest, Verification };

std::string_view to_string(DatasetRole role);
std::optional<DatasetRole> dataset_role_from_string(std::string_view text);

struct Coverage {
    bool met = true;
    std::string justification;  // required when discrepant

    bool operator==(const Coverage&) const = default;
};

struct DatasetDescriptor {
    DatasetRole role = DatasetRole::Development;
    std::set<std::string> sample_ids;
    std::map<std::string, Coverage> requirement_coverage;

    bool operator==(const DatasetDescriptor&) const = default;
};

enum class DataCategory { Relevance, Completeness, Accuracy, Balance };

std::string_view to_string(DataCategory category);
std::optional<DataCategory> data_category_from_string(std::string_view text);

struct DataRequirement {
    std::string id;
    DataCategory category = DataCategory::Relevance;
    std::string text;
    std::vector<std::string> source_ml_requirements;

    bool operator==(const DataRequirement&) const = default;
};

enum class BehaviourDirection { ErroneousInput, ErroneousOutput, ViolatedAssumption };

std::string_view to_string(BehaviourDirection direction);
std::optional<BehaviourDirection> behaviour_direction_from_string(std::string_view text);

struct ErroneousBehaviourEntry {
    std::string id;
    BehaviourDirection direction = BehaviourDirection::ErroneousOutput;
    std::string description;
    std::optional<std::string> monitor;
    std::optional<std::string> response;

    bool operator==(const ErroneousBehaviourEntry&) const = default;
};

enum class VerificationMethod { TestBased, Formal };
enum class VerificationOutcome { Pass, Fail, Inconclusive };

std::string_view to_string(VerificationMethod method);
std::optional<VerificationMethod> verification_method_from_string(std::string_view text);
std::string_view to_string(VerificationOutcome outcome);
std::optional<VerificationOutcome> verification_outcome_from_string(std::string_view text);

struct VerificationEntry {
    std::string id;
    std::string requirement_id;
    VerificationMethod method = VerificationMethod::TestBased;
    VerificationOutcome result = VerificationOutcome::Pass;
    std::string independence_note;
    std::string formal_translation_justification;

    bool operator==(const VerificationEntry&) const = default;
};

struct OperationalScenario {
    std::string id;
    std::string description;

    bool operator==(const OperationalScenario&) const = default;
};

struct IntegrationResult {
    std::string id;
    std::vector<std::string> scenarios;
    std::vector<std::string> requirements;
    VerificationOutcome outcome = VerificationOutcome::Pass;

    bool operator==(const IntegrationResult&) const = default;
};

/// Payload shapes, keyed by the artefact kinds that carry them:
/// E/H requirements, B/C assumptions, J validation coverage, L data requirements,
/// N/O/P datasets, Z verification entries, AA verification log, DD erroneous
/// behaviour, EE scenarios, FF integration results.
struct RequirementSet {
    std::vector<SafetyRequirement> requirements;
    bool operator==(const RequirementSet&) const = default;
};
struct AssumptionSet {
    std::vector<Assumption> assumptions;
    bool operator==(const AssumptionSet&) const = default;
};
struct RequirementsValidation {
    std::string method;
    std::vector<std::string> validated;
    bool operator==(const RequirementsValidation&) const = default;
};
struct DataRequirementSet {
    std::vector<DataRequirement> requirements;
    bool operator==(const DataRequirementSet&) const = default;
};
struct VerificationResults {
    std::vector<VerificationEntry> entries;
    bool operator==(const VerificationResults&) const = default;
};
struct VerificationLog {
    std::string independence;
    bool operator==(const VerificationLog&) const = default;
};
struct ErroneousBehaviourLog {
    std::vector<ErroneousBehaviourEntry> entries;
    bool operator==(const ErroneousBehaviourLog&) const = default;
};
struct ScenarioSet {
    std::vector<OperationalScenario> scenarios;
    bool operator==(const ScenarioSet&) const = default;
};
struct IntegrationResults {
    std::vector<IntegrationResult> results;
    std::string scenario_justification;
    bool operator==(const IntegrationResults&) const = default;
};

using Payload = std::variant<std::monostate, RequirementSet, AssumptionSet, RequirementsValidation,
                             DataRequirementSet, DatasetDescriptor, VerificationResults, VerificationLog,
                             ErroneousBehaviourLog, ScenarioSet, IntegrationResults>;

/// Whether a payload alternative is admissible for an artefact kind.
[[nodiscard]] bool payload_fits(ArtefactKind kind, const Payload& payload);

// ---------------------------------------------------------------------------
// Records and registry

enum class ContentType { Inline, File, Builtin };

std::string_view to_string(ContentType type);

struct ContentRef {
    ContentType type = ContentType::Inline;
    std::string value;  // inline text or file path; empty for builtin

    bool operator==(const ContentRef&) const = default;
};

struct ArtefactRecord {
    std::string id;
    ArtefactKind kind = ArtefactKind::A;
    std::string title;
    ContentRef content;
    std::string digest;  // "sha256:<hex>"
    std::optional<int> produced_by;
    int stage = 1;
    ArtefactStatus status = ArtefactStatus::Current;
    Payload payload;

    bool operator==(const ArtefactRecord&) const = default;
};

/// "sha256:" + lowercase hex digest of `bytes`.
[[nodiscard]] std::string content_digest(std::string_view bytes);

/// A named item inside a structured payload, usable as a collection binding.
struct PayloadItem {
    std::string id;
    std::string text;
    std::string category;                   // e.g. "Performance", "TestBased", "Relevance"
    std::optional<std::string> requirement;  // requirement the item verifies, if any
};

/// Items of `record` whose category matches `category`. Each payload also answers to
/// a generic category: "Requirement" (E, H), "DataRequirement" (L), "VerificationEntry"
/// (Z), "Entry" (DD), "Scenario" (EE), "Result" (FF), "Assumption" (B, C).
[[nodiscard]] std::vector<PayloadItem> items_of(const ArtefactRecord& record, std::string_view category);

/// Category names a collection parameter over `kind` may use.
[[nodiscard]] std::vector<std::string> item_categories(ArtefactKind kind);

class Registry {
public:
    /// Adds a record. When `bytes` is given (or the content is inline) the digest is
    /// computed or, if already set, verified.
    Status add(ArtefactRecord record, std::optional<std::string_view> bytes = std::nullopt);

    [[nodiscard]] const ArtefactRecord* find(std::string_view id) const;
    /// Records of `kind`, ordered by id.
    [[nodiscard]] std::vector<ArtefactRecord> lookup_all(ArtefactKind kind) const;
    /// Current records of `kind`, ordered by id.
    [[nodiscard]] std::vector<const ArtefactRecord*> current(ArtefactKind kind) const;
    /// All records, ordered by id.
    [[nodiscard]] const std::vector<ArtefactRecord>& records() const { return records_; }
    [[nodiscard]] std::size_t size() const { return records_.size(); }
    [[nodiscard]] bool empty() const { return records_.empty(); }

    Status set_status(std::string_view id, ArtefactStatus status);

    bool operator==(const Registry&) const = default;

private:
    std::vector<ArtefactRecord> records_;
};

/// Functional form: a copy of `registry` with `record` added.
[[nodiscard]] Expected<Registry> register_artefact(Registry registry, ArtefactRecord record,
                                                   std::optional<std::string_view> bytes = std::nullopt);

[[nodiscard]] std::vector<ArtefactRecord> lookup_all(const Registry& registry, ArtefactKind kind);

/// Exact intersection of the two descriptors' sample ids.
[[nodiscard]] std::set<std::string> dataset_overlap(const DatasetDescriptor& a, const DatasetDescriptor& b);

/// Payload invariants that hold independently of validation rules.
[[nodiscard]] Status check_payload(const ArtefactRecord& record);

}  // namespace amlas
