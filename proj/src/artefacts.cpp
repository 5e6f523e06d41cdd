#include "amlas/artefacts.hpp"

#include "amlas/stages.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <memory>
#include <set>

namespace amlas {

namespace {

struct KindInfo {
    ArtefactKind kind;
    std::string_view letters;
    std::string_view name;
};

constexpr std::array<KindInfo, kArtefactKindCount> kKindInfo{{
    {ArtefactKind::A, "A", "System Safety Requirements"},
    {ArtefactKind::B, "B", "Environment Description"},
    {ArtefactKind::C, "C", "System Description"},
    {ArtefactKind::D, "D", "ML Component Description"},
    {ArtefactKind::E, "E", "Safety Requirements Allocated to ML Component"},
    {ArtefactKind::F, "F", "ML Safety Assurance Scoping Argument Pattern"},
    {ArtefactKind::G, "G", "ML Safety Assurance Scoping Argument"},
    {ArtefactKind::H, "H", "ML Safety Requirements"},
    {ArtefactKind::I, "I", "ML Safety Requirements Argument Pattern"},
    {ArtefactKind::J, "J", "ML Safety Requirements Validation Results"},
    {ArtefactKind::K, "K", "ML Safety Requirements Argument"},
    {ArtefactKind::L, "L", "Data Requirements"},
    {ArtefactKind::M, "M", "Data Requirements Justification Report"},
    {ArtefactKind::N, "N", "Development Data"},
    {ArtefactKind::O, "O", "Internal Test Data"},
    {ArtefactKind::P, "P", "Verification Data"},
    {ArtefactKind::Q, "Q", "Data Generation Log"},
    {ArtefactKind::R, "R", "ML Data Argument Pattern"},
    {ArtefactKind::S, "S", "ML Data Validation Results"},
    {ArtefactKind::T, "T", "ML Data Argument"},
    {ArtefactKind::U, "U", "Model Development Log"},
    {ArtefactKind::V, "V", "ML Model"},
    {ArtefactKind::W, "W", "ML Learning Argument Pattern"},
    {ArtefactKind::X, "X", "Internal Test Results"},
    {ArtefactKind::Y, "Y", "ML Learning Argument"},
    {ArtefactKind::Z, "Z", "ML Verification Results"},
    {ArtefactKind::AA, "AA", "Verification Log"},
    {ArtefactKind::BB, "BB", "ML Verification Argument Pattern"},
    {ArtefactKind::CC, "CC", "ML Verification Argument"},
    {ArtefactKind::DD, "DD", "Erroneous Behaviour Log"},
    {ArtefactKind::EE, "EE", "Operational Scenarios"},
    {ArtefactKind::FF, "FF", "Integration Testing Results"},
    {ArtefactKind::GG, "GG", "ML Deployment Argument Pattern"},
    {ArtefactKind::HH, "HH", "ML Deployment Argument"},
}};

const KindInfo& info(ArtefactKind kind)
{
    return kKindInfo[static_cast<std::size_t>(kind)];
}

template <typename Items>
Status check_unique_ids(const ArtefactRecord& record, const Items& items)
{
    std::set<std::string> ids;
    for (const auto& item : items) {
        if (item.id.empty()) {
            return Error::make(ErrorCode::InvalidPayload, "payload item without id", {record.id});
        }
        if (!ids.insert(item.id).second) {
            return Error::make(ErrorCode::InvalidPayload, "duplicate payload item id " + item.id, {record.id});
        }
    }
    return ok();
}

std::string join(const std::vector<std::string>& parts, std::string_view separator)
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) {
            out += separator;
        }
        out += parts[i];
    }
    return out;
}

bool matches(std::string_view wanted, std::string_view generic, std::string_view specific)
{
    return wanted == generic || wanted == specific;
}

}  // namespace

const std::array<ArtefactKind, kArtefactKindCount>& all_artefact_kinds()
{
    static const auto kinds = [] {
        std::array<ArtefactKind, kArtefactKindCount> out{};
        for (std::size_t i = 0; i < kArtefactKindCount; ++i) {
            out[i] = kKindInfo[i].kind;
        }
        return out;
    }();
    return kinds;
}

std::string_view to_string(ArtefactKind kind)
{
    return info(kind).letters;
}

std::optional<ArtefactKind> artefact_kind_from_string(std::string_view letters)
{
    for (const auto& entry : kKindInfo) {
        if (entry.letters == letters) {
            return entry.kind;
        }
    }
    return std::nullopt;
}

std::string_view artefact_name(ArtefactKind kind)
{
    return info(kind).name;
}

const std::array<ArtefactKind, 6>& pattern_kinds()
{
    static const std::array<ArtefactKind, 6> kinds{ArtefactKind::F, ArtefactKind::I,  ArtefactKind::R,
                                                   ArtefactKind::W, ArtefactKind::BB, ArtefactKind::GG};
    return kinds;
}

bool is_pattern_kind(ArtefactKind kind)
{
    const auto& kinds = pattern_kinds();
    return std::find(kinds.begin(), kinds.end(), kind) != kinds.end();
}

std::optional<ArtefactKind> argument_for_pattern(ArtefactKind pattern)
{
    switch (pattern) {
    case ArtefactKind::F:
        return ArtefactKind::G;
    case ArtefactKind::I:
        return ArtefactKind::K;
    case ArtefactKind::R:
        return ArtefactKind::T;
    case ArtefactKind::W:
        return ArtefactKind::Y;
    case ArtefactKind::BB:
        return ArtefactKind::CC;
    case ArtefactKind::GG:
        return ArtefactKind::HH;
    default:
        return std::nullopt;
    }
}

std::string_view to_string(ArtefactStatus status)
{
    switch (status) {
    case ArtefactStatus::Current:
        return "Current";
    case ArtefactStatus::Stale:
        return "Stale";
    case ArtefactStatus::Missing:
        return "Missing";
    }
    return "Current";
}

std::optional<ArtefactStatus> artefact_status_from_string(std::string_view text)
{
    for (auto status : {ArtefactStatus::Current, ArtefactStatus::Stale, ArtefactStatus::Missing}) {
        if (to_string(status) == text) {
            return status;
        }
    }
    return std::nullopt;
}

std::string_view to_string(MlRequirementType type)
{
    switch (type) {
    case MlRequirementType::Performance:
        return "Performance";
    case MlRequirementType::Robustness:
        return "Robustness";
    case MlRequirementType::Other:
        return "Other";
    }
    return "Other";
}

std::optional<MlRequirementType> ml_requirement_type_from_string(std::string_view text)
{
    for (auto type : {MlRequirementType::Performance, MlRequirementType::Robustness, MlRequirementType::Other}) {
        if (to_string(type) == text) {
            return type;
        }
    }
    return std::nullopt;
}

std::string_view to_string(DatasetRole role)
{
    switch (role) {
    case DatasetRole::Development:
        return "Development";
    case DatasetRole::InternalTest:
        return "InternalTest";
    case DatasetRole::Verification:
        return "Verification";
    }
    return "Development";
}

std::optional<DatasetRole> dataset_role_from_string(std::string_view text)
{
    for (auto role : {DatasetRole::Development, DatasetRole::InternalTest, DatasetRole::Verification}) {
        if (to_string(role) == text) {
            return role;
        }
    }
    return std::nullopt;
}

std::string_view to_string(DataCategory category)
{
    switch (category) {
    case DataCategory::Relevance:
        return "Relevance";
    case DataCategory::Completeness:
        return "Completeness";
    case DataCategory::Accuracy:
        return "Accuracy";
    case DataCategory::Balance:
        return "Balance";
    }
    return "Relevance";
}

std::optional<DataCategory> data_category_from_string(std::string_view text)
{
    for (auto category :
         {DataCategory::Relevance, DataCategory::Completeness, DataCategory::Accuracy, DataCategory::Balance}) {
        if (to_string(category) == text) {
            return category;
        }
    }
    return std::nullopt;
}

std::string_view to_string(BehaviourDirection direction)
{
    switch (direction) {
    case BehaviourDirection::ErroneousInput:
        return "ErroneousInput";
    case BehaviourDirection::ErroneousOutput:
        return "ErroneousOutput";
    case BehaviourDirection::ViolatedAssumption:
        return "ViolatedAssumption";
    }
    return "ErroneousOutput";
}

std::optional<BehaviourDirection> behaviour_direction_from_string(std::string_view text)
{
    for (auto direction : {BehaviourDirection::ErroneousInput, BehaviourDirection::ErroneousOutput,
                           BehaviourDirection::ViolatedAssumption}) {
        if (to_string(direction) == text) {
            return direction;
        }
    }
    return std::nullopt;
}

std::string_view to_string(VerificationMethod method)
{
    return method == VerificationMethod::TestBased ? "TestBased" : "Formal";
}

std::optional<VerificationMethod> verification_method_from_string(std::string_view text)
{
    if (text == "TestBased") {
        return VerificationMethod::TestBased;
    }
    if (text == "Formal") {
        return VerificationMethod::Formal;
    }
    return std::nullopt;
}

std::string_view to_string(VerificationOutcome outcome)
{
    switch (outcome) {
    case VerificationOutcome::Pass:
        return "Pass";
    case VerificationOutcome::Fail:
        return "Fail";
    case VerificationOutcome::Inconclusive:
        return "Inconclusive";
    }
    return "Pass";
}

std::optional<VerificationOutcome> verification_outcome_from_string(std::string_view text)
{
    for (auto outcome : {VerificationOutcome::Pass, VerificationOutcome::Fail, VerificationOutcome::Inconclusive}) {
        if (to_string(outcome) == text) {
            return outcome;
        }
    }
    return std::nullopt;
}

std::string_view to_string(ContentType type)
{
    switch (type) {
    case ContentType::Inline:
        return "inline";
    case ContentType::File:
        return "file";
    case ContentType::Builtin:
        return "builtin";
    }
    return "inline";
}

bool payload_fits(ArtefactKind kind, const Payload& payload)
{
    using K = ArtefactKind;
    return std::visit(
        [kind](const auto& value) {
            using T = std::decay_t<decltype(value)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return true;
            } else if constexpr (std::is_same_v<T, RequirementSet>) {
                return kind == K::E || kind == K::H;
            } else if constexpr (std::is_same_v<T, AssumptionSet>) {
                return kind == K::B || kind == K::C;
            } else if constexpr (std::is_same_v<T, RequirementsValidation>) {
                return kind == K::J;
            } else if constexpr (std::is_same_v<T, DataRequirementSet>) {
                return kind == K::L;
            } else if constexpr (std::is_same_v<T, DatasetDescriptor>) {
                return kind == K::N || kind == K::O || kind == K::P;
            } else if constexpr (std::is_same_v<T, VerificationResults>) {
                return kind == K::Z;
            } else if constexpr (std::is_same_v<T, VerificationLog>) {
                return kind == K::AA;
            } else if constexpr (std::is_same_v<T, ErroneousBehaviourLog>) {
                return kind == K::DD;
            } else if constexpr (std::is_same_v<T, ScenarioSet>) {
                return kind == K::EE;
            } else {
                return kind == K::FF;
            }
        },
        payload);
}

std::string content_digest(std::string_view bytes)
{
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
    EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size());
    EVP_DigestFinal_ex(ctx.get(), digest, &length);

    std::string out = "sha256:";
    char hex[3];
    for (unsigned int i = 0; i < length; ++i) {
        std::snprintf(hex, sizeof hex, "%02x", digest[i]);
        out += hex;
    }
    return out;
}

Status check_payload(const ArtefactRecord& record)
{
    if (!payload_fits(record.kind, record.payload)) {
        return Error::make(ErrorCode::InvalidPayload,
                           "payload shape not admissible for kind " + std::string{to_string(record.kind)},
                           {record.id});
    }
    if (const auto* set = std::get_if<RequirementSet>(&record.payload)) {
        if (auto status = check_unique_ids(record, set->requirements); !status) {
            return status;
        }
        const auto expected_level =
            record.kind == ArtefactKind::E ? RequirementLevel::Allocated : RequirementLevel::ML;
        for (const auto& requirement : set->requirements) {
            if (requirement.level != expected_level) {
                return Error::make(ErrorCode::InvalidPayload,
                                   "requirement " + requirement.id + " has the wrong level for " +
                                       std::string{to_string(record.kind)},
                                   {record.id, requirement.id});
            }
            if (requirement.level == RequirementLevel::ML && requirement.traces_to.empty() &&
                requirement.derived_note.empty()) {
                return Error::make(ErrorCode::InvalidPayload,
                                   "ML requirement " + requirement.id +
                                       " traces to no allocated requirement and has no derived-requirement note",
                                   {record.id, requirement.id});
            }
        }
    } else if (const auto* dataset = std::get_if<DatasetDescriptor>(&record.payload)) {
        const auto expected = record.kind == ArtefactKind::N   ? DatasetRole::Development
                              : record.kind == ArtefactKind::O ? DatasetRole::InternalTest
                                                               : DatasetRole::Verification;
        if (dataset->role != expected) {
            return Error::make(ErrorCode::InvalidPayload,
                               "dataset role " + std::string{to_string(dataset->role)} + " does not match kind " +
                                   std::string{to_string(record.kind)},
                               {record.id});
        }
    } else if (const auto* assumptions = std::get_if<AssumptionSet>(&record.payload)) {
        return check_unique_ids(record, assumptions->assumptions);
    } else if (const auto* data = std::get_if<DataRequirementSet>(&record.payload)) {
        return check_unique_ids(record, data->requirements);
    } else if (const auto* results = std::get_if<VerificationResults>(&record.payload)) {
        return check_unique_ids(record, results->entries);
    } else if (const auto* log = std::get_if<ErroneousBehaviourLog>(&record.payload)) {
        return check_unique_ids(record, log->entries);
    } else if (const auto* scenarios = std::get_if<ScenarioSet>(&record.payload)) {
        return check_unique_ids(record, scenarios->scenarios);
    } else if (const auto* integration = std::get_if<IntegrationResults>(&record.payload)) {
        return check_unique_ids(record, integration->results);
    }
    return ok();
}

std::vector<PayloadItem> items_of(const ArtefactRecord& record, std::string_view category)
{
    std::vector<PayloadItem> items;
    if (const auto* set = std::get_if<RequirementSet>(&record.payload)) {
        for (const auto& r : set->requirements) {
            const std::string specific =
                r.level == RequirementLevel::Allocated ? "Allocated" : std::string{to_string(r.type)};
            if (matches(category, "Requirement", specific)) {
                items.push_back({r.id, r.text, specific, std::nullopt});
            }
        }
    } else if (const auto* data = std::get_if<DataRequirementSet>(&record.payload)) {
        for (const auto& r : data->requirements) {
            const std::string specific{to_string(r.category)};
            if (matches(category, "DataRequirement", specific)) {
                items.push_back({r.id, r.text, specific, std::nullopt});
            }
        }
    } else if (const auto* results = std::get_if<VerificationResults>(&record.payload)) {
        for (const auto& e : results->entries) {
            const std::string specific{to_string(e.method)};
            if (matches(category, "VerificationEntry", specific)) {
                const std::string method = e.method == VerificationMethod::TestBased ? "test-based" : "formal";
                items.push_back({e.id,
                                 method + " verification of " + e.requirement_id + ", result " +
                                     std::string{to_string(e.result)},
                                 specific, e.requirement_id});
            }
        }
    } else if (const auto* log = std::get_if<ErroneousBehaviourLog>(&record.payload)) {
        for (const auto& e : log->entries) {
            const std::string specific{to_string(e.direction)};
            if (matches(category, "Entry", specific)) {
                items.push_back({e.id, e.description, specific, std::nullopt});
            }
        }
    } else if (const auto* scenarios = std::get_if<ScenarioSet>(&record.payload)) {
        for (const auto& s : scenarios->scenarios) {
            if (category == "Scenario") {
                items.push_back({s.id, s.description, "Scenario", std::nullopt});
            }
        }
    } else if (const auto* integration = std::get_if<IntegrationResults>(&record.payload)) {
        for (const auto& r : integration->results) {
            if (category == "Result") {
                items.push_back({r.id,
                                 "integration result over " + join(r.scenarios, ", ") + ": " +
                                     std::string{to_string(r.outcome)},
                                 "Result", std::nullopt});
            }
        }
    } else if (const auto* assumptions = std::get_if<AssumptionSet>(&record.payload)) {
        for (const auto& a : assumptions->assumptions) {
            if (category == "Assumption") {
                items.push_back({a.id, a.text, "Assumption", std::nullopt});
            }
        }
    }
    return items;
}

std::vector<std::string> item_categories(ArtefactKind kind)
{
    using K = ArtefactKind;
    switch (kind) {
    case K::E:
        return {"Requirement", "Allocated"};
    case K::H:
        return {"Requirement", "Performance", "Robustness", "Other"};
    case K::L:
        return {"DataRequirement", "Relevance", "Completeness", "Accuracy", "Balance"};
    case K::Z:
        return {"VerificationEntry", "TestBased", "Formal"};
    case K::DD:
        return {"Entry", "ErroneousInput", "ErroneousOutput", "ViolatedAssumption"};
    case K::EE:
        return {"Scenario"};
    case K::FF:
        return {"Result"};
    case K::B:
    case K::C:
        return {"Assumption"};
    default:
        return {};
    }
}

Status Registry::add(ArtefactRecord record, std::optional<std::string_view> bytes)
{
    if (record.id.empty()) {
        return Error::make(ErrorCode::InvalidPayload, "artefact id must not be empty");
    }
    if (find(record.id) != nullptr) {
        return Error::make(ErrorCode::DuplicateId, "artefact id already registered", {record.id});
    }
    if (record.stage < 1 || record.stage > 6 || !kind_stage_consistent(record.kind, record.stage)) {
        return Error::make(ErrorCode::KindStageMismatch,
                           "kind " + std::string{to_string(record.kind)} + " does not belong to stage " +
                               std::to_string(record.stage),
                           {record.id});
    }
    if (record.produced_by) {
        const auto activity = activity_spec(*record.produced_by);
        if (!activity || activity->stage != record.stage) {
            return Error::make(ErrorCode::KindStageMismatch,
                               "activity " + std::to_string(*record.produced_by) + " is not part of stage " +
                                   std::to_string(record.stage),
                               {record.id});
        }
    }
    if (auto status = check_payload(record); !status) {
        return status;
    }

    if (!bytes && record.content.type == ContentType::Inline) {
        bytes = record.content.value;
    }
    if (bytes) {
        const std::string computed = content_digest(*bytes);
        if (record.digest.empty()) {
            record.digest = computed;
        } else if (record.digest != computed) {
            return Error::make(ErrorCode::DigestMismatch, "declared " + record.digest + ", content is " + computed,
                               {record.id});
        }
    } else if (record.digest.empty()) {
        return Error::make(ErrorCode::DigestMismatch, "no content available to compute a digest", {record.id});
    }

    auto position = std::lower_bound(records_.begin(), records_.end(), record.id,
                                     [](const ArtefactRecord& r, const std::string& id) { return r.id < id; });
    records_.insert(position, std::move(record));
    return ok();
}

const ArtefactRecord* Registry::find(std::string_view id) const
{
    auto it = std::lower_bound(records_.begin(), records_.end(), id,
                               [](const ArtefactRecord& r, std::string_view key) { return r.id < key; });
    return it != records_.end() && it->id == id ? &*it : nullptr;
}

std::vector<ArtefactRecord> Registry::lookup_all(ArtefactKind kind) const
{
    std::vector<ArtefactRecord> out;
    std::copy_if(records_.begin(), records_.end(), std::back_inserter(out),
                 [kind](const ArtefactRecord& r) { return r.kind == kind; });
    return out;
}

std::vector<const ArtefactRecord*> Registry::current(ArtefactKind kind) const
{
    std::vector<const ArtefactRecord*> out;
    for (const auto& record : records_) {
        if (record.kind == kind && record.status == ArtefactStatus::Current) {
            out.push_back(&record);
        }
    }
    return out;
}

Status Registry::set_status(std::string_view id, ArtefactStatus status)
{
    auto it = std::find_if(records_.begin(), records_.end(), [&](const ArtefactRecord& r) { return r.id == id; });
    if (it == records_.end()) {
        return Error::make(ErrorCode::UnknownArtefact, "no such artefact", {std::string{id}});
    }
    it->status = status;
    return ok();
}

Expected<Registry> register_artefact(Registry registry, ArtefactRecord record, std::optional<std::string_view> bytes)
{
    if (auto status = registry.add(std::move(record), bytes); !status) {
        return status.error();
    }
    return registry;
}

std::vector<ArtefactRecord> lookup_all(const Registry& registry, ArtefactKind kind)
{
    return registry.lookup_all(kind);
}

std::set<std::string> dataset_overlap(const DatasetDescriptor& a, const DatasetDescriptor& b)
{
    std::set<std::string> out;
    std::set_intersection(a.sample_ids.begin(), a.sample_ids.end(), b.sample_ids.begin(), b.sample_ids.end(),
                          std::inserter(out, out.end()));
    return out;
}

}  // namespace amlas
