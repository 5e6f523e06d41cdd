#include "amlas/validate.hpp"

#include "amlas/gsn.hpp"

#include <algorithm>

namespace amlas {

namespace {

using Findings = std::vector<Diagnostic>;

Diagnostic finding(const Rule& rule, std::string message, std::vector<std::string> subjects)
{
    return Diagnostic{rule.id, rule.severity, std::move(message), std::move(subjects), std::nullopt};
}

template <typename Payload>
std::vector<std::pair<const ArtefactRecord*, const Payload*>> payloads(const Registry& registry, ArtefactKind kind)
{
    std::vector<std::pair<const ArtefactRecord*, const Payload*>> out;
    for (const auto* record : registry.current(kind)) {
        if (const auto* payload = std::get_if<Payload>(&record->payload)) {
            out.emplace_back(record, payload);
        }
    }
    return out;
}

std::vector<SafetyRequirement> requirements(const Registry& registry, ArtefactKind kind)
{
    std::vector<SafetyRequirement> out;
    for (const auto& [record, set] : payloads<RequirementSet>(registry, kind)) {
        out.insert(out.end(), set->requirements.begin(), set->requirements.end());
    }
    return out;
}

std::vector<VerificationEntry> verification_entries(const Registry& registry)
{
    std::vector<VerificationEntry> out;
    for (const auto& [record, results] : payloads<VerificationResults>(registry, ArtefactKind::Z)) {
        out.insert(out.end(), results->entries.begin(), results->entries.end());
    }
    return out;
}

std::vector<DataRequirement> data_requirements(const Registry& registry)
{
    std::vector<DataRequirement> out;
    for (const auto& [record, set] : payloads<DataRequirementSet>(registry, ArtefactKind::L)) {
        out.insert(out.end(), set->requirements.begin(), set->requirements.end());
    }
    return out;
}

std::vector<std::pair<const ArtefactRecord*, const DatasetDescriptor*>> datasets(const Registry& registry,
                                                                                  ArtefactKind kind)
{
    return payloads<DatasetDescriptor>(registry, kind);
}

std::vector<std::string> ids_of(const std::vector<std::pair<const ArtefactRecord*, const RequirementSet*>>& sets)
{
    std::vector<std::string> out;
    for (const auto& [record, set] : sets) {
        out.push_back(record->id);
    }
    return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view separator = ", ")
{
    std::string out;
    for (const auto& part : parts) {
        if (!out.empty()) {
            out += separator;
        }
        out += part;
    }
    return out;
}

bool blank(std::string_view text)
{
    return std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

Findings req_1(const CaseSnapshot& s, const Rule& rule)
{
    Findings out;
    const auto ml = requirements(s.registry, ArtefactKind::H);
    for (const auto& allocated : requirements(s.registry, ArtefactKind::E)) {
        const bool traced = std::any_of(ml.begin(), ml.end(), [&](const SafetyRequirement& r) {
            return std::find(r.traces_to.begin(), r.traces_to.end(), allocated.id) != r.traces_to.end();
        });
        if (!traced && blank(allocated.justification)) {
            out.push_back(finding(rule,
                                  "allocated requirement " + allocated.id +
                                      " is not traced by any ML safety requirement and has no justification",
                                  {allocated.id}));
        }
    }
    return out;
}

Findings req_2(const CaseSnapshot& s, const Rule& rule)
{
    const auto ml = requirements(s.registry, ArtefactKind::H);
    auto count = [&](MlRequirementType type) {
        return std::count_if(ml.begin(), ml.end(), [&](const SafetyRequirement& r) { return r.type == type; });
    };
    std::vector<std::string> missing;
    if (count(MlRequirementType::Performance) == 0) {
        missing.emplace_back("Performance");
    }
    if (count(MlRequirementType::Robustness) == 0) {
        missing.emplace_back("Robustness");
    }
    if (missing.empty()) {
        return {};
    }
    auto subjects = ids_of(payloads<RequirementSet>(s.registry, ArtefactKind::H));
    if (subjects.empty()) {
        subjects.emplace_back("H");
    }
    return {finding(rule, "ML safety requirements include no " + join(missing, " and no ") + " requirement",
                    std::move(subjects))};
}

Findings req_3(const CaseSnapshot& s, const Rule& rule)
{
    const auto validations = payloads<RequirementsValidation>(s.registry, ArtefactKind::J);
    if (s.registry.current(ArtefactKind::J).empty()) {
        return {finding(rule, "no requirements validation results (J) are registered", {"J"})};
    }
    std::set<std::string> validated;
    for (const auto& [record, validation] : validations) {
        validated.insert(validation->validated.begin(), validation->validated.end());
    }
    Findings out;
    for (const auto& requirement : requirements(s.registry, ArtefactKind::H)) {
        if (!validated.contains(requirement.id)) {
            out.push_back(finding(rule, "ML safety requirement " + requirement.id + " is not covered by validation results",
                                  {requirement.id}));
        }
    }
    return out;
}

Findings data_1(const CaseSnapshot& s, const Rule& rule)
{
    std::set<DataCategory> present;
    for (const auto& requirement : data_requirements(s.registry)) {
        present.insert(requirement.category);
    }
    std::vector<std::string> missing;
    for (auto category :
         {DataCategory::Relevance, DataCategory::Completeness, DataCategory::Accuracy, DataCategory::Balance}) {
        if (!present.contains(category)) {
            missing.emplace_back(to_string(category));
        }
    }
    if (missing.empty()) {
        return {};
    }
    return {finding(rule, "data requirements do not cover categories: " + join(missing), {"L"})};
}

Findings data_2(const CaseSnapshot& s, const Rule& rule)
{
    Findings out;
    if (s.registry.current(ArtefactKind::S).empty()) {
        out.push_back(finding(rule, "no data validation results (S) are registered", {"S"}));
    }
    const auto requirements = data_requirements(s.registry);
    for (ArtefactKind kind : {ArtefactKind::N, ArtefactKind::O, ArtefactKind::P}) {
        for (const auto& [record, dataset] : datasets(s.registry, kind)) {
            for (const auto& requirement : requirements) {
                auto it = dataset->requirement_coverage.find(requirement.id);
                if (it == dataset->requirement_coverage.end()) {
                    out.push_back(finding(rule,
                                          "dataset " + record->id + " records no validation against " +
                                              requirement.id,
                                          {record->id, requirement.id}));
                } else if (!it->second.met && blank(it->second.justification)) {
                    out.push_back(finding(rule,
                                          "discrepancy of dataset " + record->id + " against " + requirement.id +
                                              " is not justified",
                                          {record->id, requirement.id}));
                }
            }
        }
    }
    return out;
}

Findings data_3(const CaseSnapshot& s, const Rule& rule)
{
    if (!s.registry.current(ArtefactKind::M).empty()) {
        return {};
    }
    return {finding(rule, "no data requirements justification report (M) is registered", {"M"})};
}

Findings leak(const CaseSnapshot& s, const Rule& rule, ArtefactKind left, ArtefactKind right)
{
    Findings out;
    for (const auto& [a, da] : datasets(s.registry, left)) {
        for (const auto& [b, db] : datasets(s.registry, right)) {
            const auto shared = dataset_overlap(*da, *db);
            if (shared.empty()) {
                continue;
            }
            out.push_back(finding(rule,
                                  std::string{to_string(da->role)} + " data " + a->id + " and " +
                                      std::string{to_string(db->role)} + " data " + b->id + " share " +
                                      std::to_string(shared.size()) + " sample(s): " +
                                      join({shared.begin(), shared.end()}),
                                  {a->id, b->id}));
        }
    }
    return out;
}

Findings leak_1(const CaseSnapshot& s, const Rule& rule)
{
    auto out = leak(s, rule, ArtefactKind::N, ArtefactKind::P);
    auto internal = leak(s, rule, ArtefactKind::O, ArtefactKind::P);
    out.insert(out.end(), internal.begin(), internal.end());
    return out;
}

Findings leak_2(const CaseSnapshot& s, const Rule& rule)
{
    return leak(s, rule, ArtefactKind::N, ArtefactKind::O);
}

Findings empty_ds(const CaseSnapshot& s, const Rule& rule)
{
    Findings out;
    for (ArtefactKind kind : {ArtefactKind::N, ArtefactKind::O, ArtefactKind::P}) {
        for (const auto& [record, dataset] : datasets(s.registry, kind)) {
            if (dataset->sample_ids.empty()) {
                out.push_back(finding(rule, "dataset " + record->id + " has no samples", {record->id}));
            }
        }
    }
    return out;
}

Findings ver_1(const CaseSnapshot& s, const Rule& rule)
{
    const auto entries = verification_entries(s.registry);
    Findings out;
    for (const auto& requirement : requirements(s.registry, ArtefactKind::H)) {
        const bool verified = std::any_of(entries.begin(), entries.end(), [&](const VerificationEntry& e) {
            return e.requirement_id == requirement.id;
        });
        if (!verified) {
            out.push_back(finding(rule, "ML safety requirement " + requirement.id + " has no verification entry",
                                  {requirement.id}));
        }
    }
    return out;
}

Findings ver_2(const CaseSnapshot& s, const Rule& rule)
{
    for (const auto& [record, log] : payloads<VerificationLog>(s.registry, ArtefactKind::AA)) {
        if (!blank(log->independence)) {
            return {};
        }
    }
    return {finding(rule, "verification log (AA) carries no independence statement", {"AA"})};
}

Findings ver_3(const CaseSnapshot& s, const Rule& rule)
{
    Findings out;
    for (const auto& entry : verification_entries(s.registry)) {
        if (entry.method == VerificationMethod::Formal && blank(entry.formal_translation_justification)) {
            out.push_back(finding(rule, "formal verification entry " + entry.id + " lacks a translation justification",
                                  {entry.id}));
        }
    }
    return out;
}

Findings dep_1(const CaseSnapshot& s, const Rule& rule)
{
    Findings out;
    for (const auto& [record, log] : payloads<ErroneousBehaviourLog>(s.registry, ArtefactKind::DD)) {
        for (const auto& entry : log->entries) {
            std::vector<std::string> missing;
            if (!entry.monitor || blank(*entry.monitor)) {
                missing.emplace_back("monitor");
            }
            if (!entry.response || blank(*entry.response)) {
                missing.emplace_back("response");
            }
            if (!missing.empty()) {
                out.push_back(finding(rule, "erroneous behaviour " + entry.id + " has no " + join(missing, " and no "),
                                      {entry.id}));
            }
        }
    }
    return out;
}

Findings dep_2(const CaseSnapshot& s, const Rule& rule)
{
    Findings out;
    for (ArtefactKind kind : {ArtefactKind::B, ArtefactKind::C}) {
        for (const auto& [record, set] : payloads<AssumptionSet>(s.registry, kind)) {
            for (const auto& assumption : set->assumptions) {
                if (blank(assumption.monitor)) {
                    out.push_back(finding(rule, "assumption " + assumption.id + " in " + record->id +
                                                    " has no monitoring measure",
                                          {assumption.id}));
                }
            }
        }
    }
    return out;
}

Findings dep_3(const CaseSnapshot& s, const Rule& rule)
{
    const auto results = payloads<IntegrationResults>(s.registry, ArtefactKind::FF);
    if (results.empty()) {
        return {finding(rule, "no integration testing results (FF) are registered", {"FF"})};
    }
    std::set<std::string> scenarios;
    for (const auto& [record, set] : payloads<ScenarioSet>(s.registry, ArtefactKind::EE)) {
        for (const auto& scenario : set->scenarios) {
            scenarios.insert(scenario.id);
        }
    }
    Findings out;
    for (const auto& [record, set] : results) {
        if (set->results.empty()) {
            out.push_back(finding(rule, "integration results " + record->id + " contain no results", {record->id}));
        }
        for (const auto& result : set->results) {
            const bool grounded = std::any_of(result.scenarios.begin(), result.scenarios.end(),
                                              [&](const std::string& id) { return scenarios.contains(id); });
            if (!grounded) {
                out.push_back(finding(rule,
                                      "integration result " + result.id +
                                          " references no registered operational scenario",
                                      {result.id}));
            }
        }
        if (blank(set->scenario_justification)) {
            out.push_back(finding(rule, "integration results " + record->id + " lack a scenario-set justification",
                                  {record->id}));
        }
    }
    return out;
}

Findings arg_1(const CaseSnapshot& s, const Rule& rule)
{
    Findings out;
    if (s.assembly_error) {
        out.push_back(finding(rule, "case assembly failed: " + s.assembly_error->describe(),
                              s.assembly_error->subjects));
    }
    for (const auto& d : s.safety_case.diagnostics) {
        out.push_back(finding(rule, d.message, d.subjects));
    }
    for (const auto* graph : s.safety_case.graphs()) {
        for (const auto& d : check_wellformed(*graph, GraphMode::Instance)) {
            out.push_back(finding(rule, graph->name + ": " + d.message, d.subjects));
        }
        for (const auto& link : graph->links) {
            if (!link.resolved()) {
                const bool reported = std::any_of(
                    s.safety_case.diagnostics.begin(), s.safety_case.diagnostics.end(),
                    [&](const Diagnostic& d) { return d.primary_subject() == link.label(); });
                if (!reported) {
                    out.push_back(finding(rule, graph->name + ": link " + link.label() + " is unresolved",
                                          {link.label()}));
                }
            }
        }
    }
    return out;
}

Findings arg_2(const CaseSnapshot& s, const Rule& rule)
{
    Findings out;
    for (const auto* graph : s.safety_case.graphs()) {
        for (const auto& node : graph->nodes) {
            if (node.adornments.undeveloped) {
                out.push_back(finding(rule, graph->name + ": " + node.id + " is undeveloped: " + node.text,
                                      {node.id}));
            }
        }
    }
    return out;
}

Rule make(std::string id, Severity severity, std::string description, std::string anchor,
          Findings (*check)(const CaseSnapshot&, const Rule&))
{
    return Rule{std::move(id), severity, std::move(description), std::move(anchor), check};
}

}  // namespace

bool RuleFilter::enabled(std::string_view id) const
{
    const std::string key{id};
    return (only.empty() || only.contains(key)) && !disabled.contains(key);
}

const std::vector<Rule>& builtin_rules()
{
    static const std::vector<Rule> rules = [] {
        std::vector<Rule> list{
            make("ARG-1", Severity::Error,
                 "Every instantiated argument is structurally sound and every continuation and ACP resolves",
                 "ACPs on G2.2", arg_1),
            make("ARG-2", Severity::Info, "Undeveloped argument elements are listed for follow-up",
                 "undeveloped legs G5.6, G5.8, G6.5, G6.7", arg_2),
            make("DATA-1", Severity::Error,
                 "Data requirements address relevance, completeness, accuracy and balance", "Artefact L", data_1),
            make("DATA-2", Severity::Error,
                 "Data validation results exist and every dataset records its standing against every data "
                 "requirement, with discrepancies justified",
                 "Activity 8", data_2),
            make("DATA-3", Severity::Error, "A data requirements justification report is registered", "Artefact M",
                 data_3),
            make("DEP-1", Severity::Error, "Each erroneous behaviour has both a monitoring measure and a response",
                 "G6.8, G6.9", dep_1),
            make("DEP-2", Severity::Error, "Each environment and system assumption has a monitoring measure",
                 "Activity 15", dep_2),
            make("DEP-3", Severity::Error,
                 "Integration results exist, each draws on a registered operational scenario, and the scenario "
                 "choice is justified",
                 "G6.2, J6.1", dep_3),
            make("EMPTY-DS", Severity::Warning, "Datasets hold at least one sample", "Activity 7", empty_ds),
            make("LEAK-1", Severity::Error,
                 "Verification data shares no sample with development or internal test data", "Activity 13",
                 leak_1),
            make("LEAK-2", Severity::Error, "Internal test data shares no sample with development data",
                 "Activity 11", leak_2),
            make("REQ-1", Severity::Warning,
                 "Each allocated requirement is traced by an ML safety requirement or its omission is justified",
                 "J2.1", req_1),
            make("REQ-2", Severity::Error, "ML safety requirements include performance and robustness requirements",
                 "Activity 3", req_2),
            make("REQ-3", Severity::Error,
                 "Requirements validation results exist and cover every ML safety requirement", "Activity 4", req_3),
            make("VER-1", Severity::Error, "Each ML safety requirement has at least one verification entry",
                 "Activity 13", ver_1),
            make("VER-2", Severity::Error, "The verification log states how verification is kept independent",
                 "Artefact AA", ver_2),
            make("VER-3", Severity::Error, "Formal verification entries justify the translation of the requirement",
                 "J5.2", ver_3),
        };
        std::sort(list.begin(), list.end(), [](const Rule& a, const Rule& b) { return a.id < b.id; });
        return list;
    }();
    return rules;
}

const Rule* find_rule(const std::vector<Rule>& rules, std::string_view id)
{
    auto it = std::find_if(rules.begin(), rules.end(), [&](const Rule& r) { return r.id == id; });
    return it == rules.end() ? nullptr : &*it;
}

std::vector<Diagnostic> run_rules(const CaseSnapshot& snapshot, const std::vector<Rule>& rules,
                                  const RuleFilter& filter)
{
    std::vector<Diagnostic> out;
    for (const auto& rule : rules) {
        if (!filter.enabled(rule.id)) {
            continue;
        }
        auto findings = rule.check(snapshot, rule);
        out.insert(out.end(), std::make_move_iterator(findings.begin()), std::make_move_iterator(findings.end()));
    }
    sort_by_rule(out);
    return out;
}

Status check_waivers(const std::vector<Waiver>& waivers, const std::vector<Rule>& rules)
{
    for (const auto& waiver : waivers) {
        if (find_rule(rules, waiver.rule_id) == nullptr) {
            return Error::make(ErrorCode::StructuralError, "waiver names unknown rule " + waiver.rule_id,
                               {waiver.rule_id});
        }
        if (blank(waiver.justification)) {
            return Error::make(ErrorCode::StructuralError, "waiver for " + waiver.rule_id + " has no justification",
                               {waiver.rule_id});
        }
    }
    return ok();
}

ValidationResult validate_case(const CaseSnapshot& snapshot, const std::vector<Rule>& rules,
                               const std::vector<Waiver>& waivers)
{
    ValidationResult result;
    for (auto& d : run_rules(snapshot, rules)) {
        auto waiver = std::find_if(waivers.begin(), waivers.end(), [&](const Waiver& w) { return w.rule_id == d.rule_id; });
        if (waiver == waivers.end()) {
            result.findings.push_back(std::move(d));
            continue;
        }
        auto applied = std::find_if(result.waived.begin(), result.waived.end(),
                                    [&](const AppliedWaiver& a) { return a.waiver.rule_id == d.rule_id; });
        if (applied == result.waived.end()) {
            result.waived.push_back(AppliedWaiver{*waiver, {}});
            applied = std::prev(result.waived.end());
        }
        applied->suppressed.push_back(std::move(d));
    }
    for (const auto& waiver : waivers) {
        const bool listed = std::any_of(result.waived.begin(), result.waived.end(),
                                        [&](const AppliedWaiver& a) { return a.waiver.rule_id == waiver.rule_id; });
        if (!listed) {
            result.waived.push_back(AppliedWaiver{waiver, {}});
        }
    }
    std::sort(result.waived.begin(), result.waived.end(),
              [](const AppliedWaiver& a, const AppliedWaiver& b) { return a.waiver.rule_id < b.waiver.rule_id; });
    return result;
}

Expected<std::vector<Rule>> extend_rules(const std::vector<ConfigRule>& extra)
{
    std::vector<Rule> rules = builtin_rules();
    for (const auto& config : extra) {
        if (find_rule(rules, config.id) != nullptr) {
            return Error::make(ErrorCode::StructuralError,
                               "rule " + config.id + " is already defined; built-in rules can only be waived",
                               {config.id});
        }
        Rule rule;
        rule.id = config.id;
        rule.severity = config.severity;
        rule.description = config.description;
        rule.anchor = "case configuration";
        const auto kinds = config.require_kinds;
        rule.check = [kinds](const CaseSnapshot& s, const Rule& self) {
            Findings out;
            for (ArtefactKind kind : kinds) {
                if (s.registry.current(kind).empty()) {
                    out.push_back(finding(self,
                                          "no Current artefact of kind " + std::string{to_string(kind)} +
                                              " is registered",
                                          {std::string{to_string(kind)}}));
                }
            }
            return out;
        };
        rules.push_back(std::move(rule));
    }
    std::sort(rules.begin(), rules.end(), [](const Rule& a, const Rule& b) { return a.id < b.id; });
    return rules;
}

}  // namespace amlas
