#pragma once

#include "amlas/artefacts.hpp"
#include "amlas/diagnostic.hpp"
#include "amlas/instantiate.hpp"
#include "amlas/result.hpp"

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace amlas {

/// What the rules look at: a registry snapshot and the case assembled from it.
struct CaseSnapshot {
    const Registry& registry;
    const SafetyCase& safety_case;
    std::optional<Error> assembly_error;  // set when assembly failed outright
};

struct Rule {
    std::string id;
    Severity severity = Severity::Error;
    std::string description;
    std::string anchor;  // methodology element the rule checks
    std::function<std::vector<Diagnostic>(const CaseSnapshot&, const Rule&)> check;
};

/// The built-in obligation suite, ordered by rule id.
[[nodiscard]] const std::vector<Rule>& builtin_rules();
[[nodiscard]] const Rule* find_rule(const std::vector<Rule>& rules, std::string_view id);

struct RuleFilter {
    std::set<std::string> only;      // empty: all rules
    std::set<std::string> disabled;

    [[nodiscard]] bool enabled(std::string_view id) const;
};

/// Diagnostics of every enabled rule, ordered by rule id then subject.
[[nodiscard]] std::vector<Diagnostic> run_rules(const CaseSnapshot& snapshot, const std::vector<Rule>& rules,
                                                const RuleFilter& filter = {});

struct Waiver {
    std::string rule_id;
    std::string justification;

    bool operator==(const Waiver&) const = default;
};

struct AppliedWaiver {
    Waiver waiver;
    std::vector<Diagnostic> suppressed;
};

struct ValidationResult {
    std::vector<Diagnostic> findings;
    std::vector<AppliedWaiver> waived;

    [[nodiscard]] bool clean() const { return !has_errors(findings); }
};

/// Runs `rules` and moves findings of waived rules into `waived`.
[[nodiscard]] ValidationResult validate_case(const CaseSnapshot& snapshot, const std::vector<Rule>& rules,
                                             const std::vector<Waiver>& waivers);

/// Waivers must name a known rule and carry a justification.
[[nodiscard]] Status check_waivers(const std::vector<Waiver>& waivers, const std::vector<Rule>& rules);

/// Extension rule: fires when some listed kind has no Current record.
struct ConfigRule {
    std::string id;
    Severity severity = Severity::Error;
    std::string description;
    std::vector<ArtefactKind> require_kinds;
};

/// Built-ins followed by `extra`; extension ids may not shadow built-in ones.
[[nodiscard]] Expected<std::vector<Rule>> extend_rules(const std::vector<ConfigRule>& extra);

}  // namespace amlas
