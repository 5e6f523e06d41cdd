#pragma once

#include "amlas/artefacts.hpp"
#include "amlas/diagnostic.hpp"
#include "amlas/gsn.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace amlas {

enum class ParamForm { Artefact, Collection };

/// `param NAME : artefact KIND` or `param NAME : each CATEGORY of KIND`.
struct PatternParam {
    std::string name;
    ParamForm form = ParamForm::Artefact;
    ArtefactKind kind = ArtefactKind::A;
    std::string category;  // collections only

    bool operator==(const PatternParam&) const = default;
};

struct PatternTemplate {
    ArtefactKind pattern_id = ArtefactKind::F;
    std::string title;
    ArgumentGraph graph;  // template mode; continuation and ACP links in graph.links
    std::vector<PatternParam> params;
    std::map<std::string, SourceSpan> spans;  // node id -> declaration

    [[nodiscard]] const PatternParam* param(std::string_view name) const;
};

struct ParseResult {
    std::optional<PatternTemplate> pattern;
    std::vector<Diagnostic> diagnostics;

    [[nodiscard]] bool ok() const { return pattern.has_value(); }
};

namespace dsl_rule {
inline constexpr std::string_view kSyntax = "DSL-SYNTAX";
inline constexpr std::string_view kPatternId = "DSL-PATTERN-ID";
inline constexpr std::string_view kParam = "DSL-PARAM";
inline constexpr std::string_view kDuplicateId = "DSL-DUP-ID";
inline constexpr std::string_view kUnknownRef = "DSL-UNKNOWN-REF";
inline constexpr std::string_view kRelation = "DSL-RELATION";
inline constexpr std::string_view kPlaceholder = "DSL-PLACEHOLDER";
inline constexpr std::string_view kForEach = "DSL-FOREACH";
inline constexpr std::string_view kAtLeast = "DSL-ATLEAST";
inline constexpr std::string_view kAcp = "DSL-ACP";
inline constexpr std::string_view kRoot = "DSL-ROOT";
inline constexpr std::string_view kContinuation = "DSL-CONTINUATION";
}  // namespace dsl_rule

/// Parses pattern source. On failure `pattern` is empty and every diagnostic carries
/// a span into `file`. Never throws.
[[nodiscard]] ParseResult parse_pattern(std::string_view source, std::string_view file = "<input>");

/// Canonical DSL text for a template; parse_pattern(print_pattern(t)) reproduces t.graph.
[[nodiscard]] std::string print_pattern(const PatternTemplate& pattern);

/// Embedded source of one of the six shipped patterns.
[[nodiscard]] std::string_view builtin_source(ArtefactKind pattern_id);

/// Parses the embedded source for `pattern_id`, which must be a pattern kind.
[[nodiscard]] PatternTemplate load_builtin(ArtefactKind pattern_id);

/// Continuation targets across a set of templates: each must name a loaded
/// pattern and a node it declares.
[[nodiscard]] std::vector<Diagnostic> check_continuations(const std::vector<PatternTemplate>& patterns);

}  // namespace amlas
