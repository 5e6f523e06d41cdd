#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace amlas {

enum class Severity { Error, Warning, Info };

std::string_view to_string(Severity severity);

struct SourcePos {
    int line = 1;
    int column = 1;

    auto operator<=>(const SourcePos&) const = default;
};

struct SourceSpan {
    std::string file;
    SourcePos start;
    SourcePos end;

    bool operator==(const SourceSpan&) const = default;
};

struct Diagnostic {
    std::string rule_id;
    Severity severity = Severity::Error;
    std::string message;
    std::vector<std::string> subjects;
    std::optional<SourceSpan> span;

    bool operator==(const Diagnostic&) const = default;

    /// First subject, or empty; the primary sort key after the rule id.
    [[nodiscard]] std::string_view primary_subject() const
    {
        return subjects.empty() ? std::string_view{} : std::string_view{subjects.front()};
    }
};

/// "file:3:7: error [DSL-SYNTAX] message (G2.1)"
std::string format_diagnostic(const Diagnostic& diagnostic);

/// Stable order used for structural findings: subject id, then rule id.
void sort_by_subject(std::vector<Diagnostic>& diagnostics);

/// Stable order used by the rule engine: rule id, then subject id.
void sort_by_rule(std::vector<Diagnostic>& diagnostics);

[[nodiscard]] bool has_errors(const std::vector<Diagnostic>& diagnostics);

}  // namespace amlas
