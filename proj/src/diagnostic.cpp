#include "amlas/diagnostic.hpp"

#include "amlas/result.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace amlas {

std::string_view to_string(Severity severity)
{
    switch (severity) {
    case Severity::Error:
        return "error";
    case Severity::Warning:
        return "warning";
    case Severity::Info:
        return "info";
    }
    return "error";
}

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::DuplicateId:
        return "DuplicateId";
    case ErrorCode::KindStageMismatch:
        return "KindStageMismatch";
    case ErrorCode::DigestMismatch:
        return "DigestMismatch";
    case ErrorCode::InvalidPayload:
        return "InvalidPayload";
    case ErrorCode::UnknownArtefact:
        return "UnknownArtefact";
    case ErrorCode::UnboundParameter:
        return "UnboundParameter";
    case ErrorCode::KindMismatch:
        return "KindMismatch";
    case ErrorCode::ChoiceUnsatisfied:
        return "ChoiceUnsatisfied";
    case ErrorCode::DanglingContinuation:
        return "DanglingContinuation";
    case ErrorCode::SchemaVersionMismatch:
        return "SchemaVersionMismatch";
    case ErrorCode::StructuralError:
        return "StructuralError";
    case ErrorCode::ParseError:
        return "ParseError";
    case ErrorCode::IoError:
        return "IoError";
    }
    return "Error";
}

std::string Error::describe() const
{
    std::string out{to_string(code)};
    if (!subjects.empty()) {
        out += '(';
        for (std::size_t i = 0; i < subjects.size(); ++i) {
            if (i > 0) {
                out += ", ";
            }
            out += '"' + subjects[i] + '"';
        }
        out += ')';
    }
    if (!message.empty()) {
        out += ": " + message;
    }
    return out;
}

std::string format_diagnostic(const Diagnostic& diagnostic)
{
    std::ostringstream out;
    if (diagnostic.span) {
        const auto& span = *diagnostic.span;
        out << (span.file.empty() ? "<input>" : span.file) << ':' << span.start.line << ':' << span.start.column
            << ": ";
    }
    out << to_string(diagnostic.severity) << " [" << diagnostic.rule_id << "] " << diagnostic.message;
    if (!diagnostic.subjects.empty()) {
        out << " (";
        for (std::size_t i = 0; i < diagnostic.subjects.size(); ++i) {
            out << (i > 0 ? ", " : "") << diagnostic.subjects[i];
        }
        out << ')';
    }
    return out.str();
}

void sort_by_subject(std::vector<Diagnostic>& diagnostics)
{
    std::stable_sort(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& a, const Diagnostic& b) {
        return std::tie(a.subjects, a.rule_id) < std::tie(b.subjects, b.rule_id);
    });
}

void sort_by_rule(std::vector<Diagnostic>& diagnostics)
{
    std::stable_sort(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& a, const Diagnostic& b) {
        return std::tie(a.rule_id, a.subjects) < std::tie(b.rule_id, b.subjects);
    });
}

bool has_errors(const std::vector<Diagnostic>& diagnostics)
{
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

}  // namespace amlas
