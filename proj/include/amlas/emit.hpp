#pragma once

#include "amlas/artefacts.hpp"
#include "amlas/diagnostic.hpp"
#include "amlas/gsn.hpp"
#include "amlas/instantiate.hpp"
#include "amlas/result.hpp"
#include "amlas/validate.hpp"

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace amlas {

using Json = nlohmann::json;

inline constexpr std::string_view kSchemaVersion = "amlas-kit/1";

/// Sorted keys, two-space indent, LF line endings, trailing newline, UTF-8.
[[nodiscard]] std::string canonical_json(const Json& document);

/// Parses `text`, checks "schema" and "document". Errors: StructuralError (with a
/// location path) or SchemaVersionMismatch.
[[nodiscard]] Expected<Json> parse_document(std::string_view text, std::string_view document);

// Value codecs. `path` names the location used in StructuralError messages.
[[nodiscard]] Json graph_to_json(const ArgumentGraph& graph);
[[nodiscard]] Expected<ArgumentGraph> graph_from_json(const Json& value, const std::string& path = "$");
[[nodiscard]] Json payload_to_json(const Payload& payload);
[[nodiscard]] Expected<Payload> payload_from_json(ArtefactKind kind, const Json& value, const std::string& path = "$");
[[nodiscard]] Json record_to_json(const ArtefactRecord& record);
[[nodiscard]] Expected<ArtefactRecord> record_from_json(const Json& value, const std::string& path = "$");
[[nodiscard]] Json diagnostic_to_json(const Diagnostic& diagnostic);
[[nodiscard]] Expected<Diagnostic> diagnostic_from_json(const Json& value, const std::string& path = "$");

// Documents.
[[nodiscard]] std::string to_json(const Registry& registry);
[[nodiscard]] std::string to_json(const SafetyCase& safety_case);
[[nodiscard]] Expected<Registry> registry_from_json(std::string_view text);
[[nodiscard]] Expected<SafetyCase> case_from_json(std::string_view text);

/// One argument artefact (out/<KIND>.json): every graph instantiated for `kind`.
struct ArgumentDocument {
    ArtefactKind kind = ArtefactKind::G;
    ArtefactKind pattern = ArtefactKind::F;
    std::vector<ArgumentGraph> graphs;

    bool operator==(const ArgumentDocument&) const = default;
};

[[nodiscard]] std::string argument_to_json(const ArgumentDocument& document);
[[nodiscard]] Expected<ArgumentDocument> argument_from_json(std::string_view text);
[[nodiscard]] std::vector<ArgumentDocument> argument_documents(const SafetyCase& safety_case);
[[nodiscard]] SafetyCase case_from_arguments(std::string name, const std::vector<ArgumentDocument>& documents);

/// Registers each assembled argument as an artefact whose id is its kind letters and
/// whose digest is taken over its canonical JSON. Kinds that already have a record
/// are left alone.
[[nodiscard]] Expected<Registry> register_case(Registry registry, const SafetyCase& safety_case);

/// DOT digraph for one graph.
[[nodiscard]] std::string to_dot(const ArgumentGraph& graph);
/// DOT digraph holding each graph as a cluster (used for the per-requirement CC set).
[[nodiscard]] std::string to_dot(const std::vector<ArgumentGraph>& graphs, std::string_view name);

/// "SR-1 → MLSR-1 (perf) → DR-3 → VE-1 (Pass) → IT-1" rows, one per ML requirement.
[[nodiscard]] std::vector<std::string> traceability_rows(const Registry& registry);

struct ReportInput {
    const Registry& registry;
    const SafetyCase& safety_case;
    const ValidationResult& validation;
};

[[nodiscard]] std::string report(const ReportInput& input);

}  // namespace amlas
