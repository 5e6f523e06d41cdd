#include "amlas/emit.hpp"

#include "amlas/stages.hpp"

#include <algorithm>
#include <sstream>

namespace amlas {

namespace {

struct DecodeError {
    std::string path;
    std::string message;
};

[[noreturn]] void fail(const std::string& path, std::string message)
{
    throw DecodeError{path, std::move(message)};
}

Error structural(const DecodeError& e)
{
    return Error::make(ErrorCode::StructuralError, e.path + ": " + e.message, {e.path});
}

const Json& object(const Json& value, const std::string& path)
{
    if (!value.is_object()) {
        fail(path, "expected an object");
    }
    return value;
}

const Json& array(const Json& value, const std::string& path)
{
    if (!value.is_array()) {
        fail(path, "expected an array");
    }
    return value;
}

const Json& field(const Json& value, const std::string& path, const std::string& key)
{
    object(value, path);
    auto it = value.find(key);
    if (it == value.end()) {
        fail(path + "." + key, "missing field");
    }
    return *it;
}

const Json* optional_field(const Json& value, const std::string& path, const std::string& key)
{
    object(value, path);
    auto it = value.find(key);
    return it == value.end() || it->is_null() ? nullptr : &*it;
}

std::string text(const Json& value, const std::string& path)
{
    if (!value.is_string()) {
        fail(path, "expected a string");
    }
    return value.get<std::string>();
}

std::string text_field(const Json& value, const std::string& path, const std::string& key)
{
    return text(field(value, path, key), path + "." + key);
}

std::string text_or(const Json& value, const std::string& path, const std::string& key, std::string fallback = {})
{
    const Json* found = optional_field(value, path, key);
    return found == nullptr ? fallback : text(*found, path + "." + key);
}

std::optional<std::string> optional_text(const Json& value, const std::string& path, const std::string& key)
{
    const Json* found = optional_field(value, path, key);
    if (found == nullptr) {
        return std::nullopt;
    }
    return text(*found, path + "." + key);
}

bool flag_or(const Json& value, const std::string& path, const std::string& key, bool fallback)
{
    const Json* found = optional_field(value, path, key);
    if (found == nullptr) {
        return fallback;
    }
    if (!found->is_boolean()) {
        fail(path + "." + key, "expected a boolean");
    }
    return found->get<bool>();
}

std::optional<int> optional_int(const Json& value, const std::string& path, const std::string& key)
{
    const Json* found = optional_field(value, path, key);
    if (found == nullptr) {
        return std::nullopt;
    }
    if (!found->is_number_integer()) {
        fail(path + "." + key, "expected an integer");
    }
    const auto n = found->get<long long>();
    if (n < -1000000 || n > 1000000) {
        fail(path + "." + key, "integer out of range");
    }
    return static_cast<int>(n);
}

std::vector<std::string> strings_or_empty(const Json& value, const std::string& path, const std::string& key)
{
    std::vector<std::string> out;
    const Json* found = optional_field(value, path, key);
    if (found == nullptr) {
        return out;
    }
    const std::string where = path + "." + key;
    array(*found, where);
    for (std::size_t i = 0; i < found->size(); ++i) {
        out.push_back(text((*found)[i], where + "[" + std::to_string(i) + "]"));
    }
    return out;
}

template <typename Parse>
auto enum_field(const Json& value, const std::string& path, const std::string& key, Parse parse)
{
    const std::string raw = text_field(value, path, key);
    auto parsed = parse(raw);
    if (!parsed) {
        fail(path + "." + key, "unknown value \"" + raw + "\"");
    }
    return *parsed;
}

template <typename Item, typename Decode>
std::vector<Item> list_of(const Json& value, const std::string& path, const std::string& key, Decode decode,
                          bool required = true)
{
    std::vector<Item> out;
    const Json* found = required ? &field(value, path, key) : optional_field(value, path, key);
    if (found == nullptr) {
        return out;
    }
    const std::string where = path + "." + key;
    array(*found, where);
    for (std::size_t i = 0; i < found->size(); ++i) {
        out.push_back(decode((*found)[i], where + "[" + std::to_string(i) + "]"));
    }
    return out;
}

std::optional<LinkKind> link_kind_from_string(std::string_view text)
{
    if (text == "Continuation") {
        return LinkKind::Continuation;
    }
    if (text == "Acp") {
        return LinkKind::Acp;
    }
    return std::nullopt;
}

std::optional<ContentType> content_type_from_string(std::string_view text)
{
    for (auto type : {ContentType::Inline, ContentType::File, ContentType::Builtin}) {
        if (to_string(type) == text) {
            return type;
        }
    }
    return std::nullopt;
}

std::optional<Severity> severity_from_string(std::string_view text)
{
    for (auto severity : {Severity::Error, Severity::Warning, Severity::Info}) {
        if (to_string(severity) == text) {
            return severity;
        }
    }
    return std::nullopt;
}

ArgumentGraph decode_graph(const Json& value, const std::string& path)
{
    object(value, path);
    ArgumentGraph graph;
    graph.name = text_field(value, path, "name");
    graph.root = text_field(value, path, "root");
    graph.nodes = list_of<GsnNode>(value, path, "nodes", [](const Json& n, const std::string& p) {
        GsnNode node;
        node.id = text_field(n, p, "id");
        node.kind = enum_field(n, p, "kind", node_kind_from_string);
        node.text = text_field(n, p, "text");
        node.adornments.undeveloped = flag_or(n, p, "undeveloped", false);
        node.adornments.requires_development = flag_or(n, p, "requires_development", false);
        node.for_each = optional_text(n, p, "for_each");
        node.at_least = optional_int(n, p, "at_least");
        return node;
    });
    graph.relations = list_of<GsnRelation>(value, path, "relations", [](const Json& r, const std::string& p) {
        GsnRelation relation;
        relation.from = text_field(r, p, "from");
        relation.to = text_field(r, p, "to");
        relation.kind = enum_field(r, p, "kind", relation_kind_from_string);
        relation.acp = optional_text(r, p, "acp");
        return relation;
    });
    graph.links = list_of<CrossLink>(value, path, "links", [](const Json& l, const std::string& p) {
        CrossLink link;
        link.from = text_field(l, p, "from");
        link.kind = enum_field(l, p, "kind", link_kind_from_string);
        link.pattern = text_field(l, p, "pattern");
        link.node = text_field(l, p, "node");
        link.item = optional_text(l, p, "item");
        link.target_graph = optional_text(l, p, "target_graph");
        link.target_node = optional_text(l, p, "target_node");
        return link;
    });
    const Json& bindings = object(field(value, path, "bindings"), path + ".bindings");
    for (auto it = bindings.begin(); it != bindings.end(); ++it) {
        graph.bindings[it.key()] = strings_or_empty(bindings, path + ".bindings", it.key());
    }
    return graph;
}

Payload decode_payload(ArtefactKind kind, const Json& value, const std::string& path)
{
    using K = ArtefactKind;
    object(value, path);
    switch (kind) {
    case K::E:
    case K::H:
        return RequirementSet{list_of<SafetyRequirement>(value, path, "requirements", [kind](const Json& r,
                                                                                             const std::string& p) {
            SafetyRequirement req;
            req.id = text_field(r, p, "id");
            req.text = text_field(r, p, "text");
            const std::string level = text_or(r, p, "level", kind == K::E ? "Allocated" : "ML");
            if (level != "Allocated" && level != "ML") {
                fail(p + ".level", "unknown value \"" + level + "\"");
            }
            req.level = level == "ML" ? RequirementLevel::ML : RequirementLevel::Allocated;
            if (optional_field(r, p, "type") != nullptr) {
                req.type = enum_field(r, p, "type", ml_requirement_type_from_string);
            }
            req.traces_to = strings_or_empty(r, p, "traces_to");
            req.assumptions = strings_or_empty(r, p, "assumptions");
            req.derived_note = text_or(r, p, "derived_note");
            req.justification = text_or(r, p, "justification");
            return req;
        })};
    case K::B:
    case K::C:
        return AssumptionSet{list_of<Assumption>(value, path, "assumptions", [](const Json& a, const std::string& p) {
            return Assumption{text_field(a, p, "id"), text_field(a, p, "text"), text_or(a, p, "monitor")};
        })};
    case K::J:
        return RequirementsValidation{text_or(value, path, "method"), strings_or_empty(value, path, "validated")};
    case K::L:
        return DataRequirementSet{list_of<DataRequirement>(
            value, path, "requirements", [](const Json& d, const std::string& p) {
                return DataRequirement{text_field(d, p, "id"), enum_field(d, p, "category", data_category_from_string),
                                       text_field(d, p, "text"), strings_or_empty(d, p, "source_ml_requirements")};
            })};
    case K::N:
    case K::O:
    case K::P: {
        DatasetDescriptor dataset;
        dataset.role = kind == K::N ? DatasetRole::Development
                       : kind == K::O ? DatasetRole::InternalTest
                                      : DatasetRole::Verification;
        if (optional_field(value, path, "role") != nullptr) {
            dataset.role = enum_field(value, path, "role", dataset_role_from_string);
        }
        for (auto& id : strings_or_empty(value, path, "sample_ids")) {
            dataset.sample_ids.insert(std::move(id));
        }
        if (const Json* coverage = optional_field(value, path, "requirement_coverage")) {
            const std::string where = path + ".requirement_coverage";
            object(*coverage, where);
            for (auto it = coverage->begin(); it != coverage->end(); ++it) {
                const std::string entry_path = where + "." + it.key();
                object(it.value(), entry_path);
                dataset.requirement_coverage[it.key()] =
                    Coverage{flag_or(it.value(), entry_path, "met", true), text_or(it.value(), entry_path, "justification")};
            }
        }
        return dataset;
    }
    case K::Z:
        return VerificationResults{list_of<VerificationEntry>(
            value, path, "entries", [](const Json& e, const std::string& p) {
                VerificationEntry entry;
                entry.id = text_field(e, p, "id");
                entry.requirement_id = text_field(e, p, "requirement_id");
                entry.method = enum_field(e, p, "method", verification_method_from_string);
                entry.result = enum_field(e, p, "result", verification_outcome_from_string);
                entry.independence_note = text_or(e, p, "independence_note");
                entry.formal_translation_justification = text_or(e, p, "formal_translation_justification");
                return entry;
            })};
    case K::AA:
        return VerificationLog{text_or(value, path, "independence")};
    case K::DD:
        return ErroneousBehaviourLog{list_of<ErroneousBehaviourEntry>(
            value, path, "entries", [](const Json& e, const std::string& p) {
                ErroneousBehaviourEntry entry;
                entry.id = text_field(e, p, "id");
                entry.direction = enum_field(e, p, "direction", behaviour_direction_from_string);
                entry.description = text_field(e, p, "description");
                entry.monitor = optional_text(e, p, "monitor");
                entry.response = optional_text(e, p, "response");
                return entry;
            })};
    case K::EE:
        return ScenarioSet{list_of<OperationalScenario>(value, path, "scenarios", [](const Json& s, const std::string& p) {
            return OperationalScenario{text_field(s, p, "id"), text_field(s, p, "description")};
        })};
    case K::FF:
        return IntegrationResults{
            list_of<IntegrationResult>(value, path, "results",
                                       [](const Json& r, const std::string& p) {
                                           return IntegrationResult{
                                               text_field(r, p, "id"), strings_or_empty(r, p, "scenarios"),
                                               strings_or_empty(r, p, "requirements"),
                                               enum_field(r, p, "outcome", verification_outcome_from_string)};
                                       }),
            text_or(value, path, "scenario_justification")};
    default:
        fail(path, "kind " + std::string{to_string(kind)} + " carries no structured payload");
    }
}

ArtefactRecord decode_record(const Json& value, const std::string& path)
{
    object(value, path);
    ArtefactRecord record;
    record.id = text_field(value, path, "id");
    record.kind = enum_field(value, path, "kind", artefact_kind_from_string);
    record.title = text_or(value, path, "title");
    if (const Json* content = optional_field(value, path, "content")) {
        const std::string where = path + ".content";
        record.content.type = enum_field(*content, where, "type", content_type_from_string);
        record.content.value = text_or(*content, where, "value");
    }
    record.digest = text_or(value, path, "digest");
    record.produced_by = optional_int(value, path, "produced_by");
    if (auto stage = optional_int(value, path, "stage")) {
        record.stage = *stage;
    } else if (auto producer = producing_stage(record.kind)) {
        record.stage = *producer;
    } else if (auto consumers = consuming_stages(record.kind); !consumers.empty()) {
        record.stage = consumers.front();
    }
    if (optional_field(value, path, "status") != nullptr) {
        record.status = enum_field(value, path, "status", artefact_status_from_string);
    }
    if (const Json* payload = optional_field(value, path, "payload")) {
        record.payload = decode_payload(record.kind, *payload, path + ".payload");
    }
    return record;
}

Diagnostic decode_diagnostic(const Json& value, const std::string& path)
{
    Diagnostic d;
    d.rule_id = text_field(value, path, "rule");
    d.severity = enum_field(value, path, "severity", severity_from_string);
    d.message = text_field(value, path, "message");
    d.subjects = strings_or_empty(value, path, "subjects");
    if (const Json* span = optional_field(value, path, "span")) {
        const std::string where = path + ".span";
        auto position = [&](const std::string& key) {
            const Json& p = field(*span, where, key);
            return SourcePos{optional_int(p, where + "." + key, "line").value_or(1),
                             optional_int(p, where + "." + key, "column").value_or(1)};
        };
        d.span = SourceSpan{text_field(*span, where, "file"), position("start"), position("end")};
    }
    return d;
}

template <typename T, typename Decode>
Expected<T> guarded(Decode decode)
{
    try {
        return decode();
    } catch (const DecodeError& e) {
        return structural(e);
    } catch (const Json::exception& e) {
        return Error::make(ErrorCode::StructuralError, std::string{"$: "} + e.what(), {"$"});
    }
}

Json header(std::string_view document)
{
    Json out = Json::object();
    out["schema"] = kSchemaVersion;
    out["document"] = document;
    return out;
}

// ---------------------------------------------------------------------------
// DOT

std::string dot_quote(std::string_view text)
{
    std::string out = "\"";
    for (char c : text) {
        if (c == '"' || c == '\\') {
            out += '\\';
            out += c;
        } else if (c == '\n') {
            out += "\\n";
        } else if (c != '\r') {
            out += c;
        }
    }
    return out + "\"";
}

std::string wrap(std::string_view text, std::size_t width = 40)
{
    std::string out;
    std::size_t line = 0;
    std::istringstream words{std::string{text}};
    std::string word;
    while (words >> word) {
        if (line > 0 && line + 1 + word.size() > width) {
            out += '\n';
            line = 0;
        } else if (line > 0) {
            out += ' ';
            ++line;
        }
        out += word;
        line += word.size();
    }
    return out;
}

std::string node_attributes(const GsnNode& node)
{
    std::string shape;
    std::string extra;
    std::string suffix;
    switch (node.kind) {
    case NodeKind::Goal:
        shape = "box";
        break;
    case NodeKind::Strategy:
        shape = "parallelogram";
        break;
    case NodeKind::Solution:
        shape = "circle";
        break;
    case NodeKind::Context:
        shape = "box";
        extra = ", style=rounded";
        break;
    case NodeKind::Assumption:
        shape = "ellipse";
        suffix = "\nA";
        break;
    case NodeKind::Justification:
        shape = "ellipse";
        suffix = "\nJ";
        break;
    case NodeKind::AssuranceClaimPoint:
        shape = "square";
        extra = ", style=filled, fillcolor=black";
        break;
    }
    return "shape=" + shape + extra + ", label=" + dot_quote(node.id + "\n" + wrap(node.text) + suffix);
}

void dot_body(std::ostringstream& out, const ArgumentGraph& graph, std::string_view indent)
{
    for (const auto& node : graph.nodes) {
        out << indent << dot_quote(node.id) << " [" << node_attributes(node) << "];\n";
        if (node.adornments.undeveloped) {
            out << indent << dot_quote(node.id + "__ud") << " [shape=diamond, label=\"\", width=0.3, height=0.3];\n";
            out << indent << dot_quote(node.id) << " -> " << dot_quote(node.id + "__ud") << " [arrowhead=none];\n";
        }
        if (node.adornments.requires_development) {
            out << indent << dot_quote(node.id + "__rd")
                << " [shape=Mdiamond, label=\"\", width=0.3, height=0.3];\n";
            out << indent << dot_quote(node.id) << " -> " << dot_quote(node.id + "__rd") << " [arrowhead=none];\n";
        }
    }
    for (const auto& relation : graph.relations) {
        std::vector<std::string> attributes;
        if (relation.kind == RelationKind::InContextOf) {
            attributes.emplace_back("style=dashed");
            attributes.emplace_back("arrowhead=empty");
        }
        if (relation.acp) {
            attributes.push_back("label=" + dot_quote("■ ACP " + *relation.acp));
        }
        out << indent << dot_quote(relation.from) << " -> " << dot_quote(relation.to);
        if (!attributes.empty()) {
            out << " [";
            for (std::size_t i = 0; i < attributes.size(); ++i) {
                out << (i > 0 ? ", " : "") << attributes[i];
            }
            out << "]";
        }
        out << ";\n";
    }
    for (std::size_t i = 0; i < graph.links.size(); ++i) {
        const auto& link = graph.links[i];
        if (link.kind != LinkKind::Continuation) {
            continue;
        }
        const std::string id = link.from + "__link" + std::to_string(i + 1);
        const std::string target = link.resolved() ? *link.target_graph + ":" + *link.target_node
                                                   : link.pattern + "." + link.node + " (unresolved)";
        out << indent << dot_quote(id) << " [shape=plaintext, label=" << dot_quote("continues as " + target) << "];\n";
        out << indent << dot_quote(link.from) << " -> " << dot_quote(id) << " [style=dotted];\n";
    }
}

void dot_preamble(std::ostringstream& out)
{
    out << "    rankdir=TB;\n";
    out << "    node [fontname=\"Helvetica\", fontsize=10];\n";
    out << "    edge [fontname=\"Helvetica\", fontsize=9];\n";
}

// ---------------------------------------------------------------------------
// Report

std::string md_escape(std::string_view text)
{
    std::string out;
    for (char c : text) {
        if (c == '|') {
            out += "\\|";
        } else if (c == '\n') {
            out += ' ';
        } else {
            out += c;
        }
    }
    return out;
}

std::string subjects_suffix(const Diagnostic& d)
{
    if (d.subjects.empty()) {
        return "";
    }
    std::string out = " (";
    for (std::size_t i = 0; i < d.subjects.size(); ++i) {
        out += (i > 0 ? ", " : "") + d.subjects[i];
    }
    return out + ")";
}

std::string short_type(MlRequirementType type)
{
    switch (type) {
    case MlRequirementType::Performance:
        return "perf";
    case MlRequirementType::Robustness:
        return "robust";
    case MlRequirementType::Other:
        return "other";
    }
    return "other";
}

}  // namespace

std::string canonical_json(const Json& document)
{
    return document.dump(2, ' ', false, Json::error_handler_t::replace) + "\n";
}

Expected<Json> parse_document(std::string_view text, std::string_view document)
{
    Json value;
    try {
        value = Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        return Error::make(ErrorCode::StructuralError,
                           "$: malformed JSON at byte " + std::to_string(e.byte), {"$"});
    }
    if (!value.is_object()) {
        return Error::make(ErrorCode::StructuralError, "$: expected an object", {"$"});
    }
    auto schema = value.find("schema");
    if (schema == value.end() || !schema->is_string()) {
        return Error::make(ErrorCode::StructuralError, "$.schema: missing schema version", {"$.schema"});
    }
    if (schema->get<std::string>() != kSchemaVersion) {
        return Error::make(ErrorCode::SchemaVersionMismatch,
                           "document declares " + schema->get<std::string>() + ", expected " +
                               std::string{kSchemaVersion},
                           {"$.schema"});
    }
    auto kind = value.find("document");
    if (kind == value.end() || !kind->is_string() || kind->get<std::string>() != document) {
        return Error::make(ErrorCode::StructuralError, "$.document: expected \"" + std::string{document} + "\"",
                           {"$.document"});
    }
    return value;
}

Json graph_to_json(const ArgumentGraph& graph)
{
    Json out = Json::object();
    out["name"] = graph.name;
    out["root"] = graph.root;
    out["nodes"] = Json::array();
    for (const auto& node : graph.nodes) {
        Json n = {{"id", node.id},
                  {"kind", to_string(node.kind)},
                  {"text", node.text},
                  {"undeveloped", node.adornments.undeveloped},
                  {"requires_development", node.adornments.requires_development}};
        if (node.for_each) {
            n["for_each"] = *node.for_each;
        }
        if (node.at_least) {
            n["at_least"] = *node.at_least;
        }
        out["nodes"].push_back(std::move(n));
    }
    out["relations"] = Json::array();
    for (const auto& relation : graph.relations) {
        Json r = {{"from", relation.from}, {"to", relation.to}, {"kind", to_string(relation.kind)}};
        if (relation.acp) {
            r["acp"] = *relation.acp;
        }
        out["relations"].push_back(std::move(r));
    }
    out["links"] = Json::array();
    for (const auto& link : graph.links) {
        Json l = {{"from", link.from}, {"kind", to_string(link.kind)}, {"pattern", link.pattern}, {"node", link.node}};
        if (link.item) {
            l["item"] = *link.item;
        }
        if (link.target_graph) {
            l["target_graph"] = *link.target_graph;
        }
        if (link.target_node) {
            l["target_node"] = *link.target_node;
        }
        out["links"].push_back(std::move(l));
    }
    out["bindings"] = Json::object();
    for (const auto& [name, ids] : graph.bindings) {
        out["bindings"][name] = ids;
    }
    return out;
}

Expected<ArgumentGraph> graph_from_json(const Json& value, const std::string& path)
{
    return guarded<ArgumentGraph>([&] { return decode_graph(value, path); });
}

Json payload_to_json(const Payload& payload)
{
    return std::visit(
        [](const auto& value) -> Json {
            using T = std::decay_t<decltype(value)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return nullptr;
            } else if constexpr (std::is_same_v<T, RequirementSet>) {
                Json list = Json::array();
                for (const auto& r : value.requirements) {
                    list.push_back({{"id", r.id},
                                    {"text", r.text},
                                    {"level", r.level == RequirementLevel::ML ? "ML" : "Allocated"},
                                    {"type", to_string(r.type)},
                                    {"traces_to", r.traces_to},
                                    {"assumptions", r.assumptions},
                                    {"derived_note", r.derived_note},
                                    {"justification", r.justification}});
                }
                return {{"requirements", list}};
            } else if constexpr (std::is_same_v<T, AssumptionSet>) {
                Json list = Json::array();
                for (const auto& a : value.assumptions) {
                    list.push_back({{"id", a.id}, {"text", a.text}, {"monitor", a.monitor}});
                }
                return {{"assumptions", list}};
            } else if constexpr (std::is_same_v<T, RequirementsValidation>) {
                return {{"method", value.method}, {"validated", value.validated}};
            } else if constexpr (std::is_same_v<T, DataRequirementSet>) {
                Json list = Json::array();
                for (const auto& d : value.requirements) {
                    list.push_back({{"id", d.id},
                                    {"category", to_string(d.category)},
                                    {"text", d.text},
                                    {"source_ml_requirements", d.source_ml_requirements}});
                }
                return {{"requirements", list}};
            } else if constexpr (std::is_same_v<T, DatasetDescriptor>) {
                Json coverage = Json::object();
                for (const auto& [id, c] : value.requirement_coverage) {
                    coverage[id] = {{"met", c.met}, {"justification", c.justification}};
                }
                return {{"role", to_string(value.role)},
                        {"sample_ids", std::vector<std::string>(value.sample_ids.begin(), value.sample_ids.end())},
                        {"requirement_coverage", coverage}};
            } else if constexpr (std::is_same_v<T, VerificationResults>) {
                Json list = Json::array();
                for (const auto& e : value.entries) {
                    list.push_back({{"id", e.id},
                                    {"requirement_id", e.requirement_id},
                                    {"method", to_string(e.method)},
                                    {"result", to_string(e.result)},
                                    {"independence_note", e.independence_note},
                                    {"formal_translation_justification", e.formal_translation_justification}});
                }
                return {{"entries", list}};
            } else if constexpr (std::is_same_v<T, VerificationLog>) {
                return {{"independence", value.independence}};
            } else if constexpr (std::is_same_v<T, ErroneousBehaviourLog>) {
                Json list = Json::array();
                for (const auto& e : value.entries) {
                    Json entry = {{"id", e.id}, {"direction", to_string(e.direction)}, {"description", e.description}};
                    if (e.monitor) {
                        entry["monitor"] = *e.monitor;
                    }
                    if (e.response) {
                        entry["response"] = *e.response;
                    }
                    list.push_back(std::move(entry));
                }
                return {{"entries", list}};
            } else if constexpr (std::is_same_v<T, ScenarioSet>) {
                Json list = Json::array();
                for (const auto& s : value.scenarios) {
                    list.push_back({{"id", s.id}, {"description", s.description}});
                }
                return {{"scenarios", list}};
            } else {
                Json list = Json::array();
                for (const auto& r : value.results) {
                    list.push_back({{"id", r.id},
                                    {"scenarios", r.scenarios},
                                    {"requirements", r.requirements},
                                    {"outcome", to_string(r.outcome)}});
                }
                return {{"results", list}, {"scenario_justification", value.scenario_justification}};
            }
        },
        payload);
}

Expected<Payload> payload_from_json(ArtefactKind kind, const Json& value, const std::string& path)
{
    return guarded<Payload>([&] { return decode_payload(kind, value, path); });
}

Json record_to_json(const ArtefactRecord& record)
{
    Json out = {{"id", record.id},
                {"kind", to_string(record.kind)},
                {"title", record.title},
                {"content", {{"type", to_string(record.content.type)}, {"value", record.content.value}}},
                {"digest", record.digest},
                {"stage", record.stage},
                {"status", to_string(record.status)}};
    if (record.produced_by) {
        out["produced_by"] = *record.produced_by;
    }
    if (!std::holds_alternative<std::monostate>(record.payload)) {
        out["payload"] = payload_to_json(record.payload);
    }
    return out;
}

Expected<ArtefactRecord> record_from_json(const Json& value, const std::string& path)
{
    return guarded<ArtefactRecord>([&] { return decode_record(value, path); });
}

Json diagnostic_to_json(const Diagnostic& d)
{
    Json out = {{"rule", d.rule_id}, {"severity", to_string(d.severity)}, {"message", d.message},
                {"subjects", d.subjects}};
    if (d.span) {
        out["span"] = {{"file", d.span->file},
                       {"start", {{"line", d.span->start.line}, {"column", d.span->start.column}}},
                       {"end", {{"line", d.span->end.line}, {"column", d.span->end.column}}}};
    }
    return out;
}

Expected<Diagnostic> diagnostic_from_json(const Json& value, const std::string& path)
{
    return guarded<Diagnostic>([&] { return decode_diagnostic(value, path); });
}

std::string to_json(const Registry& registry)
{
    Json out = header("registry");
    out["artefacts"] = Json::array();
    for (const auto& record : registry.records()) {
        out["artefacts"].push_back(record_to_json(record));
    }
    return canonical_json(out);
}

std::string to_json(const SafetyCase& safety_case)
{
    Json out = header("case");
    out["name"] = safety_case.name;
    out["arguments"] = Json::object();
    for (const auto& [kind, graphs] : safety_case.arguments) {
        Json list = Json::array();
        for (const auto& graph : graphs) {
            list.push_back(graph_to_json(graph));
        }
        out["arguments"][std::string{to_string(kind)}] = std::move(list);
    }
    out["diagnostics"] = Json::array();
    for (const auto& d : safety_case.diagnostics) {
        out["diagnostics"].push_back(diagnostic_to_json(d));
    }
    return canonical_json(out);
}

Expected<Registry> registry_from_json(std::string_view text)
{
    auto document = parse_document(text, "registry");
    if (!document) {
        return document.error();
    }
    auto records = guarded<std::vector<ArtefactRecord>>([&] {
        return list_of<ArtefactRecord>(*document, "$", "artefacts", decode_record);
    });
    if (!records) {
        return records.error();
    }
    Registry registry;
    for (auto& record : *records) {
        if (auto status = registry.add(std::move(record)); !status) {
            return status.error();
        }
    }
    return registry;
}

Expected<SafetyCase> case_from_json(std::string_view text)
{
    auto document = parse_document(text, "case");
    if (!document) {
        return document.error();
    }
    return guarded<SafetyCase>([&] {
        SafetyCase safety_case;
        safety_case.name = text_field(*document, "$", "name");
        const Json& arguments = object(field(*document, "$", "arguments"), "$.arguments");
        for (auto it = arguments.begin(); it != arguments.end(); ++it) {
            const std::string where = "$.arguments." + it.key();
            const auto kind = artefact_kind_from_string(it.key());
            if (!kind) {
                fail(where, "unknown argument kind");
            }
            safety_case.arguments[*kind] = list_of<ArgumentGraph>(arguments, "$.arguments", it.key(), decode_graph);
        }
        safety_case.diagnostics = list_of<Diagnostic>(*document, "$", "diagnostics", decode_diagnostic, false);
        return safety_case;
    });
}

std::string argument_to_json(const ArgumentDocument& document)
{
    Json out = header("argument");
    out["kind"] = to_string(document.kind);
    out["pattern"] = to_string(document.pattern);
    out["graphs"] = Json::array();
    for (const auto& graph : document.graphs) {
        out["graphs"].push_back(graph_to_json(graph));
    }
    return canonical_json(out);
}

Expected<ArgumentDocument> argument_from_json(std::string_view text)
{
    auto document = parse_document(text, "argument");
    if (!document) {
        return document.error();
    }
    return guarded<ArgumentDocument>([&] {
        ArgumentDocument out;
        out.kind = enum_field(*document, "$", "kind", artefact_kind_from_string);
        out.pattern = enum_field(*document, "$", "pattern", artefact_kind_from_string);
        out.graphs = list_of<ArgumentGraph>(*document, "$", "graphs", decode_graph);
        return out;
    });
}

std::vector<ArgumentDocument> argument_documents(const SafetyCase& safety_case)
{
    std::vector<ArgumentDocument> out;
    for (ArtefactKind pattern : pattern_kinds()) {
        const ArtefactKind kind = *argument_for_pattern(pattern);
        if (auto it = safety_case.arguments.find(kind); it != safety_case.arguments.end()) {
            out.push_back(ArgumentDocument{kind, pattern, it->second});
        }
    }
    return out;
}

SafetyCase case_from_arguments(std::string name, const std::vector<ArgumentDocument>& documents)
{
    SafetyCase out;
    out.name = std::move(name);
    for (const auto& document : documents) {
        out.arguments[document.kind] = document.graphs;
    }
    return out;
}

Expected<Registry> register_case(Registry registry, const SafetyCase& safety_case)
{
    for (const auto& document : argument_documents(safety_case)) {
        const std::string id{to_string(document.kind)};
        if (!registry.lookup_all(document.kind).empty() || registry.find(id) != nullptr) {
            continue;
        }
        const int stage = *producing_stage(document.kind);
        ArtefactRecord record;
        record.id = id;
        record.kind = document.kind;
        record.title = std::string{artefact_name(document.kind)};
        record.content = ContentRef{ContentType::Inline, argument_to_json(document)};
        record.stage = stage;
        record.produced_by = stage_spec(stage).activities.back();
        if (auto status = registry.add(std::move(record)); !status) {
            return status.error();
        }
    }
    return registry;
}

std::string to_dot(const ArgumentGraph& graph)
{
    std::ostringstream out;
    out << "digraph " << dot_quote(graph.name) << " {\n";
    dot_preamble(out);
    dot_body(out, graph, "    ");
    out << "}\n";
    return out.str();
}

std::string to_dot(const std::vector<ArgumentGraph>& graphs, std::string_view name)
{
    std::ostringstream out;
    out << "digraph " << dot_quote(name) << " {\n";
    dot_preamble(out);
    for (const auto& graph : graphs) {
        out << "    subgraph " << dot_quote("cluster_" + graph.name) << " {\n";
        out << "        label=" << dot_quote(graph.name) << ";\n";
        dot_body(out, graph, "        ");
        out << "    }\n";
    }
    out << "}\n";
    return out.str();
}

std::vector<std::string> traceability_rows(const Registry& registry)
{
    std::vector<SafetyRequirement> allocated;
    std::vector<SafetyRequirement> ml;
    std::vector<DataRequirement> data;
    std::vector<VerificationEntry> entries;
    std::vector<IntegrationResult> integration;
    for (const auto& record : registry.records()) {
        if (record.status != ArtefactStatus::Current) {
            continue;
        }
        if (const auto* set = std::get_if<RequirementSet>(&record.payload)) {
            auto& target = record.kind == ArtefactKind::E ? allocated : ml;
            target.insert(target.end(), set->requirements.begin(), set->requirements.end());
        } else if (const auto* l = std::get_if<DataRequirementSet>(&record.payload)) {
            data.insert(data.end(), l->requirements.begin(), l->requirements.end());
        } else if (const auto* z = std::get_if<VerificationResults>(&record.payload)) {
            entries.insert(entries.end(), z->entries.begin(), z->entries.end());
        } else if (const auto* ff = std::get_if<IntegrationResults>(&record.payload)) {
            integration.insert(integration.end(), ff->results.begin(), ff->results.end());
        }
    }
    auto by_id = [](const auto& a, const auto& b) { return a.id < b.id; };
    std::sort(allocated.begin(), allocated.end(), by_id);
    std::sort(ml.begin(), ml.end(), by_id);
    std::sort(data.begin(), data.end(), by_id);
    std::sort(entries.begin(), entries.end(), by_id);
    std::sort(integration.begin(), integration.end(), by_id);

    auto joined = [](const std::vector<std::string>& parts) {
        if (parts.empty()) {
            return std::string{"(none)"};
        }
        std::string out;
        for (const auto& part : parts) {
            out += (out.empty() ? "" : ", ") + part;
        }
        return out;
    };

    std::vector<std::string> rows;
    for (const auto& a : allocated) {
        std::vector<std::string> results;
        for (const auto& r : integration) {
            if (std::find(r.requirements.begin(), r.requirements.end(), a.id) != r.requirements.end()) {
                results.push_back(r.id);
            }
        }
        bool any = false;
        for (const auto& m : ml) {
            if (std::find(m.traces_to.begin(), m.traces_to.end(), a.id) == m.traces_to.end()) {
                continue;
            }
            any = true;
            std::vector<std::string> drs;
            for (const auto& d : data) {
                const auto& sources = d.source_ml_requirements;
                if (std::find(sources.begin(), sources.end(), m.id) != sources.end()) {
                    drs.push_back(d.id);
                }
            }
            std::vector<std::string> ves;
            for (const auto& e : entries) {
                if (e.requirement_id == m.id) {
                    ves.push_back(e.id + " (" + std::string{to_string(e.result)} + ")");
                }
            }
            rows.push_back(a.id + " → " + m.id + " (" + short_type(m.type) + ") → " + joined(drs) + " → " +
                           joined(ves) + " → " + joined(results));
        }
        if (!any) {
            rows.push_back(a.id + " → (none)");
        }
    }
    return rows;
}

std::string report(const ReportInput& input)
{
    const auto& registry = input.registry;
    const auto& safety_case = input.safety_case;
    const auto& findings = input.validation.findings;
    std::ostringstream out;

    auto count = [&](Severity severity) {
        return std::count_if(findings.begin(), findings.end(), [&](const Diagnostic& d) { return d.severity == severity; });
    };

    out << "# Safety case report: " << (safety_case.name.empty() ? "(unnamed)" : safety_case.name) << "\n\n";
    out << "## Summary\n\n";
    out << "- Registered artefacts: " << registry.size() << "\n";
    std::size_t graph_count = safety_case.graphs().size();
    out << "- Instantiated argument graphs: " << graph_count << "\n";
    out << "- Findings: " << count(Severity::Error) << " error(s), " << count(Severity::Warning) << " warning(s), "
        << count(Severity::Info) << " info\n";
    std::size_t suppressed = 0;
    for (const auto& w : input.validation.waived) {
        suppressed += w.suppressed.size();
    }
    out << "- Waived findings: " << suppressed << "\n";
    out << "- Result: " << (input.validation.clean() ? "no errors" : "errors present") << "\n\n";

    out << "## Artefact inventory\n\n";
    for (const auto& stage : stage_table()) {
        out << "### Stage " << stage.number << ": " << stage.name << "\n\n";
        bool any = false;
        for (const auto& record : registry.records()) {
            if (record.stage != stage.number) {
                continue;
            }
            if (!any) {
                out << "| Id | Kind | Title | Status | Digest |\n|---|---|---|---|---|\n";
                any = true;
            }
            out << "| " << md_escape(record.id) << " | " << to_string(record.kind) << " | " << md_escape(record.title)
                << " | " << to_string(record.status) << " | `" << record.digest << "` |\n";
        }
        out << (any ? "\n" : "No artefacts.\n\n");
    }

    out << "## Arguments\n\n";
    for (ArtefactKind pattern : pattern_kinds()) {
        const ArtefactKind kind = *argument_for_pattern(pattern);
        out << "### " << to_string(kind) << ": " << artefact_name(kind) << "\n\n";
        auto it = safety_case.arguments.find(kind);
        if (it == safety_case.arguments.end() || it->second.empty()) {
            out << "Not instantiated.\n\n";
            continue;
        }
        for (const auto& graph : it->second) {
            if (it->second.size() > 1 || graph.name != std::string{to_string(kind)}) {
                out << "#### " << graph.name << " (root " << graph.root << ")\n\n";
            }
            out << "| Node | Kind | Text | Marks |\n|---|---|---|---|\n";
            for (const auto& node : graph.nodes) {
                std::string marks;
                if (node.adornments.undeveloped) {
                    marks = "undeveloped";
                }
                if (node.adornments.requires_development) {
                    marks += std::string{marks.empty() ? "" : ", "} + "requires development";
                }
                if (node.at_least) {
                    marks += std::string{marks.empty() ? "" : ", "} + "at least " + std::to_string(*node.at_least);
                }
                out << "| " << md_escape(node.id) << " | " << to_string(node.kind) << " | " << md_escape(node.text)
                    << " | " << marks << " |\n";
            }
            out << "\n";
        }
    }

    out << "## Findings\n\n";
    if (findings.empty()) {
        out << "No findings.\n\n";
    } else {
        for (auto [severity, label] : {std::pair{Severity::Error, "Errors"}, std::pair{Severity::Warning, "Warnings"},
                                       std::pair{Severity::Info, "Info"}}) {
            const auto n = count(severity);
            if (n == 0) {
                continue;
            }
            out << "### " << label << " (" << n << ")\n\n";
            for (const auto& d : findings) {
                if (d.severity == severity) {
                    out << "- **" << d.rule_id << "** " << md_escape(d.message) << subjects_suffix(d) << "\n";
                }
            }
            out << "\n";
        }
    }

    out << "## Waivers\n\n";
    if (input.validation.waived.empty()) {
        out << "None.\n\n";
    } else {
        for (const auto& w : input.validation.waived) {
            out << "- **" << w.waiver.rule_id << "** waived: " << md_escape(w.waiver.justification) << " ("
                << w.suppressed.size() << " finding(s) suppressed)\n";
        }
        out << "\n";
    }

    out << "## Traceability matrix\n\n";
    const auto rows = traceability_rows(registry);
    if (rows.empty()) {
        out << "No allocated requirements.\n\n";
    } else {
        out << "Allocated requirement → ML requirement → data requirements → verification → integration\n\n";
        for (const auto& row : rows) {
            out << "- " << row << "\n";
        }
        out << "\n";
    }

    out << "## Open and undeveloped items\n\n";
    bool open = false;
    for (const auto* graph : safety_case.graphs()) {
        for (const auto& node : graph->nodes) {
            if (node.adornments.undeveloped || node.adornments.requires_development) {
                out << "- " << node.id << " in " << graph->name << " ("
                    << (node.adornments.undeveloped ? "undeveloped" : "requires development")
                    << "): " << md_escape(node.text) << "\n";
                open = true;
            }
        }
    }
    for (const auto& record : registry.records()) {
        if (record.status != ArtefactStatus::Current) {
            out << "- artefact " << record.id << " is " << to_string(record.status) << "\n";
            open = true;
        }
    }
    if (!open) {
        out << "None.\n";
    }
    return out.str();
}

}  // namespace amlas
