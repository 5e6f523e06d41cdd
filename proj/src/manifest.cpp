#include "amlas/manifest.hpp"

#include "amlas/emit.hpp"
#include "amlas/pattern_dsl.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace amlas {

namespace fs = std::filesystem;

namespace {

struct ManifestError {
    std::string path;
    std::string message;
};

[[noreturn]] void fail(const std::string& path, std::string message)
{
    throw ManifestError{path, std::move(message)};
}

const Json* member(const Json& value, const std::string& path, const std::string& key)
{
    if (!value.is_object()) {
        fail(path, "expected an object");
    }
    auto it = value.find(key);
    return it == value.end() || it->is_null() ? nullptr : &*it;
}

std::string string_member(const Json& value, const std::string& path, const std::string& key, bool required)
{
    const Json* found = member(value, path, key);
    if (found == nullptr) {
        if (required) {
            fail(path + "." + key, "missing field");
        }
        return {};
    }
    if (!found->is_string()) {
        fail(path + "." + key, "expected a string");
    }
    return found->get<std::string>();
}

std::vector<std::string> string_list(const Json& value, const std::string& path, const std::string& key)
{
    std::vector<std::string> out;
    const Json* found = member(value, path, key);
    if (found == nullptr) {
        return out;
    }
    if (!found->is_array()) {
        fail(path + "." + key, "expected an array");
    }
    for (std::size_t i = 0; i < found->size(); ++i) {
        if (!(*found)[i].is_string()) {
            fail(path + "." + key + "[" + std::to_string(i) + "]", "expected a string");
        }
        out.push_back((*found)[i].get<std::string>());
    }
    return out;
}

const Json& list_member(const Json& value, const std::string& path, const std::string& key)
{
    static const Json empty = Json::array();
    const Json* found = member(value, path, key);
    if (found == nullptr) {
        return empty;
    }
    if (!found->is_array()) {
        fail(path + "." + key, "expected an array");
    }
    return *found;
}

std::string item_path(const std::string& path, const std::string& key, std::size_t i)
{
    return path + "." + key + "[" + std::to_string(i) + "]";
}

std::vector<Waiver> parse_waivers(const Json& document, const std::string& path)
{
    std::vector<Waiver> out;
    const Json& list = list_member(document, path, "waivers");
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string where = item_path(path, "waivers", i);
        out.push_back(Waiver{string_member(list[i], where, "rule", true),
                             string_member(list[i], where, "justification", false)});
    }
    return out;
}

std::vector<ConfigRule> parse_rules(const Json& document)
{
    std::vector<ConfigRule> out;
    const Json& list = list_member(document, "$", "rules");
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string where = item_path("$", "rules", i);
        ConfigRule rule;
        rule.id = string_member(list[i], where, "id", true);
        rule.description = string_member(list[i], where, "description", false);
        const std::string severity = string_member(list[i], where, "severity", false);
        if (severity.empty() || severity == "Error") {
            rule.severity = Severity::Error;
        } else if (severity == "Warning") {
            rule.severity = Severity::Warning;
        } else if (severity == "Info") {
            rule.severity = Severity::Info;
        } else {
            fail(where + ".severity", "unknown value \"" + severity + "\"");
        }
        for (const auto& letters : string_list(list[i], where, "require_kinds")) {
            auto kind = artefact_kind_from_string(letters);
            if (!kind) {
                fail(where + ".require_kinds", "unknown artefact kind \"" + letters + "\"");
            }
            rule.require_kinds.push_back(*kind);
        }
        out.push_back(std::move(rule));
    }
    return out;
}

std::vector<std::string> sample_lines(std::string_view text)
{
    std::vector<std::string> out;
    std::istringstream lines{std::string{text}};
    std::string line;
    while (std::getline(lines, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        const auto last = line.find_last_not_of(" \t\r");
        out.push_back(line.substr(first, last - first + 1));
    }
    return out;
}

Error located(const ManifestError& e)
{
    return Error::make(ErrorCode::StructuralError, e.path + ": " + e.message, {e.path});
}

Expected<Json> read_side_document(const fs::path& path, std::string_view document)
{
    auto text = read_file(path);
    if (!text) {
        return text.error();
    }
    auto parsed = parse_document(*text, document);
    if (!parsed) {
        Error error = parsed.error();
        error.message = path.filename().string() + ": " + error.message;
        return error;
    }
    return parsed;
}

}  // namespace

Expected<std::string> read_file(const fs::path& path)
{
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) {
        return Error::make(ErrorCode::IoError, "cannot read " + path.string(), {path.string()});
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return Error::make(ErrorCode::IoError, "cannot open " + path.string(), {path.string()});
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

Status write_file(const fs::path& path, std::string_view bytes)
{
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        return Error::make(ErrorCode::IoError, "cannot write " + path.string(), {path.string()});
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        return Error::make(ErrorCode::IoError, "cannot write " + path.string(), {path.string()});
    }
    return ok();
}

Expected<CaseManifest> parse_manifest(std::string_view text, const fs::path& dir)
{
    auto document = parse_document(text, "manifest");
    if (!document) {
        return document.error();
    }
    CaseManifest manifest;
    manifest.dir = dir;
    try {
        const Json& root = *document;
        manifest.name = string_member(root, "$", "name", true);
        manifest.component = string_member(root, "$", "component", false);

        const Json& artefacts = list_member(root, "$", "artefacts");
        for (std::size_t i = 0; i < artefacts.size(); ++i) {
            const std::string where = item_path("$", "artefacts", i);
            Json declaration = artefacts[i];
            if (!declaration.is_object()) {
                fail(where, "expected an object");
            }
            if (auto payload = declaration.find("payload"); payload != declaration.end() && payload->is_object()) {
                if (auto file = payload->find("samples_file"); file != payload->end()) {
                    if (!file->is_string()) {
                        fail(where + ".payload.samples_file", "expected a string");
                    }
                    auto samples = read_file(dir / file->get<std::string>());
                    if (!samples) {
                        return samples.error();
                    }
                    Json ids = payload->value("sample_ids", Json::array());
                    for (auto& line : sample_lines(*samples)) {
                        ids.push_back(std::move(line));
                    }
                    (*payload)["sample_ids"] = std::move(ids);
                    payload->erase("samples_file");
                }
            }
            auto record = record_from_json(declaration, where);
            if (!record) {
                return record.error();
            }
            std::optional<std::string> bytes;
            switch (record->content.type) {
            case ContentType::File: {
                auto content = read_file(dir / record->content.value);
                if (!content) {
                    return content.error();
                }
                bytes = std::move(*content);
                break;
            }
            case ContentType::Builtin:
                if (!is_pattern_kind(record->kind)) {
                    fail(where + ".content.type", "builtin content is only available for pattern kinds");
                }
                bytes = std::string{builtin_source(record->kind)};
                break;
            case ContentType::Inline:
                break;
            }
            const std::string id = record->id;
            if (auto added = manifest.registry.add(std::move(*record), bytes); !added) {
                Error error = added.error();
                error.message = where + " (" + id + "): " + error.message;
                return error;
            }
        }

        if (const Json* bindings = member(root, "$", "bindings")) {
            if (!bindings->is_object()) {
                fail("$.bindings", "expected an object");
            }
            for (auto scope = bindings->begin(); scope != bindings->end(); ++scope) {
                const std::string where = "$.bindings." + scope.key();
                if (!scope->is_object()) {
                    fail(where, "expected an object");
                }
                for (auto param = scope->begin(); param != scope->end(); ++param) {
                    if (!param->is_string()) {
                        fail(where + "." + param.key(), "expected an artefact id");
                    }
                    manifest.bindings.params[scope.key()][param.key()] = param->get<std::string>();
                }
            }
        }
        if (const Json* orders = member(root, "$", "binding_orders")) {
            if (!orders->is_object()) {
                fail("$.binding_orders", "expected an object");
            }
            for (auto it = orders->begin(); it != orders->end(); ++it) {
                manifest.bindings.orders[it.key()] = string_list(*orders, "$.binding_orders", it.key());
            }
        }

        manifest.waivers = parse_waivers(root, "$");

        const Json& activities = list_member(root, "$", "activities");
        for (std::size_t i = 0; i < activities.size(); ++i) {
            const std::string where = item_path("$", "activities", i);
            const Json* number = member(activities[i], where, "activity");
            if (number == nullptr || !number->is_number_integer()) {
                fail(where + ".activity", "expected an activity number");
            }
            ActivityRecord activity;
            activity.activity = number->get<int>();
            activity.performed_at = string_member(activities[i], where, "performed_at", false);
            for (auto& id : string_list(activities[i], where, "consumed")) {
                activity.consumed.insert(std::move(id));
            }
            for (auto& id : string_list(activities[i], where, "produced")) {
                activity.produced.insert(std::move(id));
            }
            activity.notes = string_member(activities[i], where, "notes", false);
            manifest.activities.push_back(std::move(activity));
        }
    } catch (const ManifestError& e) {
        return located(e);
    } catch (const Json::exception& e) {
        return Error::make(ErrorCode::StructuralError, std::string{"$: "} + e.what(), {"$"});
    }
    return manifest;
}

Expected<CaseManifest> load_manifest(const fs::path& dir)
{
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        return Error::make(ErrorCode::IoError, "no case directory at " + dir.string(), {dir.string()});
    }
    auto text = read_file(dir / kManifestFile);
    if (!text) {
        return text.error();
    }
    auto manifest = parse_manifest(*text, dir);
    if (!manifest) {
        return manifest;
    }
    try {
        if (fs::exists(dir / kWaiverFile, ec)) {
            auto document = read_side_document(dir / kWaiverFile, "waivers");
            if (!document) {
                return document.error();
            }
            auto extra = parse_waivers(*document, "$");
            manifest->waivers.insert(manifest->waivers.end(), extra.begin(), extra.end());
        }
        if (fs::exists(dir / kRulesFile, ec)) {
            auto document = read_side_document(dir / kRulesFile, "rules");
            if (!document) {
                return document.error();
            }
            manifest->rules = parse_rules(*document);
        }
    } catch (const ManifestError& e) {
        return located(e);
    }
    return manifest;
}

Expected<PatternLoad> load_patterns(const CaseManifest& manifest)
{
    PatternLoad out;
    const char* override_dir = std::getenv(std::string{kPatternPathVariable}.c_str());
    std::vector<PatternTemplate> parsed;
    for (ArtefactKind kind : pattern_kinds()) {
        const std::string letters{to_string(kind)};
        std::string source;
        std::string file;
        std::error_code ec;
        if (override_dir != nullptr && *override_dir != '\0' &&
            fs::is_regular_file(fs::path{override_dir} / (letters + ".pattern"), ec)) {
            const fs::path path = fs::path{override_dir} / (letters + ".pattern");
            auto text = read_file(path);
            if (!text) {
                return text.error();
            }
            source = std::move(*text);
            file = path.string();
        } else if (auto records = manifest.registry.current(kind); !records.empty()) {
            const ArtefactRecord& record = *records.front();
            switch (record.content.type) {
            case ContentType::File: {
                auto text = read_file(manifest.dir / record.content.value);
                if (!text) {
                    return text.error();
                }
                source = std::move(*text);
                file = record.content.value;
                break;
            }
            case ContentType::Inline:
                source = record.content.value;
                file = record.id + " (inline)";
                break;
            case ContentType::Builtin:
                source = std::string{builtin_source(kind)};
                file = "<builtin " + letters + ">";
                break;
            }
        } else {
            source = std::string{builtin_source(kind)};
            file = "<builtin " + letters + ">";
        }
        ParseResult result = parse_pattern(source, file);
        out.diagnostics.insert(out.diagnostics.end(), result.diagnostics.begin(), result.diagnostics.end());
        if (result.pattern && result.ok()) {
            if (result.pattern->pattern_id != kind) {
                out.diagnostics.push_back(Diagnostic{std::string{dsl_rule::kPatternId}, Severity::Error,
                                                     "pattern " + std::string{to_string(result.pattern->pattern_id)} + " supplied for " +
                                                         letters,
                                                     {letters}, std::nullopt});
                continue;
            }
            parsed.push_back(*result.pattern);
            out.patterns.emplace(kind, std::move(*result.pattern));
        }
    }
    auto links = check_continuations(parsed);
    out.diagnostics.insert(out.diagnostics.end(), links.begin(), links.end());
    return out;
}

Expected<CaseEvaluation> evaluate_case(const CaseManifest& manifest, const PatternLoad& patterns,
                                       std::optional<SafetyCase> assembled)
{
    auto rules = extend_rules(manifest.rules);
    if (!rules) {
        return rules.error();
    }
    if (auto waivers = check_waivers(manifest.waivers, *rules); !waivers) {
        return waivers.error();
    }
    CaseEvaluation out;
    if (assembled) {
        out.safety_case = std::move(*assembled);
    } else {
        auto built = assemble_case(manifest.registry, patterns.patterns, {manifest.name, manifest.bindings, true});
        if (built) {
            out.safety_case = std::move(*built);
        } else {
            out.safety_case.name = manifest.name;
            out.assembly_error = built.error();
        }
    }
    auto registered = register_case(manifest.registry, out.safety_case);
    if (!registered) {
        return registered.error();
    }
    out.registry = std::move(*registered);
    out.result = validate_case(CaseSnapshot{out.registry, out.safety_case, out.assembly_error}, *rules,
                               manifest.waivers);

    auto& findings = out.result.findings;
    findings.insert(findings.end(), patterns.diagnostics.begin(), patterns.diagnostics.end());
    for (const auto& activity : manifest.activities) {
        auto found = check_activity_record(manifest.registry, activity);
        findings.insert(findings.end(), found.begin(), found.end());
    }
    sort_by_rule(findings);
    return out;
}

Expected<std::string> mark_stale(std::string_view manifest_text, const std::set<std::string>& ids)
{
    auto document = parse_document(manifest_text, "manifest");
    if (!document) {
        return document.error();
    }
    auto artefacts = document->find("artefacts");
    if (artefacts != document->end() && artefacts->is_array()) {
        for (auto& declaration : *artefacts) {
            if (!declaration.is_object()) {
                continue;
            }
            auto id = declaration.find("id");
            if (id != declaration.end() && id->is_string() && ids.contains(id->get<std::string>())) {
                declaration["status"] = to_string(ArtefactStatus::Stale);
            }
        }
    }
    return canonical_json(*document);
}

std::string skeleton_manifest(std::string_view name)
{
    Json document = {{"schema", kSchemaVersion}, {"document", "manifest"}, {"name", name}};
    document["component"] = "";
    document["artefacts"] = Json::array();
    for (ArtefactKind kind : pattern_kinds()) {
        const std::string letters{to_string(kind)};
        document["artefacts"].push_back({{"id", letters},
                                         {"kind", letters},
                                         {"title", std::string{artefact_name(kind)}},
                                         {"content", {{"type", "file"}, {"value", "patterns/" + letters + ".pattern"}}}});
    }
    document["bindings"] = Json::object();
    document["binding_orders"] = Json::object();
    document["waivers"] = Json::array();
    return canonical_json(document);
}

}  // namespace amlas
