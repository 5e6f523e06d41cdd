#include "amlas/cli.hpp"

#include "amlas/emit.hpp"
#include "amlas/manifest.hpp"
#include "amlas/pattern_dsl.hpp"
#include "amlas/process.hpp"
#include "amlas/stages.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <ostream>

namespace amlas::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string dir;
    bool json = false;
    bool force = false;
    bool all = false;
    bool apply = false;
    int stage = 0;
    std::string changed;
    std::string format = "dot";
};

int exit_code(const Error& error)
{
    return error.code == ErrorCode::IoError ? kExitEnvironment : kExitFindings;
}

int report_error(const Error& error, std::ostream& err)
{
    err << "error: " << error.describe() << "\n";
    return exit_code(error);
}

Json diagnostics_json(const std::vector<Diagnostic>& diagnostics)
{
    Json list = Json::array();
    for (const auto& d : diagnostics) {
        list.push_back(diagnostic_to_json(d));
    }
    return list;
}

void print_diagnostics(const std::vector<Diagnostic>& diagnostics, std::ostream& err)
{
    for (const auto& d : diagnostics) {
        err << format_diagnostic(d) << "\n";
    }
}

fs::path out_dir(const Options& options)
{
    return fs::path{options.dir} / "out";
}

std::vector<Diagnostic> activity_findings(const CaseManifest& manifest)
{
    std::vector<Diagnostic> out;
    for (const auto& activity : manifest.activities) {
        auto found = check_activity_record(manifest.registry, activity);
        out.insert(out.end(), found.begin(), found.end());
    }
    return out;
}

std::string readme_text(std::string_view name)
{
    std::string text = "# " + std::string{name} + "\n\n";
    text += "Case directory for the amlas toolchain.\n\n";
    text += "- `manifest.json` declares the artefacts, bindings and waivers of the case.\n";
    text += "- `patterns/` holds the six argument patterns. Edit them to tailor the argument.\n";
    text += "- `out/` receives generated arguments, DOT files and the report.\n\n";
    text += "```\namlas check .\namlas instantiate . --all\namlas validate .\namlas render . --format dot\n```\n";
    return text;
}

int cmd_init(const Options& options, std::ostream& out, std::ostream& err)
{
    const fs::path dir{options.dir};
    std::error_code ec;
    if (fs::exists(dir, ec)) {
        if (!fs::is_directory(dir, ec)) {
            err << "error: " << dir.string() << " exists and is not a directory\n";
            return kExitEnvironment;
        }
        if (!fs::is_empty(dir, ec) && !options.force) {
            err << "error: " << dir.string() << " is not empty (use --force to overwrite)\n";
            return kExitEnvironment;
        }
    }
    const std::string name = dir.filename().empty() ? dir.parent_path().filename().string() : dir.filename().string();
    std::vector<std::pair<fs::path, std::string>> files;
    files.emplace_back(dir / kManifestFile, skeleton_manifest(name));
    for (ArtefactKind kind : pattern_kinds()) {
        files.emplace_back(dir / "patterns" / (std::string{to_string(kind)} + ".pattern"),
                           std::string{builtin_source(kind)});
    }
    files.emplace_back(dir / "README.md", readme_text(name));
    for (const auto& [path, bytes] : files) {
        if (auto written = write_file(path, bytes); !written) {
            return report_error(written.error(), err);
        }
        out << "wrote " << path.string() << "\n";
    }
    return kExitClean;
}

struct LoadedCase {
    CaseManifest manifest;
    PatternLoad patterns;
};

Expected<LoadedCase> load_case(const Options& options)
{
    auto manifest = load_manifest(options.dir);
    if (!manifest) {
        return manifest.error();
    }
    auto patterns = load_patterns(*manifest);
    if (!patterns) {
        return patterns.error();
    }
    return LoadedCase{std::move(*manifest), std::move(*patterns)};
}

int cmd_check(const Options& options, std::ostream& out, std::ostream& err)
{
    auto loaded = load_case(options);
    if (!loaded) {
        return report_error(loaded.error(), err);
    }
    std::vector<Diagnostic> findings = loaded->patterns.diagnostics;
    auto activities = activity_findings(loaded->manifest);
    findings.insert(findings.end(), activities.begin(), activities.end());
    auto rules = extend_rules(loaded->manifest.rules);
    if (!rules) {
        return report_error(rules.error(), err);
    }
    if (auto waivers = check_waivers(loaded->manifest.waivers, *rules); !waivers) {
        return report_error(waivers.error(), err);
    }
    print_diagnostics(findings, err);
    if (options.json) {
        Json document = {{"schema", kSchemaVersion}, {"document", "diagnostics"}, {"diagnostics", diagnostics_json(findings)}};
        out << canonical_json(document);
    }
    return has_errors(findings) ? kExitFindings : kExitClean;
}

int write_arguments(const std::vector<ArgumentDocument>& documents, const Options& options, std::ostream& out)
{
    std::vector<std::string> written;
    for (const auto& document : documents) {
        const fs::path path = out_dir(options) / (std::string{to_string(document.kind)} + ".json");
        if (auto status = write_file(path, argument_to_json(document)); !status) {
            throw status.error();
        }
        written.push_back(path.string());
    }
    if (options.json) {
        Json document = {{"schema", kSchemaVersion}, {"document", "outputs"}, {"written", written}};
        out << canonical_json(document);
    } else {
        for (const auto& path : written) {
            out << "wrote " << path << "\n";
        }
    }
    return kExitClean;
}

int cmd_instantiate(const Options& options, std::ostream& out, std::ostream& err)
{
    if (options.stage != 0 && options.all) {
        err << "error: --stage and --all are exclusive\n";
        return kExitEnvironment;
    }
    auto loaded = load_case(options);
    if (!loaded) {
        return report_error(loaded.error(), err);
    }
    if (has_errors(loaded->patterns.diagnostics)) {
        print_diagnostics(loaded->patterns.diagnostics, err);
        return kExitFindings;
    }
    const auto& manifest = loaded->manifest;
    AssembleOptions assemble{manifest.name, manifest.bindings, false};

    std::vector<ArgumentDocument> documents;
    if (options.stage != 0) {
        const ArtefactKind pattern = pattern_kinds()[static_cast<std::size_t>(options.stage - 1)];
        auto it = loaded->patterns.patterns.find(pattern);
        if (it == loaded->patterns.patterns.end()) {
            err << "error: pattern " << to_string(pattern) << " is unavailable\n";
            return kExitFindings;
        }
        auto graphs = instantiate_argument(it->second, manifest.registry, assemble);
        if (!graphs) {
            return report_error(graphs.error(), err);
        }
        documents.push_back(ArgumentDocument{*argument_for_pattern(pattern), pattern, std::move(*graphs)});
    } else {
        auto assembled = assemble_case(manifest.registry, loaded->patterns.patterns, assemble);
        if (!assembled) {
            return report_error(assembled.error(), err);
        }
        documents = argument_documents(*assembled);
    }
    try {
        return write_arguments(documents, options, out);
    } catch (const Error& error) {
        return report_error(error, err);
    }
}

int cmd_validate(const Options& options, std::ostream& out, std::ostream& err)
{
    auto loaded = load_case(options);
    if (!loaded) {
        return report_error(loaded.error(), err);
    }
    auto validation = evaluate_case(loaded->manifest, loaded->patterns);
    if (!validation) {
        return report_error(validation.error(), err);
    }
    const std::string text = report(ReportInput{validation->registry, validation->safety_case, validation->result});
    if (auto written = write_file(out_dir(options) / "report.md", text); !written) {
        return report_error(written.error(), err);
    }
    print_diagnostics(validation->result.findings, err);
    for (const auto& waived : validation->result.waived) {
        err << "waived " << waived.waiver.rule_id << " (" << waived.suppressed.size()
            << " finding(s)): " << waived.waiver.justification << "\n";
    }
    if (options.json) {
        Json waivers = Json::array();
        for (const auto& waived : validation->result.waived) {
            waivers.push_back({{"rule", waived.waiver.rule_id},
                               {"justification", waived.waiver.justification},
                               {"suppressed", diagnostics_json(waived.suppressed)}});
        }
        Json document = {{"schema", kSchemaVersion},
                         {"document", "validation"},
                         {"findings", diagnostics_json(validation->result.findings)},
                         {"waived", waivers}};
        out << canonical_json(document);
    }
    return validation->result.clean() ? kExitClean : kExitFindings;
}

int cmd_impact(const Options& options, std::ostream& out, std::ostream& err)
{
    auto loaded = load_case(options);
    if (!loaded) {
        return report_error(loaded.error(), err);
    }
    const auto& manifest = loaded->manifest;
    Registry registry = manifest.registry;
    AssembleOptions assemble{manifest.name, manifest.bindings, true};
    if (auto assembled = assemble_case(registry, loaded->patterns.patterns, assemble)) {
        if (auto registered = register_case(registry, *assembled)) {
            registry = std::move(*registered);
        }
    }
    auto result = impact(registry, options.changed);
    if (!result) {
        return report_error(result.error(), err);
    }
    if (options.json) {
        Json document = {{"schema", kSchemaVersion},
                         {"document", "impact"},
                         {"changed", result->changed},
                         {"stale", result->stale},
                         {"revisit", std::vector<int>(result->revisit.begin(), result->revisit.end())},
                         {"verification_failure", result->verification_failure}};
        out << canonical_json(document);
    } else {
        out << "changed: " << result->changed << "\n";
        out << "stale:";
        for (const auto& id : result->stale) {
            out << " " << id;
        }
        out << (result->stale.empty() ? " (none)\n" : "\n");
        out << "revisit:";
        for (int stage : result->revisit) {
            out << " " << stage;
        }
        out << (result->revisit.empty() ? " (none)\n" : "\n");
        for (int stage : result->revisit) {
            out << "  stage " << stage << ": " << stage_spec(stage).name << "\n";
        }
        if (result->verification_failure) {
            out << "verification failure recorded: revisit requirements, data and learning\n";
        }
    }
    if (options.apply) {
        const fs::path path = fs::path{options.dir} / kManifestFile;
        auto text = read_file(path);
        if (!text) {
            return report_error(text.error(), err);
        }
        auto rewritten = mark_stale(*text, std::set<std::string>(result->stale.begin(), result->stale.end()));
        if (!rewritten) {
            return report_error(rewritten.error(), err);
        }
        if (auto written = write_file(path, *rewritten); !written) {
            return report_error(written.error(), err);
        }
    }
    return kExitClean;
}

Expected<std::vector<ArgumentDocument>> read_arguments(const Options& options)
{
    std::vector<ArgumentDocument> documents;
    for (ArtefactKind pattern : pattern_kinds()) {
        const fs::path path = out_dir(options) / (std::string{to_string(*argument_for_pattern(pattern))} + ".json");
        std::error_code ec;
        if (!fs::exists(path, ec)) {
            continue;
        }
        auto text = read_file(path);
        if (!text) {
            return text.error();
        }
        auto document = argument_from_json(*text);
        if (!document) {
            Error error = document.error();
            error.message = path.filename().string() + ": " + error.message;
            return error;
        }
        documents.push_back(std::move(*document));
    }
    if (documents.empty()) {
        return Error::make(ErrorCode::UnknownArtefact,
                           "no instantiated arguments under " + out_dir(options).string() + "; run instantiate first",
                           {});
    }
    return documents;
}

int cmd_render(const Options& options, std::ostream& out, std::ostream& err)
{
    if (options.format != "dot" && options.format != "md") {
        err << "error: unknown format " << options.format << "\n";
        return kExitEnvironment;
    }
    std::error_code ec;
    if (!fs::is_directory(options.dir, ec)) {
        err << "error: no case directory at " << options.dir << "\n";
        return kExitEnvironment;
    }
    auto documents = read_arguments(options);
    if (!documents) {
        return report_error(documents.error(), err);
    }
    if (options.format == "dot") {
        for (const auto& document : *documents) {
            const std::string letters{to_string(document.kind)};
            std::string text;
            if (document.graphs.size() == 1 && document.kind != ArtefactKind::CC) {
                text = to_dot(document.graphs.front());
            } else {
                text = to_dot(document.graphs, letters);
            }
            const fs::path path = out_dir(options) / (letters + ".dot");
            if (auto written = write_file(path, text); !written) {
                return report_error(written.error(), err);
            }
            out << "wrote " << path.string() << "\n";
        }
        return kExitClean;
    }
    auto loaded = load_case(options);
    if (!loaded) {
        return report_error(loaded.error(), err);
    }
    SafetyCase safety_case = case_from_arguments(loaded->manifest.name, *documents);
    if (auto linked = resolve_links(safety_case, true); !linked) {
        return report_error(linked.error(), err);
    }
    auto validation = evaluate_case(loaded->manifest, loaded->patterns, std::move(safety_case));
    if (!validation) {
        return report_error(validation.error(), err);
    }
    const fs::path path = out_dir(options) / "report.md";
    if (auto written = write_file(
            path, report(ReportInput{validation->registry, validation->safety_case, validation->result}));
        !written) {
        return report_error(written.error(), err);
    }
    out << "wrote " << path.string() << "\n";
    return kExitClean;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Assurance case toolchain for machine-learnt components", "amlas"};
    app.require_subcommand(1);
    Options options;

    auto* init = app.add_subcommand("init", "Scaffold a case directory");
    init->add_option("dir", options.dir, "Case directory")->required();
    init->add_flag("--force", options.force, "Overwrite a non-empty directory");

    auto* check = app.add_subcommand("check", "Parse the manifest and patterns");
    check->add_option("dir", options.dir, "Case directory")->required();
    check->add_flag("--json", options.json, "Machine-readable output");

    auto* instantiate = app.add_subcommand("instantiate", "Instantiate argument patterns into out/");
    instantiate->add_option("dir", options.dir, "Case directory")->required();
    instantiate->add_option("--stage", options.stage, "Instantiate one stage's pattern")->check(CLI::Range(1, 6));
    instantiate->add_flag("--all", options.all, "Instantiate and link every pattern (default)");
    instantiate->add_flag("--json", options.json, "Machine-readable output");

    auto* validate = app.add_subcommand("validate", "Run every rule and write out/report.md");
    validate->add_option("dir", options.dir, "Case directory")->required();
    validate->add_flag("--json", options.json, "Machine-readable output");

    auto* impact_cmd = app.add_subcommand("impact", "List artefacts invalidated by a change");
    impact_cmd->add_option("dir", options.dir, "Case directory")->required();
    impact_cmd->add_option("--changed", options.changed, "Changed artefact id")->required();
    impact_cmd->add_flag("--apply", options.apply, "Mark the stale artefacts in manifest.json");
    impact_cmd->add_flag("--json", options.json, "Machine-readable output");

    auto* render = app.add_subcommand("render", "Render instantiated arguments");
    render->add_option("dir", options.dir, "Case directory")->required();
    render->add_option("--format", options.format, "dot or md")->check(CLI::IsMember({"dot", "md"}));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitClean : kExitEnvironment;
    }

    if (init->parsed()) {
        return cmd_init(options, out, err);
    }
    if (check->parsed()) {
        return cmd_check(options, out, err);
    }
    if (instantiate->parsed()) {
        return cmd_instantiate(options, out, err);
    }
    if (validate->parsed()) {
        return cmd_validate(options, out, err);
    }
    if (impact_cmd->parsed()) {
        return cmd_impact(options, out, err);
    }
    return cmd_render(options, out, err);
}

}  // namespace amlas::cli
