#include "support.hpp"

#include "amlas/cli.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace amlas::testing {

namespace fs = std::filesystem;

fs::path fixture_dir()
{
    return fs::path{AMLAS_FIXTURE_DIR};
}

std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

Json fixture_document()
{
    return Json::parse(slurp(fixture_dir() / "manifest.json"));
}

Json& artefact(Json& manifest, std::string_view id)
{
    for (auto& declaration : manifest["artefacts"]) {
        if (declaration["id"] == id) {
            return declaration;
        }
    }
    throw std::runtime_error("fixture has no artefact " + std::string{id});
}

Json& payload_list(Json& manifest, std::string_view id, std::string_view key)
{
    return artefact(manifest, id)["payload"][std::string{key}];
}

CaseManifest manifest_from(const Json& document)
{
    auto manifest = parse_manifest(canonical_json(document), fixture_dir());
    if (!manifest) {
        throw std::runtime_error(manifest.error().describe());
    }
    return std::move(*manifest);
}

CaseManifest fixture_manifest()
{
    return manifest_from(fixture_document());
}

CaseEvaluation evaluate(const CaseManifest& manifest)
{
    PatternLoad patterns{builtin_patterns(), {}};
    auto evaluation = evaluate_case(manifest, patterns);
    if (!evaluation) {
        throw std::runtime_error(evaluation.error().describe());
    }
    return std::move(*evaluation);
}

std::vector<Diagnostic> with_rule(const std::vector<Diagnostic>& findings, std::string_view rule)
{
    std::vector<Diagnostic> out;
    for (const auto& d : findings) {
        if (d.rule_id == rule) {
            out.push_back(d);
        }
    }
    return out;
}

std::set<std::string> error_rules(const std::vector<Diagnostic>& findings)
{
    std::set<std::string> out;
    for (const auto& d : findings) {
        if (d.severity == Severity::Error) {
            out.insert(d.rule_id);
        }
    }
    return out;
}

namespace {

void erase_where(Json& list, const std::function<bool(const Json&)>& predicate)
{
    Json kept = Json::array();
    for (auto& item : list) {
        if (!predicate(item)) {
            kept.push_back(item);
        }
    }
    list = std::move(kept);
}

void remove_artefact(Json& manifest, std::string_view id)
{
    erase_where(manifest["artefacts"], [&](const Json& a) { return a["id"] == id; });
    for (auto& activity : manifest["activities"]) {
        for (const char* key : {"consumed", "produced"}) {
            erase_where(activity[key], [&](const Json& v) { return v == id; });
        }
    }
}

}  // namespace

const std::vector<Mutation>& seeded_mutations()
{
    static const std::vector<Mutation> mutations{
        {"REQ-1", "allocated requirement SR-2 with no ML trace and no justification",
         [](Json& m) {
             payload_list(m, "E", "requirements")
                 .push_back({{"id", "SR-2"}, {"text", "Warn the driver when a pedestrian is detected"}});
         },
         {}},
        {"REQ-2", "robustness requirements MLSR-3 and MLSR-4 removed",
         [](Json& m) {
             erase_where(payload_list(m, "H", "requirements"),
                         [](const Json& r) { return r["id"] == "MLSR-3" || r["id"] == "MLSR-4"; });
         },
         {"ARG-1"}},
        {"REQ-3", "MLSR-4 dropped from the validation results",
         [](Json& m) {
             erase_where(payload_list(m, "J", "validated"), [](const Json& v) { return v == "MLSR-4"; });
         },
         {}},
        {"DATA-1", "DR-4 recategorised so no Balance requirement remains",
         [](Json& m) { payload_list(m, "L", "requirements")[3]["category"] = "Accuracy"; }, {}},
        {"DATA-2", "verification data records no validation against DR-2",
         [](Json& m) { artefact(m, "P")["payload"]["requirement_coverage"].erase("DR-2"); }, {}},
        {"DATA-3", "data requirements justification report M removed", [](Json& m) { remove_artefact(m, "M"); },
         {"ARG-1"}},
        {"LEAK-1", "one sample shared by development and verification data",
         [](Json& m) {
             artefact(m, "N")["payload"]["sample_ids"] = {"sha256:shared-frame"};
             artefact(m, "P")["payload"]["sample_ids"] = {"sha256:shared-frame"};
         },
         {}},
        {"LEAK-2", "one sample shared by development and internal test data",
         [](Json& m) {
             artefact(m, "N")["payload"]["sample_ids"] = {"sha256:shared-frame"};
             artefact(m, "O")["payload"]["sample_ids"] = {"sha256:shared-frame"};
         },
         {}},
        {"EMPTY-DS", "internal test data emptied",
         [](Json& m) {
             auto& payload = artefact(m, "O")["payload"];
             payload.erase("samples_file");
             payload["sample_ids"] = Json::array();
         },
         {}},
        {"VER-1", "verification entry VE-3 deleted",
         [](Json& m) { erase_where(payload_list(m, "Z", "entries"), [](const Json& e) { return e["id"] == "VE-3"; }); },
         {"ARG-1"}},
        {"VER-2", "independence statement cleared",
         [](Json& m) { artefact(m, "AA")["payload"]["independence"] = ""; }, {}},
        {"VER-3", "formal entry VE-5 loses its translation justification",
         [](Json& m) { payload_list(m, "Z", "entries")[4]["formal_translation_justification"] = ""; }, {}},
        {"DEP-1", "erroneous behaviour EB-1 loses its response",
         [](Json& m) { payload_list(m, "DD", "entries")[0].erase("response"); }, {}},
        {"DEP-2", "assumption ASM-1 loses its monitor",
         [](Json& m) { payload_list(m, "B", "assumptions")[0]["monitor"] = ""; }, {}},
        {"DEP-3", "integration results lose their scenario justification",
         [](Json& m) { artefact(m, "FF")["payload"]["scenario_justification"] = ""; }, {}},
        {"ARG-1", "erroneous behaviour log emptied",
         [](Json& m) { payload_list(m, "DD", "entries") = Json::array(); }, {}},
    };
    return mutations;
}

TempDir::TempDir()
{
    static std::mt19937_64 rng{std::random_device{}()};
    for (;;) {
        path_ = fs::temp_directory_path() / ("amlas-test-" + std::to_string(rng()));
        if (fs::create_directory(path_)) {
            break;
        }
    }
}

TempDir::~TempDir()
{
    std::error_code ec;
    fs::remove_all(path_, ec);
}

void copy_fixture(const fs::path& dir, const std::function<void(Json&)>& mutate)
{
    fs::create_directories(dir);
    fs::copy(fixture_dir() / "data", dir / "data", fs::copy_options::recursive | fs::copy_options::overwrite_existing);
    Json document = fixture_document();
    if (mutate) {
        mutate(document);
    }
    std::ofstream(dir / "manifest.json", std::ios::binary) << canonical_json(document);
}

CliResult run_cli(const std::vector<std::string>& args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace amlas::testing
