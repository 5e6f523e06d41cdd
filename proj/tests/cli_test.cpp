#include "amlas/cli.hpp"
#include "dot_reader.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>

namespace amlas {
namespace {

namespace fs = std::filesystem;
using testing::copy_fixture;
using testing::run_cli;
using testing::slurp;
using testing::TempDir;

std::size_t file_count(const fs::path& dir)
{
    std::size_t n = 0;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        n += entry.is_regular_file() ? 1 : 0;
    }
    return n;
}

TEST(Init, EmptyDirectoryGetsEightFiles)
{
    TempDir temp;
    const fs::path dir = temp.path() / "case";
    const auto result = run_cli({"init", dir.string()});
    EXPECT_EQ(result.code, 0) << result.err;
    EXPECT_EQ(file_count(dir), 8u);
    for (const char* id : {"F", "I", "R", "W", "BB", "GG"}) {
        EXPECT_TRUE(fs::exists(dir / "patterns" / (std::string{id} + ".pattern"))) << id;
    }
    EXPECT_TRUE(fs::exists(dir / "README.md"));
    EXPECT_EQ(run_cli({"check", dir.string()}).code, 0);
}

TEST(Init, NonEmptyDirectoryRefused)
{
    TempDir temp;
    std::ofstream(temp.path() / "keep.txt") << "x";
    const auto result = run_cli({"init", temp.path().string()});
    EXPECT_EQ(result.code, 2);
    EXPECT_FALSE(fs::exists(temp.path() / "manifest.json"));
}

TEST(Init, ForceOverwrites)
{
    TempDir temp;
    std::ofstream(temp.path() / "manifest.json") << "junk";
    const auto result = run_cli({"init", temp.path().string(), "--force"});
    EXPECT_EQ(result.code, 0);
    EXPECT_NE(slurp(temp.path() / "manifest.json"), "junk");
}

TEST(Check, FixtureIsClean)
{
    TempDir temp;
    copy_fixture(temp.path());
    const auto result = run_cli({"check", temp.path().string()});
    EXPECT_EQ(result.code, 0) << result.err;
    EXPECT_TRUE(result.err.empty());
}

TEST(Check, BrokenPatternReportsSpan)
{
    TempDir temp;
    ASSERT_EQ(run_cli({"init", temp.path().string(), "--force"}).code, 0);
    const fs::path pattern = temp.path() / "patterns" / "W.pattern";
    std::string source = slurp(pattern);
    source.replace(source.find("goal G4.2"), 9, "goal G4.2 {");
    std::ofstream(pattern, std::ios::trunc) << source;
    const auto result = run_cli({"check", temp.path().string()});
    EXPECT_EQ(result.code, 1);
    EXPECT_NE(result.err.find("patterns/W.pattern:"), std::string::npos) << result.err;
    EXPECT_NE(result.err.find("[DSL-SYNTAX]"), std::string::npos) << result.err;
}

TEST(Check, MissingDirectory)
{
    EXPECT_EQ(run_cli({"check", "/nonexistent/amlas/case"}).code, 2);
}

TEST(Check, JsonOutput)
{
    TempDir temp;
    copy_fixture(temp.path());
    const auto result = run_cli({"check", temp.path().string(), "--json"});
    ASSERT_EQ(result.code, 0);
    const Json document = Json::parse(result.out);
    EXPECT_EQ(document["schema"], "amlas-kit/1");
    EXPECT_EQ(document["diagnostics"], Json::array());
}

TEST(Check, MalformedManifest)
{
    TempDir temp;
    copy_fixture(temp.path(), [](Json& m) { m["artefacts"][2]["kind"] = 7; });
    const auto result = run_cli({"check", temp.path().string()});
    EXPECT_EQ(result.code, 1);
    EXPECT_NE(result.err.find("$.artefacts[2].kind"), std::string::npos) << result.err;
}

TEST(Instantiate, SingleStage)
{
    TempDir temp;
    copy_fixture(temp.path());
    const auto result = run_cli({"instantiate", temp.path().string(), "--stage", "2"});
    EXPECT_EQ(result.code, 0) << result.err;
    EXPECT_TRUE(fs::exists(temp.path() / "out" / "K.json"));
    EXPECT_EQ(file_count(temp.path() / "out"), 1u);
    const auto document = argument_from_json(slurp(temp.path() / "out" / "K.json"));
    ASSERT_TRUE(document);
    EXPECT_EQ(document->pattern, ArtefactKind::I);
}

TEST(Instantiate, NoVerificationEntries)
{
    TempDir temp;
    copy_fixture(temp.path(), [](Json& m) { testing::payload_list(m, "Z", "entries") = Json::array(); });
    const auto result = run_cli({"instantiate", temp.path().string(), "--stage", "5"});
    EXPECT_EQ(result.code, 1);
    EXPECT_NE(result.err.find("ChoiceUnsatisfied"), std::string::npos) << result.err;
}

TEST(Instantiate, AllTwiceIsByteIdentical)
{
    TempDir temp;
    copy_fixture(temp.path());
    ASSERT_EQ(run_cli({"instantiate", temp.path().string(), "--all"}).code, 0);
    std::map<std::string, std::string> first;
    for (const auto& entry : fs::directory_iterator(temp.path() / "out")) {
        first[entry.path().filename().string()] = slurp(entry.path());
    }
    EXPECT_EQ(first.size(), 6u);
    ASSERT_EQ(run_cli({"instantiate", temp.path().string(), "--all"}).code, 0);
    for (const auto& [name, bytes] : first) {
        EXPECT_EQ(slurp(temp.path() / "out" / name), bytes) << name;
    }
}

TEST(Instantiate, RejectsOutOfRangeStage)
{
    TempDir temp;
    copy_fixture(temp.path());
    EXPECT_EQ(run_cli({"instantiate", temp.path().string(), "--stage", "7"}).code, 2);
}

TEST(Validate, FixtureExitsClean)
{
    TempDir temp;
    copy_fixture(temp.path());
    const auto result = run_cli({"validate", temp.path().string()});
    EXPECT_EQ(result.code, 0) << result.err;
    const std::string report = slurp(temp.path() / "out" / "report.md");
    EXPECT_NE(report.find("### Info (7)"), std::string::npos);
    EXPECT_NE(report.find("SR-1 → MLSR-1 (perf) → DR-3 → VE-1 (Pass) → IT-1"), std::string::npos);
}

TEST(Validate, LeakageFails)
{
    TempDir temp;
    copy_fixture(temp.path(), testing::seeded_mutations()[6].apply);
    const auto result = run_cli({"validate", temp.path().string()});
    EXPECT_EQ(result.code, 1);
    const std::string report = slurp(temp.path() / "out" / "report.md");
    EXPECT_NE(report.find("**LEAK-1**"), std::string::npos);
}

TEST(Validate, WaiverFileRestoresCleanExit)
{
    TempDir temp;
    copy_fixture(temp.path(), testing::seeded_mutations()[6].apply);
    std::ofstream(temp.path() / "waivers.json")
        << R"({"schema": "amlas-kit/1", "document": "waivers",
               "waivers": [{"rule": "LEAK-1", "justification": "Frame reused as a calibration target"}]})";
    const auto result = run_cli({"validate", temp.path().string(), "--json"});
    EXPECT_EQ(result.code, 0) << result.err;
    const std::string report = slurp(temp.path() / "out" / "report.md");
    EXPECT_NE(report.find("**LEAK-1** waived: Frame reused as a calibration target"), std::string::npos);
    const Json document = Json::parse(result.out);
    EXPECT_EQ(document["waived"][0]["rule"], "LEAK-1");
}

TEST(Validate, UnknownWaiverRule)
{
    TempDir temp;
    copy_fixture(temp.path(), [](Json& m) { m["waivers"] = {{{"rule", "XYZ-9"}, {"justification", "r"}}}; });
    EXPECT_EQ(run_cli({"validate", temp.path().string()}).code, 1);
}

TEST(Validate, ConfiguredRules)
{
    TempDir temp;
    copy_fixture(temp.path());
    std::ofstream(temp.path() / "rules.json")
        << R"({"schema": "amlas-kit/1", "document": "rules", "rules": [
               {"id": "ORG-1", "severity": "Error", "description": "Hazard log registered", "require_kinds": ["GG", "D"]},
               {"id": "ORG-2", "severity": "Warning", "description": "Review log", "require_kinds": ["Q"]}]})";
    EXPECT_EQ(run_cli({"validate", temp.path().string()}).code, 0);
    std::ofstream(temp.path() / "rules.json", std::ios::trunc)
        << R"({"schema": "amlas-kit/1", "document": "rules", "rules": [
               {"id": "ORG-1", "description": "Model card", "require_kinds": ["S", "D", "U"]}]})";
    copy_fixture(temp.path(), [](Json& m) {
        Json kept = Json::array();
        for (auto& a : m["artefacts"]) {
            if (a["id"] != "U") {
                kept.push_back(a);
            }
        }
        m["artefacts"] = kept;
    });
    const auto result = run_cli({"validate", temp.path().string()});
    EXPECT_EQ(result.code, 1);
    EXPECT_NE(result.err.find("[ORG-1]"), std::string::npos) << result.err;
}

TEST(Impact, RequirementsChange)
{
    TempDir temp;
    copy_fixture(temp.path());
    const std::string before = slurp(temp.path() / "manifest.json");
    const auto result = run_cli({"impact", temp.path().string(), "--changed", "H", "--json"});
    ASSERT_EQ(result.code, 0) << result.err;
    const Json document = Json::parse(result.out);
    EXPECT_EQ(document["revisit"], Json::parse("[3, 4, 5, 6]"));
    EXPECT_EQ(slurp(temp.path() / "manifest.json"), before);
    EXPECT_FALSE(fs::exists(temp.path() / "out"));
}

TEST(Impact, TerminalArgument)
{
    TempDir temp;
    copy_fixture(temp.path());
    const auto result = run_cli({"impact", temp.path().string(), "--changed", "HH"});
    ASSERT_EQ(result.code, 0) << result.err;
    EXPECT_NE(result.out.find("stale: (none)"), std::string::npos);
    EXPECT_NE(result.out.find("revisit: (none)"), std::string::npos);
}

TEST(Impact, UnknownId)
{
    TempDir temp;
    copy_fixture(temp.path());
    EXPECT_EQ(run_cli({"impact", temp.path().string(), "--changed", "NOPE"}).code, 1);
}

TEST(Impact, ApplyPersistsStaleStatus)
{
    TempDir temp;
    copy_fixture(temp.path());
    ASSERT_EQ(run_cli({"impact", temp.path().string(), "--changed", "V", "--apply"}).code, 0);
    const auto manifest = load_manifest(temp.path());
    ASSERT_TRUE(manifest);
    EXPECT_EQ(manifest->registry.find("Z")->status, ArtefactStatus::Stale);
    EXPECT_EQ(manifest->registry.find("V")->status, ArtefactStatus::Current);
    EXPECT_EQ(manifest->registry.find("H")->status, ArtefactStatus::Current);
}

TEST(Render, DotAfterInstantiate)
{
    TempDir temp;
    copy_fixture(temp.path());
    ASSERT_EQ(run_cli({"instantiate", temp.path().string(), "--all"}).code, 0);
    const auto result = run_cli({"render", temp.path().string(), "--format", "dot"});
    ASSERT_EQ(result.code, 0) << result.err;
    std::size_t dot_files = 0;
    for (const auto& entry : fs::directory_iterator(temp.path() / "out")) {
        if (entry.path().extension() == ".dot") {
            ++dot_files;
            EXPECT_NO_THROW(testing::read_dot(slurp(entry.path()))) << entry.path();
        }
    }
    EXPECT_EQ(dot_files, 6u);
}

TEST(Render, BeforeInstantiate)
{
    TempDir temp;
    copy_fixture(temp.path());
    EXPECT_EQ(run_cli({"render", temp.path().string()}).code, 1);
}

TEST(Render, Markdown)
{
    TempDir temp;
    copy_fixture(temp.path());
    ASSERT_EQ(run_cli({"instantiate", temp.path().string(), "--all"}).code, 0);
    const auto result = run_cli({"render", temp.path().string(), "--format", "md"});
    ASSERT_EQ(result.code, 0) << result.err;
    const std::string report = slurp(temp.path() / "out" / "report.md");
    EXPECT_NE(report.find("# Safety case report: pedestrian-detection"), std::string::npos);
    EXPECT_NE(report.find("#### CC.4"), std::string::npos);
}

TEST(Usage, BadArguments)
{
    EXPECT_EQ(run_cli({}).code, 2);
    EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
    EXPECT_EQ(run_cli({"impact", "dir"}).code, 2);
    EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST(PatternPath, OverridesBuiltin)
{
    TempDir temp;
    copy_fixture(temp.path() / "case");
    fs::create_directories(temp.path() / "patterns");
    std::ofstream(temp.path() / "patterns" / "F.pattern") << "pattern F title \"x\" {\n  goal G1.1 text \"{\n}\n";
    ::setenv("AMLAS_PATTERN_PATH", (temp.path() / "patterns").c_str(), 1);
    const auto result = run_cli({"check", (temp.path() / "case").string()});
    ::unsetenv("AMLAS_PATTERN_PATH");
    EXPECT_EQ(result.code, 1);
    EXPECT_NE(result.err.find("F.pattern:"), std::string::npos) << result.err;
}

}  // namespace
}  // namespace amlas
