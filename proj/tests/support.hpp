#pragma once

#include "amlas/emit.hpp"
#include "amlas/manifest.hpp"

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace amlas::testing {

[[nodiscard]] std::filesystem::path fixture_dir();
[[nodiscard]] Json fixture_document();
[[nodiscard]] Json& artefact(Json& manifest, std::string_view id);
[[nodiscard]] Json& payload_list(Json& manifest, std::string_view id, std::string_view key);

/// Parses a manifest document with side files resolved against the fixture directory.
/// Throws std::runtime_error on failure.
[[nodiscard]] CaseManifest manifest_from(const Json& document);
[[nodiscard]] CaseManifest fixture_manifest();

/// Builtin patterns, evaluation through the same pipeline the CLI uses.
[[nodiscard]] CaseEvaluation evaluate(const CaseManifest& manifest);

[[nodiscard]] std::vector<Diagnostic> with_rule(const std::vector<Diagnostic>& findings, std::string_view rule);
[[nodiscard]] std::set<std::string> error_rules(const std::vector<Diagnostic>& findings);

struct Mutation {
    std::string rule;
    std::string description;
    std::function<void(Json&)> apply;
    std::set<std::string> entailed;  // other Error rules the mutation logically implies
};

/// One minimal fixture mutation per Error/Warning rule.
[[nodiscard]] const std::vector<Mutation>& seeded_mutations();

class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    [[nodiscard]] const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

/// Copies the fixture case into `dir`, optionally rewriting its manifest.
void copy_fixture(const std::filesystem::path& dir, const std::function<void(Json&)>& mutate = {});

[[nodiscard]] std::string slurp(const std::filesystem::path& path);

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};
[[nodiscard]] CliResult run_cli(const std::vector<std::string>& args);

}  // namespace amlas::testing
