#pragma once

#include "amlas/artefacts.hpp"
#include "amlas/diagnostic.hpp"
#include "amlas/instantiate.hpp"
#include "amlas/process.hpp"
#include "amlas/result.hpp"
#include "amlas/validate.hpp"

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace amlas {

inline constexpr std::string_view kManifestFile = "manifest.json";
inline constexpr std::string_view kWaiverFile = "waivers.json";
inline constexpr std::string_view kRulesFile = "rules.json";
inline constexpr std::string_view kPatternPathVariable = "AMLAS_PATTERN_PATH";

/// A case directory: manifest.json plus referenced side files.
struct CaseManifest {
    std::filesystem::path dir;
    std::string name;
    std::string component;
    Registry registry;
    CaseBindings bindings;
    std::vector<Waiver> waivers;
    std::vector<ActivityRecord> activities;
    std::vector<ConfigRule> rules;
};

/// Reads `<dir>/manifest.json` and the optional waiver and rule files. Missing or
/// unreadable files give IoError; anything else wrong with the content is a content error.
[[nodiscard]] Expected<CaseManifest> load_manifest(const std::filesystem::path& dir);

/// Parses manifest text; side files are resolved against `dir`.
[[nodiscard]] Expected<CaseManifest> parse_manifest(std::string_view text, const std::filesystem::path& dir);

struct PatternLoad {
    PatternSet patterns;
    std::vector<Diagnostic> diagnostics;
};

/// Pattern sources, in order of preference: `$AMLAS_PATTERN_PATH/<ID>.pattern`, the
/// registered pattern artefact's content, the builtin text. Patterns that fail to
/// parse are left out and reported.
[[nodiscard]] Expected<PatternLoad> load_patterns(const CaseManifest& manifest);

struct CaseEvaluation {
    SafetyCase safety_case;
    Registry registry;  // manifest registry plus the registered arguments
    std::optional<Error> assembly_error;
    ValidationResult result;
};

/// Full rule run: assembles leniently (unless `assembled` is given), registers the
/// arguments, applies waivers and appends pattern and activity diagnostics.
[[nodiscard]] Expected<CaseEvaluation> evaluate_case(const CaseManifest& manifest, const PatternLoad& patterns,
                                                     std::optional<SafetyCase> assembled = std::nullopt);

/// Sets "status": "Stale" on the manifest's declarations of `ids`, keeping everything
/// else. Returns the new manifest text.
[[nodiscard]] Expected<std::string> mark_stale(std::string_view manifest_text, const std::set<std::string>& ids);

/// Manifest written by `init`: the six patterns as file artefacts and nothing else.
[[nodiscard]] std::string skeleton_manifest(std::string_view name);

[[nodiscard]] Expected<std::string> read_file(const std::filesystem::path& path);
[[nodiscard]] Status write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace amlas
