#pragma once

#include "amlas/artefacts.hpp"
#include "amlas/diagnostic.hpp"
#include "amlas/gsn.hpp"
#include "amlas/pattern_dsl.hpp"
#include "amlas/result.hpp"

#include <map>
#include <string>
#include <vector>

namespace amlas {

/// One bound parameter: the artefact it names and, for collections, the ordered item ids.
struct ParamBinding {
    std::string artefact;
    std::vector<std::string> items;

    bool operator==(const ParamBinding&) const = default;
};

using BindingSet = std::map<std::string, ParamBinding>;

/// Case-level binding choices read from the manifest.
struct CaseBindings {
    /// pattern letters (or "*" for every pattern) -> parameter name -> artefact id
    std::map<std::string, std::map<std::string, std::string>> params;
    /// artefact id -> explicit item order for collections drawn from it
    std::map<std::string, std::vector<std::string>> orders;

    bool operator==(const CaseBindings&) const = default;
};

/// Default bindings: singletons take the first Current record of their kind (by id),
/// collections take the matching items of that record in id order, unless `overrides`
/// say otherwise.
[[nodiscard]] Expected<BindingSet> derive_bindings(const PatternTemplate& pattern, const Registry& registry,
                                                   const CaseBindings& overrides = {});

inline constexpr std::string_view kChoiceRule = "INST-CHOICE";
inline constexpr std::string_view kBindingRule = "INST-BIND";
inline constexpr std::string_view kLinkRule = "INST-LINK";

struct InstantiateOptions {
    std::string name;    // graph name; defaults to the argument kind letters
    std::string suffix;  // appended to every node id, e.g. ".2"
    bool lenient = false;  // report unsatisfied choices as diagnostics instead of failing
};

struct Instance {
    ArgumentGraph graph;
    std::vector<Diagnostic> diagnostics;
};

[[nodiscard]] Expected<Instance> instantiate_pattern(const PatternTemplate& pattern, const BindingSet& bindings,
                                                     const Registry& registry, const InstantiateOptions& options = {});

using PatternSet = std::map<ArtefactKind, PatternTemplate>;

/// The six builtin templates keyed by pattern kind.
[[nodiscard]] PatternSet builtin_patterns();

/// Instantiated argument graphs keyed by argument kind (G, K, T, Y, CC, HH).
struct SafetyCase {
    std::string name;
    std::map<ArtefactKind, std::vector<ArgumentGraph>> arguments;
    std::vector<Diagnostic> diagnostics;

    [[nodiscard]] std::vector<const ArgumentGraph*> graphs() const;
    [[nodiscard]] const ArgumentGraph* find_graph(std::string_view name) const;

    bool operator==(const SafetyCase&) const = default;
};

struct AssembleOptions {
    std::string name;
    CaseBindings bindings;
    bool lenient = false;  // collect problems in SafetyCase::diagnostics and keep going
};

/// Graphs for one argument kind. CC yields one sub-argument per ML safety requirement
/// (graph "CC.r", node ids suffixed ".r"); the others yield a single graph.
[[nodiscard]] Expected<std::vector<ArgumentGraph>> instantiate_argument(const PatternTemplate& pattern,
                                                                        const Registry& registry,
                                                                        const AssembleOptions& options,
                                                                        std::vector<Diagnostic>* diagnostics = nullptr);

/// Fills each cross-link's target. Unresolvable links fail with DanglingContinuation
/// (or become diagnostics in lenient mode).
[[nodiscard]] Status resolve_links(SafetyCase& safety_case, bool lenient);

/// Instantiates every available pattern and links the results into one case.
[[nodiscard]] Expected<SafetyCase> assemble_case(const Registry& registry, const PatternSet& patterns,
                                                 const AssembleOptions& options = {});

}  // namespace amlas
