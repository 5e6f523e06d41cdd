#pragma once

#include "amlas/diagnostic.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace amlas {

enum class NodeKind { Goal, Strategy, Solution, Context, Assumption, Justification, AssuranceClaimPoint };

inline constexpr NodeKind kAllNodeKinds[] = {
    NodeKind::Goal,       NodeKind::Strategy,      NodeKind::Solution,           NodeKind::Context,
    NodeKind::Assumption, NodeKind::Justification, NodeKind::AssuranceClaimPoint,
};

std::string_view to_string(NodeKind kind);
std::optional<NodeKind> node_kind_from_string(std::string_view text);

enum class RelationKind { SupportedBy, InContextOf };

std::string_view to_string(RelationKind kind);
std::optional<RelationKind> relation_kind_from_string(std::string_view text);

/// Whether a relation of `kind` may connect a `from` node to a `to` node.
[[nodiscard]] bool relation_allowed(RelationKind kind, NodeKind from, NodeKind to);

struct Adornments {
    bool undeveloped = false;
    bool requires_development = false;

    bool operator==(const Adornments&) const = default;
};

struct GsnNode {
    std::string id;
    NodeKind kind = NodeKind::Goal;
    std::string text;
    Adornments adornments;
    std::optional<std::string> for_each;  // template only
    std::optional<int> at_least;

    bool operator==(const GsnNode&) const = default;
};

struct GsnRelation {
    std::string from;
    std::string to;
    RelationKind kind = RelationKind::SupportedBy;
    std::optional<std::string> acp;

    bool operator==(const GsnRelation&) const = default;
};

enum class LinkKind { Continuation, Acp };

std::string_view to_string(LinkKind kind);

/// A link from a node in this graph to another pattern's argument. Templates carry
/// the target pattern and node; instances add the bound item (for per-requirement
/// continuations) and, once the case is assembled, the resolved target.
struct CrossLink {
    std::string from;
    LinkKind kind = LinkKind::Continuation;
    std::string pattern;  // pattern artefact kind, e.g. "BB"
    std::string node;     // target node id in the template; empty for ACPs (target root)
    std::optional<std::string> item;
    std::optional<std::string> target_graph;
    std::optional<std::string> target_node;

    [[nodiscard]] bool resolved() const { return target_graph.has_value() && target_node.has_value(); }
    /// "G2.2→R" style label used in diagnostics.
    [[nodiscard]] std::string label() const;

    bool operator==(const CrossLink&) const = default;
};

struct ArgumentGraph {
    std::string name;
    std::vector<GsnNode> nodes;
    std::vector<GsnRelation> relations;
    std::vector<CrossLink> links;
    std::string root;
    std::map<std::string, std::vector<std::string>> bindings;

    [[nodiscard]] const GsnNode* find(std::string_view id) const;
    [[nodiscard]] GsnNode* find(std::string_view id);
    [[nodiscard]] bool contains(std::string_view id) const { return find(id) != nullptr; }

    /// Relations leaving `id` of the given kind, in declaration order.
    [[nodiscard]] std::vector<const GsnRelation*> outgoing(std::string_view id, RelationKind kind) const;
    [[nodiscard]] std::vector<const GsnRelation*> incoming(std::string_view id) const;

    bool operator==(const ArgumentGraph&) const = default;
};

enum class GraphMode { Template, Instance };

/// Structural rule ids reported by check_wellformed.
namespace gsn_rule {
inline constexpr std::string_view kDuplicateId = "GSN-DUP-ID";
inline constexpr std::string_view kDangling = "GSN-DANGLING";
inline constexpr std::string_view kAcpNode = "GSN-ACP-NODE";
inline constexpr std::string_view kAdornment = "GSN-ADORNMENT";
inline constexpr std::string_view kForEach = "GSN-FOREACH";
inline constexpr std::string_view kAtLeast = "GSN-ATLEAST";
inline constexpr std::string_view kRelation = "GSN-RELATION";
inline constexpr std::string_view kCycle = "GSN-CYCLE";
inline constexpr std::string_view kRoot = "GSN-ROOT";
inline constexpr std::string_view kLeaf = "GSN-LEAF";
inline constexpr std::string_view kPlaceholder = "GSN-PLACEHOLDER";
}  // namespace gsn_rule

/// All structural findings for `graph` in `mode`, ordered by subject id then rule id.
/// Empty iff the graph is well-formed. Never throws on malformed input.
[[nodiscard]] std::vector<Diagnostic> check_wellformed(const ArgumentGraph& graph, GraphMode mode);

struct RootsAndLeaves {
    std::string root;
    std::set<std::string> leaves;
};

/// Leaves are goals with no outgoing SupportedBy relation.
[[nodiscard]] RootsAndLeaves roots_and_leaves(const ArgumentGraph& graph);

/// Placeholder names ({X} or {X.id}) appearing in `text`, in order of appearance.
[[nodiscard]] std::vector<std::string> placeholders_in(std::string_view text);

/// Strips a ".id" accessor: "perf.id" -> "perf".
[[nodiscard]] std::string_view placeholder_base(std::string_view placeholder);

}  // namespace amlas
