#include "amlas/gsn.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

namespace amlas {

std::string_view to_string(NodeKind kind)
{
    switch (kind) {
    case NodeKind::Goal:
        return "Goal";
    case NodeKind::Strategy:
        return "Strategy";
    case NodeKind::Solution:
        return "Solution";
    case NodeKind::Context:
        return "Context";
    case NodeKind::Assumption:
        return "Assumption";
    case NodeKind::Justification:
        return "Justification";
    case NodeKind::AssuranceClaimPoint:
        return "AssuranceClaimPoint";
    }
    return "Goal";
}

std::optional<NodeKind> node_kind_from_string(std::string_view text)
{
    for (NodeKind kind : kAllNodeKinds) {
        if (to_string(kind) == text) {
            return kind;
        }
    }
    return std::nullopt;
}

std::string_view to_string(RelationKind kind)
{
    return kind == RelationKind::SupportedBy ? "SupportedBy" : "InContextOf";
}

std::optional<RelationKind> relation_kind_from_string(std::string_view text)
{
    if (text == "SupportedBy") {
        return RelationKind::SupportedBy;
    }
    if (text == "InContextOf") {
        return RelationKind::InContextOf;
    }
    return std::nullopt;
}

std::string_view to_string(LinkKind kind)
{
    return kind == LinkKind::Continuation ? "Continuation" : "Acp";
}

bool relation_allowed(RelationKind kind, NodeKind from, NodeKind to)
{
    if (kind == RelationKind::SupportedBy) {
        if (from == NodeKind::Goal) {
            return to == NodeKind::Goal || to == NodeKind::Strategy || to == NodeKind::Solution;
        }
        if (from == NodeKind::Strategy) {
            return to == NodeKind::Goal;
        }
        return false;
    }
    const bool source_ok = from == NodeKind::Goal || from == NodeKind::Strategy;
    const bool target_ok =
        to == NodeKind::Context || to == NodeKind::Assumption || to == NodeKind::Justification;
    return source_ok && target_ok;
}

std::string CrossLink::label() const
{
    return from + "→" + pattern;
}

const GsnNode* ArgumentGraph::find(std::string_view id) const
{
    auto it = std::find_if(nodes.begin(), nodes.end(), [&](const GsnNode& n) { return n.id == id; });
    return it == nodes.end() ? nullptr : &*it;
}

GsnNode* ArgumentGraph::find(std::string_view id)
{
    auto it = std::find_if(nodes.begin(), nodes.end(), [&](const GsnNode& n) { return n.id == id; });
    return it == nodes.end() ? nullptr : &*it;
}

std::vector<const GsnRelation*> ArgumentGraph::outgoing(std::string_view id, RelationKind kind) const
{
    std::vector<const GsnRelation*> out;
    for (const auto& relation : relations) {
        if (relation.from == id && relation.kind == kind) {
            out.push_back(&relation);
        }
    }
    return out;
}

std::vector<const GsnRelation*> ArgumentGraph::incoming(std::string_view id) const
{
    std::vector<const GsnRelation*> in;
    for (const auto& relation : relations) {
        if (relation.to == id) {
            in.push_back(&relation);
        }
    }
    return in;
}

namespace {

bool is_name_start(char c)
{
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}

bool is_name_char(char c)
{
    return is_name_start(c) || (c >= '0' && c <= '9');
}

Diagnostic finding(std::string_view rule, std::string message, std::vector<std::string> subjects)
{
    return Diagnostic{std::string{rule}, Severity::Error, std::move(message), std::move(subjects), std::nullopt};
}

// Tarjan's strongly connected components over the SupportedBy subgraph.
std::vector<std::vector<std::string>> support_cycles(const ArgumentGraph& graph)
{
    std::unordered_map<std::string, std::vector<std::string>> edges;
    for (const auto& relation : graph.relations) {
        if (relation.kind == RelationKind::SupportedBy && graph.contains(relation.from) &&
            graph.contains(relation.to)) {
            edges[relation.from].push_back(relation.to);
        }
    }

    std::unordered_map<std::string, int> index;
    std::unordered_map<std::string, int> lowlink;
    std::unordered_map<std::string, bool> on_stack;
    std::vector<std::string> stack;
    std::vector<std::vector<std::string>> cycles;
    int counter = 0;

    std::function<void(const std::string&)> visit = [&](const std::string& v) {
        index[v] = lowlink[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (const auto& w : edges[v]) {
            if (!index.contains(w)) {
                visit(w);
                lowlink[v] = std::min(lowlink[v], lowlink[w]);
            } else if (on_stack[w]) {
                lowlink[v] = std::min(lowlink[v], index[w]);
            }
        }
        if (lowlink[v] == index[v]) {
            std::vector<std::string> component;
            std::string w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                component.push_back(w);
            } while (w != v);
            const auto& out = edges[v];
            const bool self_loop = std::find(out.begin(), out.end(), v) != out.end();
            if (component.size() > 1 || self_loop) {
                std::sort(component.begin(), component.end());
                cycles.push_back(std::move(component));
            }
        }
    };

    for (const auto& node : graph.nodes) {
        if (!index.contains(node.id)) {
            visit(node.id);
        }
    }
    return cycles;
}

}  // namespace

std::vector<std::string> placeholders_in(std::string_view text)
{
    std::vector<std::string> names;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '{') {
            continue;
        }
        std::size_t j = i + 1;
        if (j >= text.size() || !is_name_start(text[j])) {
            continue;
        }
        while (j < text.size() && is_name_char(text[j])) {
            ++j;
        }
        if (text.substr(j, 3) == ".id") {
            j += 3;
        }
        if (j < text.size() && text[j] == '}') {
            names.emplace_back(text.substr(i + 1, j - i - 1));
            i = j;
        }
    }
    return names;
}

std::string_view placeholder_base(std::string_view placeholder)
{
    if (placeholder.size() > 3 && placeholder.ends_with(".id")) {
        return placeholder.substr(0, placeholder.size() - 3);
    }
    return placeholder;
}

std::vector<Diagnostic> check_wellformed(const ArgumentGraph& graph, GraphMode mode)
{
    std::vector<Diagnostic> out;

    std::unordered_map<std::string, int> seen;
    for (const auto& node : graph.nodes) {
        if (++seen[node.id] == 2) {
            out.push_back(finding(gsn_rule::kDuplicateId, "duplicate node id " + node.id, {node.id}));
        }
    }

    for (const auto& node : graph.nodes) {
        if (node.kind == NodeKind::AssuranceClaimPoint) {
            out.push_back(finding(gsn_rule::kAcpNode,
                                  "assurance claim point " + node.id + " must label a relation, not stand alone",
                                  {node.id}));
        }
        if (node.adornments.undeveloped && node.kind != NodeKind::Goal && node.kind != NodeKind::Strategy) {
            out.push_back(finding(gsn_rule::kAdornment,
                                  "undeveloped adornment on " + std::string{to_string(node.kind)} + " " + node.id,
                                  {node.id}));
        }
        if (node.for_each && mode == GraphMode::Instance) {
            out.push_back(finding(gsn_rule::kForEach, "forEach left on instantiated node " + node.id, {node.id}));
        }
        if (node.at_least) {
            const int n = *node.at_least;
            const auto support = graph.outgoing(node.id, RelationKind::SupportedBy).size();
            if (n < 1) {
                out.push_back(finding(gsn_rule::kAtLeast, "atLeast must be at least 1 on " + node.id, {node.id}));
            } else if (support < static_cast<std::size_t>(n)) {
                out.push_back(finding(gsn_rule::kAtLeast,
                                      "choice at " + node.id + " needs " + std::to_string(n) + " alternatives, has " +
                                          std::to_string(support),
                                      {node.id}));
            }
        }
        if (mode == GraphMode::Instance) {
            for (const auto& name : placeholders_in(node.text)) {
                out.push_back(
                    finding(gsn_rule::kPlaceholder, "unbound placeholder {" + name + "} in " + node.id, {node.id}));
            }
        }
    }

    for (const auto& relation : graph.relations) {
        const GsnNode* from = graph.find(relation.from);
        const GsnNode* to = graph.find(relation.to);
        if (from == nullptr || to == nullptr) {
            const std::string& missing = from == nullptr ? relation.from : relation.to;
            out.push_back(finding(gsn_rule::kDangling,
                                  "dangling reference " + missing + " in relation " + relation.from + " -> " +
                                      relation.to,
                                  {missing}));
            continue;
        }
        if (!relation_allowed(relation.kind, from->kind, to->kind)) {
            const std::string what =
                relation.kind == RelationKind::SupportedBy ? "illegal support direction" : "illegal context relation";
            out.push_back(finding(gsn_rule::kRelation,
                                  what + " " + std::string{to_string(from->kind)} + "→" +
                                      std::string{to_string(to->kind)} + " (" + relation.from + " -> " + relation.to +
                                      ")",
                                  {relation.from}));
        }
    }

    for (const auto& link : graph.links) {
        if (!graph.contains(link.from)) {
            out.push_back(finding(gsn_rule::kDangling, "dangling reference " + link.from + " in link to " +
                                                           link.pattern,
                                  {link.from}));
        }
    }

    const GsnNode* root = graph.find(graph.root);
    if (root == nullptr) {
        out.push_back(finding(gsn_rule::kRoot, "root " + graph.root + " is not a node of the graph", {graph.root}));
    } else if (root->kind != NodeKind::Goal) {
        out.push_back(finding(gsn_rule::kRoot, "root " + graph.root + " is not a Goal", {graph.root}));
    }

    for (auto& cycle : support_cycles(graph)) {
        out.push_back(finding(gsn_rule::kCycle, "cycle in support structure", std::move(cycle)));
    }

    for (const auto& node : graph.nodes) {
        if (node.kind != NodeKind::Goal) {
            continue;
        }
        bool developed = false;
        bool has_solution = false;
        for (const auto* relation : graph.outgoing(node.id, RelationKind::SupportedBy)) {
            const GsnNode* child = graph.find(relation->to);
            if (child == nullptr) {
                continue;
            }
            developed = developed || child->kind == NodeKind::Goal || child->kind == NodeKind::Strategy;
            has_solution = has_solution || child->kind == NodeKind::Solution;
        }
        if (developed || has_solution || node.adornments.undeveloped || node.adornments.requires_development) {
            continue;
        }
        const bool continued = std::any_of(graph.links.begin(), graph.links.end(), [&](const CrossLink& link) {
            return link.from == node.id && link.kind == LinkKind::Continuation;
        });
        if (!continued) {
            out.push_back(finding(gsn_rule::kLeaf, "unsupported leaf goal " + node.id, {node.id}));
        }
    }

    sort_by_subject(out);
    return out;
}

RootsAndLeaves roots_and_leaves(const ArgumentGraph& graph)
{
    RootsAndLeaves result{graph.root, {}};
    for (const auto& node : graph.nodes) {
        if (node.kind == NodeKind::Goal && graph.outgoing(node.id, RelationKind::SupportedBy).empty()) {
            result.leaves.insert(node.id);
        }
    }
    return result;
}

}  // namespace amlas
