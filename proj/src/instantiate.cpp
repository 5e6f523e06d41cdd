#include "amlas/instantiate.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace amlas {

namespace {

const std::string* override_for(const CaseBindings& overrides, ArtefactKind pattern, const std::string& param)
{
    for (const std::string& scope : {std::string{to_string(pattern)}, std::string{"*"}}) {
        if (auto it = overrides.params.find(scope); it != overrides.params.end()) {
            if (auto p = it->second.find(param); p != it->second.end()) {
                return &p->second;
            }
        }
    }
    return nullptr;
}

std::vector<std::string> ordered_items(const ArtefactRecord& record, const std::string& category,
                                       const CaseBindings& overrides)
{
    auto items = items_of(record, category);
    std::vector<std::string> ids;
    for (const auto& item : items) {
        ids.push_back(item.id);
    }
    std::sort(ids.begin(), ids.end());
    auto order = overrides.orders.find(record.id);
    if (order == overrides.orders.end()) {
        return ids;
    }
    std::vector<std::string> out;
    for (const auto& id : order->second) {
        if (std::find(ids.begin(), ids.end(), id) != ids.end() && std::find(out.begin(), out.end(), id) == out.end()) {
            out.push_back(id);
        }
    }
    for (const auto& id : ids) {
        if (std::find(out.begin(), out.end(), id) == out.end()) {
            out.push_back(id);
        }
    }
    return out;
}

// Nodes reachable from `start` over any relation that cannot be reached from the root
// without passing through `start`.
std::set<std::string> exclusive_subtree(const ArgumentGraph& graph, const std::string& start)
{
    auto reach = [&](const std::string& from, const std::string& blocked) {
        std::set<std::string> seen;
        std::deque<std::string> queue{from};
        while (!queue.empty()) {
            const std::string id = queue.front();
            queue.pop_front();
            if (id == blocked || !seen.insert(id).second) {
                continue;
            }
            for (const auto& r : graph.relations) {
                if (r.from == id) {
                    queue.push_back(r.to);
                }
            }
        }
        return seen;
    };
    const auto under = reach(start, "");
    const auto elsewhere = reach(graph.root, start);
    std::set<std::string> out;
    for (const auto& id : under) {
        if (!elsewhere.contains(id)) {
            out.insert(id);
        }
    }
    return out;
}

std::string sanitize(std::string_view value)
{
    std::string out{value};
    std::replace(out.begin(), out.end(), '{', '(');
    std::replace(out.begin(), out.end(), '}', ')');
    return out;
}

struct ResolvedParam {
    const PatternParam* param = nullptr;
    const ArtefactRecord* record = nullptr;
    std::vector<PayloadItem> items;
};

struct ItemContext {
    std::string param;
    const PayloadItem* item = nullptr;
};

std::string join_items(const std::vector<PayloadItem>& items, bool ids)
{
    if (items.empty()) {
        return "(none)";
    }
    std::string out;
    for (const auto& item : items) {
        if (!out.empty()) {
            out += ids ? ", " : "; ";
        }
        out += ids ? item.id : item.text;
    }
    return out;
}

std::string substitute(std::string_view text, const std::map<std::string, ResolvedParam>& params,
                       const ItemContext& context)
{
    std::string out;
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '{') {
            out += text[i++];
            continue;
        }
        const auto close = text.find('}', i);
        if (close == std::string_view::npos) {
            out += text.substr(i);
            break;
        }
        const std::string_view inner = text.substr(i + 1, close - i - 1);
        const auto names = placeholders_in(text.substr(i, close - i + 1));
        if (names.size() != 1 || names.front() != inner) {
            out += text[i++];
            continue;
        }
        const bool want_id = inner.size() > 3 && inner.ends_with(".id");
        const std::string base{placeholder_base(inner)};
        auto it = params.find(base);
        if (it == params.end()) {
            out += text.substr(i, close - i + 1);
        } else if (context.item != nullptr && context.param == base) {
            out += sanitize(want_id ? context.item->id : context.item->text);
        } else if (it->second.param->form == ParamForm::Collection) {
            out += sanitize(join_items(it->second.items, want_id));
        } else {
            out += sanitize(want_id ? it->second.record->id : it->second.record->title);
        }
        i = close + 1;
    }
    return out;
}

}  // namespace

Expected<BindingSet> derive_bindings(const PatternTemplate& pattern, const Registry& registry,
                                     const CaseBindings& overrides)
{
    BindingSet out;
    auto default_record = [&](ArtefactKind kind) -> const ArtefactRecord* {
        const auto current = registry.current(kind);
        return current.empty() ? nullptr : current.front();
    };

    for (const auto& param : pattern.params) {
        if (param.form != ParamForm::Artefact) {
            continue;
        }
        if (const std::string* id = override_for(overrides, pattern.pattern_id, param.name)) {
            const ArtefactRecord* record = registry.find(*id);
            if (record == nullptr) {
                return Error::make(ErrorCode::UnknownArtefact, "binding for " + param.name + " names no artefact",
                                   {*id});
            }
            if (record->kind != param.kind) {
                return Error::make(ErrorCode::KindMismatch,
                                   "parameter " + param.name + " expects kind " + std::string{to_string(param.kind)} +
                                       ", " + *id + " is " + std::string{to_string(record->kind)},
                                   {param.name, *id});
            }
            out[param.name] = ParamBinding{*id, {}};
        } else if (const ArtefactRecord* record = default_record(param.kind)) {
            out[param.name] = ParamBinding{record->id, {}};
        } else {
            return Error::make(ErrorCode::UnboundParameter,
                               "no Current artefact of kind " + std::string{to_string(param.kind)} +
                                   " for parameter " + param.name,
                               {param.name});
        }
    }
    for (const auto& param : pattern.params) {
        if (param.form != ParamForm::Collection) {
            continue;
        }
        std::string source;
        if (const std::string* id = override_for(overrides, pattern.pattern_id, param.name)) {
            source = *id;
        } else {
            for (const auto& other : pattern.params) {
                if (other.form == ParamForm::Artefact && other.kind == param.kind) {
                    source = out[other.name].artefact;
                    break;
                }
            }
            if (source.empty()) {
                if (const ArtefactRecord* record = default_record(param.kind)) {
                    source = record->id;
                }
            }
        }
        const ArtefactRecord* record = registry.find(source);
        if (record != nullptr && record->kind != param.kind) {
            return Error::make(ErrorCode::KindMismatch,
                               "parameter " + param.name + " expects kind " + std::string{to_string(param.kind)} +
                                   ", " + source + " is " + std::string{to_string(record->kind)},
                               {param.name, source});
        }
        if (record == nullptr) {
            return Error::make(ErrorCode::UnboundParameter,
                               "no Current artefact of kind " + std::string{to_string(param.kind)} +
                                   " for parameter " + param.name,
                               {param.name});
        }
        out[param.name] = ParamBinding{source, ordered_items(*record, param.category, overrides)};
    }
    return out;
}

Expected<Instance> instantiate_pattern(const PatternTemplate& pattern, const BindingSet& bindings,
                                       const Registry& registry, const InstantiateOptions& options)
{
    Instance result;
    std::map<std::string, ResolvedParam> resolved;
    for (const auto& param : pattern.params) {
        auto bound = bindings.find(param.name);
        if (bound == bindings.end()) {
            return Error::make(ErrorCode::UnboundParameter, "parameter " + param.name + " has no binding",
                               {param.name});
        }
        const ArtefactRecord* record = registry.find(bound->second.artefact);
        if (record == nullptr) {
            return Error::make(ErrorCode::UnboundParameter,
                               "parameter " + param.name + " is bound to unregistered artefact " +
                                   bound->second.artefact,
                               {param.name});
        }
        if (record->kind != param.kind) {
            return Error::make(ErrorCode::KindMismatch,
                               "parameter " + param.name + " expects kind " + std::string{to_string(param.kind)} +
                                   ", " + record->id + " is " + std::string{to_string(record->kind)},
                               {param.name, record->id});
        }
        ResolvedParam entry{&param, record, {}};
        if (param.form == ParamForm::Collection) {
            const auto available = items_of(*record, param.category);
            for (const auto& id : bound->second.items) {
                auto it = std::find_if(available.begin(), available.end(),
                                       [&](const PayloadItem& item) { return item.id == id; });
                if (it == available.end()) {
                    return Error::make(ErrorCode::KindMismatch,
                                       id + " is not a " + param.category + " item of " + record->id,
                                       {param.name, id});
                }
                entry.items.push_back(*it);
            }
        }
        resolved.emplace(param.name, std::move(entry));
    }

    ArgumentGraph graph = pattern.graph;

    auto binding_empty = [&](const GsnNode& node) {
        return node.for_each && resolved.at(*node.for_each).items.empty();
    };

    // Choice points: prune alternatives that the bindings do not supply.
    for (const auto& node : pattern.graph.nodes) {
        if (!node.at_least) {
            continue;
        }
        std::set<std::string> pruned;
        int supplied = 0;
        for (const auto* relation : pattern.graph.outgoing(node.id, RelationKind::SupportedBy)) {
            const auto subtree = exclusive_subtree(pattern.graph, relation->to);
            bool has_for_each = false;
            bool has_items = false;
            for (const auto& id : subtree) {
                const GsnNode* member = pattern.graph.find(id);
                if (member != nullptr && member->for_each) {
                    has_for_each = true;
                    has_items = has_items || !binding_empty(*member);
                }
            }
            if (!has_for_each || has_items) {
                ++supplied;
            } else {
                pruned.insert(subtree.begin(), subtree.end());
            }
        }
        if (supplied < *node.at_least) {
            const std::string message = "choice at " + node.id + " needs " + std::to_string(*node.at_least) +
                                        " supported alternative(s), bindings supply " + std::to_string(supplied);
            if (!options.lenient) {
                return Error::make(ErrorCode::ChoiceUnsatisfied, message, {node.id});
            }
            result.diagnostics.push_back(Diagnostic{std::string{kChoiceRule}, Severity::Error, message,
                                                    {node.id + options.suffix}, std::nullopt});
        }
        std::erase_if(graph.nodes, [&](const GsnNode& n) { return pruned.contains(n.id); });
        std::erase_if(graph.relations, [&](const GsnRelation& r) {
            return pruned.contains(r.from) || pruned.contains(r.to);
        });
        std::erase_if(graph.links, [&](const CrossLink& l) { return pruned.contains(l.from); });
    }

    // ForEach expansion.
    std::map<std::string, std::string> group_of;  // template node id -> ForEach node owning it
    for (const auto& node : graph.nodes) {
        if (node.for_each) {
            for (const auto& id : exclusive_subtree(graph, node.id)) {
                group_of.emplace(id, node.id);
            }
        }
    }
    auto replica_id = [](const GsnNode& owner, const std::string& id, std::size_t j) {
        if (id == owner.id) {
            return id.substr(0, id.size() - 1) + std::to_string(j);
        }
        return id + "." + std::to_string(j);
    };
    auto copies_of = [&](const std::string& id) {
        std::vector<std::pair<std::string, const PayloadItem*>> out;
        auto group = group_of.find(id);
        if (group == group_of.end()) {
            out.emplace_back(id, nullptr);
            return out;
        }
        const GsnNode* owner = pattern.graph.find(group->second);
        const auto& items = resolved.at(*owner->for_each).items;
        for (std::size_t j = 0; j < items.size(); ++j) {
            out.emplace_back(replica_id(*owner, id, j + 1), &items[j]);
        }
        return out;
    };

    ArgumentGraph instance;
    instance.name = options.name;
    if (instance.name.empty()) {
        instance.name = std::string{to_string(argument_for_pattern(pattern.pattern_id).value_or(pattern.pattern_id))};
    }
    instance.root = graph.root + options.suffix;
    for (const auto& node : graph.nodes) {
        const auto group = group_of.find(node.id);
        const std::string param = group == group_of.end() ? "" : *pattern.graph.find(group->second)->for_each;
        for (const auto& [id, item] : copies_of(node.id)) {
            GsnNode copy = node;
            copy.id = id + options.suffix;
            copy.for_each.reset();
            copy.text = substitute(node.text, resolved, ItemContext{param, item});
            instance.nodes.push_back(std::move(copy));
        }
    }
    for (const auto& relation : graph.relations) {
        const auto from = copies_of(relation.from);
        const auto to = copies_of(relation.to);
        const bool same_group = group_of.contains(relation.from) && group_of.contains(relation.to) &&
                                group_of.at(relation.from) == group_of.at(relation.to);
        for (std::size_t a = 0; a < from.size(); ++a) {
            for (std::size_t b = 0; b < to.size(); ++b) {
                if (same_group && a != b) {
                    continue;
                }
                GsnRelation copy = relation;
                copy.from = from[a].first + options.suffix;
                copy.to = to[b].first + options.suffix;
                instance.relations.push_back(std::move(copy));
            }
        }
    }
    for (const auto& link : graph.links) {
        for (const auto& [id, item] : copies_of(link.from)) {
            CrossLink copy = link;
            copy.from = id + options.suffix;
            if (item != nullptr) {
                copy.item = item->id;
            }
            instance.links.push_back(std::move(copy));
        }
    }
    for (const auto& [name, binding] : bindings) {
        if (!resolved.contains(name)) {
            continue;
        }
        instance.bindings[name] = resolved.at(name).param->form == ParamForm::Collection
                                      ? binding.items
                                      : std::vector<std::string>{binding.artefact};
    }
    result.graph = std::move(instance);
    return result;
}

PatternSet builtin_patterns()
{
    PatternSet out;
    for (ArtefactKind kind : pattern_kinds()) {
        out.emplace(kind, load_builtin(kind));
    }
    return out;
}

std::vector<const ArgumentGraph*> SafetyCase::graphs() const
{
    std::vector<const ArgumentGraph*> out;
    for (const auto& [kind, list] : arguments) {
        for (const auto& graph : list) {
            out.push_back(&graph);
        }
    }
    return out;
}

const ArgumentGraph* SafetyCase::find_graph(std::string_view name) const
{
    for (const auto* graph : graphs()) {
        if (graph->name == name) {
            return graph;
        }
    }
    return nullptr;
}

Expected<std::vector<ArgumentGraph>> instantiate_argument(const PatternTemplate& pattern, const Registry& registry,
                                                          const AssembleOptions& options,
                                                          std::vector<Diagnostic>* diagnostics)
{
    auto bindings = derive_bindings(pattern, registry, options.bindings);
    if (!bindings) {
        return bindings.error();
    }
    const ArtefactKind argument = argument_for_pattern(pattern.pattern_id).value_or(pattern.pattern_id);
    const std::string letters{to_string(argument)};
    InstantiateOptions instantiate_options;
    instantiate_options.lenient = options.lenient;

    std::vector<ArgumentGraph> out;
    auto run = [&](const BindingSet& set) -> Status {
        auto instance = instantiate_pattern(pattern, set, registry, instantiate_options);
        if (!instance) {
            return instance.error();
        }
        if (diagnostics != nullptr) {
            diagnostics->insert(diagnostics->end(), instance->diagnostics.begin(), instance->diagnostics.end());
        }
        out.push_back(std::move(instance->graph));
        return ok();
    };

    // Sub-arguments are entered once per requirement when the pattern has a requirement collection.
    const PatternParam* per_requirement = nullptr;
    for (const auto& param : pattern.params) {
        if (param.form == ParamForm::Collection && param.category == "Requirement") {
            per_requirement = &param;
            break;
        }
    }
    if (per_requirement == nullptr) {
        instantiate_options.name = letters;
        if (auto status = run(*bindings); !status) {
            return status.error();
        }
        return out;
    }

    const auto requirements = bindings->at(per_requirement->name).items;
    for (std::size_t r = 0; r < requirements.size(); ++r) {
        BindingSet set = *bindings;
        set[per_requirement->name].items = {requirements[r]};
        for (const auto& param : pattern.params) {
            if (param.form != ParamForm::Collection || &param == per_requirement) {
                continue;
            }
            const ArtefactRecord* record = registry.find(set[param.name].artefact);
            const auto items = items_of(*record, param.category);
            std::erase_if(set[param.name].items, [&](const std::string& id) {
                auto it = std::find_if(items.begin(), items.end(), [&](const PayloadItem& i) { return i.id == id; });
                return it != items.end() && it->requirement && *it->requirement != requirements[r];
            });
        }
        instantiate_options.name = letters + "." + std::to_string(r + 1);
        instantiate_options.suffix = "." + std::to_string(r + 1);
        if (auto status = run(set); !status) {
            Error error = status.error();
            error.message += " (requirement " + requirements[r] + ")";
            return error;
        }
    }
    return out;
}

Status resolve_links(SafetyCase& safety_case, bool lenient)
{
    for (auto& [kind, list] : safety_case.arguments) {
        for (auto& graph : list) {
            for (auto& link : graph.links) {
                link.target_graph.reset();
                link.target_node.reset();
                const auto pattern = artefact_kind_from_string(link.pattern);
                const auto argument = pattern ? argument_for_pattern(*pattern) : std::nullopt;
                const ArgumentGraph* target = nullptr;
                if (argument) {
                    if (auto it = safety_case.arguments.find(*argument); it != safety_case.arguments.end()) {
                        for (const auto& candidate : it->second) {
                            bool matches = true;
                            if (link.item) {
                                matches = std::any_of(candidate.bindings.begin(), candidate.bindings.end(),
                                                      [&](const auto& entry) {
                                                          return entry.second ==
                                                                 std::vector<std::string>{*link.item};
                                                      });
                            }
                            if (matches) {
                                target = &candidate;
                                break;
                            }
                        }
                    }
                }
                std::optional<std::string> node;
                if (target != nullptr) {
                    if (link.kind == LinkKind::Acp) {
                        node = target->root;
                    } else {
                        const auto dot = target->name.find('.');
                        const std::string id =
                            link.node + (dot == std::string::npos ? "" : target->name.substr(dot));
                        if (target->contains(id)) {
                            node = id;
                        }
                    }
                }
                if (node) {
                    link.target_graph = target->name;
                    link.target_node = *node;
                    continue;
                }
                const std::string message = "link " + link.label() +
                                            (link.item ? " for " + *link.item : std::string{}) +
                                            " has no instantiated target";
                if (!lenient) {
                    return Error::make(ErrorCode::DanglingContinuation, message, {link.label()});
                }
                safety_case.diagnostics.push_back(
                    Diagnostic{std::string{kLinkRule}, Severity::Error, message, {link.label()}, std::nullopt});
            }
        }
    }
    return ok();
}

Expected<SafetyCase> assemble_case(const Registry& registry, const PatternSet& patterns,
                                   const AssembleOptions& options)
{
    SafetyCase safety_case;
    safety_case.name = options.name;
    for (ArtefactKind kind : pattern_kinds()) {
        auto it = patterns.find(kind);
        if (it == patterns.end()) {
            continue;
        }
        auto graphs = instantiate_argument(it->second, registry, options, &safety_case.diagnostics);
        if (!graphs) {
            if (!options.lenient) {
                return graphs.error();
            }
            safety_case.diagnostics.push_back(Diagnostic{std::string{kBindingRule}, Severity::Error,
                                                         "pattern " + std::string{to_string(kind)} +
                                                             " not instantiated: " + graphs.error().describe(),
                                                         {std::string{to_string(kind)}}, std::nullopt});
            continue;
        }
        safety_case.arguments[*argument_for_pattern(kind)] = std::move(*graphs);
    }
    if (auto status = resolve_links(safety_case, options.lenient); !status) {
        return status.error();
    }
    return safety_case;
}

}  // namespace amlas
