// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.
#include "amlas/cli.hpp"
#include "amlas/emit.hpp"
#include "amlas/manifest.hpp"
#include "amlas/pattern_dsl.hpp"
#include "amlas/process.hpp"
#include "support.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace amlas;
namespace fs = std::filesystem;
using IdSet = std::set<std::string>;

struct Check {
    std::vector<std::string> failures;

    void expect(bool condition, const std::string& what)
    {
        if (!condition) {
            failures.push_back(what);
        }
    }
};

std::string join(const IdSet& ids)
{
    std::string out;
    for (const auto& id : ids) {
        out += (out.empty() ? "" : ",") + id;
    }
    return out;
}

// --- 1 ----------------------------------------------------------------------

IdSet inventory(const ArgumentGraph& graph)
{
    IdSet ids;
    for (const auto& node : graph.nodes) {
        const bool counted = node.kind == NodeKind::Goal || node.kind == NodeKind::Strategy ||
                             node.kind == NodeKind::Justification || node.kind == NodeKind::Assumption;
        if (counted && !node.for_each) {
            ids.insert(node.id);
        }
    }
    return ids;
}

Check builtin_fidelity()
{
    const std::map<ArtefactKind, IdSet> expected{
        {ArtefactKind::F, {"G1.1", "S1.1", "A1.1"}},
        {ArtefactKind::I, {"G2.1", "G2.2", "G2.3", "G2.4", "G2.5", "S2.1", "S2.2", "J2.1", "J2.2"}},
        {ArtefactKind::R, {"G3.1", "G3.2", "G3.3", "S3.1", "J3.1"}},
        {ArtefactKind::W, {"G4.1", "G4.2", "G4.3", "G4.5", "G4.6", "G4.7", "S4.1", "J4.1"}},
        {ArtefactKind::BB, {"G5.1", "G5.2", "G5.3", "G5.4", "G5.6", "G5.8", "S5.1", "J5.1", "J5.2"}},
        // G6.7 is the undeveloped leg the worked case requires
        {ArtefactKind::GG, {"G6.1", "G6.2", "G6.3", "G6.5", "G6.6", "G6.7", "G6.8", "G6.9", "S6.2", "J6.1", "J6.2"}},
    };
    Check check;
    for (const auto& [kind, ids] : expected) {
        const std::string name{to_string(kind)};
        const auto parsed = parse_pattern(builtin_source(kind), name + ".pattern");
        check.expect(parsed.ok() && parsed.diagnostics.empty(), name + " parses with diagnostics");
        if (!parsed.ok()) {
            continue;
        }
        check.expect(check_wellformed(parsed.pattern->graph, GraphMode::Template).empty(), name + " ill-formed");
        const IdSet actual = inventory(parsed.pattern->graph);
        check.expect(actual == ids, name + " inventory {" + join(actual) + "}");
    }
    return check;
}

// --- 2 ----------------------------------------------------------------------

bool in_leg(const std::string& subject, const std::string& leg)
{
    return subject == leg || subject.starts_with(leg + ".");
}

Check worked_case()
{
    Check check;
    const auto manifest = testing::fixture_manifest();
    const auto* allocated = manifest.registry.find("E");
    const auto* ml = manifest.registry.find("H");
    check.expect(allocated && items_of(*allocated, "Requirement").size() == 1, "one allocated requirement");
    check.expect(ml && items_of(*ml, "Performance").size() == 2 && items_of(*ml, "Robustness").size() == 2,
                 "two performance and two robustness requirements");

    const auto assembled = assemble_case(manifest.registry, builtin_patterns(), {manifest.name, manifest.bindings});
    check.expect(assembled.has_value(), "strict assembly");
    if (!assembled) {
        return check;
    }
    const auto& cc = assembled->arguments.at(ArtefactKind::CC);
    check.expect(cc.size() == 4, "verification sub-arguments: " + std::to_string(cc.size()));
    bool literal = false;
    for (const auto* graph : assembled->graphs()) {
        for (const auto& node : graph->nodes) {
            check.expect(placeholders_in(node.text).empty(), "placeholder left in " + node.id);
            literal = literal || node.text.find("accuracy of at least 0.93") != std::string::npos;
        }
    }
    check.expect(literal, "requirement text reaches the argument");

    testing::TempDir temp;
    testing::copy_fixture(temp.path());
    const auto cli = testing::run_cli({"validate", temp.path().string()});
    check.expect(cli.code == 0, "validate exit " + std::to_string(cli.code));

    const auto evaluation = testing::evaluate(manifest);
    IdSet legs;
    for (const auto& d : evaluation.result.findings) {
        check.expect(d.severity == Severity::Info && d.rule_id == "ARG-2", "unexpected finding " + d.rule_id);
        for (const auto& subject : d.subjects) {
            for (const std::string leg : {"G5.6", "G5.8", "G6.5", "G6.7"}) {
                if (in_leg(subject, leg)) {
                    legs.insert(leg);
                }
            }
        }
    }
    check.expect(legs == IdSet{"G5.6", "G5.8", "G6.5", "G6.7"}, "undeveloped legs {" + join(legs) + "}");
    return check;
}

// --- 3 ----------------------------------------------------------------------

Check seeded_defects()
{
    Check check;
    const auto& rules = builtin_rules();
    std::size_t covered = 0;
    for (const auto& mutation : testing::seeded_mutations()) {
        Json document = testing::fixture_document();
        mutation.apply(document);
        const auto evaluation = testing::evaluate(testing::manifest_from(document));
        const Rule* rule = find_rule(rules, mutation.rule);
        const auto fired = testing::with_rule(evaluation.result.findings, mutation.rule);
        const bool hit = rule && std::any_of(fired.begin(), fired.end(),
                                             [&](const Diagnostic& d) { return d.severity == rule->severity; });
        check.expect(hit, mutation.rule + " did not fire");
        for (const auto& other : testing::error_rules(evaluation.result.findings)) {
            check.expect(other == mutation.rule || mutation.entailed.contains(other),
                         mutation.rule + " mutation also fired " + other);
        }
        covered += hit ? 1 : 0;
    }
    std::size_t gated = 0;
    for (const auto& rule : rules) {
        gated += rule.severity == Severity::Info ? 0 : 1;
    }
    check.expect(testing::seeded_mutations().size() == gated, "mutations do not cover every Error/Warning rule");
    return check;
}

// --- 4 ----------------------------------------------------------------------

Check leakage_oracle()
{
    Check check;
    std::mt19937 rng(20211015);
    std::array<std::string, 10> pool;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        pool[i] = content_digest("frame-" + std::to_string(i));
    }
    auto draw = [&] {
        std::vector<std::string> ids;
        std::uniform_int_distribution<std::size_t> size(1, 4);
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        for (std::size_t n = size(rng); ids.size() < n;) {
            ids.push_back(pool[pick(rng)]);
        }
        return ids;
    };
    auto overlaps = [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
        const IdSet left(a.begin(), a.end());
        return std::any_of(b.begin(), b.end(), [&](const std::string& id) { return left.contains(id); });
    };

    int fired_1 = 0;
    int fired_2 = 0;
    constexpr int kCases = 250;
    for (int i = 0; i < kCases; ++i) {
        const auto development = draw();
        const auto internal = draw();
        const auto verification = draw();
        Json document = testing::fixture_document();
        for (const auto& [id, ids] : {std::pair{"N", development}, {"O", internal}, {"P", verification}}) {
            Json& payload = testing::artefact(document, id)["payload"];
            payload.erase("samples_file");
            payload["sample_ids"] = ids;
        }
        const auto evaluation = testing::evaluate(testing::manifest_from(document));
        const bool leak_1 = !testing::with_rule(evaluation.result.findings, "LEAK-1").empty();
        const bool leak_2 = !testing::with_rule(evaluation.result.findings, "LEAK-2").empty();
        const bool expect_1 = overlaps(verification, development) || overlaps(verification, internal);
        const bool expect_2 = overlaps(internal, development);
        check.expect(leak_1 == expect_1, "LEAK-1 disagrees with oracle in case " + std::to_string(i));
        check.expect(leak_2 == expect_2, "LEAK-2 disagrees with oracle in case " + std::to_string(i));
        fired_1 += leak_1;
        fired_2 += leak_2;
    }
    check.expect(fired_1 > 0 && fired_1 < kCases, "LEAK-1 cases not mixed");
    check.expect(fired_2 > 0 && fired_2 < kCases, "LEAK-2 cases not mixed");
    return check;
}

// --- 5 ----------------------------------------------------------------------

// Stage inputs and outputs, transcribed independently of the library's own table.
const std::vector<std::pair<IdSet, IdSet>>& stage_flow()
{
    static const std::vector<std::pair<IdSet, IdSet>> flow{
        {{"A", "B", "C", "D", "F"}, {"E", "G"}},
        {{"E", "I"}, {"H", "J", "K"}},
        {{"H", "R"}, {"L", "M", "N", "O", "P", "Q", "S", "T"}},
        {{"H", "N", "O", "W"}, {"U", "V", "X", "Y"}},
        {{"H", "P", "V", "BB"}, {"Z", "AA", "CC"}},
        {{"A", "B", "C", "V", "EE", "GG"}, {"DD", "FF", "HH"}},
    };
    return flow;
}

IdSet reachable_kinds(const std::string& start)
{
    IdSet kinds;
    for (const auto& [inputs, outputs] : stage_flow()) {
        kinds.insert(inputs.begin(), inputs.end());
        kinds.insert(outputs.begin(), outputs.end());
    }
    const std::vector<std::string> index(kinds.begin(), kinds.end());
    const std::size_t n = index.size();
    auto at = [&](const std::string& kind) {
        return static_cast<std::size_t>(std::find(index.begin(), index.end(), kind) - index.begin());
    };
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (const auto& [inputs, outputs] : stage_flow()) {
        for (const auto& in : inputs) {
            for (const auto& out : outputs) {
                reach[at(in)][at(out)] = true;
            }
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                reach[i][j] = reach[i][j] || (reach[i][k] && reach[k][j]);
            }
        }
    }
    IdSet out;
    if (!kinds.contains(start)) {
        return out;
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (reach[at(start)][j]) {
            out.insert(index[j]);
        }
    }
    return out;
}

Check impact_oracle()
{
    Check check;
    const auto evaluation = testing::evaluate(testing::fixture_manifest());
    const Registry& registry = evaluation.registry;
    for (const auto& record : registry.records()) {
        const auto result = impact(registry, record.id);
        check.expect(result.has_value(), "impact failed for " + record.id);
        if (!result) {
            continue;
        }
        const IdSet kinds = reachable_kinds(std::string{to_string(record.kind)});
        IdSet expected;
        for (const auto& other : registry.records()) {
            if (other.id != record.id && kinds.contains(std::string{to_string(other.kind)})) {
                expected.insert(other.id);
            }
        }
        const IdSet actual(result->stale.begin(), result->stale.end());
        check.expect(actual == expected, record.id + " stale {" + join(actual) + "} expected {" + join(expected) + "}");
    }

    Json document = testing::fixture_document();
    testing::payload_list(document, "Z", "entries")[0]["result"] = "Fail";
    const auto failed = testing::manifest_from(document);
    const auto result = impact(failed.registry, "Z");
    const std::set<int> feedback{2, 3, 4};
    check.expect(result && std::includes(result->revisit.begin(), result->revisit.end(), feedback.begin(),
                                         feedback.end()),
                 "failed verification does not revisit stages 2, 3 and 4");
    return check;
}

// --- 6 ----------------------------------------------------------------------

std::map<std::string, std::string> directory_bytes(const fs::path& dir)
{
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        out[entry.path().filename().string()] = testing::slurp(entry.path());
    }
    return out;
}

Check determinism()
{
    Check check;
    testing::TempDir temp;
    testing::copy_fixture(temp.path());
    const auto first_run = testing::run_cli({"instantiate", temp.path().string(), "--all"});
    check.expect(first_run.code == 0, "instantiate --all failed: " + first_run.err);
    const auto first = directory_bytes(temp.path() / "out");
    const auto second_run = testing::run_cli({"instantiate", temp.path().string(), "--all"});
    check.expect(second_run.code == 0, "second instantiate --all failed");
    check.expect(!first.empty() && first == directory_bytes(temp.path() / "out"), "outputs differ between runs");

    const auto manifest = testing::fixture_manifest();
    const auto assembled = assemble_case(manifest.registry, builtin_patterns(), {manifest.name, manifest.bindings});
    check.expect(assembled.has_value(), "assembly failed");
    if (assembled) {
        for (const auto* graph : assembled->graphs()) {
            const auto back = graph_from_json(graph_to_json(*graph));
            check.expect(back && *back == *graph, "graph " + graph->name + " does not round-trip");
        }
        const auto whole = case_from_json(to_json(*assembled));
        check.expect(whole && *whole == *assembled, "case does not round-trip");
        for (const auto& argument : argument_documents(*assembled)) {
            const std::string text = argument_to_json(argument);
            const auto back = argument_from_json(text);
            check.expect(back && *back == argument && argument_to_json(*back) == text,
                         std::string{to_string(argument.kind)} + " document does not round-trip");
        }
    }
    const auto registry = registry_from_json(to_json(manifest.registry));
    check.expect(registry && *registry == manifest.registry, "registry does not round-trip");

    for (ArtefactKind kind : pattern_kinds()) {
        const PatternTemplate original = load_builtin(kind);
        const std::string printed = print_pattern(original);
        const auto reparsed = parse_pattern(printed);
        check.expect(reparsed.ok() && reparsed.pattern->graph == original.graph &&
                         reparsed.pattern->params == original.params && print_pattern(*reparsed.pattern) == printed,
                     std::string{to_string(kind)} + " parse/print not identity");
    }
    return check;
}

// --- 7 ----------------------------------------------------------------------

std::string fuzz_input(std::mt19937& rng, const std::vector<std::string>& corpus)
{
    static const std::string alphabet = "{}[]\"\\:;,.=-># \n\tGSJACnkxyz0123456789pattern goal forEach atLeast";
    std::uniform_int_distribution<std::size_t> choose(0, corpus.size() - 1);
    std::string text = corpus[choose(rng)];
    std::uniform_int_distribution<int> edits(1, 8);
    for (int n = edits(rng); n > 0 && !text.empty(); --n) {
        std::uniform_int_distribution<std::size_t> pos(0, text.size() - 1);
        std::uniform_int_distribution<std::size_t> letter(0, alphabet.size() - 1);
        switch (std::uniform_int_distribution<int>(0, 5)(rng)) {
        case 0:
            text[pos(rng)] = alphabet[letter(rng)];
            break;
        case 1:
            text.erase(pos(rng), std::uniform_int_distribution<std::size_t>(1, 16)(rng));
            break;
        case 2:
            text.insert(pos(rng), 1, alphabet[letter(rng)]);
            break;
        case 3:
            text.resize(pos(rng));
            break;
        case 4: {
            const std::string& donor = corpus[choose(rng)];
            const std::size_t from = std::uniform_int_distribution<std::size_t>(0, donor.size() - 1)(rng);
            text.insert(pos(rng), donor.substr(from, 64));
            break;
        }
        default:
            text[pos(rng)] = static_cast<char>(std::uniform_int_distribution<int>(0, 255)(rng));
            break;
        }
    }
    return text;
}

Check fuzzing()
{
    Check check;
    std::vector<std::string> corpus;
    for (ArtefactKind kind : pattern_kinds()) {
        corpus.emplace_back(builtin_source(kind));
    }
    std::mt19937 rng(7);
    int rejected = 0;
    for (int i = 0; i < 10'000; ++i) {
        const std::string input = fuzz_input(rng, corpus);
        try {
            const auto result = parse_pattern(input, "fuzz");
            if (result.ok()) {
                const auto problems = check_wellformed(result.pattern->graph, GraphMode::Template);
                check.expect(!has_errors(problems), "accepted ill-formed input " + std::to_string(i));
            } else {
                ++rejected;
                check.expect(!result.diagnostics.empty(), "rejected input without diagnostics " + std::to_string(i));
                for (const auto& d : result.diagnostics) {
                    check.expect(d.span.has_value(), "diagnostic without span on input " + std::to_string(i));
                }
            }
        } catch (const std::exception& e) {
            check.expect(false, "input " + std::to_string(i) + " threw: " + e.what());
        }
    }
    check.expect(rejected > 5'000, "fuzzer produced too few invalid inputs: " + std::to_string(rejected));
    return check;
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
        {"builtin pattern fidelity", builtin_fidelity},
        {"pedestrian worked case", worked_case},
        {"seeded-defect matrix", seeded_defects},
        {"leakage oracle (250 randomized cases)", leakage_oracle},
        {"impact oracle", impact_oracle},
        {"determinism and round-trip", determinism},
        {"parser robustness (10000 fuzzed inputs)", fuzzing},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check check;
        try {
            check = criteria[i].second();
        } catch (const std::exception& e) {
            check.failures.push_back(std::string{"exception: "} + e.what());
        }
        const bool pass = check.failures.empty();
        failed += pass ? 0 : 1;
        std::cout << "AC" << i + 1 << ": " << (pass ? "PASS" : "FAIL") << " - " << criteria[i].first << "\n";
        for (std::size_t f = 0; f < std::min<std::size_t>(check.failures.size(), 10); ++f) {
            std::cout << "    " << check.failures[f] << "\n";
        }
    }
    return failed == 0 ? 0 : 1;
}
