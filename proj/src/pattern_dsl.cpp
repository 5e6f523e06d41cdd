#include "amlas/pattern_dsl.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <stdexcept>

namespace amlas {

namespace {

enum class Tok { Word, String, Int, LBrace, RBrace, Colon, End };

struct Token {
    Tok type = Tok::End;
    std::string text;
    SourcePos start;
    SourcePos end;
};

bool word_start(unsigned char c)
{
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}

bool word_char(unsigned char c)
{
    return word_start(c) || (c >= '0' && c <= '9') || c == '.' || c == '-';
}

bool digit(unsigned char c)
{
    return c >= '0' && c <= '9';
}

class Lexer {
public:
    Lexer(std::string_view source, std::string_view file) : src_(source), file_(file) {}

    // Tokenizes the whole source; on a lexical error returns false and fills `error`.
    bool run(std::vector<Token>& tokens, Diagnostic& error)
    {
        while (true) {
            skip_space_and_comments();
            if (pos_ >= src_.size()) {
                tokens.push_back({Tok::End, "", here(), here()});
                return true;
            }
            const SourcePos start = here();
            const auto c = static_cast<unsigned char>(src_[pos_]);
            if (c == '{' || c == '}' || c == ':') {
                advance();
                tokens.push_back({c == '{' ? Tok::LBrace : c == '}' ? Tok::RBrace : Tok::Colon,
                                  std::string(1, static_cast<char>(c)), start, here()});
            } else if (c == '"') {
                std::string text;
                if (!string_literal(text, error)) {
                    return false;
                }
                tokens.push_back({Tok::String, std::move(text), start, here()});
            } else if (digit(c)) {
                std::string text;
                while (pos_ < src_.size() && digit(static_cast<unsigned char>(src_[pos_]))) {
                    text += src_[pos_];
                    advance();
                }
                tokens.push_back({Tok::Int, std::move(text), start, here()});
            } else if (word_start(c)) {
                std::string text;
                while (pos_ < src_.size() && word_char(static_cast<unsigned char>(src_[pos_]))) {
                    text += src_[pos_];
                    advance();
                }
                tokens.push_back({Tok::Word, std::move(text), start, here()});
            } else {
                advance();
                error = make_error(start, "unexpected character " + describe_byte(c));
                return false;
            }
        }
    }

private:
    SourcePos here() const { return {line_, column_}; }

    void advance()
    {
        if (src_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_space_and_comments()
    {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n') {
                    advance();
                }
            } else {
                return;
            }
        }
    }

    bool string_literal(std::string& text, Diagnostic& error)
    {
        const SourcePos start = here();
        advance();
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == '"') {
                advance();
                return true;
            }
            if (c == '\n') {
                break;
            }
            if (c == '\\') {
                advance();
                if (pos_ >= src_.size()) {
                    break;
                }
                const char e = src_[pos_];
                switch (e) {
                case '"':
                case '\\':
                    text += e;
                    break;
                case 'n':
                    text += '\n';
                    break;
                case 't':
                    text += '\t';
                    break;
                case 'r':
                    text += '\r';
                    break;
                default:
                    error = make_error(here(), "unknown escape sequence \\" + describe_byte(static_cast<unsigned char>(e)));
                    return false;
                }
                advance();
                continue;
            }
            text += c;
            advance();
        }
        error = make_error(start, "unterminated string literal");
        return false;
    }

    static std::string describe_byte(unsigned char c)
    {
        if (c >= 0x20 && c < 0x7f) {
            return std::string{"'"} + static_cast<char>(c) + "'";
        }
        static constexpr char hex[] = "0123456789abcdef";
        return std::string{"0x"} + hex[c >> 4] + hex[c & 0xf];
    }

    Diagnostic make_error(SourcePos at, std::string message) const
    {
        return Diagnostic{std::string{dsl_rule::kSyntax}, Severity::Error, std::move(message), {},
                          SourceSpan{std::string{file_}, at, here()}};
    }

    std::string_view src_;
    std::string_view file_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

const std::map<std::string_view, NodeKind>& kind_words()
{
    static const std::map<std::string_view, NodeKind> words{
        {"goal", NodeKind::Goal},           {"strategy", NodeKind::Strategy},
        {"solution", NodeKind::Solution},   {"context", NodeKind::Context},
        {"assumption", NodeKind::Assumption}, {"justification", NodeKind::Justification},
    };
    return words;
}

std::string_view kind_word(NodeKind kind)
{
    for (const auto& [word, k] : kind_words()) {
        if (k == kind) {
            return word;
        }
    }
    return "goal";
}

struct RawParam {
    std::string name;
    bool collection = false;
    std::string category;
    std::string kind;
    SourceSpan span;
};

struct RawNode {
    GsnNode node;
    SourceSpan span;
};

struct RawLink {
    std::string from;
    std::string verb;  // supportedBy | inContextOf | continuesAs
    std::string to;
    std::optional<std::string> acp;
    SourceSpan span;
};

struct RawPattern {
    std::string id;
    std::string title;
    SourceSpan id_span;
    std::vector<RawParam> params;
    std::vector<RawNode> nodes;
    std::vector<RawLink> links;
};

class Parser {
public:
    Parser(std::vector<Token> tokens, std::string_view file) : tokens_(std::move(tokens)), file_(file) {}

    std::optional<RawPattern> run(Diagnostic& error)
    {
        RawPattern out;
        if (!keyword("pattern", error)) {
            return std::nullopt;
        }
        const Token* id = expect(Tok::Word, "pattern id", error);
        if (id == nullptr) {
            return std::nullopt;
        }
        out.id = id->text;
        out.id_span = span_of(*id, *id);
        if (!keyword("title", error)) {
            return std::nullopt;
        }
        const Token* title = expect(Tok::String, "title string", error);
        if (title == nullptr || expect(Tok::LBrace, "'{'", error) == nullptr) {
            return std::nullopt;
        }

        enum class Section { Params, Nodes, Links } section = Section::Params;
        out.title = title->text;
        while (peek().type != Tok::RBrace) {
            const Token& head = peek();
            if (head.type != Tok::Word) {
                error = unexpected(head, "declaration or '}'");
                return std::nullopt;
            }
            if (head.text == "param") {
                if (section != Section::Params) {
                    error = at(head, "param declarations must precede nodes and links");
                    return std::nullopt;
                }
                if (!param(out, error)) {
                    return std::nullopt;
                }
            } else if (kind_words().contains(head.text)) {
                if (section == Section::Links) {
                    error = at(head, "node declarations must precede links");
                    return std::nullopt;
                }
                section = Section::Nodes;
                if (!node(out, error)) {
                    return std::nullopt;
                }
            } else {
                section = Section::Links;
                if (!link(out, error)) {
                    return std::nullopt;
                }
            }
        }
        next();
        if (peek().type != Tok::End) {
            error = unexpected(peek(), "end of input");
            return std::nullopt;
        }
        return out;
    }

private:
    const Token& peek() const { return tokens_[std::min(index_, tokens_.size() - 1)]; }

    const Token& next()
    {
        const Token& token = peek();
        if (index_ < tokens_.size() - 1) {
            ++index_;
        }
        return token;
    }

    SourceSpan span_of(const Token& first, const Token& last) const
    {
        return SourceSpan{std::string{file_}, first.start, last.end};
    }

    Diagnostic at(const Token& token, std::string message) const
    {
        return Diagnostic{std::string{dsl_rule::kSyntax}, Severity::Error, std::move(message), {},
                          span_of(token, token)};
    }

    Diagnostic unexpected(const Token& token, std::string_view wanted) const
    {
        std::string found;
        switch (token.type) {
        case Tok::End:
            found = "end of input";
            break;
        case Tok::String:
            found = "string literal";
            break;
        default:
            found = "'" + token.text + "'";
        }
        return at(token, "expected " + std::string{wanted} + ", found " + found);
    }

    const Token* expect(Tok type, std::string_view wanted, Diagnostic& error)
    {
        if (peek().type != type) {
            error = unexpected(peek(), wanted);
            return nullptr;
        }
        return &next();
    }

    bool keyword(std::string_view word, Diagnostic& error)
    {
        if (peek().type != Tok::Word || peek().text != word) {
            error = unexpected(peek(), "'" + std::string{word} + "'");
            return false;
        }
        next();
        return true;
    }

    bool param(RawPattern& out, Diagnostic& error)
    {
        const Token& first = next();
        RawParam raw;
        const Token* name = expect(Tok::Word, "parameter name", error);
        if (name == nullptr || expect(Tok::Colon, "':'", error) == nullptr) {
            return false;
        }
        raw.name = name->text;
        const Token* form = expect(Tok::Word, "'artefact' or 'each'", error);
        if (form == nullptr) {
            return false;
        }
        if (form->text == "each") {
            const Token* category = expect(Tok::Word, "item category", error);
            if (category == nullptr || !keyword("of", error)) {
                return false;
            }
            raw.collection = true;
            raw.category = category->text;
        } else if (form->text != "artefact") {
            error = unexpected(*form, "'artefact' or 'each'");
            return false;
        }
        const Token* kind = expect(Tok::Word, "artefact kind", error);
        if (kind == nullptr) {
            return false;
        }
        raw.kind = kind->text;
        raw.span = span_of(first, *kind);
        out.params.push_back(std::move(raw));
        return true;
    }

    bool node(RawPattern& out, Diagnostic& error)
    {
        const Token& first = next();
        RawNode raw;
        raw.node.kind = kind_words().at(first.text);
        const Token* id = expect(Tok::Word, "node id", error);
        if (id == nullptr || !keyword("text", error)) {
            return false;
        }
        raw.node.id = id->text;
        const Token* text = expect(Tok::String, "node text string", error);
        if (text == nullptr) {
            return false;
        }
        raw.node.text = text->text;
        const Token* last = text;
        while (peek().type == Tok::Word) {
            const std::string& attr = peek().text;
            if (attr == "undeveloped") {
                raw.node.adornments.undeveloped = true;
                last = &next();
            } else if (attr == "requiresDevelopment") {
                raw.node.adornments.requires_development = true;
                last = &next();
            } else if (attr == "forEach") {
                next();
                last = expect(Tok::Word, "parameter name", error);
                if (last == nullptr) {
                    return false;
                }
                raw.node.for_each = last->text;
            } else if (attr == "atLeast") {
                next();
                last = expect(Tok::Int, "integer", error);
                if (last == nullptr) {
                    return false;
                }
                int n = 0;
                const auto* begin = last->text.data();
                const auto* end = begin + last->text.size();
                const auto [ptr, ec] = std::from_chars(begin, end, n);
                if (ec != std::errc{} || ptr != end) {
                    error = at(*last, "integer out of range");
                    return false;
                }
                raw.node.at_least = n;
            } else {
                break;
            }
        }
        raw.span = span_of(first, *last);
        out.nodes.push_back(std::move(raw));
        return true;
    }

    bool link(RawPattern& out, Diagnostic& error)
    {
        const Token& from = next();
        RawLink raw;
        raw.from = from.text;
        const Token* verb = expect(Tok::Word, "'supportedBy', 'inContextOf' or 'continuesAs'", error);
        if (verb == nullptr) {
            return false;
        }
        if (verb->text != "supportedBy" && verb->text != "inContextOf" && verb->text != "continuesAs") {
            error = unexpected(*verb, "'supportedBy', 'inContextOf' or 'continuesAs'");
            return false;
        }
        raw.verb = verb->text;
        const Token* to = expect(Tok::Word, raw.verb == "continuesAs" ? "PATTERN.NODE target" : "node id", error);
        if (to == nullptr) {
            return false;
        }
        raw.to = to->text;
        const Token* last = to;
        if (raw.verb != "continuesAs" && peek().type == Tok::Word && peek().text == "acp") {
            next();
            last = expect(Tok::String, "ACP label string", error);
            if (last == nullptr) {
                return false;
            }
            raw.acp = last->text;
        }
        raw.span = span_of(from, *last);
        out.links.push_back(std::move(raw));
        return true;
    }

    std::vector<Token> tokens_;
    std::string_view file_;
    std::size_t index_ = 0;
};

bool valid_param_name(std::string_view name)
{
    if (name.empty() || !word_start(static_cast<unsigned char>(name.front()))) {
        return false;
    }
    return std::all_of(name.begin(), name.end(), [](char c) {
        const auto u = static_cast<unsigned char>(c);
        return word_start(u) || digit(u);
    });
}

Diagnostic semantic(std::string_view rule, std::string message, std::vector<std::string> subjects,
                    const SourceSpan& span)
{
    return Diagnostic{std::string{rule}, Severity::Error, std::move(message), std::move(subjects), span};
}

ParseResult analyse(RawPattern raw)
{
    ParseResult result;
    auto& diags = result.diagnostics;
    PatternTemplate pattern;
    pattern.title = raw.title;

    const auto pattern_kind = artefact_kind_from_string(raw.id);
    if (!pattern_kind || !is_pattern_kind(*pattern_kind)) {
        diags.push_back(semantic(dsl_rule::kPatternId, "pattern id " + raw.id + " is not one of F, I, R, W, BB, GG",
                                 {raw.id}, raw.id_span));
    } else {
        pattern.pattern_id = *pattern_kind;
        pattern.graph.name = raw.id;
    }

    for (const auto& p : raw.params) {
        if (!valid_param_name(p.name)) {
            diags.push_back(semantic(dsl_rule::kParam, "invalid parameter name " + p.name, {p.name}, p.span));
            continue;
        }
        if (pattern.param(p.name) != nullptr) {
            diags.push_back(semantic(dsl_rule::kParam, "duplicate parameter " + p.name, {p.name}, p.span));
            continue;
        }
        const auto kind = artefact_kind_from_string(p.kind);
        if (!kind) {
            diags.push_back(semantic(dsl_rule::kParam, "unknown artefact kind " + p.kind, {p.name}, p.span));
            continue;
        }
        if (p.collection) {
            const auto categories = item_categories(*kind);
            if (std::find(categories.begin(), categories.end(), p.category) == categories.end()) {
                diags.push_back(semantic(dsl_rule::kParam,
                                         "kind " + p.kind + " has no items of category " + p.category, {p.name},
                                         p.span));
                continue;
            }
        }
        pattern.params.push_back(
            {p.name, p.collection ? ParamForm::Collection : ParamForm::Artefact, *kind, p.category});
    }

    for (auto& n : raw.nodes) {
        GsnNode& node = n.node;
        if (pattern.graph.contains(node.id)) {
            diags.push_back(semantic(dsl_rule::kDuplicateId, "duplicate node id " + node.id, {node.id}, n.span));
            continue;
        }
        if (node.for_each) {
            const PatternParam* param = pattern.param(*node.for_each);
            if (param == nullptr || param->form != ParamForm::Collection) {
                diags.push_back(semantic(dsl_rule::kForEach,
                                         "forEach on " + node.id + " needs a collection parameter, got " +
                                             *node.for_each,
                                         {node.id}, n.span));
            }
            if (!node.id.ends_with(".k") || node.id.size() < 3) {
                diags.push_back(
                    semantic(dsl_rule::kForEach, "forEach node id " + node.id + " must end in .k", {node.id}, n.span));
            }
        }
        if (node.at_least && *node.at_least < 1) {
            diags.push_back(semantic(dsl_rule::kAtLeast, "atLeast on " + node.id + " must be at least 1", {node.id},
                                     n.span));
        }
        for (const auto& placeholder : placeholders_in(node.text)) {
            if (pattern.param(placeholder_base(placeholder)) == nullptr) {
                diags.push_back(semantic(dsl_rule::kPlaceholder,
                                         "unknown placeholder {" + placeholder + "} in " + node.id, {node.id},
                                         n.span));
            }
        }
        pattern.spans[node.id] = n.span;
        pattern.graph.nodes.push_back(node);
    }

    for (const auto& l : raw.links) {
        const GsnNode* from = pattern.graph.find(l.from);
        if (from == nullptr) {
            diags.push_back(semantic(dsl_rule::kUnknownRef, "unknown node " + l.from, {l.from}, l.span));
            continue;
        }
        if (l.verb == "continuesAs") {
            const auto dot = l.to.find('.');
            const std::string target_pattern = l.to.substr(0, dot);
            const auto target_kind = artefact_kind_from_string(target_pattern);
            if (dot == std::string::npos || dot + 1 >= l.to.size() || !target_kind || !is_pattern_kind(*target_kind)) {
                diags.push_back(semantic(dsl_rule::kContinuation,
                                         "continuation target " + l.to + " must be PATTERN.NODE", {l.from}, l.span));
                continue;
            }
            pattern.graph.links.push_back(
                CrossLink{l.from, LinkKind::Continuation, target_pattern, l.to.substr(dot + 1), {}, {}, {}});
            continue;
        }
        const GsnNode* to = pattern.graph.find(l.to);
        if (to == nullptr) {
            diags.push_back(semantic(dsl_rule::kUnknownRef, "unknown node " + l.to, {l.to}, l.span));
            continue;
        }
        const auto kind = l.verb == "supportedBy" ? RelationKind::SupportedBy : RelationKind::InContextOf;
        if (!relation_allowed(kind, from->kind, to->kind)) {
            const std::string what =
                kind == RelationKind::SupportedBy ? "illegal support direction" : "illegal context relation";
            diags.push_back(semantic(dsl_rule::kRelation,
                                     what + " " + std::string{to_string(from->kind)} + "→" +
                                         std::string{to_string(to->kind)} + " (" + l.from + " -> " + l.to + ")",
                                     {l.from}, l.span));
            continue;
        }
        if (l.acp) {
            const auto acp_kind = artefact_kind_from_string(*l.acp);
            if (!acp_kind || !is_pattern_kind(*acp_kind)) {
                diags.push_back(semantic(dsl_rule::kAcp, "ACP label " + *l.acp + " does not name a pattern",
                                         {l.from}, l.span));
                continue;
            }
            pattern.graph.links.push_back(CrossLink{l.from, LinkKind::Acp, *l.acp, "", {}, {}, {}});
        }
        pattern.graph.relations.push_back(GsnRelation{l.from, l.to, kind, l.acp});
    }

    auto& graph = pattern.graph;
    for (const auto& node : graph.nodes) {
        if (!node.for_each) {
            continue;
        }
        std::vector<std::string> stack;
        std::set<std::string> seen;
        for (const auto* r : graph.outgoing(node.id, RelationKind::SupportedBy)) {
            stack.push_back(r->to);
        }
        while (!stack.empty()) {
            const std::string id = stack.back();
            stack.pop_back();
            if (!seen.insert(id).second) {
                continue;
            }
            const GsnNode* child = graph.find(id);
            if (child != nullptr && child->for_each) {
                diags.push_back(semantic(dsl_rule::kForEach,
                                         "forEach node " + id + " is nested under forEach node " + node.id, {id},
                                         pattern.spans[id]));
            }
            for (const auto* r : graph.outgoing(id, RelationKind::SupportedBy)) {
                stack.push_back(r->to);
            }
        }
    }

    std::vector<std::string> roots;
    for (const auto& node : graph.nodes) {
        if (node.kind != NodeKind::Goal) {
            continue;
        }
        const auto in = graph.incoming(node.id);
        const bool supported = std::any_of(in.begin(), in.end(),
                                           [](const GsnRelation* r) { return r->kind == RelationKind::SupportedBy; });
        if (!supported) {
            roots.push_back(node.id);
        }
    }
    if (roots.size() == 1) {
        graph.root = roots.front();
    } else if (diags.empty()) {
        std::string listing;
        for (const auto& id : roots) {
            listing += (listing.empty() ? "" : ", ") + id;
        }
        diags.push_back(semantic(dsl_rule::kRoot,
                                 roots.empty() ? "pattern has no root goal"
                                               : "pattern has several root goals: " + listing,
                                 roots, raw.id_span));
    }

    if (diags.empty()) {
        for (auto& d : check_wellformed(graph, GraphMode::Template)) {
            const auto it = pattern.spans.find(std::string{d.primary_subject()});
            d.span = it != pattern.spans.end() ? it->second : raw.id_span;
            diags.push_back(std::move(d));
        }
    }

    std::stable_sort(diags.begin(), diags.end(), [](const Diagnostic& a, const Diagnostic& b) {
        return a.span->start < b.span->start;
    });
    if (diags.empty()) {
        result.pattern = std::move(pattern);
    }
    return result;
}

std::string quote(std::string_view text)
{
    std::string out = "\"";
    for (char c : text) {
        switch (c) {
        case '"':
            out += "\\\"";
            break;
        case '\\':
            out += "\\\\";
            break;
        case '\n':
            out += "\\n";
            break;
        case '\t':
            out += "\\t";
            break;
        case '\r':
            out += "\\r";
            break;
        default:
            out += c;
        }
    }
    return out + "\"";
}

}  // namespace

const PatternParam* PatternTemplate::param(std::string_view name) const
{
    auto it = std::find_if(params.begin(), params.end(), [&](const PatternParam& p) { return p.name == name; });
    return it == params.end() ? nullptr : &*it;
}

ParseResult parse_pattern(std::string_view source, std::string_view file)
{
    std::vector<Token> tokens;
    Diagnostic error;
    if (!Lexer(source, file).run(tokens, error)) {
        return ParseResult{std::nullopt, {std::move(error)}};
    }
    auto raw = Parser(std::move(tokens), file).run(error);
    if (!raw) {
        return ParseResult{std::nullopt, {std::move(error)}};
    }
    return analyse(std::move(*raw));
}

std::string print_pattern(const PatternTemplate& pattern)
{
    std::string out = "pattern " + std::string{to_string(pattern.pattern_id)} + " title " + quote(pattern.title) +
                      " {\n";
    for (const auto& p : pattern.params) {
        out += "    param " + p.name + " : ";
        if (p.form == ParamForm::Collection) {
            out += "each " + p.category + " of ";
        } else {
            out += "artefact ";
        }
        out += std::string{to_string(p.kind)} + "\n";
    }
    if (!pattern.params.empty()) {
        out += "\n";
    }
    for (const auto& node : pattern.graph.nodes) {
        out += "    " + std::string{kind_word(node.kind)} + " " + node.id + " text " + quote(node.text);
        if (node.adornments.undeveloped) {
            out += " undeveloped";
        }
        if (node.adornments.requires_development) {
            out += " requiresDevelopment";
        }
        if (node.for_each) {
            out += " forEach " + *node.for_each;
        }
        if (node.at_least) {
            out += " atLeast " + std::to_string(*node.at_least);
        }
        out += "\n";
    }
    if (!pattern.graph.relations.empty() || !pattern.graph.links.empty()) {
        out += "\n";
    }
    for (const auto& r : pattern.graph.relations) {
        out += "    " + r.from + (r.kind == RelationKind::SupportedBy ? " supportedBy " : " inContextOf ") + r.to;
        if (r.acp) {
            out += " acp " + quote(*r.acp);
        }
        out += "\n";
    }
    for (const auto& link : pattern.graph.links) {
        if (link.kind == LinkKind::Continuation) {
            out += "    " + link.from + " continuesAs " + link.pattern + "." + link.node + "\n";
        }
    }
    out += "}\n";
    return out;
}

PatternTemplate load_builtin(ArtefactKind pattern_id)
{
    auto result = parse_pattern(builtin_source(pattern_id), std::string{to_string(pattern_id)} + ".pattern");
    if (!result.pattern) {
        throw std::logic_error("builtin pattern " + std::string{to_string(pattern_id)} + " does not parse: " +
                               format_diagnostic(result.diagnostics.front()));
    }
    return std::move(*result.pattern);
}

std::vector<Diagnostic> check_continuations(const std::vector<PatternTemplate>& patterns)
{
    std::vector<Diagnostic> out;
    for (const auto& pattern : patterns) {
        for (const auto& link : pattern.graph.links) {
            const std::string target = link.pattern + (link.kind == LinkKind::Continuation ? "." + link.node : "");
            const auto it = std::find_if(patterns.begin(), patterns.end(), [&](const PatternTemplate& p) {
                return to_string(p.pattern_id) == link.pattern;
            });
            std::string problem;
            if (it == patterns.end()) {
                problem = "link from " + link.from + " names pattern " + link.pattern + ", which is not loaded";
            } else if (link.kind == LinkKind::Continuation && !it->graph.contains(link.node)) {
                problem = "continuation from " + link.from + " targets " + target + ", which does not exist";
            }
            if (problem.empty()) {
                continue;
            }
            std::optional<SourceSpan> span;
            if (auto s = pattern.spans.find(link.from); s != pattern.spans.end()) {
                span = s->second;
            }
            out.push_back(Diagnostic{std::string{dsl_rule::kContinuation}, Severity::Error, problem,
                                     {std::string{to_string(pattern.pattern_id)} + ":" + link.from}, span});
        }
    }
    return out;
}

}  // namespace amlas
