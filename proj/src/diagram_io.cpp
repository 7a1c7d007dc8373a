#include "uml2ts/diagram_io.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace uml2ts {

std::string SourceLocation::str() const {
    return file + ":" + std::to_string(line) + ":" + std::to_string(column);
}

namespace {

std::string format_error(const SourceLocation& where, const std::string& message,
                         const std::vector<std::string>& expected) {
    std::string out = where.str() + ": " + message;
    if (!expected.empty()) {
        out += " (expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i > 0) out += i + 1 == expected.size() ? " or " : ", ";
            out += expected[i];
        }
        out += ")";
    }
    return out;
}

}  // namespace

ParseError::ParseError(SourceLocation where, std::string message, std::vector<std::string> expected)
    : std::runtime_error(format_error(where, message, expected)),
      where_(std::move(where)),
      message_(std::move(message)),
      expected_(std::move(expected)) {}

namespace {

enum class Tok { Ident, Arrow, Colon, LBracket, RBracket, Comma, Bang, LBrace, RBrace, Newline, Eof };

std::string describe(Tok kind) {
    switch (kind) {
        case Tok::Ident: return "identifier";
        case Tok::Arrow: return "'->'";
        case Tok::Colon: return "':'";
        case Tok::LBracket: return "'['";
        case Tok::RBracket: return "']'";
        case Tok::Comma: return "','";
        case Tok::Bang: return "'!'";
        case Tok::LBrace: return "'{'";
        case Tok::RBrace: return "'}'";
        case Tok::Newline: return "end of line";
        case Tok::Eof: return "end of file";
    }
    return "?";
}

struct Token {
    Tok kind = Tok::Eof;
    std::string text;
    int line = 1;
    int column = 1;
};

class Lexer {
public:
    Lexer(std::string_view text, std::string file) : text_(text), file_(std::move(file)) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\n') {
                push(out, Tok::Newline, "\n");
                advance_line();
            } else if (c == '\r') {
                ++pos_;
                ++column_;
            } else if (c == ' ' || c == '\t') {
                ++pos_;
                ++column_;
            } else if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t start = pos_;
                while (pos_ < text_.size() &&
                       (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                    ++pos_;
                }
                out.push_back({Tok::Ident, std::string(text_.substr(start, pos_ - start)), line_, column_});
                column_ += static_cast<int>(pos_ - start);
            } else if (c == '-') {
                if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
                    push(out, Tok::Arrow, "->");
                    pos_ += 2;
                    column_ += 2;
                } else {
                    throw ParseError(here(), "reserved character '-' in label");
                }
            } else {
                Tok kind;
                switch (c) {
                    case ':': kind = Tok::Colon; break;
                    case '[': kind = Tok::LBracket; break;
                    case ']': kind = Tok::RBracket; break;
                    case ',': kind = Tok::Comma; break;
                    case '!': kind = Tok::Bang; break;
                    case '{': kind = Tok::LBrace; break;
                    case '}': kind = Tok::RBrace; break;
                    case ';': kind = Tok::Newline; break;
                    default:
                        throw ParseError(here(), std::string("unexpected character '") + c + "'");
                }
                push(out, kind, std::string(1, c));
                ++pos_;
                ++column_;
            }
        }
        out.push_back({Tok::Newline, "\n", line_, column_});
        out.push_back({Tok::Eof, "", line_, column_});
        return out;
    }

private:
    SourceLocation here() const { return {file_, line_, column_}; }
    void push(std::vector<Token>& out, Tok kind, std::string text) {
        out.push_back({kind, std::move(text), line_, column_});
    }
    void advance_line() {
        ++pos_;
        ++line_;
        column_ = 1;
    }

    std::string_view text_;
    std::string file_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

class Parser {
public:
    Parser(std::vector<Token> tokens, std::string file) : toks_(std::move(tokens)), file_(std::move(file)) {}

    Diagram parse() {
        skip_newlines();
        const Token& head = peek();
        if (head.kind != Tok::Ident) fail(head, "missing diagram header", {"'sequence'", "'statemachine'", "'activity'"});
        if (head.text == "sequence") return parse_sequence();
        if (head.text == "statemachine") return parse_statemachine();
        if (head.text == "activity") return parse_activity();
        fail(head, "unknown keyword '" + head.text + "'", {"'sequence'", "'statemachine'", "'activity'"});
    }

private:
    // ---- token helpers

    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_++]; }
    bool at(Tok kind) const { return peek().kind == kind; }

    [[noreturn]] void fail(const Token& at, const std::string& message, std::vector<std::string> expected = {}) const {
        throw ParseError({file_, at.line, at.column}, message, std::move(expected));
    }

    const Token& expect(Tok kind) {
        if (!at(kind)) fail(peek(), "syntax error: unexpected " + shown(peek()), {describe(kind)});
        return next();
    }

    std::string expect_ident(const std::string& what) {
        if (!at(Tok::Ident)) fail(peek(), "syntax error: unexpected " + shown(peek()), {what});
        return next().text;
    }

    static std::string shown(const Token& t) {
        if (t.kind == Tok::Ident) return "'" + t.text + "'";
        return describe(t.kind);
    }

    void end_statement() {
        if (at(Tok::RBrace)) return;
        if (!at(Tok::Newline)) fail(peek(), "syntax error: unexpected " + shown(peek()), {"end of line"});
        skip_newlines();
    }

    void skip_newlines() {
        while (at(Tok::Newline)) next();
    }

    std::string header(const char* keyword) {
        next();  // keyword
        std::string name = expect_ident(std::string(keyword) + " name");
        end_statement();
        return name;
    }

    // Optional `[LIT{,LIT}]`.
    GuardSet literals() {
        GuardSet out;
        if (!at(Tok::LBracket)) return out;
        next();
        if (at(Tok::RBracket)) {
            next();
            return out;
        }
        while (true) {
            bool polarity = true;
            if (at(Tok::Bang)) {
                next();
                polarity = false;
            }
            out.push_back({expect_ident("guard name"), polarity});
            if (at(Tok::Comma)) {
                next();
                continue;
            }
            expect(Tok::RBracket);
            return out;
        }
    }

    void declare(std::set<std::string>& seen, const Token& at, const std::string& what) {
        if (!seen.insert(at.text).second) fail(at, "duplicate declaration of " + what + " '" + at.text + "'");
    }

    // ---- sequence diagrams

    enum class SdFrame { Root, Alt, Opt, Loop, Par };

    SequenceDiagram parse_sequence() {
        SequenceDiagram sd;
        sd.name = header("sequence");
        std::set<std::string> lifelines;
        parse_sd_body(sd, lifelines, sd.body, SdFrame::Root, Token{});
        return sd;
    }

    // Parses statements into `body` until a block terminator of the
    // enclosing frame. Returns the terminator keyword ("end", "else",
    // "and" or "" at EOF).
    std::string parse_sd_body(SequenceDiagram& sd, std::set<std::string>& lifelines, SdBody& body,
                              SdFrame frame, const Token& opened) {
        while (true) {
            skip_newlines();
            const Token& t = peek();
            if (t.kind == Tok::Eof) {
                if (frame != SdFrame::Root) fail(opened, "unterminated '" + opened.text + "' block", {"'end'"});
                return "";
            }
            if (t.kind != Tok::Ident) fail(t, "syntax error: unexpected " + shown(t), {"statement"});
            const std::string kw = t.text;
            if (kw == "end" || kw == "else" || kw == "and") {
                bool ok = frame != SdFrame::Root && (kw == "end" || (kw == "else" && frame == SdFrame::Alt) ||
                                                     (kw == "and" && frame == SdFrame::Par));
                if (!ok) fail(t, "'" + kw + "' outside of a matching block");
                return kw;
            }
            if (kw == "lifeline") {
                if (frame != SdFrame::Root) fail(t, "lifeline declared inside a fragment");
                next();
                if (!at(Tok::Ident)) fail(peek(), "syntax error: unexpected " + shown(peek()), {"lifeline name"});
                declare(lifelines, peek(), "lifeline");
                sd.lifelines.push_back(next().text);
                end_statement();
            } else if (kw == "msg") {
                next();
                SdMessage m;
                m.name = expect_ident("message name");
                expect(Tok::Colon);
                m.from = expect_ident("lifeline");
                expect(Tok::Arrow);
                m.to = expect_ident("lifeline");
                end_statement();
                body.emplace_back(std::move(m));
            } else if (kw == "alt") {
                Token open = next();
                SdAlt alt;
                SdBranch first{literals(), {}};
                end_statement();
                std::string term = parse_sd_body(sd, lifelines, first.body, SdFrame::Alt, open);
                alt.branches.push_back(std::move(first));
                while (term == "else") {
                    next();
                    SdBranch branch{literals(), {}};
                    end_statement();
                    term = parse_sd_body(sd, lifelines, branch.body, SdFrame::Alt, open);
                    alt.branches.push_back(std::move(branch));
                }
                next();  // end
                end_statement();
                body.emplace_back(std::move(alt));
            } else if (kw == "opt" || kw == "loop") {
                Token open = next();
                GuardSet guards = literals();
                end_statement();
                SdBody inner;
                parse_sd_body(sd, lifelines, inner, kw == "opt" ? SdFrame::Opt : SdFrame::Loop, open);
                next();  // end
                end_statement();
                if (kw == "opt") {
                    body.emplace_back(SdOpt{std::move(guards), std::move(inner)});
                } else {
                    body.emplace_back(SdLoop{std::move(guards), std::move(inner)});
                }
            } else if (kw == "par") {
                Token open = next();
                end_statement();
                SdPar par;
                std::string term;
                do {
                    if (term == "and") {
                        next();
                        end_statement();
                    }
                    SdBody operand;
                    term = parse_sd_body(sd, lifelines, operand, SdFrame::Par, open);
                    par.operands.push_back(std::move(operand));
                } while (term == "and");
                next();  // end
                end_statement();
                body.emplace_back(std::move(par));
            } else {
                fail(t, "unknown keyword '" + kw + "'",
                     {"'lifeline'", "'msg'", "'alt'", "'opt'", "'loop'", "'par'", "'end'"});
            }
        }
    }

    // ---- state machines

    StateMachineDiagram parse_statemachine() {
        StateMachineDiagram smd;
        smd.name = header("statemachine");
        std::set<std::string> states;
        std::set<std::string> regions;
        bool have_initial = false;
        while (true) {
            skip_newlines();
            const Token& t = peek();
            if (t.kind == Tok::Eof) break;
            if (t.kind != Tok::Ident) fail(t, "syntax error: unexpected " + shown(t), {"statement"});
            if (t.text == "region") {
                next();
                if (!at(Tok::Ident)) fail(peek(), "syntax error: unexpected " + shown(peek()), {"region name"});
                declare(regions, peek(), "region");
                SmRegion region;
                region.name = next().text;
                Token open = expect(Tok::LBrace);
                bool region_initial = false;
                while (true) {
                    skip_newlines();
                    const Token& r = peek();
                    if (r.kind == Tok::RBrace) {
                        next();
                        break;
                    }
                    if (r.kind == Tok::Eof) fail(open, "unterminated region block", {"'}'"});
                    if (r.kind != Tok::Ident) fail(r, "syntax error: unexpected " + shown(r), {"statement"});
                    if (!sm_statement(r, states, region.states, region.initial, region_initial, region.transitions)) {
                        fail(r, "unknown keyword '" + r.text + "'", {"'state'", "'initial'", "'trans'", "'}'"});
                    }
                }
                end_statement();
                smd.regions.push_back(std::move(region));
            } else if (!sm_statement(t, states, smd.states, smd.initial, have_initial, smd.transitions)) {
                fail(t, "unknown keyword '" + t.text + "'", {"'state'", "'initial'", "'region'", "'trans'"});
            }
        }
        return smd;
    }

    bool sm_statement(const Token& t, std::set<std::string>& declared, std::vector<std::string>& states,
                      std::string& initial, bool& have_initial, std::vector<SmTransition>& transitions) {
        if (t.text == "state") {
            next();
            if (!at(Tok::Ident)) fail(peek(), "syntax error: unexpected " + shown(peek()), {"state name"});
            declare(declared, peek(), "state");
            states.push_back(next().text);
        } else if (t.text == "initial") {
            if (have_initial) fail(t, "duplicate declaration of initial state");
            next();
            initial = expect_ident("state name");
            have_initial = true;
        } else if (t.text == "trans") {
            next();
            SmTransition tr;
            tr.source = expect_ident("state name");
            expect(Tok::Arrow);
            tr.target = expect_ident("state name");
            if (at(Tok::Colon)) {
                next();
                tr.event = expect_ident("event name");
            }
            tr.guards = literals();
            transitions.push_back(std::move(tr));
        } else {
            return false;
        }
        end_statement();
        return true;
    }

    // ---- activity diagrams

    ActivityDiagram parse_activity() {
        ActivityDiagram ad;
        ad.name = header("activity");
        std::set<std::string> ids;
        static const std::pair<const char*, AdNodeKind> kinds[] = {
            {"action", AdNodeKind::Action}, {"decision", AdNodeKind::Decision}, {"merge", AdNodeKind::Merge},
            {"fork", AdNodeKind::Fork},     {"join", AdNodeKind::Join},         {"final", AdNodeKind::Final}};
        while (true) {
            skip_newlines();
            const Token& t = peek();
            if (t.kind == Tok::Eof) break;
            if (t.kind != Tok::Ident) fail(t, "syntax error: unexpected " + shown(t), {"statement"});
            if (t.text == "initial") {
                Token kw = next();
                Token id = kw;
                id.text = std::string(kAdInitialId);
                if (at(Tok::Ident)) id = next();
                declare(ids, id, "node");
                ad.nodes.push_back({id.text, AdNodeKind::Initial});
                end_statement();
                continue;
            }
            if (t.text == "edge") {
                next();
                AdEdge e;
                e.source = expect_ident("node id");
                expect(Tok::Arrow);
                e.target = expect_ident("node id");
                e.guards = literals();
                end_statement();
                ad.edges.push_back(std::move(e));
                continue;
            }
            bool matched = false;
            for (const auto& [word, kind] : kinds) {
                if (t.text != word) continue;
                next();
                if (!at(Tok::Ident)) fail(peek(), "syntax error: unexpected " + shown(peek()), {"node id"});
                declare(ids, peek(), "node");
                ad.nodes.push_back({next().text, kind});
                end_statement();
                matched = true;
                break;
            }
            if (!matched) {
                fail(t, "unknown keyword '" + t.text + "'",
                     {"'initial'", "'action'", "'decision'", "'merge'", "'fork'", "'join'", "'final'", "'edge'"});
            }
        }
        return ad;
    }

    std::vector<Token> toks_;
    std::string file_;
    std::size_t pos_ = 0;
};

std::string render_literals(const GuardSet& guards) {
    if (guards.empty()) return "";
    std::string out = " [";
    for (std::size_t i = 0; i < guards.size(); ++i) {
        if (i > 0) out += ", ";
        if (!guards[i].polarity) out += "!";
        out += guards[i].guard;
    }
    return out + "]";
}

void write_sd_body(std::ostringstream& out, const SdBody& body, int depth) {
    const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    for (const auto& el : body) {
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, SdMessage>) {
                    out << pad << "msg " << node.name << ": " << node.from << " -> " << node.to << "\n";
                } else if constexpr (std::is_same_v<T, SdAlt>) {
                    for (std::size_t i = 0; i < node.branches.size(); ++i) {
                        out << pad << (i == 0 ? "alt" : "else") << render_literals(node.branches[i].guards) << "\n";
                        write_sd_body(out, node.branches[i].body, depth + 1);
                    }
                    out << pad << "end\n";
                } else if constexpr (std::is_same_v<T, SdOpt> || std::is_same_v<T, SdLoop>) {
                    out << pad << (std::is_same_v<T, SdOpt> ? "opt" : "loop") << render_literals(node.guards) << "\n";
                    write_sd_body(out, node.body, depth + 1);
                    out << pad << "end\n";
                } else {
                    out << pad << "par\n";
                    for (std::size_t i = 0; i < node.operands.size(); ++i) {
                        if (i > 0) out << pad << "and\n";
                        write_sd_body(out, node.operands[i], depth + 1);
                    }
                    out << pad << "end\n";
                }
            },
            el.node);
    }
}

void write_transitions(std::ostringstream& out, const std::vector<SmTransition>& transitions, const std::string& pad) {
    for (const auto& t : transitions) {
        out << pad << "trans " << t.source << " -> " << t.target;
        if (t.event) out << " : " << *t.event;
        out << render_literals(t.guards) << "\n";
    }
}

}  // namespace

Diagram parse_diagram(std::string_view text, std::string_view file) {
    std::string name(file);
    Lexer lexer(text, name);
    Parser parser(lexer.run(), name);
    return parser.parse();
}

std::string serialize_diagram(const SequenceDiagram& sd) {
    std::ostringstream out;
    out << "sequence " << sd.name << "\n";
    for (const auto& l : sd.lifelines) out << "lifeline " << l << "\n";
    write_sd_body(out, sd.body, 0);
    return out.str();
}

std::string serialize_diagram(const StateMachineDiagram& smd) {
    std::ostringstream out;
    out << "statemachine " << smd.name << "\n";
    if (!smd.initial.empty()) out << "initial " << smd.initial << "\n";
    for (const auto& s : smd.states) out << "state " << s << "\n";
    for (const auto& r : smd.regions) {
        out << "region " << r.name << " {\n";
        if (!r.initial.empty()) out << "  initial " << r.initial << "\n";
        for (const auto& s : r.states) out << "  state " << s << "\n";
        write_transitions(out, r.transitions, "  ");
        out << "}\n";
    }
    write_transitions(out, smd.transitions, "");
    return out.str();
}

std::string serialize_diagram(const ActivityDiagram& ad) {
    std::ostringstream out;
    out << "activity " << ad.name << "\n";
    for (const auto& n : ad.nodes) {
        if (n.kind == AdNodeKind::Initial) {
            out << "initial";
            if (n.id != kAdInitialId) out << " " << n.id;
            out << "\n";
        } else {
            out << to_string(n.kind) << " " << n.id << "\n";
        }
    }
    for (const auto& e : ad.edges) {
        out << "edge " << e.source << " -> " << e.target << render_literals(e.guards) << "\n";
    }
    return out.str();
}

std::string serialize_diagram(const Diagram& diagram) {
    return std::visit([](const auto& d) { return serialize_diagram(d); }, diagram);
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw BundleError("cannot read file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

DiagramBundle load_bundle(const std::vector<std::filesystem::path>& paths) {
    std::optional<SequenceDiagram> sd;
    std::optional<StateMachineDiagram> smd;
    std::optional<ActivityDiagram> ad;
    for (const auto& path : paths) {
        Diagram d = parse_diagram(read_text_file(path), path.string());
        auto place = [&](auto& slot, auto&& value, const char* what) {
            if (slot) throw BundleError(std::string("two ") + what + " diagrams given ('" + path.string() + "')");
            slot = std::move(value);
        };
        switch (kind_of(d)) {
            case DiagramKind::Sequence: place(sd, std::get<SequenceDiagram>(std::move(d)), "sequence"); break;
            case DiagramKind::StateMachine:
                place(smd, std::get<StateMachineDiagram>(std::move(d)), "state machine");
                break;
            case DiagramKind::Activity: place(ad, std::get<ActivityDiagram>(std::move(d)), "activity"); break;
        }
    }
    if (!sd) throw BundleError("sequence diagram is mandatory");
    if (!smd && !ad) throw BundleError("second diagram required: add a state machine or activity diagram");
    return DiagramBundle{std::move(*sd), std::move(smd), std::move(ad)};
}

}  // namespace uml2ts
