#include "uml2ts/property.hpp"

#include <algorithm>
#include <cctype>

namespace uml2ts {

std::string_view to_string(CtlOp op) {
    switch (op) {
        case CtlOp::True: return "TRUE";
        case CtlOp::False: return "FALSE";
        case CtlOp::Atom: return "atom";
        case CtlOp::Not: return "!";
        case CtlOp::And: return "&";
        case CtlOp::Or: return "|";
        case CtlOp::Implies: return "->";
        case CtlOp::AX: return "AX";
        case CtlOp::EX: return "EX";
        case CtlOp::AF: return "AF";
        case CtlOp::EF: return "EF";
        case CtlOp::AG: return "AG";
        case CtlOp::EG: return "EG";
        case CtlOp::AU: return "AU";
        case CtlOp::EU: return "EU";
        case CtlOp::AW: return "AW";
        case CtlOp::EW: return "EW";
    }
    return "?";
}

bool is_temporal_unary(CtlOp op) {
    switch (op) {
        case CtlOp::AX:
        case CtlOp::EX:
        case CtlOp::AF:
        case CtlOp::EF:
        case CtlOp::AG:
        case CtlOp::EG: return true;
        default: return false;
    }
}

bool is_temporal_binary(CtlOp op) {
    return op == CtlOp::AU || op == CtlOp::EU || op == CtlOp::AW || op == CtlOp::EW;
}

Formula Formula::atom(std::string subject, std::string value) {
    return Formula{CtlOp::Atom, std::move(subject), std::move(value), {}};
}

Formula Formula::unary(CtlOp op, Formula arg) { return Formula{op, {}, {}, {std::move(arg)}}; }

Formula Formula::binary(CtlOp op, Formula lhs, Formula rhs) {
    return Formula{op, {}, {}, {std::move(lhs), std::move(rhs)}};
}

std::size_t Formula::depth() const {
    std::size_t d = 0;
    for (const auto& a : args) d = std::max(d, a.depth());
    return d + 1;
}

Formula f_not(Formula f) { return Formula::unary(CtlOp::Not, std::move(f)); }
Formula f_and(Formula a, Formula b) { return Formula::binary(CtlOp::And, std::move(a), std::move(b)); }
Formula f_or(Formula a, Formula b) { return Formula::binary(CtlOp::Or, std::move(a), std::move(b)); }
Formula f_implies(Formula a, Formula b) { return Formula::binary(CtlOp::Implies, std::move(a), std::move(b)); }
Formula f_ag(Formula f) { return Formula::unary(CtlOp::AG, std::move(f)); }
Formula f_af(Formula f) { return Formula::unary(CtlOp::AF, std::move(f)); }
Formula f_au(Formula a, Formula b) { return Formula::binary(CtlOp::AU, std::move(a), std::move(b)); }
Formula f_aw(Formula a, Formula b) { return Formula::binary(CtlOp::AW, std::move(a), std::move(b)); }

CtlSyntaxError::CtlSyntaxError(std::size_t column, const std::string& message)
    : std::runtime_error("syntax error at column " + std::to_string(column) + ": " + message), column_(column) {}

namespace {

enum class Tok { Ident, LParen, RParen, LBracket, RBracket, Bang, Amp, Bar, Arrow, Eq, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t column;
};

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; }

std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        std::size_t col = i + 1;
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (ident_char(c)) {
            std::size_t j = i;
            // '-' joins identifier pieces unless it starts '->'.
            while (j < text.size() &&
                   (ident_char(text[j]) ||
                    (text[j] == '-' && (j + 1 == text.size() || text[j + 1] != '>')))) {
                ++j;
            }
            out.push_back(Token{Tok::Ident, std::string(text.substr(i, j - i)), col});
            i = j;
            continue;
        }
        if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
            out.push_back(Token{Tok::Arrow, "->", col});
            i += 2;
            continue;
        }
        Tok kind;
        switch (c) {
            case '(': kind = Tok::LParen; break;
            case ')': kind = Tok::RParen; break;
            case '[': kind = Tok::LBracket; break;
            case ']': kind = Tok::RBracket; break;
            case '!': kind = Tok::Bang; break;
            case '&': kind = Tok::Amp; break;
            case '|': kind = Tok::Bar; break;
            case '=': kind = Tok::Eq; break;
            default: throw CtlSyntaxError(col, std::string("unexpected character '") + c + "'");
        }
        out.push_back(Token{kind, std::string(1, c), col});
        ++i;
    }
    out.push_back(Token{Tok::End, "", text.size() + 1});
    return out;
}

std::optional<CtlOp> unary_keyword(std::string_view s) {
    if (s == "AX") return CtlOp::AX;
    if (s == "EX") return CtlOp::EX;
    if (s == "AF") return CtlOp::AF;
    if (s == "EF") return CtlOp::EF;
    if (s == "AG") return CtlOp::AG;
    if (s == "EG") return CtlOp::EG;
    return std::nullopt;
}

class CtlParser {
public:
    explicit CtlParser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Formula parse() {
        Formula f = implication();
        if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
        return f;
    }

private:
    const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    [[noreturn]] void fail(const std::string& msg) const { throw CtlSyntaxError(peek().column, msg); }

    void expect(Tok kind, std::string_view what) {
        if (peek().kind != kind) fail("expected " + std::string(what));
        take();
    }

    Formula implication() {
        Formula lhs = disjunction();
        if (peek().kind == Tok::Arrow) {
            take();
            return f_implies(std::move(lhs), implication());
        }
        return lhs;
    }

    Formula disjunction() {
        Formula f = conjunction();
        while (peek().kind == Tok::Bar) {
            take();
            f = f_or(std::move(f), conjunction());
        }
        return f;
    }

    Formula conjunction() {
        Formula f = unary();
        while (peek().kind == Tok::Amp) {
            take();
            f = f_and(std::move(f), unary());
        }
        return f;
    }

    Formula unary() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::Bang: take(); return f_not(unary());
            case Tok::LParen: {
                take();
                Formula f = implication();
                expect(Tok::RParen, "')'");
                return f;
            }
            case Tok::Ident: break;
            case Tok::End: fail("unexpected end of formula");
            default: fail("unexpected '" + t.text + "'");
        }
        // An identifier followed by '=' is always an atom.
        if (peek(1).kind == Tok::Eq) return atom();
        if (t.text == "TRUE" || t.text == "true") {
            take();
            return Formula::truth();
        }
        if (t.text == "FALSE" || t.text == "false") {
            take();
            return Formula::falsity();
        }
        if (auto op = unary_keyword(t.text)) {
            take();
            return Formula::unary(*op, unary());
        }
        if ((t.text == "A" || t.text == "E") && peek(1).kind == Tok::LBracket) {
            bool universal = t.text == "A";
            take();
            take();
            Formula lhs = implication();
            const Token& mid = peek();
            if (mid.kind != Tok::Ident || (mid.text != "U" && mid.text != "W")) fail("expected 'U' or 'W'");
            bool until = mid.text == "U";
            take();
            Formula rhs = implication();
            expect(Tok::RBracket, "']'");
            CtlOp op = universal ? (until ? CtlOp::AU : CtlOp::AW) : (until ? CtlOp::EU : CtlOp::EW);
            return Formula::binary(op, std::move(lhs), std::move(rhs));
        }
        fail("expected '=' after '" + t.text + "'");
    }

    Formula atom() {
        std::string subject = take().text;
        take();
        if (peek().kind != Tok::Ident) fail("expected a value after '='");
        return Formula::atom(std::move(subject), take().text);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

bool needs_parens(const Formula& f) {
    return f.op == CtlOp::And || f.op == CtlOp::Or || f.op == CtlOp::Implies;
}

std::string operand(const Formula& f) {
    std::string s = render_ctl(f);
    return needs_parens(f) ? "(" + s + ")" : s;
}

}  // namespace

Formula parse_ctl(std::string_view text) { return CtlParser(lex(text)).parse(); }

std::string render_ctl(const Formula& f) {
    switch (f.op) {
        case CtlOp::True: return "TRUE";
        case CtlOp::False: return "FALSE";
        case CtlOp::Atom: return f.subject + " = " + f.value;
        case CtlOp::Not: return "!(" + render_ctl(f.args[0]) + ")";
        case CtlOp::And: return operand(f.args[0]) + " & " + operand(f.args[1]);
        case CtlOp::Or: return operand(f.args[0]) + " | " + operand(f.args[1]);
        case CtlOp::Implies: return operand(f.args[0]) + " -> " + operand(f.args[1]);
        case CtlOp::AU:
        case CtlOp::EU:
        case CtlOp::AW:
        case CtlOp::EW: {
            std::string q = (f.op == CtlOp::AU || f.op == CtlOp::AW) ? "A" : "E";
            std::string m = (f.op == CtlOp::AU || f.op == CtlOp::EU) ? "U" : "W";
            return q + " [ " + operand(f.args[0]) + " " + m + " " + operand(f.args[1]) + " ]";
        }
        default: return std::string(to_string(f.op)) + " (" + render_ctl(f.args[0]) + ")";
    }
}

// ---------------------------------------------------------------------------
// patterns

std::string_view to_string(PatternKind kind) {
    switch (kind) {
        case PatternKind::Absence: return "absence";
        case PatternKind::Existence: return "existence";
        case PatternKind::Universality: return "universality";
        case PatternKind::Precedence: return "precedence";
        case PatternKind::Response: return "response";
    }
    return "?";
}

std::string_view to_string(PatternScope scope) {
    switch (scope) {
        case PatternScope::Global: return "global";
        case PatternScope::BeforeR: return "before-r";
        case PatternScope::AfterQ: return "after-q";
        case PatternScope::BetweenQR: return "between-q-r";
        case PatternScope::AfterQUntilR: return "after-q-until-r";
    }
    return "?";
}

namespace {
constexpr PatternKind kKinds[] = {PatternKind::Absence, PatternKind::Existence, PatternKind::Universality,
                                  PatternKind::Precedence, PatternKind::Response};
constexpr PatternScope kScopes[] = {PatternScope::Global, PatternScope::BeforeR, PatternScope::AfterQ,
                                    PatternScope::BetweenQR, PatternScope::AfterQUntilR};
}  // namespace

std::optional<PatternKind> parse_pattern_kind(std::string_view text) {
    for (auto k : kKinds) {
        if (to_string(k) == text) return k;
    }
    return std::nullopt;
}

std::optional<PatternScope> parse_pattern_scope(std::string_view text) {
    for (auto s : kScopes) {
        if (to_string(s) == text) return s;
    }
    return std::nullopt;
}

std::vector<std::string> supported_cells() {
    std::vector<std::string> out;
    for (auto k : kKinds) {
        for (auto s : kScopes) out.push_back(std::string(to_string(k)) + "/" + std::string(to_string(s)));
    }
    return out;
}

namespace {

const Formula& anchor(const std::optional<Formula>& f, std::string_view name, const PatternSpec& spec) {
    if (!f) {
        throw PatternError(std::string(to_string(spec.kind)) + "/" + std::string(to_string(spec.scope)) +
                           " requires " + std::string(name));
    }
    return *f;
}

}  // namespace

Formula instantiate_pattern(const PatternSpec& spec) {
    const Formula& P = anchor(spec.p, "P", spec);
    bool needs_q = spec.scope == PatternScope::AfterQ || spec.scope == PatternScope::BetweenQR ||
                   spec.scope == PatternScope::AfterQUntilR;
    bool needs_r = spec.scope == PatternScope::BeforeR || spec.scope == PatternScope::BetweenQR ||
                   spec.scope == PatternScope::AfterQUntilR;
    bool needs_s = spec.kind == PatternKind::Precedence || spec.kind == PatternKind::Response;
    Formula Q = needs_q ? anchor(spec.q, "Q", spec) : Formula::truth();
    Formula R = needs_r ? anchor(spec.r, "R", spec) : Formula::truth();
    Formula S = needs_s ? anchor(spec.s, "S", spec) : Formula::truth();

    auto nP = [&] { return f_not(P); };
    auto nR = [&] { return f_not(R); };
    auto nQ = [&] { return f_not(Q); };
    auto ag_nR = [&] { return f_ag(nR()); };
    auto qr = [&] { return f_and(Q, nR()); };  // Q & !R

    switch (spec.kind) {
        case PatternKind::Absence:
            switch (spec.scope) {
                case PatternScope::Global: return f_ag(nP());
                case PatternScope::BeforeR: return f_aw(f_or(nP(), ag_nR()), R);
                case PatternScope::AfterQ: return f_ag(f_implies(Q, f_ag(nP())));
                case PatternScope::BetweenQR: return f_ag(f_implies(qr(), f_aw(f_or(nP(), ag_nR()), R)));
                case PatternScope::AfterQUntilR: return f_ag(f_implies(qr(), f_aw(nP(), R)));
            }
            break;
        case PatternKind::Existence:
            switch (spec.scope) {
                case PatternScope::Global: return f_af(P);
                case PatternScope::BeforeR: return f_aw(nR(), f_and(P, nR()));
                case PatternScope::AfterQ: return f_aw(nQ(), f_and(Q, f_af(P)));
                case PatternScope::BetweenQR: return f_ag(f_implies(qr(), f_aw(nR(), f_and(P, nR()))));
                case PatternScope::AfterQUntilR: return f_ag(f_implies(qr(), f_au(nR(), f_and(P, nR()))));
            }
            break;
        case PatternKind::Universality:
            switch (spec.scope) {
                case PatternScope::Global: return f_ag(P);
                case PatternScope::BeforeR: return f_aw(f_or(P, ag_nR()), R);
                case PatternScope::AfterQ: return f_ag(f_implies(Q, f_ag(P)));
                case PatternScope::BetweenQR: return f_ag(f_implies(qr(), f_aw(f_or(P, ag_nR()), R)));
                case PatternScope::AfterQUntilR: return f_ag(f_implies(qr(), f_aw(P, R)));
            }
            break;
        case PatternKind::Precedence:
            switch (spec.scope) {
                case PatternScope::Global: return f_aw(nP(), S);
                case PatternScope::BeforeR: return f_aw(f_or(nP(), ag_nR()), f_or(S, R));
                case PatternScope::AfterQ: return f_aw(nQ(), f_and(Q, f_aw(nP(), S)));
                case PatternScope::BetweenQR: return f_ag(f_implies(qr(), f_aw(f_or(nP(), ag_nR()), f_or(S, R))));
                case PatternScope::AfterQUntilR: return f_ag(f_implies(qr(), f_aw(nP(), f_or(S, R))));
            }
            break;
        case PatternKind::Response: {
            auto bounded = [&] { return f_implies(P, f_au(nR(), f_and(S, nR()))); };
            switch (spec.scope) {
                case PatternScope::Global: return f_ag(f_implies(P, f_af(S)));
                case PatternScope::BeforeR: return f_aw(f_or(bounded(), ag_nR()), R);
                case PatternScope::AfterQ: return f_aw(nQ(), f_and(Q, f_ag(f_implies(P, f_af(S)))));
                case PatternScope::BetweenQR: return f_ag(f_implies(qr(), f_aw(f_or(bounded(), ag_nR()), R)));
                case PatternScope::AfterQUntilR: return f_ag(f_implies(qr(), f_aw(bounded(), R)));
            }
            break;
        }
    }
    std::string cells;
    for (const auto& c : supported_cells()) cells += (cells.empty() ? "" : ", ") + c;
    throw PatternError("unsupported pattern cell; supported: " + cells);
}

}  // namespace uml2ts
