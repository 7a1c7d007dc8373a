#include "uml2ts/smv_subset.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

#include "uml2ts/property.hpp"

namespace uml2ts {

SmvSyntaxError::SmvSyntaxError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

const SmvVar* SmvModel::var(std::string_view name) const {
    for (const auto& v : vars) {
        if (v.name == name) return &v;
    }
    return nullptr;
}

const SmvAssign* SmvModel::next_of(std::string_view name) const {
    for (const auto& a : next) {
        if (a.var == name) return &a;
    }
    return nullptr;
}

namespace {

enum class T { Ident, Sym, Spec, End };

struct Tk {
    T kind;
    std::string text;
    std::size_t line;
};

bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; }

std::vector<Tk> tokenize(std::string_view text) {
    std::vector<Tk> out;
    std::size_t line = 1;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (c == '\n') {
            ++line;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
            while (i < text.size() && text[i] != '\n') ++i;
            continue;
        }
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() && word_char(text[j])) ++j;
            std::string word(text.substr(i, j - i));
            i = j;
            if (word == "CTLSPEC") {
                std::size_t e = text.find('\n', i);
                if (e == std::string_view::npos) e = text.size();
                out.push_back(Tk{T::Spec, std::string(text.substr(i, e - i)), line});
                i = e;
                continue;
            }
            out.push_back(Tk{T::Ident, std::move(word), line});
            continue;
        }
        if (text.substr(i, 2) == ":=" || text.substr(i, 2) == "..") {
            out.push_back(Tk{T::Sym, std::string(text.substr(i, 2)), line});
            i += 2;
            continue;
        }
        if (std::string_view(":;{},()=&").find(c) != std::string_view::npos) {
            out.push_back(Tk{T::Sym, std::string(1, c), line});
            ++i;
            continue;
        }
        throw SmvSyntaxError(line, std::string("unexpected character '") + c + "'");
    }
    out.push_back(Tk{T::End, "", line});
    return out;
}

class SmvParser {
public:
    explicit SmvParser(std::vector<Tk> toks) : toks_(std::move(toks)) {}

    SmvModel parse() {
        keyword("MODULE");
        keyword("main");
        keyword("VAR");
        while (peek().kind == T::Ident && peek(1).text == ":") var_decl();
        if (model_.vars.empty()) fail("VAR block declares nothing");
        if (peek().kind == T::Ident && peek().text == "ASSIGN") {
            take();
            while (peek().kind == T::Ident && (peek().text == "init" || peek().text == "next")) assignment();
        }
        while (peek().kind == T::Spec) spec();
        if (peek().kind != T::End) fail("unexpected '" + peek().text + "'");
        return std::move(model_);
    }

private:
    const Tk& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    const Tk& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    [[noreturn]] void fail(const std::string& msg) const { throw SmvSyntaxError(peek().line, msg); }

    void keyword(std::string_view word) {
        if (peek().kind != T::Ident || peek().text != word) fail("expected '" + std::string(word) + "'");
        take();
    }
    void sym(std::string_view s) {
        if (peek().kind != T::Sym || peek().text != s) fail("expected '" + std::string(s) + "'");
        take();
    }
    std::string ident(std::string_view what) {
        if (peek().kind != T::Ident) fail("expected " + std::string(what));
        return take().text;
    }

    const SmvVar& declared(const std::string& name) {
        const SmvVar* v = model_.var(name);
        if (!v) fail("undeclared variable '" + name + "'");
        return *v;
    }
    void in_domain(const SmvVar& v, const std::string& value) {
        if (std::find(v.values.begin(), v.values.end(), value) == v.values.end()) {
            fail("value '" + value + "' is outside the domain of '" + v.name + "'");
        }
    }

    void var_decl() {
        SmvVar v;
        v.name = take().text;
        if (model_.var(v.name)) fail("duplicate variable '" + v.name + "'");
        sym(":");
        if (peek().text == "{") {
            take();
            std::set<std::string> seen;
            while (true) {
                std::string value = ident("enumeration value");
                if (!seen.insert(value).second) fail("duplicate value '" + value + "'");
                v.values.push_back(std::move(value));
                if (peek().text == ",") {
                    take();
                    continue;
                }
                sym("}");
                break;
            }
        } else {
            std::string lo = ident("range bound");
            sym("..");
            std::string hi = ident("range bound");
            int a = 0, b = 0;
            try {
                a = std::stoi(lo);
                b = std::stoi(hi);
            } catch (const std::exception&) {
                fail("range bounds must be integers");
            }
            if (a > b) fail("empty range");
            for (int x = a; x <= b; ++x) v.values.push_back(std::to_string(x));
        }
        sym(";");
        model_.vars.push_back(std::move(v));
    }

    void assignment() {
        bool is_next = take().text == "next";
        sym("(");
        std::string name = ident("variable");
        const SmvVar& v = declared(name);
        sym(")");
        sym(":=");
        if (!is_next) {
            for (const auto& [n, _] : model_.init) {
                if (n == name) fail("duplicate init for '" + name + "'");
            }
            std::string value = ident("value");
            in_domain(v, value);
            sym(";");
            model_.init.emplace_back(name, value);
            return;
        }
        if (model_.next_of(name)) fail("duplicate next for '" + name + "'");
        SmvAssign a{name, {}};
        keyword("case");
        while (!(peek().kind == T::Ident && peek().text == "esac")) {
            if (peek().kind == T::End) fail("unterminated case");
            a.arms.push_back(arm(v));
        }
        take();
        sym(";");
        if (a.arms.empty() || !a.arms.back().condition.empty()) fail("case for '" + name + "' lacks a TRUE arm");
        model_.next.push_back(std::move(a));
    }

    SmvArm arm(const SmvVar& target) {
        SmvArm out;
        if (peek().text == "TRUE") {
            take();
        } else {
            while (true) {
                SmvEq eq;
                if (peek().text == "next" && peek(1).text == "(") {
                    take();
                    take();
                    eq.next = true;
                    eq.var = ident("variable");
                    sym(")");
                } else {
                    eq.var = ident("variable");
                }
                const SmvVar& v = declared(eq.var);
                sym("=");
                eq.value = ident("value");
                in_domain(v, eq.value);
                out.condition.push_back(std::move(eq));
                if (peek().text != "&") break;
                take();
            }
        }
        sym(":");
        out.result = ident("value");
        if (const SmvVar* v = model_.var(out.result)) {
            if (v->values != target.values) fail("'" + out.result + "' has a different domain");
        } else {
            in_domain(target, out.result);
        }
        sym(";");
        return out;
    }

    void spec() {
        const Tk& t = take();
        Formula f;
        try {
            f = parse_ctl(t.text);
        } catch (const CtlSyntaxError& e) {
            throw SmvSyntaxError(t.line, e.what());
        }
        std::function<void(const Formula&)> atoms = [&](const Formula& g) {
            if (g.op == CtlOp::Atom) {
                const SmvVar* v = model_.var(g.subject);
                if (!v) throw SmvSyntaxError(t.line, "undeclared variable '" + g.subject + "' in CTLSPEC");
                if (std::find(v->values.begin(), v->values.end(), g.value) == v->values.end()) {
                    throw SmvSyntaxError(t.line, "value '" + g.value + "' is outside the domain of '" + g.subject + "'");
                }
            }
            for (const auto& a : g.args) atoms(a);
        };
        atoms(f);
        model_.specs.push_back(t.text);
    }

    std::vector<Tk> toks_;
    std::size_t pos_ = 0;
    SmvModel model_;
};

}  // namespace

SmvModel parse_smv(std::string_view text) { return SmvParser(tokenize(text)).parse(); }

std::optional<std::string> smv_grammar_error(std::string_view text) {
    try {
        parse_smv(text);
    } catch (const SmvSyntaxError& e) {
        return std::string(e.what());
    }
    return std::nullopt;
}

}  // namespace uml2ts
