#ifndef UML2TS_PROPERTY_HPP
#define UML2TS_PROPERTY_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace uml2ts {

enum class CtlOp { True, False, Atom, Not, And, Or, Implies, AX, EX, AF, EF, AG, EG, AU, EU, AW, EW };

std::string_view to_string(CtlOp op);
bool is_temporal_unary(CtlOp op);
bool is_temporal_binary(CtlOp op);

// CTL formula. Atoms are `subject = value`, where subject is `State` or a
// guard name; the parser does not interpret either side.
struct Formula {
    CtlOp op = CtlOp::True;
    std::string subject;
    std::string value;
    std::vector<Formula> args;

    static Formula truth() { return Formula{CtlOp::True, {}, {}, {}}; }
    static Formula falsity() { return Formula{CtlOp::False, {}, {}, {}}; }
    static Formula atom(std::string subject, std::string value);
    static Formula unary(CtlOp op, Formula arg);
    static Formula binary(CtlOp op, Formula lhs, Formula rhs);

    std::size_t depth() const;

    friend bool operator==(const Formula&, const Formula&) = default;
};

// Shorthands used by the pattern table and tests.
Formula f_not(Formula f);
Formula f_and(Formula a, Formula b);
Formula f_or(Formula a, Formula b);
Formula f_implies(Formula a, Formula b);
Formula f_ag(Formula f);
Formula f_af(Formula f);
Formula f_au(Formula a, Formula b);
Formula f_aw(Formula a, Formula b);

class CtlSyntaxError : public std::runtime_error {
public:
    CtlSyntaxError(std::size_t column, const std::string& message);
    std::size_t column() const { return column_; }

private:
    std::size_t column_;
};

// NuSMV-style concrete syntax. Precedence, tightest first: `!`, temporal
// unaries, `&`, `|`, `->` (right associative). Values of atoms may contain
// `-` (rendered unified names), but never start `->`.
Formula parse_ctl(std::string_view text);

// Canonical text, e.g. `AG (!(State = X))`, `A [ p W q ]`.
std::string render_ctl(const Formula& f);

// --- specification patterns ---

enum class PatternKind { Absence, Existence, Universality, Precedence, Response };
enum class PatternScope { Global, BeforeR, AfterQ, BetweenQR, AfterQUntilR };

std::string_view to_string(PatternKind kind);
std::string_view to_string(PatternScope scope);
std::optional<PatternKind> parse_pattern_kind(std::string_view text);
std::optional<PatternScope> parse_pattern_scope(std::string_view text);

// P is the constrained proposition. S is the second event of precedence
// ("S precedes P") and response ("S responds to P").
struct PatternSpec {
    PatternKind kind = PatternKind::Absence;
    PatternScope scope = PatternScope::Global;
    std::optional<Formula> p;
    std::optional<Formula> q;
    std::optional<Formula> r;
    std::optional<Formula> s;
};

class PatternError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Every pattern x scope cell as "kind/scope".
std::vector<std::string> supported_cells();

// Throws PatternError for an unknown cell or a missing anchor.
Formula instantiate_pattern(const PatternSpec& spec);

}  // namespace uml2ts

#endif
