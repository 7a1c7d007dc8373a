#ifndef UML2TS_SMV_SUBSET_HPP
#define UML2TS_SMV_SUBSET_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace uml2ts {

// The fragment of the SMV language that emit_smv produces:
//
//   MODULE main
//   VAR (ident : {v, ...}; | ident : lo..hi;)+
//   ASSIGN (init(ident) := value; | next(ident) := case (cond : value;)+ esac;)*
//   (CTLSPEC formula)*
//
// where cond is TRUE or a conjunction of `ident=value` / `next(ident)=value`
// and a case result is a value or a variable name.

struct SmvVar {
    std::string name;
    std::vector<std::string> values;  // enumeration, or the range spelled out
};

struct SmvEq {
    std::string var;
    bool next = false;
    std::string value;
};

struct SmvArm {
    std::vector<SmvEq> condition;  // empty: TRUE
    std::string result;
};

struct SmvAssign {
    std::string var;
    std::vector<SmvArm> arms;
};

struct SmvModel {
    std::vector<SmvVar> vars;
    std::vector<std::pair<std::string, std::string>> init;
    std::vector<SmvAssign> next;
    std::vector<std::string> specs;  // formula text after CTLSPEC

    const SmvVar* var(std::string_view name) const;
    const SmvAssign* next_of(std::string_view name) const;
};

class SmvSyntaxError : public std::runtime_error {
public:
    SmvSyntaxError(std::size_t line, const std::string& message);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Parses and checks declarations: known variables, values within their
// domains, one init/next per variable, parsable CTLSPEC formulas.
SmvModel parse_smv(std::string_view text);

// Empty when the text conforms, otherwise the first error.
std::optional<std::string> smv_grammar_error(std::string_view text);

}  // namespace uml2ts

#endif
