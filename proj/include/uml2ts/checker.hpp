#ifndef UML2TS_CHECKER_HPP
#define UML2TS_CHECKER_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "uml2ts/property.hpp"
#include "uml2ts/ts_core.hpp"

namespace uml2ts {

class CheckError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A finite path, optionally closed into a lasso by an edge from the last
// state back to `loop_start`.
struct Trace {
    std::vector<std::size_t> prefix;
    std::optional<std::size_t> loop_start;

    friend bool operator==(const Trace&, const Trace&) = default;
};

struct Verdict {
    bool satisfied = false;
    Formula formula;
    std::optional<Trace> trace;
    // False when the formula failed but its negation is outside the shape
    // for which traces are produced.
    bool trace_supported = true;
};

// Set of states satisfying f, one flag per state. States without
// successors are treated as if they had a self-loop.
std::vector<bool> sat(const UnifiedTS& uts, const Formula& f);

// State atoms match rendered names, or their `-`->`_` spelling. Unknown
// state names and guards raise CheckError.
Verdict check(const UnifiedTS& uts, const Formula& f);

// Witness for !f from the initial state. nullopt when !f is outside the
// supported shape (at most one path-quantified conjunct per `&`).
std::optional<Trace> counterexample(const UnifiedTS& uts, const Formula& f);

// Checks that consecutive states are connected and that the loop closes.
bool trace_is_path(const UnifiedTS& uts, const Trace& trace);

// Numbered states with their gvs; the loop start is preceded by
// `-- loop starts here --`.
std::string format_trace(const UnifiedTS& uts, const Trace& trace);

// Pushes negations inward so that !f becomes an existential formula where
// possible (exposed for tests).
Formula negation_normal(const Formula& f, bool negate);

}  // namespace uml2ts

#endif
