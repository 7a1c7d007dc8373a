#pragma once

// Reference implementations used only by tests. They share no code with
// the checker, the unifier statistics or the emitter.

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "uml2ts/property.hpp"
#include "uml2ts/smv_subset.hpp"
#include "uml2ts/ts_core.hpp"

namespace oracle {

// Path-semantics CTL: path quantifiers range over the simple lassos
// starting in a state (deadlocks get a self-loop). Simple lassos suffice
// because every CTL path property that some path satisfies is also
// satisfied by a simple lasso. Exponential; meant for small systems.
class LassoCtl {
public:
    using Atom = std::function<bool(std::size_t state, const uml2ts::Formula& atom)>;

    LassoCtl(std::vector<std::vector<std::size_t>> succ, Atom atom);

    bool holds(std::size_t state, const uml2ts::Formula& f);

private:
    bool path_holds(const std::vector<std::size_t>& lasso, std::size_t loop, const uml2ts::Formula& f);
    bool some_lasso(std::size_t start, const std::function<bool(const std::vector<std::size_t>&, std::size_t)>& pred);

    std::vector<std::vector<std::size_t>> succ_;
    Atom atom_;
    std::vector<std::pair<const uml2ts::Formula*, std::vector<signed char>>> memo_;
};

// Oracle verdict at the initial state of a unified TS.
bool lasso_check(const uml2ts::UnifiedTS& uts, const uml2ts::Formula& f);

struct GridCounts {
    std::size_t declared = 0;
    std::size_t reachable = 0;
};

// Works on the textual debug dump: builds the name x valuation grid and
// marks cells reachable from the all-dc `Start` cell by repeated sweeps
// over the dumped transitions.
GridCounts grid_reachability(std::string_view unified_dump);

// Explicit-state semantics of an SMV-subset model: the reachable
// assignments and their successors, computed by evaluating the case
// expressions for every value of the unassigned variables.
struct SmvKripke {
    std::vector<std::vector<std::string>> states;  // values in model.vars order
    std::vector<std::vector<std::size_t>> succ;
    std::vector<std::size_t> initial;
};

SmvKripke simulate(const uml2ts::SmvModel& model);

// CTLSPEC verdicts on the simulated model (true iff all initial states
// satisfy the spec), by plain iterated fixpoints.
std::vector<bool> smv_verdicts(const uml2ts::SmvModel& model);

}  // namespace oracle
