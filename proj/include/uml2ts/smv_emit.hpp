#ifndef UML2TS_SMV_EMIT_HPP
#define UML2TS_SMV_EMIT_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "uml2ts/property.hpp"
#include "uml2ts/ts_core.hpp"

namespace uml2ts {

struct SmvOptions {
    // Keep `-` inside state names as the original listing does. Such
    // output is meant for reading; NuSMV takes `--` as a comment start.
    bool paper_style = false;
};

class EmitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Identifier used for a rendered state name.
std::string smv_identifier(const std::string& name, const SmvOptions& opts);

// Maps State atoms to emitted identifiers. Without paper_style, W is
// rewritten with U since NuSMV's CTL has no weak until.
Formula smv_formula(const Formula& f, const SmvOptions& opts);

std::string emit_property(const Formula& f, const SmvOptions& opts = {});

// `MODULE main` with State and one variable per guard. States with several
// successors pick one through the unconstrained variable `_choice`.
std::string emit_smv(const UnifiedTS& uts, const std::vector<Formula>& props, const SmvOptions& opts = {});

}  // namespace uml2ts

#endif
