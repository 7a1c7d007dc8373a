#ifndef UML2TS_UNIFIER_HPP
#define UML2TS_UNIFIER_HPP

#include <cstddef>
#include <optional>

#include "uml2ts/diagram_model.hpp"
#include "uml2ts/ts_build.hpp"
#include "uml2ts/ts_core.hpp"

namespace uml2ts {

// Merges the SD component with the SMD and/or AD components.
//
// The SD leads: whenever it has a move consistent with the current gvs it
// takes one. Followers then move in SMD, AD order against the running
// valuation. A follower with no outgoing transitions holds. One whose
// transitions are all inconsistent is shown as `-` when the SD advanced
// (it disagrees with the scenario) and holds otherwise. When the SD step
// fixed a guard, followers may only take moves that change nothing; an
// unguarded SD step lets followers branch on any consistent choice.
// If the SD cannot move, followers may still take gvs-neutral steps.
//
// States are identified by rendered name and gvs. State indices follow a
// BFS from the initial state with successors ordered by (name, gvs).
UnifiedTS unify(const ComponentTS& sd, const std::optional<ComponentTS>& smd, const std::optional<ComponentTS>& ad,
                const GuardList& guards);

UnifiedTS unify(const BundleComponents& parts);
UnifiedTS unify(const DiagramBundle& bundle);

struct ReachableStats {
    std::size_t declared = 0;
    std::size_t reachable = 0;

    friend bool operator==(const ReachableStats&, const ReachableStats&) = default;
};

// declared = distinct rendered names x 3^|guards| (the SMV state space);
// reachable = states reachable from the initial one.
ReachableStats reachable_stats(const UnifiedTS& uts);

}  // namespace uml2ts

#endif
