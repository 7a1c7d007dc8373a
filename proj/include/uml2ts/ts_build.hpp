#ifndef UML2TS_TS_BUILD_HPP
#define UML2TS_TS_BUILD_HPP

#include <optional>
#include <string>
#include <vector>

#include "uml2ts/diagram_model.hpp"
#include "uml2ts/ts_core.hpp"

namespace uml2ts {

// Each builder explores from a synthetic `Start` state, so every produced
// state is reachable. States are identified by diagram position plus gvs.
// Guard literals on edges leaving a node that lies on a cycle of the
// diagram are emitted as reassigning updates.

ComponentTS sd_to_ts(const SequenceDiagram& sd, const GuardList& guards);
ComponentTS smd_to_ts(const StateMachineDiagram& smd, const GuardList& guards);
ComponentTS ad_to_ts(const ActivityDiagram& ad, const GuardList& guards);

struct BundleComponents {
    GuardList guards;
    ComponentTS sd;
    std::optional<ComponentTS> smd;
    std::optional<ComponentTS> ad;
};

BundleComponents build_components(const DiagramBundle& bundle);

// Structural checks of a built component: Start initial with all-dc gvs,
// every transition's target gvs equals its source overwritten by the
// updates, every state reachable. Returns one message per problem.
std::vector<std::string> check_component(const ComponentTS& ts);

}  // namespace uml2ts

#endif
