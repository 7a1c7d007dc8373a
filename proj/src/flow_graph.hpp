#ifndef UML2TS_SRC_FLOW_GRAPH_HPP
#define UML2TS_SRC_FLOW_GRAPH_HPP

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "uml2ts/ts_core.hpp"

namespace uml2ts::detail {

inline constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Label and End nodes become visible states. Control nodes (alt/opt/loop
// heads, decisions, merges) are dissolved during exploration. Fork/Join
// delimit lockstep parallel sections.
enum class FlowKind { Label, Control, Fork, Join, End };

struct FlowEdge {
    std::size_t target = 0;
    GuardUpdates updates;
};

struct FlowNode {
    FlowKind kind = FlowKind::Label;
    std::string label;
    std::vector<FlowEdge> out;
    std::size_t join = kNone;  // forks only
};

struct FlowGraph {
    std::vector<FlowNode> nodes;
    std::size_t start = kNone;
    std::size_t end = kNone;

    std::size_t add(FlowKind kind, std::string label = {});
    void connect(std::size_t from, std::size_t to, GuardUpdates updates = {});

    // Flags every update on an edge leaving a node that lies on a cycle.
    void mark_reassignments();
};

// Nodes that belong to a nontrivial strongly connected component (size > 1
// or carrying a self-loop).
std::vector<bool> cyclic_nodes(const std::vector<std::vector<std::size_t>>& adjacency);

// Sequential composition: updates in `later` replace those in `earlier`.
GuardUpdates compose_updates(const GuardUpdates& earlier, const GuardUpdates& later);

// Overwrites without any consistency check.
GuardValuation overwrite(GuardValuation gvs, const GuardUpdates& updates);

ComponentTS explore(const FlowGraph& graph, DiagramKind kind, const GuardList& guards);

}  // namespace uml2ts::detail

#endif
