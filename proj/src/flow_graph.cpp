#include "flow_graph.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>

namespace uml2ts::detail {

std::size_t FlowGraph::add(FlowKind kind, std::string label) {
    nodes.push_back(FlowNode{kind, std::move(label), {}, kNone});
    return nodes.size() - 1;
}

void FlowGraph::connect(std::size_t from, std::size_t to, GuardUpdates updates) {
    nodes.at(from).out.push_back(FlowEdge{to, std::move(updates)});
}

void FlowGraph::mark_reassignments() {
    std::vector<std::vector<std::size_t>> adj(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (const auto& e : nodes[i].out) adj[i].push_back(e.target);
    }
    auto cyclic = cyclic_nodes(adj);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!cyclic[i]) continue;
        for (auto& e : nodes[i].out) {
            for (auto& u : e.updates) u.reassign = true;
        }
    }
}

std::vector<bool> cyclic_nodes(const std::vector<std::vector<std::size_t>>& adjacency) {
    // Tarjan, iterative.
    const std::size_t n = adjacency.size();
    std::vector<std::size_t> index(n, kNone), low(n, 0);
    std::vector<bool> on_stack(n, false), cyclic(n, false);
    std::vector<std::size_t> stack;
    std::size_t counter = 0;

    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != kNone) continue;
        std::vector<std::pair<std::size_t, std::size_t>> work{{root, 0}};
        while (!work.empty()) {
            auto& [v, next_edge] = work.back();
            if (next_edge == 0 && index[v] == kNone) {
                index[v] = low[v] = counter++;
                stack.push_back(v);
                on_stack[v] = true;
            }
            if (next_edge < adjacency[v].size()) {
                std::size_t w = adjacency[v][next_edge++];
                if (index[w] == kNone) {
                    work.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                std::vector<std::size_t> component;
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    component.push_back(w);
                } while (w != v);
                bool nontrivial = component.size() > 1 ||
                                  std::find(adjacency[v].begin(), adjacency[v].end(), v) != adjacency[v].end();
                if (nontrivial) {
                    for (auto c : component) cyclic[c] = true;
                }
            }
            std::size_t finished = v;
            work.pop_back();
            if (!work.empty()) {
                auto parent = work.back().first;
                low[parent] = std::min(low[parent], low[finished]);
            }
        }
    }
    return cyclic;
}

GuardUpdates compose_updates(const GuardUpdates& earlier, const GuardUpdates& later) {
    GuardUpdates out = earlier;
    for (const auto& u : later) {
        auto it = std::find_if(out.begin(), out.end(), [&](const GuardUpdate& x) { return x.guard == u.guard; });
        if (it == out.end()) {
            out.push_back(u);
        } else {
            it->value = u.value;
            it->reassign = it->reassign || u.reassign;
        }
    }
    return out;
}

GuardValuation overwrite(GuardValuation gvs, const GuardUpdates& updates) {
    for (const auto& u : updates) gvs.set(u.guard, to_guard_value(u.value));
    return gvs;
}

namespace {

struct Position {
    enum class Kind { Leaf, Parallel, Finished };
    Kind kind = Kind::Leaf;
    std::size_t node = 0;  // leaf: label/end node; parallel: fork; finished: join
    std::vector<Position> branches;
    std::vector<std::string> padded;  // finished only: label shown while waiting

    static Position leaf(std::size_t node) { return Position{Kind::Leaf, node, {}, {}}; }
};

struct Move {
    Position target;
    bool arrived = false;  // reached `join` instead of a visible node
    std::size_t join = kNone;
    GuardUpdates updates;
    GuardValuation gvs;
};

template <typename T>
void for_each_combination(const std::vector<std::vector<T>>& options, const std::function<void(const std::vector<const T*>&)>& fn) {
    std::vector<const T*> pick(options.size());
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == options.size()) {
            fn(pick);
            return;
        }
        for (const auto& o : options[i]) {
            pick[i] = &o;
            rec(i + 1);
        }
    };
    for (const auto& o : options) {
        if (o.empty()) return;
    }
    rec(0);
}

class Explorer {
public:
    Explorer(const FlowGraph& graph) : g_(graph) {}

    std::string key(const Position& p) const {
        switch (p.kind) {
            case Position::Kind::Leaf: return "n" + std::to_string(p.node);
            case Position::Kind::Finished: {
                std::string out = "f" + std::to_string(p.node) + ":";
                for (const auto& s : p.padded) out += s + ",";
                return out;
            }
            case Position::Kind::Parallel: {
                std::string out = "p" + std::to_string(p.node) + "(";
                for (const auto& b : p.branches) out += key(b) + "|";
                return out + ")";
            }
        }
        return "";
    }

    std::vector<std::string> parts(const Position& p) const {
        switch (p.kind) {
            case Position::Kind::Leaf: return {g_.nodes[p.node].label};
            case Position::Kind::Finished: return p.padded;
            case Position::Kind::Parallel: {
                std::vector<std::string> out;
                for (const auto& b : p.branches) {
                    auto sub = parts(b);
                    out.insert(out.end(), sub.begin(), sub.end());
                }
                return out;
            }
        }
        return {};
    }

    // Moves out of `node` along its edges, dissolving control nodes.
    std::vector<Move> leave(std::size_t node, const GuardValuation& gvs, const GuardUpdates& acc,
                            std::vector<std::size_t> visited) const {
        std::vector<Move> out;
        for (const auto& e : g_.nodes[node].out) {
            if (!gvs_consistent(gvs, e.updates)) continue;
            auto sub = enter(e.target, overwrite(gvs, e.updates), compose_updates(acc, e.updates), visited);
            out.insert(out.end(), std::make_move_iterator(sub.begin()), std::make_move_iterator(sub.end()));
        }
        return out;
    }

    std::vector<Move> enter(std::size_t node, const GuardValuation& gvs, const GuardUpdates& acc,
                            std::vector<std::size_t> visited) const {
        const FlowNode& n = g_.nodes[node];
        switch (n.kind) {
            case FlowKind::Label:
            case FlowKind::End: return {Move{Position::leaf(node), false, kNone, acc, gvs}};
            case FlowKind::Join: return {Move{{}, true, node, acc, gvs}};
            case FlowKind::Control: {
                // A control-only cycle makes no visible progress.
                if (std::find(visited.begin(), visited.end(), node) != visited.end()) return {};
                visited.push_back(node);
                return leave(node, gvs, acc, std::move(visited));
            }
            case FlowKind::Fork: break;
        }

        std::vector<std::vector<Move>> per_branch;
        for (const auto& e : n.out) {
            if (!gvs_consistent(gvs, e.updates)) return {};
            per_branch.push_back(enter(e.target, overwrite(gvs, e.updates), e.updates, visited));
        }
        std::vector<Move> out;
        for_each_combination<Move>(per_branch, [&](const std::vector<const Move*>& pick) {
            GuardUpdates merged;
            Position par{Position::Kind::Parallel, node, {}, {}};
            bool ended = false;
            for (const Move* m : pick) {
                auto joint = merge_updates(merged, m->updates);
                if (!joint) return;
                merged = std::move(*joint);
                if (m->arrived) {
                    if (m->join != n.join) return;
                    par.branches.push_back(Position{Position::Kind::Finished, n.join, {}, {}});
                } else {
                    if (g_.nodes[m->target.node].kind == FlowKind::End && m->target.kind == Position::Kind::Leaf) {
                        ended = true;
                    }
                    par.branches.push_back(m->target);
                }
            }
            GuardValuation after = overwrite(gvs, merged);
            GuardUpdates total = compose_updates(acc, merged);
            if (ended) {
                out.push_back(Move{Position::leaf(g_.end), false, kNone, total, after});
                return;
            }
            if (all_finished(par)) {
                auto cont = leave(n.join, after, total, visited);
                out.insert(out.end(), cont.begin(), cont.end());
                return;
            }
            out.push_back(Move{std::move(par), false, kNone, total, after});
        });
        return out;
    }

    std::vector<Move> step(const Position& p, const GuardValuation& gvs) const {
        switch (p.kind) {
            case Position::Kind::Finished: return {};
            case Position::Kind::Leaf:
                if (g_.nodes[p.node].kind == FlowKind::End) return {};
                return leave(p.node, gvs, {}, {});
            case Position::Kind::Parallel: break;
        }

        const std::size_t join = g_.nodes[p.node].join;
        // Per branch: the moves it can make, or a single hold entry.
        struct Option {
            bool moved = false;
            Move move;
        };
        std::vector<std::vector<Option>> options;
        for (const auto& b : p.branches) {
            std::vector<Option> opts;
            if (b.kind != Position::Kind::Finished) {
                for (auto& m : step(b, gvs)) opts.push_back(Option{true, std::move(m)});
            }
            if (opts.empty()) opts.push_back(Option{false, {}});
            options.push_back(std::move(opts));
        }

        std::vector<Move> out;
        for_each_combination<Option>(options, [&](const std::vector<const Option*>& pick) {
            GuardUpdates merged;
            Position next{Position::Kind::Parallel, p.node, {}, {}};
            bool any = false;
            bool ended = false;
            for (std::size_t i = 0; i < pick.size(); ++i) {
                const Option& o = *pick[i];
                if (!o.moved) {
                    next.branches.push_back(p.branches[i]);
                    continue;
                }
                any = true;
                auto joint = merge_updates(merged, o.move.updates);
                if (!joint) return;
                merged = std::move(*joint);
                if (o.move.arrived) {
                    if (o.move.join != join) return;
                    next.branches.push_back(Position{Position::Kind::Finished, join, {}, parts(p.branches[i])});
                } else {
                    const Position& t = o.move.target;
                    if (t.kind == Position::Kind::Leaf && g_.nodes[t.node].kind == FlowKind::End) ended = true;
                    next.branches.push_back(t);
                }
            }
            if (!any) return;
            GuardValuation after = overwrite(gvs, merged);
            if (ended) {
                out.push_back(Move{Position::leaf(g_.end), false, kNone, merged, after});
                return;
            }
            if (all_finished(next)) {
                auto cont = leave(join, after, merged, {});
                out.insert(out.end(), cont.begin(), cont.end());
                return;
            }
            out.push_back(Move{std::move(next), false, kNone, merged, after});
        });
        return out;
    }

private:
    static bool all_finished(const Position& par) {
        return std::all_of(par.branches.begin(), par.branches.end(),
                           [](const Position& b) { return b.kind == Position::Kind::Finished; });
    }

    const FlowGraph& g_;
};

}  // namespace

ComponentTS explore(const FlowGraph& graph, DiagramKind kind, const GuardList& guards) {
    Explorer ex(graph);
    auto domain = std::make_shared<const GuardList>(guards);

    ComponentTS ts;
    ts.kind = kind;
    std::map<std::pair<std::string, std::vector<GuardValue>>, std::size_t> ids;
    std::vector<Position> positions;
    std::deque<std::size_t> queue;

    auto intern = [&](const Position& p, const GuardValuation& gvs) {
        auto k = std::make_pair(ex.key(p), gvs.values());
        auto [it, fresh] = ids.emplace(std::move(k), ts.states.size());
        if (fresh) {
            ts.states.push_back(ComponentState{Label(ex.parts(p)), gvs});
            positions.push_back(p);
            queue.push_back(it->second);
        }
        return it->second;
    };

    ts.initial = intern(Position::leaf(graph.start), GuardValuation(domain));
    while (!queue.empty()) {
        std::size_t id = queue.front();
        queue.pop_front();
        Position here = positions[id];
        GuardValuation gvs = ts.states[id].gvs;
        for (auto& m : ex.step(here, gvs)) {
            if (m.arrived) continue;
            std::size_t target = intern(m.target, m.gvs);
            bool dup = std::any_of(ts.transitions.begin(), ts.transitions.end(), [&](const ComponentTransition& t) {
                return t.source == id && t.target == target && t.updates == m.updates;
            });
            if (!dup) ts.transitions.push_back(ComponentTransition{id, target, std::move(m.updates)});
        }
    }
    return ts;
}

}  // namespace uml2ts::detail
