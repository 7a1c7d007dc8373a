#include "uml2ts/ts_build.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>

#include "flow_graph.hpp"

namespace uml2ts {

using detail::FlowGraph;
using detail::FlowKind;

namespace {

GuardUpdates negated(const GuardLiteral& lit) { return {GuardUpdate{lit.guard, !lit.polarity, false}}; }

// Control node whose edges enter `body` under `guards` or skip to `skip`
// under any one negated literal.
void guarded_choice(FlowGraph& g, std::size_t head, std::size_t body, std::size_t skip, const GuardSet& guards) {
    g.connect(head, body, to_updates(guards));
    if (guards.empty()) {
        g.connect(head, skip);
        return;
    }
    for (const auto& lit : guards) g.connect(head, skip, negated(lit));
}

std::size_t compile_sd(FlowGraph& g, const SdBody& body, std::size_t next);

std::size_t compile_sd_element(FlowGraph& g, const SdElement& el, std::size_t next) {
    return std::visit(
        [&](const auto& node) -> std::size_t {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, SdMessage>) {
                std::size_t n = g.add(FlowKind::Label, node.name);
                g.connect(n, next);
                return n;
            } else if constexpr (std::is_same_v<T, SdAlt>) {
                std::size_t head = g.add(FlowKind::Control);
                for (const auto& b : node.branches) g.connect(head, compile_sd(g, b.body, next), to_updates(b.guards));
                return head;
            } else if constexpr (std::is_same_v<T, SdOpt>) {
                std::size_t head = g.add(FlowKind::Control);
                guarded_choice(g, head, compile_sd(g, node.body, next), next, node.guards);
                return head;
            } else if constexpr (std::is_same_v<T, SdLoop>) {
                std::size_t head = g.add(FlowKind::Control);
                guarded_choice(g, head, compile_sd(g, node.body, head), next, node.guards);
                return head;
            } else {
                std::size_t fork = g.add(FlowKind::Fork);
                std::size_t join = g.add(FlowKind::Join);
                g.nodes[fork].join = join;
                for (const auto& op : node.operands) g.connect(fork, compile_sd(g, op, join));
                g.connect(join, next);
                return fork;
            }
        },
        el.node);
}

std::size_t compile_sd(FlowGraph& g, const SdBody& body, std::size_t next) {
    for (auto it = body.rbegin(); it != body.rend(); ++it) next = compile_sd_element(g, *it, next);
    return next;
}

}  // namespace

ComponentTS sd_to_ts(const SequenceDiagram& sd, const GuardList& guards) {
    FlowGraph g;
    g.start = g.add(FlowKind::Label, std::string(Label::kStart));
    g.end = g.add(FlowKind::End, std::string(Label::kEnd));
    g.connect(g.start, compile_sd(g, sd.body, g.end));
    g.mark_reassignments();
    return detail::explore(g, DiagramKind::Sequence, guards);
}

ComponentTS ad_to_ts(const ActivityDiagram& ad, const GuardList& guards) {
    FlowGraph g;
    g.end = g.add(FlowKind::End, std::string(Label::kEnd));
    std::map<std::string, std::size_t> ids;
    for (const auto& n : ad.nodes) {
        switch (n.kind) {
            case AdNodeKind::Initial:
                ids[n.id] = g.start = g.add(FlowKind::Label, std::string(Label::kStart));
                break;
            case AdNodeKind::Action: ids[n.id] = g.add(FlowKind::Label, n.id); break;
            case AdNodeKind::Decision:
            case AdNodeKind::Merge: ids[n.id] = g.add(FlowKind::Control); break;
            case AdNodeKind::Fork: ids[n.id] = g.add(FlowKind::Fork); break;
            case AdNodeKind::Join: ids[n.id] = g.add(FlowKind::Join); break;
            case AdNodeKind::Final: ids[n.id] = g.end; break;
        }
    }
    for (const auto& n : ad.nodes) {
        if (n.kind != AdNodeKind::Fork) continue;
        if (auto join = matching_join(ad, n.id)) g.nodes[ids.at(n.id)].join = ids.at(*join);
    }
    for (const auto& e : ad.edges) {
        auto s = ids.find(e.source);
        auto t = ids.find(e.target);
        if (s == ids.end() || t == ids.end()) continue;
        g.connect(s->second, t->second, to_updates(e.guards));
    }
    if (g.start == detail::kNone) g.start = g.add(FlowKind::Label, std::string(Label::kStart));
    g.mark_reassignments();
    return detail::explore(g, DiagramKind::Activity, guards);
}

namespace {

// SMD position: the synthetic start, a top-level state, or one state per
// region while inside the orthogonal composite.
struct SmPosition {
    enum class Kind { Start, Top, Regions } kind = Kind::Start;
    std::size_t top = 0;
    std::vector<std::size_t> tuple;

    std::string key() const {
        switch (kind) {
            case Kind::Start: return "s";
            case Kind::Top: return "t" + std::to_string(top);
            case Kind::Regions: {
                std::string out = "r";
                for (auto s : tuple) out += std::to_string(s) + ",";
                return out;
            }
        }
        return "";
    }
};

struct SmMove {
    SmPosition target;
    GuardUpdates updates;
};

class SmExplorer {
public:
    SmExplorer(const StateMachineDiagram& smd) : smd_(smd) {
        names_ = smd.all_states();
        for (std::size_t i = 0; i < names_.size(); ++i) {
            index_[names_[i]] = i;
            auto r = smd.region_of(names_[i]);
            region_.push_back(r ? *r : detail::kNone);
        }
        transitions_ = smd.all_transitions();
        out_.resize(names_.size());
        std::vector<std::vector<std::size_t>> adj(names_.size());
        for (std::size_t i = 0; i < transitions_.size(); ++i) {
            auto s = index_.find(transitions_[i].source);
            auto t = index_.find(transitions_[i].target);
            if (s == index_.end() || t == index_.end()) continue;
            out_[s->second].push_back(i);
            adj[s->second].push_back(t->second);
        }
        auto cyclic = detail::cyclic_nodes(adj);
        for (const auto& t : transitions_) {
            GuardUpdates u = to_updates(t.guards);
            auto s = index_.find(t.source);
            if (s != index_.end() && cyclic[s->second]) {
                for (auto& x : u) x.reassign = true;
            }
            updates_.push_back(std::move(u));
        }
    }

    Label label(const SmPosition& p) const {
        switch (p.kind) {
            case SmPosition::Kind::Start: return Label(std::string(Label::kStart));
            case SmPosition::Kind::Top: return Label(names_[p.top]);
            case SmPosition::Kind::Regions: {
                std::vector<std::string> parts;
                for (auto s : p.tuple) parts.push_back(names_[s]);
                return Label(std::move(parts));
            }
        }
        return {};
    }

    std::vector<SmMove> step(const SmPosition& p, const GuardValuation& gvs) const {
        std::vector<SmMove> out;
        switch (p.kind) {
            case SmPosition::Kind::Start: {
                auto it = index_.find(smd_.initial);
                if (it != index_.end()) out.push_back(SmMove{place(it->second), {}});
                break;
            }
            case SmPosition::Kind::Top:
                for (auto ti : out_[p.top]) {
                    if (!gvs_consistent(gvs, updates_[ti])) continue;
                    out.push_back(SmMove{place(target_of(ti)), updates_[ti]});
                }
                break;
            case SmPosition::Kind::Regions: step_regions(p, gvs, out); break;
        }
        return out;
    }

private:
    std::size_t target_of(std::size_t transition) const { return index_.at(transitions_[transition].target); }

    // Entering a region state enters every region at its initial state.
    SmPosition place(std::size_t state) const {
        if (region_[state] == detail::kNone) return SmPosition{SmPosition::Kind::Top, state, {}};
        SmPosition p{SmPosition::Kind::Regions, 0, {}};
        for (std::size_t r = 0; r < smd_.regions.size(); ++r) {
            auto it = index_.find(smd_.regions[r].initial);
            p.tuple.push_back(it == index_.end() ? index_.at(smd_.regions[r].states.front()) : it->second);
        }
        p.tuple[region_[state]] = state;
        return p;
    }

    void step_regions(const SmPosition& p, const GuardValuation& gvs, std::vector<SmMove>& out) const {
        // A consistent exit takes priority over internal steps, as a
        // completion transition leaving the composite would.
        for (std::size_t r = 0; r < p.tuple.size(); ++r) {
            for (auto ti : out_[p.tuple[r]]) {
                std::size_t t = target_of(ti);
                if (region_[t] != detail::kNone || !gvs_consistent(gvs, updates_[ti])) continue;
                out.push_back(SmMove{SmPosition{SmPosition::Kind::Top, t, {}}, updates_[ti]});
            }
        }
        if (!out.empty()) return;
        // Synchronous internal step: every region with an admissible
        // transition advances, the others hold.
        std::vector<std::vector<std::size_t>> choices(p.tuple.size());
        bool any = false;
        for (std::size_t r = 0; r < p.tuple.size(); ++r) {
            for (auto ti : out_[p.tuple[r]]) {
                if (region_[target_of(ti)] != r || !gvs_consistent(gvs, updates_[ti])) continue;
                choices[r].push_back(ti);
                any = true;
            }
        }
        if (any) {
            std::vector<std::size_t> pick(p.tuple.size(), detail::kNone);
            std::function<void(std::size_t)> rec = [&](std::size_t r) {
                if (r == p.tuple.size()) {
                    GuardUpdates merged;
                    SmPosition next = p;
                    for (std::size_t i = 0; i < pick.size(); ++i) {
                        if (pick[i] == detail::kNone) continue;
                        auto joint = merge_updates(merged, updates_[pick[i]]);
                        if (!joint) return;
                        merged = std::move(*joint);
                        next.tuple[i] = target_of(pick[i]);
                    }
                    out.push_back(SmMove{std::move(next), std::move(merged)});
                    return;
                }
                if (choices[r].empty()) {
                    pick[r] = detail::kNone;
                    rec(r + 1);
                    return;
                }
                for (auto ti : choices[r]) {
                    pick[r] = ti;
                    rec(r + 1);
                }
            };
            rec(0);
        }
    }

    const StateMachineDiagram& smd_;
    std::vector<std::string> names_;
    std::map<std::string, std::size_t> index_;
    std::vector<std::size_t> region_;
    std::vector<SmTransition> transitions_;
    std::vector<GuardUpdates> updates_;
    std::vector<std::vector<std::size_t>> out_;
};

}  // namespace

ComponentTS smd_to_ts(const StateMachineDiagram& smd, const GuardList& guards) {
    SmExplorer ex(smd);
    auto domain = std::make_shared<const GuardList>(guards);
    ComponentTS ts;
    ts.kind = DiagramKind::StateMachine;
    std::map<std::pair<std::string, std::vector<GuardValue>>, std::size_t> ids;
    std::vector<SmPosition> positions;
    std::deque<std::size_t> queue;

    auto intern = [&](const SmPosition& p, const GuardValuation& gvs) {
        auto [it, fresh] = ids.emplace(std::make_pair(p.key(), gvs.values()), ts.states.size());
        if (fresh) {
            ts.states.push_back(ComponentState{ex.label(p), gvs});
            positions.push_back(p);
            queue.push_back(it->second);
        }
        return it->second;
    };

    ts.initial = intern(SmPosition{}, GuardValuation(domain));
    while (!queue.empty()) {
        std::size_t id = queue.front();
        queue.pop_front();
        SmPosition here = positions[id];
        GuardValuation gvs = ts.states[id].gvs;
        for (auto& m : ex.step(here, gvs)) {
            std::size_t target = intern(m.target, detail::overwrite(gvs, m.updates));
            bool dup = std::any_of(ts.transitions.begin(), ts.transitions.end(), [&](const ComponentTransition& t) {
                return t.source == id && t.target == target && t.updates == m.updates;
            });
            if (!dup) ts.transitions.push_back(ComponentTransition{id, target, std::move(m.updates)});
        }
    }
    return ts;
}

BundleComponents build_components(const DiagramBundle& bundle) {
    BundleComponents out;
    out.guards = collect_guards(bundle);
    out.sd = sd_to_ts(bundle.sd, out.guards);
    if (bundle.smd) out.smd = smd_to_ts(*bundle.smd, out.guards);
    if (bundle.ad) out.ad = ad_to_ts(*bundle.ad, out.guards);
    return out;
}

std::vector<std::string> check_component(const ComponentTS& ts) {
    std::vector<std::string> problems;
    if (ts.states.empty()) return {"no states"};
    const auto& init = ts.states.at(ts.initial);
    if (init.label != Label(std::string(Label::kStart))) problems.push_back("initial state is not labeled Start");
    if (!init.gvs.all_dont_care()) problems.push_back("initial gvs is not all dc");
    std::vector<std::vector<std::size_t>> adj(ts.states.size());
    for (const auto& t : ts.transitions) {
        if (t.source >= ts.states.size() || t.target >= ts.states.size()) {
            problems.push_back("transition endpoint out of range");
            continue;
        }
        adj[t.source].push_back(t.target);
        if (detail::overwrite(ts.states[t.source].gvs, t.updates) != ts.states[t.target].gvs) {
            problems.push_back("gvs of state " + std::to_string(t.target) + " does not follow from its updates");
        }
    }
    std::vector<bool> seen(ts.states.size(), false);
    std::vector<std::size_t> stack{ts.initial};
    seen[ts.initial] = true;
    while (!stack.empty()) {
        auto s = stack.back();
        stack.pop_back();
        for (auto t : adj[s]) {
            if (!seen[t]) {
                seen[t] = true;
                stack.push_back(t);
            }
        }
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
        if (!seen[i]) problems.push_back("state " + std::to_string(i) + " is unreachable");
    }
    return problems;
}

}  // namespace uml2ts
