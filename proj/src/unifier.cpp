#include "uml2ts/unifier.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <tuple>

#include "flow_graph.hpp"

namespace uml2ts {

namespace {

using detail::kNone;
using detail::overwrite;

struct Slot {
    std::size_t state = kNone;  // kNone: diagram absent
    bool marked = false;        // rendered as `-`

    auto tie() const { return std::tie(state, marked); }
};

struct Node {
    std::size_t sd = 0;
    Slot smd;
    Slot ad;
    GuardValuation gvs;

    auto key() const { return std::make_tuple(sd, smd.state, smd.marked, ad.state, ad.marked, gvs.values()); }
};

class Product {
public:
    Product(const ComponentTS& sd, const ComponentTS* smd, const ComponentTS* ad) : sd_(sd), smd_(smd), ad_(ad) {}

    UnifiedState render(const Node& n) const {
        return UnifiedState{sd_.states.at(n.sd).label, slot_label(smd_, n.smd), slot_label(ad_, n.ad), n.gvs};
    }

    std::vector<Node> successors(const Node& here) const {
        std::vector<Node> out;
        bool sd_moved = false;
        for (auto ti : sd_.outgoing(here.sd)) {
            const auto& t = sd_.transitions[ti];
            if (!gvs_consistent(here.gvs, t.updates)) continue;
            sd_moved = true;
            Node next = here;
            next.sd = t.target;
            next.gvs = overwrite(here.gvs, t.updates);
            follow(next, 0, true, t.updates.empty(), false, out);
        }
        if (!sd_moved) follow(here, 0, false, false, false, out);

        std::vector<std::pair<UnifiedState, Node>> keyed;
        for (auto& n : out) keyed.emplace_back(render(n), std::move(n));
        std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
            auto an = a.first.name();
            auto bn = b.first.name();
            if (an != bn) return an < bn;
            return a.second.key() < b.second.key();
        });
        std::vector<Node> sorted;
        for (auto& [_, n] : keyed) {
            if (!sorted.empty() && sorted.back().key() == n.key()) continue;
            sorted.push_back(std::move(n));
        }
        return sorted;
    }

private:
    static Label slot_label(const ComponentTS* ts, const Slot& slot) {
        if (!ts || slot.marked) return Label::placeholder();
        return ts->states.at(slot.state).label;
    }

    // Folds follower `index` (0 = SMD, 1 = AD) into `node`.
    void follow(Node node, int index, bool sd_advanced, bool free, bool moved, std::vector<Node>& out) const {
        if (index == 2) {
            if (sd_advanced || moved) out.push_back(std::move(node));
            return;
        }
        const ComponentTS* ts = index == 0 ? smd_ : ad_;
        if (!ts) {
            follow(std::move(node), index + 1, sd_advanced, free, moved, out);
            return;
        }
        Slot& slot = index == 0 ? node.smd : node.ad;
        auto outgoing = ts->outgoing(slot.state);
        if (outgoing.empty()) {
            slot.marked = false;
            follow(std::move(node), index + 1, sd_advanced, free, moved, out);
            return;
        }
        std::vector<std::size_t> consistent;
        for (auto ti : outgoing) {
            if (gvs_consistent(node.gvs, ts->transitions[ti].updates)) consistent.push_back(ti);
        }
        if (consistent.empty()) {
            if (sd_advanced) slot.marked = true;
            follow(std::move(node), index + 1, sd_advanced, free, moved, out);
            return;
        }
        std::vector<std::size_t> allowed;
        for (auto ti : consistent) {
            if (free || overwrite(node.gvs, ts->transitions[ti].updates) == node.gvs) allowed.push_back(ti);
        }
        if (allowed.empty()) {
            slot.marked = false;
            follow(std::move(node), index + 1, sd_advanced, free, moved, out);
            return;
        }
        for (auto ti : allowed) {
            const auto& t = ts->transitions[ti];
            Node next = node;
            Slot& s = index == 0 ? next.smd : next.ad;
            s.state = t.target;
            s.marked = false;
            next.gvs = overwrite(node.gvs, t.updates);
            follow(std::move(next), index + 1, sd_advanced, free, true, out);
        }
    }

    const ComponentTS& sd_;
    const ComponentTS* smd_;
    const ComponentTS* ad_;
};

}  // namespace

UnifiedTS unify(const ComponentTS& sd, const std::optional<ComponentTS>& smd, const std::optional<ComponentTS>& ad,
                const GuardList& guards) {
    Product product(sd, smd ? &*smd : nullptr, ad ? &*ad : nullptr);
    auto domain = std::make_shared<const GuardList>(guards);

    // Exploration over the internal product.
    std::vector<Node> nodes;
    std::map<decltype(Node{}.key()), std::size_t> ids;
    std::vector<std::set<std::size_t>> edges;
    std::deque<std::size_t> queue;
    auto intern = [&](Node n) {
        auto [it, fresh] = ids.emplace(n.key(), nodes.size());
        if (fresh) {
            nodes.push_back(std::move(n));
            edges.emplace_back();
            queue.push_back(it->second);
        }
        return it->second;
    };
    Node init;
    init.sd = sd.initial;
    if (smd) init.smd.state = smd->initial;
    if (ad) init.ad.state = ad->initial;
    init.gvs = GuardValuation(domain);
    intern(std::move(init));
    while (!queue.empty()) {
        std::size_t id = queue.front();
        queue.pop_front();
        for (auto& n : product.successors(nodes[id])) {
            std::size_t target = intern(std::move(n));
            edges[id].insert(target);
        }
    }

    // Quotient by (rendered name, gvs).
    using ClassKey = std::pair<std::string, std::vector<GuardValue>>;
    std::map<ClassKey, std::size_t> class_of_key;
    std::vector<UnifiedState> classes;
    std::vector<std::size_t> class_of(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        UnifiedState s = product.render(nodes[i]);
        auto [it, fresh] = class_of_key.emplace(ClassKey{s.name(), s.gvs.values()}, classes.size());
        if (fresh) classes.push_back(std::move(s));
        class_of[i] = it->second;
    }
    std::vector<std::set<std::size_t>> class_edges(classes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (auto j : edges[i]) class_edges[class_of[i]].insert(class_of[j]);
    }

    // Canonical numbering.
    auto order_key = [&](std::size_t c) { return ClassKey{classes[c].name(), classes[c].gvs.values()}; };
    std::vector<std::size_t> canonical(classes.size(), kNone);
    std::vector<std::size_t> order;
    canonical[class_of[0]] = 0;
    order.push_back(class_of[0]);
    for (std::size_t head = 0; head < order.size(); ++head) {
        std::vector<std::size_t> succ(class_edges[order[head]].begin(), class_edges[order[head]].end());
        std::sort(succ.begin(), succ.end(), [&](auto a, auto b) { return order_key(a) < order_key(b); });
        for (auto c : succ) {
            if (canonical[c] != kNone) continue;
            canonical[c] = order.size();
            order.push_back(c);
        }
    }

    UnifiedTS uts(guards);
    for (auto c : order) uts.add_state(classes[c]);
    uts.set_initial(0);
    for (std::size_t i = 0; i < order.size(); ++i) {
        std::vector<std::size_t> targets;
        for (auto c : class_edges[order[i]]) targets.push_back(canonical[c]);
        std::sort(targets.begin(), targets.end());
        for (auto t : targets) uts.add_transition(i, t);
    }
    return uts;
}

UnifiedTS unify(const BundleComponents& parts) { return unify(parts.sd, parts.smd, parts.ad, parts.guards); }

UnifiedTS unify(const DiagramBundle& bundle) { return unify(build_components(bundle)); }

ReachableStats reachable_stats(const UnifiedTS& uts) {
    ReachableStats stats;
    if (uts.size() == 0) return stats;
    std::set<std::string> names(uts.names().begin(), uts.names().end());
    std::size_t grid = 1;
    for (std::size_t i = 0; i < uts.guards().size(); ++i) grid *= 3;
    stats.declared = names.size() * grid;

    std::vector<bool> seen(uts.size(), false);
    std::deque<std::size_t> queue{uts.initial()};
    seen[uts.initial()] = true;
    while (!queue.empty()) {
        auto s = queue.front();
        queue.pop_front();
        ++stats.reachable;
        for (auto t : uts.successors(s)) {
            if (!seen[t]) {
                seen[t] = true;
                queue.push_back(t);
            }
        }
    }
    return stats;
}

}  // namespace uml2ts
