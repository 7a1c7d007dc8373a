#include "uml2ts/diagram_model.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <functional>
#include <map>
#include <set>

namespace uml2ts {

bool operator==(const SdBranch& a, const SdBranch& b) { return a.guards == b.guards && a.body == b.body; }
bool operator==(const SdAlt& a, const SdAlt& b) { return a.branches == b.branches; }
bool operator==(const SdOpt& a, const SdOpt& b) { return a.guards == b.guards && a.body == b.body; }
bool operator==(const SdLoop& a, const SdLoop& b) { return a.guards == b.guards && a.body == b.body; }
bool operator==(const SdPar& a, const SdPar& b) { return a.operands == b.operands; }

GuardUpdates to_updates(const GuardSet& literals) {
    GuardUpdates out;
    out.reserve(literals.size());
    for (const auto& lit : literals) out.push_back(GuardUpdate{lit.guard, lit.polarity, false});
    return out;
}

std::vector<std::string> StateMachineDiagram::all_states() const {
    std::vector<std::string> out = states;
    for (const auto& r : regions) out.insert(out.end(), r.states.begin(), r.states.end());
    return out;
}

std::vector<SmTransition> StateMachineDiagram::all_transitions() const {
    std::vector<SmTransition> out = transitions;
    for (const auto& r : regions) out.insert(out.end(), r.transitions.begin(), r.transitions.end());
    return out;
}

std::optional<std::size_t> StateMachineDiagram::region_of(std::string_view state) const {
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const auto& s = regions[i].states;
        if (std::find(s.begin(), s.end(), state) != s.end()) return i;
    }
    return std::nullopt;
}

std::string_view to_string(AdNodeKind kind) {
    switch (kind) {
        case AdNodeKind::Initial: return "initial";
        case AdNodeKind::Action: return "action";
        case AdNodeKind::Decision: return "decision";
        case AdNodeKind::Merge: return "merge";
        case AdNodeKind::Fork: return "fork";
        case AdNodeKind::Join: return "join";
        case AdNodeKind::Final: return "final";
    }
    return "?";
}

const AdNode* ActivityDiagram::find(std::string_view id) const {
    for (const auto& n : nodes) {
        if (n.id == id) return &n;
    }
    return nullptr;
}

DiagramKind kind_of(const Diagram& diagram) {
    switch (diagram.index()) {
        case 0: return DiagramKind::Sequence;
        case 1: return DiagramKind::StateMachine;
        default: return DiagramKind::Activity;
    }
}

bool is_identifier(std::string_view text) {
    if (text.empty() || !std::isalpha(static_cast<unsigned char>(text[0]))) return false;
    return std::all_of(text.begin(), text.end(),
                       [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

bool is_reserved_guard_name(std::string_view name) {
    static const std::set<std::string_view> reserved = {
        "State", "dc",     "true",   "false", "TRUE",    "FALSE",   "and",     "MODULE", "VAR",   "IVAR",
        "ASSIGN", "DEFINE", "INIT",  "TRANS", "INVAR",   "CTLSPEC", "LTLSPEC", "SPEC",   "case",  "esac",
        "next",  "init",   "mod",    "union", "in",      "xor",     "xnor",    "self",   "boolean", "integer",
        "_choice", "A",     "E",      "U",      "W",     "AG",      "AF",      "AX",      "EG",     "EF",    "EX"};
    return reserved.count(name) > 0;
}

namespace {

class Reporter {
public:
    explicit Reporter(ValidationReport& out) : out_(out) {}
    void add(const std::string& path, std::string message) { out_.push_back({path, std::move(message)}); }

private:
    ValidationReport& out_;
};

void check_label(Reporter& r, const std::string& path, const std::string& label, std::string_view what) {
    if (!is_identifier(label)) {
        if (label.find('-') != std::string::npos) {
            r.add(path, "reserved character '-' in " + std::string(what) + " '" + label + "'");
        } else {
            r.add(path, "invalid " + std::string(what) + " name '" + label + "'");
        }
    } else if (label == Label::kStart || label == Label::kEnd) {
        r.add(path, "reserved label '" + label + "'");
    }
}

void check_literals(Reporter& r, const std::string& path, const GuardSet& literals) {
    std::set<std::string> seen;
    for (const auto& lit : literals) {
        if (!is_identifier(lit.guard)) {
            r.add(path, "invalid guard name '" + lit.guard + "'");
        } else if (is_reserved_guard_name(lit.guard)) {
            r.add(path, "reserved guard name '" + lit.guard + "'");
        }
        if (!seen.insert(lit.guard).second) r.add(path, "duplicate guard '" + lit.guard + "' in literal set");
    }
}

void validate_body(Reporter& r, const SequenceDiagram& sd, const SdBody& body, const std::string& path) {
    if (body.empty()) {
        r.add(path, "empty body");
        return;
    }
    auto lifeline_known = [&](const std::string& id) {
        return std::find(sd.lifelines.begin(), sd.lifelines.end(), id) != sd.lifelines.end();
    };
    for (std::size_t i = 0; i < body.size(); ++i) {
        std::string here = path + "/" + std::to_string(i + 1);
        std::visit(
            [&](const auto& el) {
                using T = std::decay_t<decltype(el)>;
                if constexpr (std::is_same_v<T, SdMessage>) {
                    here += " msg " + el.name;
                    check_label(r, here, el.name, "message");
                    for (const auto* end : {&el.from, &el.to}) {
                        if (!lifeline_known(*end)) r.add(here, "message references undeclared lifeline '" + *end + "'");
                    }
                } else if constexpr (std::is_same_v<T, SdAlt>) {
                    here += " alt";
                    if (el.branches.size() < 2) r.add(here, "alt needs at least two branches");
                    for (std::size_t b = 0; b < el.branches.size(); ++b) {
                        std::string bp = here + "/branch " + std::to_string(b + 1);
                        if (el.branches[b].guards.empty()) r.add(bp, "alt branch without guard");
                        check_literals(r, bp, el.branches[b].guards);
                        validate_body(r, sd, el.branches[b].body, bp);
                    }
                } else if constexpr (std::is_same_v<T, SdOpt>) {
                    here += " opt";
                    if (el.guards.empty()) r.add(here, "opt without guard");
                    check_literals(r, here, el.guards);
                    validate_body(r, sd, el.body, here);
                } else if constexpr (std::is_same_v<T, SdLoop>) {
                    here += " loop";
                    if (el.guards.empty()) r.add(here, "loop without guard");
                    check_literals(r, here, el.guards);
                    validate_body(r, sd, el.body, here);
                } else {
                    here += " par";
                    if (el.operands.size() < 2) r.add(here, "par needs at least two operands");
                    for (std::size_t o = 0; o < el.operands.size(); ++o) {
                        validate_body(r, sd, el.operands[o], here + "/operand " + std::to_string(o + 1));
                    }
                }
            },
            body[i].node);
    }
}

template <typename Range>
void check_duplicates(Reporter& r, const std::string& path, const Range& ids, std::string_view what) {
    std::set<std::string> seen;
    for (const auto& id : ids) {
        if (!seen.insert(id).second) r.add(path, std::string(what) + " '" + id + "' declared more than once");
    }
}

}  // namespace

ValidationReport validate(const SequenceDiagram& sd) {
    ValidationReport out;
    Reporter r(out);
    std::string path = "sequence " + sd.name;
    if (!is_identifier(sd.name)) r.add(path, "invalid diagram name");
    check_duplicates(r, path, sd.lifelines, "lifeline");
    for (const auto& l : sd.lifelines) {
        if (!is_identifier(l)) r.add(path, "invalid lifeline name '" + l + "'");
    }
    validate_body(r, sd, sd.body, path);
    return out;
}

ValidationReport validate(const StateMachineDiagram& smd) {
    ValidationReport out;
    Reporter r(out);
    std::string path = "statemachine " + smd.name;
    if (!is_identifier(smd.name)) r.add(path, "invalid diagram name");

    auto all = smd.all_states();
    check_duplicates(r, path, all, "state");
    for (const auto& s : all) check_label(r, path, s, "state");
    auto declared = [&](const std::string& s) { return std::find(all.begin(), all.end(), s) != all.end(); };

    if (smd.initial.empty()) {
        r.add(path, "missing initial state");
    } else if (!declared(smd.initial)) {
        r.add(path, "initial state '" + smd.initial + "' is not declared");
    }

    for (const auto& region : smd.regions) {
        std::string rp = path + "/region " + region.name;
        if (!is_identifier(region.name)) r.add(rp, "invalid region name");
        if (region.states.empty()) r.add(rp, "region declares no states");
        if (region.initial.empty()) {
            r.add(rp, "region has no initial state");
        } else if (std::find(region.states.begin(), region.states.end(), region.initial) == region.states.end()) {
            r.add(rp, "region initial '" + region.initial + "' is not a state of the region");
        }
        for (const auto& t : region.transitions) {
            bool inside = std::find(region.states.begin(), region.states.end(), t.source) != region.states.end() &&
                          std::find(region.states.begin(), region.states.end(), t.target) != region.states.end();
            if (!inside) r.add(rp, "region transition " + t.source + " -> " + t.target + " leaves the region");
        }
    }

    auto transitions = smd.all_transitions();
    std::map<std::string, std::vector<const SmTransition*>> outgoing;
    for (const auto& t : transitions) {
        std::string tp = path + "/trans " + t.source + " -> " + t.target;
        for (const auto* end : {&t.source, &t.target}) {
            if (!declared(*end)) r.add(tp, "transition references undeclared state '" + *end + "'");
        }
        auto rs = smd.region_of(t.source);
        auto rt = smd.region_of(t.target);
        if (rs && rt && *rs != *rt) {
            r.add(tp, "transition crosses from region " + smd.regions[*rs].name + " to region " + smd.regions[*rt].name);
        }
        if (t.event && !is_identifier(*t.event)) r.add(tp, "invalid event name '" + *t.event + "'");
        check_literals(r, tp, t.guards);
        outgoing[t.source].push_back(&t);
    }
    // No guards means no alternative paths.
    for (const auto& [state, outs] : outgoing) {
        if (outs.size() < 2) continue;
        bool unguarded = std::any_of(outs.begin(), outs.end(), [](const SmTransition* t) { return t->guards.empty(); });
        if (unguarded) r.add(path + "/state " + state, "multiple outgoing transitions require guards on each");
    }
    return out;
}

namespace {

struct AdIndex {
    std::map<std::string, const AdNode*> nodes;
    std::map<std::string, std::vector<const AdEdge*>> out;
    std::map<std::string, std::vector<const AdEdge*>> in;

    explicit AdIndex(const ActivityDiagram& ad) {
        for (const auto& n : ad.nodes) nodes.emplace(n.id, &n);
        for (const auto& e : ad.edges) {
            out[e.source].push_back(&e);
            in[e.target].push_back(&e);
        }
    }
    AdNodeKind kind(const std::string& id) const {
        auto it = nodes.find(id);
        return it == nodes.end() ? AdNodeKind::Action : it->second->kind;
    }
    const std::vector<const AdEdge*>& outs(const std::string& id) const {
        static const std::vector<const AdEdge*> none;
        auto it = out.find(id);
        return it == out.end() ? none : it->second;
    }
};

class JoinMatcher {
public:
    explicit JoinMatcher(const AdIndex& index) : index_(index) {}

    std::optional<std::string> match(const std::string& fork) {
        if (auto it = memo_.find(fork); it != memo_.end()) return it->second;
        if (!in_progress_.insert(fork).second) return std::nullopt;
        std::optional<std::set<std::string>> common;
        bool ok = !index_.outs(fork).empty();
        for (const auto* e : index_.outs(fork)) {
            std::set<std::string> visited;
            auto joins = first_joins(e->target, visited);
            if (!joins || joins->size() != 1 || (common && *common != *joins)) {
                ok = false;
                break;
            }
            common = joins;
        }
        in_progress_.erase(fork);
        std::optional<std::string> result;
        if (ok && common) result = *common->begin();
        memo_[fork] = result;
        return result;
    }

private:
    std::optional<std::set<std::string>> first_joins(const std::string& node, std::set<std::string>& visited) {
        if (!index_.nodes.count(node)) return std::nullopt;
        if (!visited.insert(node).second) return std::set<std::string>{};
        switch (index_.kind(node)) {
            case AdNodeKind::Join: return std::set<std::string>{node};
            case AdNodeKind::Final: return std::nullopt;
            case AdNodeKind::Fork: {
                auto join = match(node);
                if (!join) return std::nullopt;
                const auto& outs = index_.outs(*join);
                if (outs.size() != 1) return std::nullopt;
                return first_joins(outs.front()->target, visited);
            }
            default: {
                std::set<std::string> acc;
                for (const auto* e : index_.outs(node)) {
                    auto sub = first_joins(e->target, visited);
                    if (!sub) return std::nullopt;
                    acc.insert(sub->begin(), sub->end());
                }
                return acc;
            }
        }
    }

    const AdIndex& index_;
    std::map<std::string, std::optional<std::string>> memo_;
    std::set<std::string> in_progress_;
};

}  // namespace

std::optional<std::string> matching_join(const ActivityDiagram& ad, std::string_view fork_id) {
    AdIndex index(ad);
    if (index.kind(std::string(fork_id)) != AdNodeKind::Fork || !index.nodes.count(std::string(fork_id))) {
        return std::nullopt;
    }
    JoinMatcher matcher(index);
    return matcher.match(std::string(fork_id));
}

ValidationReport validate(const ActivityDiagram& ad) {
    ValidationReport out;
    Reporter r(out);
    std::string path = "activity " + ad.name;
    if (!is_identifier(ad.name)) r.add(path, "invalid diagram name");

    std::vector<std::string> ids;
    for (const auto& n : ad.nodes) ids.push_back(n.id);
    check_duplicates(r, path, ids, "node");

    AdIndex index(ad);
    std::size_t initials = 0;
    std::size_t finals = 0;
    for (const auto& n : ad.nodes) {
        if (n.kind == AdNodeKind::Initial) ++initials;
        if (n.kind == AdNodeKind::Final) ++finals;
        if (!is_identifier(n.id)) r.add(path, "invalid node id '" + n.id + "'");
        if (n.kind == AdNodeKind::Action) check_label(r, path + "/action " + n.id, n.id, "action");
    }
    if (initials != 1) r.add(path, "activity needs exactly one initial node");
    if (finals == 0) r.add(path, "activity needs a final node");

    for (const auto& e : ad.edges) {
        std::string ep = path + "/edge " + e.source + " -> " + e.target;
        for (const auto* end : {&e.source, &e.target}) {
            if (!index.nodes.count(*end)) r.add(ep, "edge references undeclared node '" + *end + "'");
        }
        check_literals(r, ep, e.guards);
        if (index.nodes.count(e.target) && index.kind(e.target) == AdNodeKind::Initial) {
            r.add(ep, "initial node cannot have incoming edges");
        }
    }

    JoinMatcher matcher(index);
    std::map<std::string, std::string> join_owner;
    for (const auto& n : ad.nodes) {
        std::string np = path + "/" + std::string(to_string(n.kind)) + " " + n.id;
        const auto& outs = index.outs(n.id);
        switch (n.kind) {
            case AdNodeKind::Initial:
            case AdNodeKind::Action:
            case AdNodeKind::Merge:
            case AdNodeKind::Join:
                if (outs.size() != 1) r.add(np, "node must have exactly one outgoing edge");
                break;
            case AdNodeKind::Final:
                if (!outs.empty()) r.add(np, "final node cannot have outgoing edges");
                break;
            case AdNodeKind::Decision:
                if (outs.size() < 2) r.add(np, "decision needs at least two outgoing edges");
                for (const auto* e : outs) {
                    if (e->guards.empty()) r.add(np, "decision edge to '" + e->target + "' without guard");
                }
                break;
            case AdNodeKind::Fork: {
                if (outs.size() < 2) r.add(np, "fork needs at least two outgoing edges");
                auto join = matcher.match(n.id);
                if (!join) {
                    r.add(np, "fork is not matched by a single join on all branches");
                    break;
                }
                for (const auto* e : outs) {
                    if (e->target == *join) r.add(np, "fork has an empty branch");
                }
                if (auto [it, fresh] = join_owner.emplace(*join, n.id); !fresh) {
                    r.add(np, "join '" + *join + "' already closes fork '" + it->second + "'");
                }
                break;
            }
        }
    }

    // Every path must be able to finish.
    if (initials == 1) {
        std::string start;
        for (const auto& n : ad.nodes) {
            if (n.kind == AdNodeKind::Initial) start = n.id;
        }
        std::set<std::string> seen{start};
        std::vector<std::string> stack{start};
        bool final_reached = false;
        while (!stack.empty()) {
            auto id = stack.back();
            stack.pop_back();
            if (index.kind(id) == AdNodeKind::Final) final_reached = true;
            for (const auto* e : index.outs(id)) {
                if (seen.insert(e->target).second) stack.push_back(e->target);
            }
        }
        if (!final_reached && finals > 0) r.add(path, "no final node is reachable from the initial node");
    }
    return out;
}

ValidationReport validate(const DiagramBundle& bundle) {
    ValidationReport out = validate(bundle.sd);
    if (!bundle.smd && !bundle.ad) out.push_back({"bundle", "bundle requires a second diagram"});
    if (bundle.smd) {
        auto more = validate(*bundle.smd);
        out.insert(out.end(), more.begin(), more.end());
    }
    if (bundle.ad) {
        auto more = validate(*bundle.ad);
        out.insert(out.end(), more.begin(), more.end());
    }
    return out;
}

namespace {

void add_guards(GuardList& out, const GuardSet& literals) {
    for (const auto& lit : literals) {
        if (std::find(out.begin(), out.end(), lit.guard) == out.end()) out.push_back(lit.guard);
    }
}

void collect_sd(GuardList& out, const SdBody& body) {
    for (const auto& el : body) {
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, SdAlt>) {
                    for (const auto& b : node.branches) {
                        add_guards(out, b.guards);
                        collect_sd(out, b.body);
                    }
                } else if constexpr (std::is_same_v<T, SdOpt> || std::is_same_v<T, SdLoop>) {
                    add_guards(out, node.guards);
                    collect_sd(out, node.body);
                } else if constexpr (std::is_same_v<T, SdPar>) {
                    for (const auto& op : node.operands) collect_sd(out, op);
                }
            },
            el.node);
    }
}

}  // namespace

GuardList collect_guards(const DiagramBundle& bundle) {
    GuardList out;
    collect_sd(out, bundle.sd.body);
    if (bundle.smd) {
        for (const auto& t : bundle.smd->all_transitions()) add_guards(out, t.guards);
    }
    if (bundle.ad) {
        for (const auto& e : bundle.ad->edges) add_guards(out, e.guards);
    }
    return out;
}

}  // namespace uml2ts
