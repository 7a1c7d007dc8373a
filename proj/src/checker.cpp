#include "uml2ts/checker.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

namespace uml2ts {

namespace {

using States = std::vector<bool>;

std::string underscored(std::string s) {
    std::replace(s.begin(), s.end(), '-', '_');
    return s;
}

class Evaluator {
public:
    explicit Evaluator(const UnifiedTS& uts) : uts_(uts), n_(uts.size()) {
        succ_.resize(n_);
        pred_.resize(n_);
        for (std::size_t s = 0; s < n_; ++s) {
            succ_[s] = uts.successors(s);
            if (succ_[s].empty()) succ_[s].push_back(s);
            std::sort(succ_[s].begin(), succ_[s].end());
            for (auto t : succ_[s]) pred_[t].push_back(s);
        }
        for (std::size_t s = 0; s < n_; ++s) {
            by_name_[uts.names()[s]].push_back(s);
        }
        for (std::size_t s = 0; s < n_; ++s) {
            std::string alt = underscored(uts.names()[s]);
            if (!by_name_.count(alt)) by_alias_[alt].push_back(s);
        }
    }

    const std::vector<std::size_t>& succ(std::size_t s) const { return succ_[s]; }

    States eval(const Formula& f) const {
        switch (f.op) {
            case CtlOp::True: return States(n_, true);
            case CtlOp::False: return States(n_, false);
            case CtlOp::Atom: return atom(f);
            case CtlOp::Not: return negate(eval(f.args[0]));
            case CtlOp::And: return both(eval(f.args[0]), eval(f.args[1]));
            case CtlOp::Or: return either(eval(f.args[0]), eval(f.args[1]));
            case CtlOp::Implies: return either(negate(eval(f.args[0])), eval(f.args[1]));
            case CtlOp::EX: return ex(eval(f.args[0]));
            case CtlOp::AX: return negate(ex(negate(eval(f.args[0]))));
            case CtlOp::EF: return eu(States(n_, true), eval(f.args[0]));
            case CtlOp::AF: return negate(eg(negate(eval(f.args[0]))));
            case CtlOp::EG: return eg(eval(f.args[0]));
            case CtlOp::AG: return negate(eu(States(n_, true), negate(eval(f.args[0]))));
            case CtlOp::EU: return eu(eval(f.args[0]), eval(f.args[1]));
            case CtlOp::AU: {
                States p = eval(f.args[0]);
                States q = eval(f.args[1]);
                States nq = negate(q);
                return negate(either(eu(nq, both(negate(p), nq)), eg(nq)));
            }
            case CtlOp::AW: {
                States p = eval(f.args[0]);
                States nq = negate(eval(f.args[1]));
                return negate(eu(nq, both(negate(p), nq)));
            }
            case CtlOp::EW: {
                States p = eval(f.args[0]);
                States q = eval(f.args[1]);
                return either(eu(p, q), eg(p));
            }
        }
        throw CheckError("unknown operator");
    }

    States ex(const States& f) const {
        States out(n_, false);
        for (std::size_t s = 0; s < n_; ++s) {
            for (auto t : succ_[s]) {
                if (f[t]) {
                    out[s] = true;
                    break;
                }
            }
        }
        return out;
    }

    // Least fixpoint Z = q | (p & EX Z), by backward search.
    States eu(const States& p, const States& q) const {
        States z = q;
        std::deque<std::size_t> work;
        for (std::size_t s = 0; s < n_; ++s) {
            if (z[s]) work.push_back(s);
        }
        while (!work.empty()) {
            auto t = work.front();
            work.pop_front();
            for (auto s : pred_[t]) {
                if (!z[s] && p[s]) {
                    z[s] = true;
                    work.push_back(s);
                }
            }
        }
        return z;
    }

    // Greatest fixpoint Z = p & EX Z: drop states whose successors all left.
    States eg(const States& p) const {
        States z = p;
        std::vector<std::size_t> count(n_, 0);
        std::deque<std::size_t> work;
        // count against p before removing anything, or removals get counted twice
        for (std::size_t s = 0; s < n_; ++s) {
            if (!p[s]) continue;
            for (auto t : succ_[s]) count[s] += p[t] ? 1 : 0;
        }
        for (std::size_t s = 0; s < n_; ++s) {
            if (z[s] && count[s] == 0) {
                z[s] = false;
                work.push_back(s);
            }
        }
        while (!work.empty()) {
            auto t = work.front();
            work.pop_front();
            for (auto s : pred_[t]) {
                if (!z[s]) continue;
                if (--count[s] == 0) {
                    z[s] = false;
                    work.push_back(s);
                }
            }
        }
        return z;
    }

private:
    States atom(const Formula& f) const {
        States out(n_, false);
        if (f.subject == "State") {
            const std::vector<std::size_t>* hits = nullptr;
            if (auto it = by_name_.find(f.value); it != by_name_.end()) {
                hits = &it->second;
            } else if (auto al = by_alias_.find(f.value); al != by_alias_.end()) {
                hits = &al->second;
            }
            if (!hits) throw CheckError("unknown state '" + f.value + "'");
            for (auto s : *hits) out[s] = true;
            return out;
        }
        const auto& guards = uts_.guards();
        auto g = std::find(guards.begin(), guards.end(), f.subject);
        if (g == guards.end()) throw CheckError("unknown guard '" + f.subject + "'");
        auto value = parse_guard_value(f.value);
        if (!value) throw CheckError("guard '" + f.subject + "' compared with '" + f.value + "'");
        std::size_t gi = static_cast<std::size_t>(g - guards.begin());
        for (std::size_t s = 0; s < n_; ++s) out[s] = uts_.state(s).gvs.at(gi) == *value;
        return out;
    }

    static States negate(States s) {
        s.flip();
        return s;
    }
    static States both(States a, const States& b) {
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = a[i] && b[i];
        return a;
    }
    static States either(States a, const States& b) {
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = a[i] || b[i];
        return a;
    }

    const UnifiedTS& uts_;
    std::size_t n_;
    std::vector<std::vector<std::size_t>> succ_;
    std::vector<std::vector<std::size_t>> pred_;
    std::map<std::string, std::vector<std::size_t>> by_name_;
    std::map<std::string, std::vector<std::size_t>> by_alias_;
};

bool needs_path(const Formula& f) {
    switch (f.op) {
        case CtlOp::EX:
        case CtlOp::EU:
        case CtlOp::EG: return true;
        case CtlOp::And:
        case CtlOp::Or: return needs_path(f.args[0]) || needs_path(f.args[1]);
        default: return false;
    }
}

// Builds witnesses for formulas produced by negation_normal.
class Witness {
public:
    explicit Witness(const Evaluator& ev) : ev_(ev) {}

    // Appends a witness for g starting at s (already the last element of
    // trace.prefix). Returns false for unsupported shapes.
    bool extend(Trace& trace, std::size_t s, const Formula& g) const {
        if (!needs_path(g)) return true;
        switch (g.op) {
            case CtlOp::Or: {
                for (const auto& d : g.args) {
                    if (ev_.eval(d)[s]) return extend(trace, s, d);
                }
                return false;
            }
            case CtlOp::And: {
                if (needs_path(g.args[0]) && needs_path(g.args[1])) return false;
                return extend(trace, s, needs_path(g.args[0]) ? g.args[0] : g.args[1]);
            }
            case CtlOp::EX: {
                States target = ev_.eval(g.args[0]);
                for (auto t : ev_.succ(s)) {
                    if (target[t]) return step_to(trace, s, t) && extend(trace, t, g.args[0]);
                }
                return false;
            }
            case CtlOp::EU: return until(trace, s, g);
            case CtlOp::EG: return lasso(trace, s, ev_.eval(g));
            default: return false;
        }
    }

private:
    static bool step_to(Trace& trace, std::size_t, std::size_t t) {
        trace.prefix.push_back(t);
        return true;
    }

    bool until(Trace& trace, std::size_t s, const Formula& g) const {
        States p = ev_.eval(g.args[0]);
        States q = ev_.eval(g.args[1]);
        std::map<std::size_t, std::size_t> parent;
        std::deque<std::size_t> queue{s};
        parent[s] = s;
        std::optional<std::size_t> hit;
        while (!queue.empty()) {
            auto v = queue.front();
            queue.pop_front();
            if (q[v]) {
                hit = v;
                break;
            }
            if (!p[v]) continue;
            for (auto t : ev_.succ(v)) {
                if (parent.emplace(t, v).second) queue.push_back(t);
            }
        }
        if (!hit) return false;
        std::vector<std::size_t> path;
        for (auto v = *hit; v != s; v = parent[v]) path.push_back(v);
        std::reverse(path.begin(), path.end());
        trace.prefix.insert(trace.prefix.end(), path.begin(), path.end());
        return extend(trace, *hit, g.args[1]);
    }

    // Shortest lasso from s inside the EG set.
    bool lasso(Trace& trace, std::size_t s, const States& inside) const {
        if (!inside[s]) return false;
        std::map<std::size_t, std::size_t> parent;
        std::vector<std::size_t> order{s};
        parent[s] = s;
        for (std::size_t head = 0; head < order.size(); ++head) {
            for (auto t : ev_.succ(order[head])) {
                if (inside[t] && parent.emplace(t, order[head]).second) order.push_back(t);
            }
        }
        for (auto v : order) {
            auto cycle = shortest_cycle(v, inside);
            if (cycle.empty()) continue;
            std::vector<std::size_t> path;
            for (auto x = v; x != s; x = parent[x]) path.push_back(x);
            std::reverse(path.begin(), path.end());
            trace.prefix.insert(trace.prefix.end(), path.begin(), path.end());
            trace.loop_start = trace.prefix.size() - 1;
            // cycle holds v ... last, with an edge from last back to v.
            trace.prefix.insert(trace.prefix.end(), cycle.begin() + 1, cycle.end());
            return true;
        }
        return false;
    }

    std::vector<std::size_t> shortest_cycle(std::size_t v, const States& inside) const {
        std::map<std::size_t, std::size_t> parent;
        std::deque<std::size_t> queue;
        for (auto t : ev_.succ(v)) {
            if (!inside[t]) continue;
            if (t == v) return {v};
            if (parent.emplace(t, v).second) queue.push_back(t);
        }
        while (!queue.empty()) {
            auto x = queue.front();
            queue.pop_front();
            for (auto t : ev_.succ(x)) {
                if (!inside[t]) continue;
                if (t == v) {
                    std::vector<std::size_t> cycle;
                    for (auto y = x; y != v; y = parent[y]) cycle.push_back(y);
                    cycle.push_back(v);
                    std::reverse(cycle.begin(), cycle.end());
                    return cycle;
                }
                if (parent.emplace(t, x).second) queue.push_back(t);
            }
        }
        return {};
    }

    const Evaluator& ev_;
};

}  // namespace

Formula negation_normal(const Formula& f, bool negate) {
    auto nn = [](const Formula& g, bool n) { return negation_normal(g, n); };
    switch (f.op) {
        case CtlOp::True: return negate ? Formula::falsity() : f;
        case CtlOp::False: return negate ? Formula::truth() : f;
        case CtlOp::Atom: return negate ? f_not(f) : f;
        case CtlOp::Not: return nn(f.args[0], !negate);
        case CtlOp::And:
            return negate ? f_or(nn(f.args[0], true), nn(f.args[1], true))
                          : f_and(nn(f.args[0], false), nn(f.args[1], false));
        case CtlOp::Or:
            return negate ? f_and(nn(f.args[0], true), nn(f.args[1], true))
                          : f_or(nn(f.args[0], false), nn(f.args[1], false));
        case CtlOp::Implies:
            return negate ? f_and(nn(f.args[0], false), nn(f.args[1], true))
                          : f_or(nn(f.args[0], true), nn(f.args[1], false));
        default: break;
    }
    const Formula& a = f.args[0];
    if (negate) {
        switch (f.op) {
            case CtlOp::AX: return Formula::unary(CtlOp::EX, nn(a, true));
            case CtlOp::AF: return Formula::unary(CtlOp::EG, nn(a, true));
            case CtlOp::AG: return Formula::binary(CtlOp::EU, Formula::truth(), nn(a, true));
            case CtlOp::AU: {
                const Formula& b = f.args[1];
                Formula stop = f_and(nn(a, true), nn(b, true));
                return f_or(Formula::binary(CtlOp::EU, nn(b, true), std::move(stop)),
                            Formula::unary(CtlOp::EG, nn(b, true)));
            }
            case CtlOp::AW: {
                const Formula& b = f.args[1];
                return Formula::binary(CtlOp::EU, nn(b, true), f_and(nn(a, true), nn(b, true)));
            }
            default: return f_not(f);  // universal after negation: kept whole
        }
    }
    switch (f.op) {
        case CtlOp::EX:
        case CtlOp::EG: return Formula::unary(f.op, nn(a, false));
        case CtlOp::EF: return Formula::binary(CtlOp::EU, Formula::truth(), nn(a, false));
        case CtlOp::EU: return Formula::binary(CtlOp::EU, nn(a, false), nn(f.args[1], false));
        case CtlOp::EW:
            return f_or(Formula::binary(CtlOp::EU, nn(a, false), nn(f.args[1], false)),
                        Formula::unary(CtlOp::EG, nn(a, false)));
        default: return f;
    }
}

std::vector<bool> sat(const UnifiedTS& uts, const Formula& f) { return Evaluator(uts).eval(f); }

std::optional<Trace> counterexample(const UnifiedTS& uts, const Formula& f) {
    if (uts.size() == 0) return std::nullopt;
    Evaluator ev(uts);
    Formula g = negation_normal(f, true);
    if (!ev.eval(g)[uts.initial()]) return std::nullopt;
    Trace trace;
    trace.prefix.push_back(uts.initial());
    if (!Witness(ev).extend(trace, uts.initial(), g)) return std::nullopt;
    return trace;
}

Verdict check(const UnifiedTS& uts, const Formula& f) {
    if (uts.size() == 0) throw CheckError("empty transition system");
    Verdict v;
    v.formula = f;
    v.satisfied = Evaluator(uts).eval(f)[uts.initial()];
    if (!v.satisfied) {
        v.trace = counterexample(uts, f);
        v.trace_supported = v.trace.has_value();
    }
    return v;
}

bool trace_is_path(const UnifiedTS& uts, const Trace& trace) {
    auto edge = [&](std::size_t s, std::size_t t) {
        if (s >= uts.size() || t >= uts.size()) return false;
        const auto& succ = uts.successors(s);
        if (succ.empty()) return s == t;
        return std::find(succ.begin(), succ.end(), t) != succ.end();
    };
    if (trace.prefix.empty()) return false;
    for (std::size_t i = 1; i < trace.prefix.size(); ++i) {
        if (!edge(trace.prefix[i - 1], trace.prefix[i])) return false;
    }
    if (trace.loop_start) {
        if (*trace.loop_start >= trace.prefix.size()) return false;
        return edge(trace.prefix.back(), trace.prefix[*trace.loop_start]);
    }
    return true;
}

std::string format_trace(const UnifiedTS& uts, const Trace& trace) {
    std::ostringstream out;
    for (std::size_t i = 0; i < trace.prefix.size(); ++i) {
        if (trace.loop_start && *trace.loop_start == i) out << "  -- loop starts here --\n";
        const auto& st = uts.state(trace.prefix[i]);
        out << "  " << (i + 1) << ". " << uts.names()[trace.prefix[i]];
        if (st.gvs.size() > 0) out << " [" << st.gvs.str() << "]";
        out << "\n";
    }
    return out.str();
}

}  // namespace uml2ts
