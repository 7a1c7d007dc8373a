#include "oracles.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace oracle {

using uml2ts::CtlOp;
using uml2ts::Formula;

LassoCtl::LassoCtl(std::vector<std::vector<std::size_t>> succ, Atom atom) : succ_(std::move(succ)), atom_(std::move(atom)) {
    for (std::size_t s = 0; s < succ_.size(); ++s) {
        if (succ_[s].empty()) succ_[s].push_back(s);
    }
}

bool LassoCtl::some_lasso(std::size_t start,
                          const std::function<bool(const std::vector<std::size_t>&, std::size_t)>& pred) {
    std::vector<std::size_t> path{start};
    std::function<bool()> dfs = [&]() -> bool {
        for (auto t : succ_[path.back()]) {
            auto it = std::find(path.begin(), path.end(), t);
            if (it != path.end()) {
                if (pred(path, static_cast<std::size_t>(it - path.begin()))) return true;
                continue;
            }
            path.push_back(t);
            if (dfs()) return true;
            path.pop_back();
        }
        return false;
    };
    return dfs();
}

bool LassoCtl::path_holds(const std::vector<std::size_t>& p, std::size_t loop, const Formula& f) {
    std::size_t k = p.size() - 1;
    auto at = [&](std::size_t i, const Formula& g) { return holds(p[i], g); };
    auto until = [&](const Formula& a, const Formula& b) {
        for (std::size_t j = 0; j <= k; ++j) {
            if (at(j, b)) return true;
            if (!at(j, a)) return false;
        }
        return false;
    };
    auto always = [&](const Formula& a) {
        for (std::size_t j = 0; j <= k; ++j) {
            if (!at(j, a)) return false;
        }
        return true;
    };
    switch (f.op) {
        case CtlOp::AX:
        case CtlOp::EX: return at(k == 0 ? loop : 1, f.args[0]);
        case CtlOp::AF:
        case CtlOp::EF: {
            for (std::size_t j = 0; j <= k; ++j) {
                if (at(j, f.args[0])) return true;
            }
            return false;
        }
        case CtlOp::AG:
        case CtlOp::EG: return always(f.args[0]);
        case CtlOp::AU:
        case CtlOp::EU: return until(f.args[0], f.args[1]);
        case CtlOp::AW:
        case CtlOp::EW: return until(f.args[0], f.args[1]) || always(f.args[0]);
        default: throw std::logic_error("not a path operator");
    }
}

bool LassoCtl::holds(std::size_t s, const Formula& f) {
    auto slot = std::find_if(memo_.begin(), memo_.end(), [&](const auto& m) { return m.first == &f; });
    if (slot == memo_.end()) {
        memo_.emplace_back(&f, std::vector<signed char>(succ_.size(), -1));
        slot = memo_.end() - 1;
    }
    std::size_t idx = static_cast<std::size_t>(slot - memo_.begin());
    if (memo_[idx].second[s] >= 0) return memo_[idx].second[s] != 0;

    bool r = false;
    switch (f.op) {
        case CtlOp::True: r = true; break;
        case CtlOp::False: r = false; break;
        case CtlOp::Atom: r = atom_(s, f); break;
        case CtlOp::Not: r = !holds(s, f.args[0]); break;
        case CtlOp::And: r = holds(s, f.args[0]) && holds(s, f.args[1]); break;
        case CtlOp::Or: r = holds(s, f.args[0]) || holds(s, f.args[1]); break;
        case CtlOp::Implies: r = !holds(s, f.args[0]) || holds(s, f.args[1]); break;
        case CtlOp::EX:
        case CtlOp::EF:
        case CtlOp::EG:
        case CtlOp::EU:
        case CtlOp::EW:
            r = some_lasso(s, [&](const auto& p, std::size_t l) { return path_holds(p, l, f); });
            break;
        default:
            r = !some_lasso(s, [&](const auto& p, std::size_t l) { return !path_holds(p, l, f); });
            break;
    }
    memo_[idx].second[s] = r ? 1 : 0;
    return r;
}

bool lasso_check(const uml2ts::UnifiedTS& uts, const Formula& f) {
    std::vector<std::vector<std::size_t>> succ(uts.size());
    for (std::size_t s = 0; s < uts.size(); ++s) succ[s] = uts.successors(s);
    LassoCtl ctl(std::move(succ), [&](std::size_t s, const Formula& a) {
        if (a.subject == "State") return uts.names()[s] == a.value;
        const auto& gl = uts.guards();
        auto g = std::find(gl.begin(), gl.end(), a.subject);
        if (g == gl.end()) throw std::invalid_argument("unknown guard");
        return std::string(uml2ts::to_string(uts.state(s).gvs.at(static_cast<std::size_t>(g - gl.begin())))) == a.value;
    });
    return ctl.holds(uts.initial(), f);
}

// ---------------------------------------------------------------------------

namespace {

std::string strip(const std::string& s) {
    auto b = s.find_first_not_of(' ');
    auto e = s.find_last_not_of(' ');
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

}  // namespace

GridCounts grid_reachability(std::string_view dump) {
    std::istringstream in{std::string(dump)};
    std::vector<std::string> guards;
    std::vector<std::string> state_lines;
    std::vector<std::pair<std::string, std::string>> edges;
    for (std::string line; std::getline(in, line);) {
        if (line.rfind("# guards:", 0) == 0) {
            std::istringstream g(line.substr(9));
            for (std::string w; g >> w;) guards.push_back(w);
        } else if (auto arrow = line.find(" -> "); arrow != std::string::npos) {
            edges.emplace_back(strip(line.substr(0, arrow)), strip(line.substr(arrow + 4)));
        } else if (!strip(line).empty()) {
            state_lines.push_back(line);
        }
    }
    // Cell = (name, valuation); valuation as base-3 number in guard order.
    std::size_t width = 1;
    for (std::size_t i = 0; i < guards.size(); ++i) width *= 3;
    std::map<std::string, std::size_t> names;
    auto code_of = [&](const std::string& assignments) {
        std::size_t code = 0;
        std::istringstream a(assignments);
        for (std::string w; a >> w;) {
            auto eq = w.find('=');
            std::string v = w.substr(eq + 1);
            code = code * 3 + (v == "dc" ? 0 : v == "false" ? 1 : 2);
        }
        return code;
    };
    auto cell_of_key = [&](const std::string& key) -> std::pair<std::string, std::size_t> {
        auto br = key.find(" [");
        if (br == std::string::npos) return {key, 0};
        return {key.substr(0, br), code_of(key.substr(br + 2, key.size() - br - 3))};
    };
    std::vector<std::pair<std::string, std::size_t>> cells;
    for (const auto& l : state_lines) {
        auto bar = l.find(" | ");
        std::string name = strip(bar == std::string::npos ? l : l.substr(0, bar));
        names.emplace(name, 0);
        cells.emplace_back(name, bar == std::string::npos ? 0 : code_of(l.substr(bar + 3)));
    }
    std::size_t i = 0;
    for (auto& [n, idx] : names) idx = i++;

    std::vector<bool> reached(names.size() * width, false);
    for (const auto& [name, code] : cells) {
        if (name.rfind("Start-", 0) == 0 && code == 0) reached[names[name] * width] = true;
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& [src, dst] : edges) {
            auto [sn, sc] = cell_of_key(src);
            auto [dn, dc] = cell_of_key(dst);
            std::size_t a = names.at(sn) * width + sc;
            std::size_t b = names.at(dn) * width + dc;
            if (reached[a] && !reached[b]) {
                reached[b] = true;
                changed = true;
            }
        }
    }
    GridCounts out;
    out.declared = names.size() * width;
    out.reachable = static_cast<std::size_t>(std::count(reached.begin(), reached.end(), true));
    return out;
}

// ---------------------------------------------------------------------------

SmvKripke simulate(const uml2ts::SmvModel& model) {
    const auto& vars = model.vars;
    std::size_t n = vars.size();
    auto index_of = [&](const std::string& v) {
        for (std::size_t i = 0; i < n; ++i) {
            if (vars[i].name == v) return i;
        }
        throw std::invalid_argument("unknown variable " + v);
    };
    std::vector<std::optional<std::string>> init(n);
    for (const auto& [v, value] : model.init) init[index_of(v)] = value;
    std::vector<const uml2ts::SmvAssign*> next(n, nullptr);
    for (const auto& a : model.next) next[index_of(a.var)] = &a;

    // all combinations of values for a subset of variables
    auto combos = [&](const std::vector<std::size_t>& which, const std::vector<std::string>& base) {
        std::vector<std::vector<std::string>> out{base};
        for (auto v : which) {
            std::vector<std::vector<std::string>> grown;
            for (const auto& partial : out) {
                for (const auto& value : vars[v].values) {
                    auto c = partial;
                    c[v] = value;
                    grown.push_back(std::move(c));
                }
            }
            out = std::move(grown);
        }
        return out;
    };

    SmvKripke k;
    std::map<std::vector<std::string>, std::size_t> ids;
    std::vector<std::size_t> queue;
    auto intern = [&](const std::vector<std::string>& s) {
        auto [it, fresh] = ids.emplace(s, k.states.size());
        if (fresh) {
            k.states.push_back(s);
            k.succ.emplace_back();
            queue.push_back(it->second);
        }
        return it->second;
    };
    std::vector<std::size_t> uninit, free_vars;
    std::vector<std::string> base(n);
    for (std::size_t v = 0; v < n; ++v) {
        if (init[v]) base[v] = *init[v];
        else uninit.push_back(v);
        if (!next[v]) free_vars.push_back(v);
    }
    for (const auto& s : combos(uninit, base)) k.initial.push_back(intern(s));

    for (std::size_t head = 0; head < queue.size(); ++head) {
        std::size_t id = queue[head];
        std::vector<std::string> cur = k.states[id];
        std::set<std::size_t> targets;
        for (const auto& nxt_free : combos(free_vars, cur)) {
            std::vector<std::string> nxt = nxt_free;
            for (std::size_t v = 0; v < n; ++v) {
                if (!next[v]) continue;
                bool matched = false;
                for (const auto& arm : next[v]->arms) {
                    bool ok = true;
                    for (const auto& eq : arm.condition) {
                        std::size_t w = index_of(eq.var);
                        if (eq.next && next[w]) throw std::invalid_argument("next() of an assigned variable");
                        const std::string& have = eq.next ? nxt_free[w] : cur[w];
                        if (have != eq.value) {
                            ok = false;
                            break;
                        }
                    }
                    if (!ok) continue;
                    bool is_var = std::any_of(vars.begin(), vars.end(), [&](const auto& x) { return x.name == arm.result; });
                    nxt[v] = is_var ? cur[index_of(arm.result)] : arm.result;
                    matched = true;
                    break;
                }
                if (!matched) throw std::invalid_argument("case without a matching arm");
            }
            targets.insert(intern(nxt));
        }
        k.succ[id].assign(targets.begin(), targets.end());
    }
    return k;
}

namespace {

using Set = std::vector<bool>;

class Fixpoints {
public:
    Fixpoints(const uml2ts::SmvModel& m, const SmvKripke& k) : m_(m), k_(k), n_(k.states.size()) {}

    Set eval(const Formula& f) const {
        const auto& a = f.args;
        switch (f.op) {
            case CtlOp::True: return Set(n_, true);
            case CtlOp::False: return Set(n_, false);
            case CtlOp::Atom: {
                std::size_t v = 0;
                while (v < m_.vars.size() && m_.vars[v].name != f.subject) ++v;
                if (v == m_.vars.size()) throw std::invalid_argument("unknown variable " + f.subject);
                Set out(n_);
                for (std::size_t s = 0; s < n_; ++s) out[s] = k_.states[s][v] == f.value;
                return out;
            }
            case CtlOp::Not: return map1(eval(a[0]), [](bool x) { return !x; });
            case CtlOp::And: return map2(eval(a[0]), eval(a[1]), [](bool x, bool y) { return x && y; });
            case CtlOp::Or: return map2(eval(a[0]), eval(a[1]), [](bool x, bool y) { return x || y; });
            case CtlOp::Implies: return map2(eval(a[0]), eval(a[1]), [](bool x, bool y) { return !x || y; });
            case CtlOp::EX: return pre(eval(a[0]), false);
            case CtlOp::AX: return pre(eval(a[0]), true);
            case CtlOp::EF: return fix(Set(n_, true), eval(a[0]), false, false);
            case CtlOp::AF: return fix(Set(n_, true), eval(a[0]), true, false);
            case CtlOp::EG: return fix(eval(a[0]), Set(n_, false), false, true);
            case CtlOp::AG: return fix(eval(a[0]), Set(n_, false), true, true);
            case CtlOp::EU: return fix(eval(a[0]), eval(a[1]), false, false);
            case CtlOp::AU: return fix(eval(a[0]), eval(a[1]), true, false);
            case CtlOp::EW: return fix(eval(a[0]), eval(a[1]), false, true);
            case CtlOp::AW: return fix(eval(a[0]), eval(a[1]), true, true);
        }
        throw std::logic_error("op");
    }

private:
    template <typename F>
    static Set map1(Set x, F f) {
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = f(x[i]);
        return x;
    }
    template <typename F>
    static Set map2(Set x, const Set& y, F f) {
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = f(x[i], y[i]);
        return x;
    }

    Set pre(const Set& z, bool all) const {
        Set out(n_);
        for (std::size_t s = 0; s < n_; ++s) {
            bool any = false, every = true;
            for (auto t : k_.succ[s]) {
                any = any || z[t];
                every = every && z[t];
            }
            out[s] = all ? every : any;
        }
        return out;
    }

    // Z = q | (p & pre(Z)); least fixpoint from empty or greatest from full.
    Set fix(const Set& p, const Set& q, bool all, bool greatest) const {
        Set z(n_, greatest);
        while (true) {
            Set step = pre(z, all);
            Set next(n_);
            for (std::size_t s = 0; s < n_; ++s) next[s] = q[s] || (p[s] && step[s]);
            if (next == z) return z;
            z = std::move(next);
        }
    }

    const uml2ts::SmvModel& m_;
    const SmvKripke& k_;
    std::size_t n_;
};

}  // namespace

std::vector<bool> smv_verdicts(const uml2ts::SmvModel& model) {
    SmvKripke k = simulate(model);
    Fixpoints fp(model, k);
    std::vector<bool> out;
    for (const auto& spec : model.specs) {
        Set s = fp.eval(uml2ts::parse_ctl(spec));
        out.push_back(std::all_of(k.initial.begin(), k.initial.end(), [&](std::size_t i) { return s[i]; }));
    }
    return out;
}

}  // namespace oracle
