#include "uml2ts/smv_emit.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace uml2ts {

namespace {
constexpr const char* kChoice = "_choice";
}

std::string smv_identifier(const std::string& name, const SmvOptions& opts) {
    if (opts.paper_style) return name;
    std::string out = name;
    std::replace(out.begin(), out.end(), '-', '_');
    return out;
}

Formula smv_formula(const Formula& f, const SmvOptions& opts) {
    Formula out = f;
    for (auto& a : out.args) a = smv_formula(a, opts);
    if (out.op == CtlOp::Atom && out.subject == "State") out.value = smv_identifier(out.value, opts);
    if (opts.paper_style) return out;
    if (out.op == CtlOp::AW) {
        // A[p W q] == !E[!q U (!p & !q)]
        const Formula& p = out.args[0];
        const Formula& q = out.args[1];
        return f_not(Formula::binary(CtlOp::EU, f_not(q), f_and(f_not(p), f_not(q))));
    }
    if (out.op == CtlOp::EW) {
        const Formula& p = out.args[0];
        const Formula& q = out.args[1];
        return f_or(Formula::binary(CtlOp::EU, p, q), Formula::unary(CtlOp::EG, p));
    }
    return out;
}

std::string emit_property(const Formula& f, const SmvOptions& opts) {
    return "CTLSPEC " + render_ctl(smv_formula(f, opts));
}

std::string emit_smv(const UnifiedTS& uts, const std::vector<Formula>& props, const SmvOptions& opts) {
    if (uts.size() == 0) throw EmitError("cannot emit an empty transition system");
    const auto& guards = uts.guards();

    std::size_t max_out = 0;
    for (std::size_t s = 0; s < uts.size(); ++s) max_out = std::max(max_out, uts.successors(s).size());
    bool choice = max_out > 1;
    if (choice && std::count(guards.begin(), guards.end(), kChoice)) {
        throw EmitError(std::string("guard name '") + kChoice + "' is used by the emitter");
    }

    // Distinct names in first-occurrence order (state order is BFS).
    std::vector<std::string> names;
    std::map<std::string, std::string> ident_of;
    std::map<std::string, std::string> owner;
    for (const auto& g : guards) owner[g] = g;
    for (const auto& n : uts.names()) {
        if (ident_of.count(n)) continue;
        std::string id = smv_identifier(n, opts);
        if (auto it = owner.find(id); it != owner.end()) {
            throw EmitError("state '" + n + "' and '" + it->second + "' map to the same identifier '" + id + "'");
        }
        owner[id] = n;
        ident_of[n] = id;
        names.push_back(n);
    }

    std::ostringstream out;
    out << "MODULE main\n";
    out << "VAR\n";
    out << "    State : {";
    for (std::size_t i = 0; i < names.size(); ++i) out << (i ? ", " : "") << ident_of[names[i]];
    out << "};\n";
    for (const auto& g : guards) out << "    " << g << " : {dc, false, true};\n";
    if (choice) out << "    " << kChoice << " : 0.." << (max_out - 1) << ";\n";

    out << "ASSIGN\n";
    out << "    init(State) := " << ident_of[uts.names()[uts.initial()]] << ";\n";
    for (const auto& g : guards) out << "    init(" << g << ") := dc;\n";

    auto condition = [&](std::size_t s) {
        std::string c = "State=" + ident_of[uts.names()[s]];
        const auto& gvs = uts.state(s).gvs;
        for (std::size_t i = 0; i < guards.size(); ++i) {
            c += " & " + guards[i] + "=" + std::string(to_string(gvs.at(i)));
        }
        return c;
    };
    auto block = [&](const std::string& var, auto result) {
        out << "    next(" << var << ") := case\n";
        for (std::size_t s = 0; s < uts.size(); ++s) {
            const auto& succ = uts.successors(s);
            std::string cond = condition(s);
            for (std::size_t i = 0; i < succ.size(); ++i) {
                out << "        " << cond;
                if (i + 1 < succ.size()) out << " & next(" << kChoice << ")=" << i;
                out << " : " << result(succ[i]) << ";\n";
            }
        }
        out << "        TRUE : " << var << ";\n";
        out << "    esac;\n";
    };
    block("State", [&](std::size_t t) { return ident_of[uts.names()[t]]; });
    for (std::size_t gi = 0; gi < guards.size(); ++gi) {
        block(guards[gi], [&](std::size_t t) { return std::string(to_string(uts.state(t).gvs.at(gi))); });
    }

    for (const auto& p : props) out << emit_property(p, opts) << "\n";
    return out.str();
}

}  // namespace uml2ts
