#include "uml2ts/ts_core.hpp"

#include <algorithm>
#include <sstream>

namespace uml2ts {

std::string_view to_string(DiagramKind kind) {
    switch (kind) {
        case DiagramKind::Sequence: return "sequence";
        case DiagramKind::StateMachine: return "statemachine";
        case DiagramKind::Activity: return "activity";
    }
    return "?";
}

std::string_view to_string(GuardValue value) {
    switch (value) {
        case GuardValue::DontCare: return "dc";
        case GuardValue::False: return "false";
        case GuardValue::True: return "true";
    }
    return "?";
}

std::optional<GuardValue> parse_guard_value(std::string_view text) {
    if (text == "dc") return GuardValue::DontCare;
    if (text == "false") return GuardValue::False;
    if (text == "true") return GuardValue::True;
    return std::nullopt;
}

std::optional<GuardUpdates> merge_updates(const GuardUpdates& a, const GuardUpdates& b) {
    GuardUpdates out = a;
    for (const auto& u : b) {
        auto it = std::find_if(out.begin(), out.end(), [&](const GuardUpdate& x) { return x.guard == u.guard; });
        if (it == out.end()) {
            out.push_back(u);
        } else if (it->value != u.value) {
            return std::nullopt;
        } else {
            it->reassign = it->reassign && u.reassign;
        }
    }
    return out;
}

// ----------------------------------------------------------------------------
// GuardValuation

GuardValuation::GuardValuation() : domain_(std::make_shared<const GuardList>()) {}

GuardValuation::GuardValuation(std::shared_ptr<const GuardList> domain)
    : domain_(std::move(domain)), values_(domain_->size(), GuardValue::DontCare) {}

GuardValuation::GuardValuation(std::shared_ptr<const GuardList> domain, std::vector<GuardValue> values)
    : domain_(std::move(domain)), values_(std::move(values)) {
    if (values_.size() != domain_->size()) {
        throw GuardError("guard valuation size does not match its domain");
    }
}

GuardValuation GuardValuation::all_dc(const GuardList& guards) {
    return GuardValuation(std::make_shared<const GuardList>(guards));
}

std::optional<std::size_t> GuardValuation::index_of(std::string_view guard) const {
    for (std::size_t i = 0; i < domain_->size(); ++i) {
        if ((*domain_)[i] == guard) return i;
    }
    return std::nullopt;
}

std::size_t GuardValuation::require_index(std::string_view guard) const {
    auto i = index_of(guard);
    if (!i) throw GuardError("unknown guard '" + std::string(guard) + "'");
    return *i;
}

GuardValue GuardValuation::operator[](std::string_view guard) const {
    return values_[require_index(guard)];
}

void GuardValuation::set(std::string_view guard, GuardValue value) {
    values_[require_index(guard)] = value;
}

bool GuardValuation::all_dont_care() const {
    return std::all_of(values_.begin(), values_.end(), [](GuardValue v) { return v == GuardValue::DontCare; });
}

std::string GuardValuation::str() const {
    std::string out;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (i) out += ' ';
        out += (*domain_)[i];
        out += '=';
        out += to_string(values_[i]);
    }
    return out;
}

bool gvs_consistent(const GuardValuation& current, const GuardUpdates& updates) {
    for (const auto& u : updates) {
        GuardValue have = current[u.guard];
        if (u.reassign) continue;
        if (have != GuardValue::DontCare && have != to_guard_value(u.value)) return false;
    }
    return true;
}

GuardValuation gvs_apply(const GuardValuation& current, const GuardUpdates& updates) {
    if (!gvs_consistent(current, updates)) {
        throw GuardError("inconsistent guard update on {" + current.str() + "}");
    }
    GuardValuation next = current;
    for (const auto& u : updates) next.set(u.guard, to_guard_value(u.value));
    return next;
}

// ----------------------------------------------------------------------------
// Labels and states

std::string Label::str() const {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += "and";
        out += parts[i];
    }
    return out;
}

std::vector<std::size_t> ComponentTS::outgoing(std::size_t state) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < transitions.size(); ++i) {
        if (transitions[i].source == state) out.push_back(i);
    }
    return out;
}

std::string UnifiedState::name() const {
    return msg.str() + "-" + st.str() + "-" + act.str();
}

std::optional<std::array<Label, 3>> UnifiedState::split_name(std::string_view name) {
    std::array<Label, 3> slots;
    std::size_t pos = 0;
    for (std::size_t slot = 0; slot < 3; ++slot) {
        if (slot > 0) {
            if (pos >= name.size() || name[pos] != '-') return std::nullopt;
            ++pos;
        }
        if (pos >= name.size()) return std::nullopt;
        // A slot is either the lone placeholder or a label free of '-'.
        bool last = slot == 2;
        if (name[pos] == '-' && (last ? pos + 1 == name.size() : true)) {
            slots[slot] = Label::placeholder();
            ++pos;
            continue;
        }
        std::size_t end = name.find('-', pos);
        if (end == std::string_view::npos) end = name.size();
        if (last && end != name.size()) return std::nullopt;
        slots[slot] = Label(std::string(name.substr(pos, end - pos)));
        pos = end;
    }
    if (pos != name.size()) return std::nullopt;
    return slots;
}

// ----------------------------------------------------------------------------
// UnifiedTS

UnifiedTS::UnifiedTS() : guards_(std::make_shared<const GuardList>()) {}

UnifiedTS::UnifiedTS(GuardList guards) : guards_(std::make_shared<const GuardList>(std::move(guards))) {}

std::size_t UnifiedTS::add_state(UnifiedState state) {
    if (state.gvs.size() != guards_->size()) {
        throw GuardError("unified state valuation does not cover the guard list");
    }
    std::string name = state.name();
    auto key = std::make_pair(name, state.gvs.values());
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    std::size_t index = states_.size();
    state.gvs = GuardValuation(guards_, state.gvs.values());
    states_.push_back(std::move(state));
    names_.push_back(std::move(name));
    succ_.emplace_back();
    index_.emplace(std::move(key), index);
    return index;
}

bool UnifiedTS::add_transition(std::size_t source, std::size_t target) {
    auto& out = succ_.at(source);
    if (target >= states_.size()) throw std::out_of_range("transition target out of range");
    if (std::find(out.begin(), out.end(), target) != out.end()) return false;
    out.push_back(target);
    ++transition_count_;
    return true;
}

std::optional<std::size_t> UnifiedTS::find(std::string_view name, const GuardValuation& gvs) const {
    auto it = index_.find(std::make_pair(std::string(name), gvs.values()));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::pair<std::size_t, std::size_t>> UnifiedTS::transitions() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    out.reserve(transition_count_);
    for (std::size_t s = 0; s < succ_.size(); ++s) {
        for (std::size_t t : succ_[s]) out.emplace_back(s, t);
    }
    return out;
}

std::string UnifiedTS::state_key(std::size_t index) const {
    const auto& s = states_.at(index);
    if (guards_->empty()) return names_[index];
    return names_[index] + " [" + s.gvs.str() + "]";
}

// ----------------------------------------------------------------------------
// Dumps

namespace {

std::string component_key(const ComponentTS& ts, std::size_t index) {
    const auto& s = ts.states[index];
    std::string key = "#" + std::to_string(index) + " " + s.label.str();
    if (s.gvs.size()) key += " [" + s.gvs.str() + "]";
    return key;
}

std::string join_sorted(std::vector<std::string> lines) {
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (auto& l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::string dump(const ComponentTS& ts) {
    std::vector<std::string> states;
    std::vector<std::string> transitions;
    for (std::size_t i = 0; i < ts.states.size(); ++i) {
        std::string line = component_key(ts, i);
        if (i == ts.initial) line += " (initial)";
        states.push_back(std::move(line));
    }
    for (const auto& t : ts.transitions) {
        std::string line = component_key(ts, t.source) + " -> " + component_key(ts, t.target);
        if (!t.updates.empty()) {
            line += " /";
            for (const auto& u : t.updates) {
                line += ' ';
                line += u.guard;
                line += u.reassign ? ":=" : "=";
                line += u.value ? "true" : "false";
            }
        }
        transitions.push_back(std::move(line));
    }
    std::string out = "# " + std::string(to_string(ts.kind)) + " component\n";
    out += join_sorted(std::move(states));
    out += join_sorted(std::move(transitions));
    return out;
}

std::string dump(const UnifiedTS& ts) {
    std::vector<std::string> states;
    std::vector<std::string> transitions;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        std::string line = ts.names()[i];
        if (!ts.guards().empty()) line += " | " + ts.state(i).gvs.str();
        states.push_back(std::move(line));
    }
    for (auto [s, t] : ts.transitions()) transitions.push_back(ts.state_key(s) + " -> " + ts.state_key(t));

    std::string out = "# guards:";
    for (const auto& g : ts.guards()) out += " " + g;
    out += '\n';
    out += join_sorted(std::move(states));
    out += join_sorted(std::move(transitions));
    return out;
}

namespace {

UnifiedState parse_state_spec(std::string_view text, const std::shared_ptr<const GuardList>& guards,
                              std::size_t line_no) {
    auto fail = [&](const std::string& msg) {
        return std::runtime_error("dump line " + std::to_string(line_no) + ": " + msg);
    };
    std::string name = trim(text);
    std::string assignments;
    if (auto bar = text.find(" | "); bar != std::string_view::npos) {
        name = trim(text.substr(0, bar));
        assignments = trim(text.substr(bar + 3));
    } else if (auto br = text.find(" ["); br != std::string_view::npos) {
        name = trim(text.substr(0, br));
        auto close = text.rfind(']');
        if (close == std::string_view::npos || close < br) throw fail("unterminated valuation");
        assignments = trim(text.substr(br + 2, close - br - 2));
    }
    auto slots = UnifiedState::split_name(name);
    if (!slots) throw fail("malformed state name '" + name + "'");
    GuardValuation gvs(guards);
    std::istringstream in(assignments);
    std::string item;
    std::size_t seen = 0;
    while (in >> item) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw fail("expected g=v, got '" + item + "'");
        auto value = parse_guard_value(item.substr(eq + 1));
        if (!value) throw fail("bad guard value in '" + item + "'");
        gvs.set(item.substr(0, eq), *value);
        ++seen;
    }
    if (seen != guards->size()) throw fail("valuation must list every guard");
    return UnifiedState{(*slots)[0], (*slots)[1], (*slots)[2], gvs};
}

bool is_initial_shape(const UnifiedState& s) {
    auto ok = [](const Label& l) { return l.is_placeholder() || l.str() == Label::kStart; };
    return s.msg.str() == Label::kStart && ok(s.st) && ok(s.act) && s.gvs.all_dont_care();
}

}  // namespace

UnifiedTS parse_unified_dump(std::string_view text) {
    std::vector<std::pair<std::string, std::size_t>> lines;
    std::size_t line_no = 0;
    GuardList guards;
    bool have_header = false;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string line = trim(text.substr(start, end - start));
        ++line_no;
        start = end + 1;
        if (line.rfind("# guards:", 0) == 0) {
            std::istringstream in(line.substr(9));
            std::string g;
            while (in >> g) guards.push_back(g);
            have_header = true;
            continue;
        }
        if (line.empty() || line[0] == '#') continue;
        lines.emplace_back(std::move(line), line_no);
        if (end == text.size()) break;
    }
    if (!have_header) throw std::runtime_error("dump is missing its '# guards:' header");

    UnifiedTS ts(std::move(guards));
    std::vector<std::pair<std::pair<std::string, std::size_t>, std::string>> edges;
    for (auto& [line, no] : lines) {
        if (auto arrow = line.find(" -> "); arrow != std::string::npos) {
            edges.push_back({{line.substr(0, arrow), no}, line.substr(arrow + 4)});
        } else {
            ts.add_state(parse_state_spec(line, ts.shared_guards(), no));
        }
    }
    for (auto& [src, dst] : edges) {
        auto s = parse_state_spec(src.first, ts.shared_guards(), src.second);
        auto d = parse_state_spec(dst, ts.shared_guards(), src.second);
        auto si = ts.find(s.name(), s.gvs);
        auto di = ts.find(d.name(), d.gvs);
        if (!si || !di) {
            throw std::runtime_error("dump line " + std::to_string(src.second) + ": transition references an undeclared state");
        }
        ts.add_transition(*si, *di);
    }
    bool found = false;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (is_initial_shape(ts.state(i))) {
            ts.set_initial(i);
            found = true;
            break;
        }
    }
    if (!found) throw std::runtime_error("dump has no Start state with an all-dc valuation");
    return ts;
}

}  // namespace uml2ts
