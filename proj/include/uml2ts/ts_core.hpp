#ifndef UML2TS_TS_CORE_HPP
#define UML2TS_TS_CORE_HPP

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace uml2ts {

using GuardName = std::string;
using GuardList = std::vector<GuardName>;

enum class DiagramKind { Sequence, StateMachine, Activity };

std::string_view to_string(DiagramKind kind);

// Ternary guard value. `DontCare` ("dc") is the value every guard starts
// with; once a guard is fixed it never returns to dc.
enum class GuardValue : std::uint8_t { DontCare, False, True };

std::string_view to_string(GuardValue value);
std::optional<GuardValue> parse_guard_value(std::string_view text);
inline GuardValue to_guard_value(bool value) { return value ? GuardValue::True : GuardValue::False; }

// Thrown for unknown guard names and inconsistent guard updates.
class GuardError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// One effect of a transition on the guard valuation.
///
/// A plain update is a test: it is only admissible when the guard is still
/// dc or already holds `value`. A reassigning update (generated for guards
/// evaluated inside a cycle, e.g. a loop condition) may overwrite
/// true<->false.
struct GuardUpdate {
    GuardName guard;
    bool value = true;
    bool reassign = false;

    friend bool operator==(const GuardUpdate&, const GuardUpdate&) = default;
    friend auto operator<=>(const GuardUpdate&, const GuardUpdate&) = default;
};

using GuardUpdates = std::vector<GuardUpdate>;

// Combines two update sets applied in the same step. Returns nullopt when
// they assign different values to the same guard.
std::optional<GuardUpdates> merge_updates(const GuardUpdates& a, const GuardUpdates& b);

/// The guard value structure (gvs): a total map from every guard of a
/// bundle to a GuardValue. The guard domain is shared between all
/// valuations built from the same bundle.
class GuardValuation {
public:
    GuardValuation();
    explicit GuardValuation(std::shared_ptr<const GuardList> domain);
    GuardValuation(std::shared_ptr<const GuardList> domain, std::vector<GuardValue> values);

    static GuardValuation all_dc(const GuardList& guards);

    const GuardList& domain() const { return *domain_; }
    const std::shared_ptr<const GuardList>& shared_domain() const { return domain_; }
    const std::vector<GuardValue>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }

    std::optional<std::size_t> index_of(std::string_view guard) const;
    GuardValue at(std::size_t index) const { return values_.at(index); }
    GuardValue operator[](std::string_view guard) const;
    void set(std::string_view guard, GuardValue value);

    bool all_dont_care() const;

    // "g1=v1 g2=v2 ..." in domain order.
    std::string str() const;

    friend bool operator==(const GuardValuation& a, const GuardValuation& b) { return a.values_ == b.values_; }
    friend auto operator<=>(const GuardValuation& a, const GuardValuation& b) { return a.values_ <=> b.values_; }

private:
    std::size_t require_index(std::string_view guard) const;

    std::shared_ptr<const GuardList> domain_;
    std::vector<GuardValue> values_;
};

// True iff every non-reassigning update (g, v) finds current[g] in {dc, v}.
// Throws GuardError for guards outside the valuation's domain.
bool gvs_consistent(const GuardValuation& current, const GuardUpdates& updates);

// current overwritten by updates. Throws GuardError if !gvs_consistent.
GuardValuation gvs_apply(const GuardValuation& current, const GuardUpdates& updates);

/// A state label: element names joined by `and` when parallel. The single
/// part "-" is the placeholder for an absent or disagreeing diagram.
struct Label {
    std::vector<std::string> parts;

    Label() = default;
    explicit Label(std::string single) : parts{std::move(single)} {}
    explicit Label(std::vector<std::string> many) : parts(std::move(many)) {}

    static Label placeholder() { return Label(std::string(kPlaceholder)); }
    bool is_placeholder() const { return parts.size() == 1 && parts.front() == kPlaceholder; }
    std::string str() const;

    static constexpr std::string_view kPlaceholder = "-";
    static constexpr std::string_view kStart = "Start";
    static constexpr std::string_view kEnd = "End";

    friend bool operator==(const Label&, const Label&) = default;
    friend auto operator<=>(const Label&, const Label&) = default;
};

struct ComponentState {
    Label label;
    GuardValuation gvs;
};

struct ComponentTransition {
    std::size_t source = 0;
    std::size_t target = 0;
    GuardUpdates updates;
};

/// Transition system built from one diagram.
struct ComponentTS {
    DiagramKind kind = DiagramKind::Sequence;
    std::vector<ComponentState> states;
    std::size_t initial = 0;
    std::vector<ComponentTransition> transitions;

    // Indices into `transitions` leaving `state`, in insertion order.
    std::vector<std::size_t> outgoing(std::size_t state) const;
};

/// A unified state: the (Message, State, Activity) label tuple plus its gvs.
struct UnifiedState {
    Label msg;
    Label st;
    Label act;
    GuardValuation gvs;

    // `msg-st-act`, e.g. `WaitAccount-CardValidandPinValid-InitiateTransaction`.
    std::string name() const;

    // Splits a rendered name back into its three slots. Parallel labels come
    // back as a single part since `and` joining is not reversible.
    static std::optional<std::array<Label, 3>> split_name(std::string_view name);
};

/// The merged transition system. States are value-identified by
/// (rendered name, gvs): adding an equal state returns the existing index.
class UnifiedTS {
public:
    UnifiedTS();
    explicit UnifiedTS(GuardList guards);

    const GuardList& guards() const { return *guards_; }
    const std::shared_ptr<const GuardList>& shared_guards() const { return guards_; }

    std::size_t add_state(UnifiedState state);
    // Returns false when the transition already existed.
    bool add_transition(std::size_t source, std::size_t target);

    std::optional<std::size_t> find(std::string_view name, const GuardValuation& gvs) const;

    const std::vector<UnifiedState>& states() const { return states_; }
    const UnifiedState& state(std::size_t index) const { return states_.at(index); }
    const std::vector<std::string>& names() const { return names_; }
    std::size_t size() const { return states_.size(); }

    std::size_t initial() const { return initial_; }
    void set_initial(std::size_t index) { initial_ = index; }

    const std::vector<std::size_t>& successors(std::size_t index) const { return succ_.at(index); }
    std::size_t transition_count() const { return transition_count_; }
    // (source, target) pairs, grouped by source in state order.
    std::vector<std::pair<std::size_t, std::size_t>> transitions() const;

    // `Name` when there are no guards, `Name [g1=v1 g2=v2]` otherwise.
    std::string state_key(std::size_t index) const;

private:
    std::shared_ptr<const GuardList> guards_;
    std::vector<UnifiedState> states_;
    std::vector<std::string> names_;
    std::vector<std::vector<std::size_t>> succ_;
    std::map<std::pair<std::string, std::vector<GuardValue>>, std::size_t> index_;
    std::size_t initial_ = 0;
    std::size_t transition_count_ = 0;
};

// Debug dumps: one line per state `NAME | g1=v1 ...`, one line per
// transition `SRC -> DST`, each block sorted lexicographically.
std::string dump(const ComponentTS& ts);
std::string dump(const UnifiedTS& ts);

// Reads a unified dump back. The initial state is the one whose slots are
// all `Start` or `-` with an all-dc valuation.
UnifiedTS parse_unified_dump(std::string_view text);

}  // namespace uml2ts

#endif
