#ifndef UML2TS_DIAGRAM_MODEL_HPP
#define UML2TS_DIAGRAM_MODEL_HPP

#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "uml2ts/ts_core.hpp"

namespace uml2ts {

/// `[g]` (polarity true) or `[!g]` (polarity false).
struct GuardLiteral {
    GuardName guard;
    bool polarity = true;

    friend bool operator==(const GuardLiteral&, const GuardLiteral&) = default;
};

// A conjunction of literals over distinct guards.
using GuardSet = std::vector<GuardLiteral>;

GuardUpdates to_updates(const GuardSet& literals);

// ----------------------------------------------------------------------------
// Sequence diagram

struct SdElement;
using SdBody = std::vector<SdElement>;

struct SdMessage {
    std::string name;
    std::string from;
    std::string to;

    friend bool operator==(const SdMessage&, const SdMessage&) = default;
};

struct SdBranch {
    GuardSet guards;
    SdBody body;

    friend bool operator==(const SdBranch&, const SdBranch&);
};

struct SdAlt {
    std::vector<SdBranch> branches;
    friend bool operator==(const SdAlt&, const SdAlt&);
};

struct SdOpt {
    GuardSet guards;
    SdBody body;
    friend bool operator==(const SdOpt&, const SdOpt&);
};

struct SdLoop {
    GuardSet guards;
    SdBody body;
    friend bool operator==(const SdLoop&, const SdLoop&);
};

struct SdPar {
    std::vector<SdBody> operands;
    friend bool operator==(const SdPar&, const SdPar&);
};

struct SdElement {
    std::variant<SdMessage, SdAlt, SdOpt, SdLoop, SdPar> node;

    template <typename T>
        requires(!std::is_same_v<std::decay_t<T>, SdElement>)
    SdElement(T value) : node(std::move(value)) {}  // NOLINT(google-explicit-constructor)

    friend bool operator==(const SdElement&, const SdElement&) = default;
};

struct SequenceDiagram {
    std::string name;
    std::vector<std::string> lifelines;
    SdBody body;

    friend bool operator==(const SequenceDiagram&, const SequenceDiagram&) = default;
};

// ----------------------------------------------------------------------------
// State machine diagram

struct SmTransition {
    std::string source;
    std::string target;
    std::optional<std::string> event;
    GuardSet guards;

    friend bool operator==(const SmTransition&, const SmTransition&) = default;
};

// An orthogonal region. Regions of one machine form a single parallel
// composite state: entering any region state enters all regions.
struct SmRegion {
    std::string name;
    std::vector<std::string> states;
    std::string initial;
    std::vector<SmTransition> transitions;

    friend bool operator==(const SmRegion&, const SmRegion&) = default;
};

struct StateMachineDiagram {
    std::string name;
    std::vector<std::string> states;  // top-level states
    std::string initial;
    std::vector<SmRegion> regions;
    std::vector<SmTransition> transitions;  // top-level transitions

    // Top-level states followed by region states, in declaration order.
    std::vector<std::string> all_states() const;
    // Top-level transitions followed by region transitions.
    std::vector<SmTransition> all_transitions() const;
    // Index of the region declaring `state`, if any.
    std::optional<std::size_t> region_of(std::string_view state) const;

    friend bool operator==(const StateMachineDiagram&, const StateMachineDiagram&) = default;
};

// ----------------------------------------------------------------------------
// Activity diagram

enum class AdNodeKind { Initial, Action, Decision, Merge, Fork, Join, Final };

std::string_view to_string(AdNodeKind kind);

struct AdNode {
    std::string id;
    AdNodeKind kind = AdNodeKind::Action;

    friend bool operator==(const AdNode&, const AdNode&) = default;
};

struct AdEdge {
    std::string source;
    std::string target;
    GuardSet guards;

    friend bool operator==(const AdEdge&, const AdEdge&) = default;
};

struct ActivityDiagram {
    std::string name;
    std::vector<AdNode> nodes;
    std::vector<AdEdge> edges;

    const AdNode* find(std::string_view id) const;

    friend bool operator==(const ActivityDiagram&, const ActivityDiagram&) = default;
};

inline constexpr std::string_view kAdInitialId = "initial";

// ----------------------------------------------------------------------------
// Bundle

using Diagram = std::variant<SequenceDiagram, StateMachineDiagram, ActivityDiagram>;

DiagramKind kind_of(const Diagram& diagram);

/// One scenario: the mandatory sequence diagram plus at least one of the
/// state machine and activity diagrams.
struct DiagramBundle {
    SequenceDiagram sd;
    std::optional<StateMachineDiagram> smd;
    std::optional<ActivityDiagram> ad;
};

struct Violation {
    std::string path;     // e.g. "sequence ATM/alt#1/branch#2"
    std::string message;  // e.g. "alt branch without guard"

    std::string str() const { return path + ": " + message; }
};

using ValidationReport = std::vector<Violation>;

ValidationReport validate(const SequenceDiagram& sd);
ValidationReport validate(const StateMachineDiagram& smd);
ValidationReport validate(const ActivityDiagram& ad);
ValidationReport validate(const DiagramBundle& bundle);

// Deduplicated guard names in order of first occurrence: SD, then SMD, then AD.
GuardList collect_guards(const DiagramBundle& bundle);

bool is_identifier(std::string_view text);
// Guard names may not collide with words the CTL and SMV syntax reserve.
bool is_reserved_guard_name(std::string_view name);

// For a well-paired activity diagram, the join node matching `fork_id`.
std::optional<std::string> matching_join(const ActivityDiagram& ad, std::string_view fork_id);

}  // namespace uml2ts

#endif
