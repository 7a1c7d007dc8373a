#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "generators.hpp"
#include "uml2ts/diagram_io.hpp"
#include "uml2ts/unifier.hpp"

using namespace uml2ts;

namespace {

const std::string kDir = UML2TS_FIXTURES;

DiagramBundle load(const std::vector<std::string>& files) {
    std::vector<std::filesystem::path> p;
    for (const auto& f : files) p.push_back(kDir + f);
    return load_bundle(p);
}

std::set<std::string> names(const UnifiedTS& uts) { return {uts.names().begin(), uts.names().end()}; }

DiagramBundle parse_pair(const char* sd, const char* other) {
    DiagramBundle b;
    b.sd = std::get<SequenceDiagram>(parse_diagram(sd));
    auto d = parse_diagram(other);
    if (auto* m = std::get_if<StateMachineDiagram>(&d)) b.smd = *m;
    if (auto* a = std::get_if<ActivityDiagram>(&d)) b.ad = *a;
    return b;
}

}  // namespace

TEST(Unify, InitialStateIsStartAllDc) {
    auto uts = unify(load({"/atm/atm_sd.ubd", "/atm/atm_smd.ubd", "/atm/atm_ad.ubd"}));
    EXPECT_EQ(uts.initial(), 0u);
    EXPECT_EQ(uts.names()[0], "Start-Start-Start");
    EXPECT_TRUE(uts.state(0).gvs.all_dont_care());

    auto door = unify(load({"/door/door_sd.ubd", "/door/door_smd.ubd"}));
    EXPECT_EQ(door.names()[0], "Start-Start--");
    auto vend = unify(load({"/vending/vending_sd.ubd", "/vending/vending_ad.ubd"}));
    EXPECT_EQ(vend.names()[0], "Start---Start");
}

TEST(Unify, JointAdvance) {
    auto uts = unify(load({"/vending/vending_sd.ubd", "/vending/vending_ad.ubd"}));
    EXPECT_EQ(names(uts), (std::set<std::string>{"Start---Start", "Coin---Coin", "ReturnChange---ReturnChange",
                                                 "Select---Select", "Deliver---DeliverandReceipt", "End---End"}));
    EXPECT_EQ(reachable_stats(uts), (ReachableStats{18, 9}));
}

TEST(Unify, ShorterDiagramHolds) {
    auto b = parse_pair("sequence S\nlifeline A\nmsg a: A -> A\n",
                        "statemachine M\ninitial S0\nstate S0\nstate S1\nstate S2\n"
                        "trans S0 -> S1\ntrans S1 -> S2\n");
    auto uts = unify(b);
    EXPECT_EQ(names(uts), (std::set<std::string>{"Start-Start--", "a-S0--", "End-S1--", "End-S2--"}));
    EXPECT_EQ(uts.transition_count(), 3u);
}

TEST(Unify, DisagreementShowsPlaceholder) {
    auto b = parse_pair(
        "sequence S\nlifeline A\nmsg a: A -> A\nalt [g]\n  msg b: A -> A\nelse [!g]\n  msg c: A -> A\nend\n",
        "statemachine M\ninitial S0\nstate S0\nstate S1\ntrans S0 -> S1 [g]\n");
    auto uts = unify(b);
    auto n = names(uts);
    EXPECT_TRUE(n.count("b-S1--"));
    EXPECT_TRUE(n.count("c----"));
    EXPECT_FALSE(n.count("c-S1--"));
    EXPECT_FALSE(n.count("b----"));
}

TEST(Unify, DoorFixtureCounts) {
    auto uts = unify(load({"/door/door_sd.ubd", "/door/door_smd.ubd"}));
    EXPECT_EQ(reachable_stats(uts), (ReachableStats{45, 17}));
}

TEST(Unify, DeterministicAndCanonicallyNumbered) {
    auto b = load({"/atm/atm_sd.ubd", "/atm/atm_smd.ubd", "/atm/atm_ad.ubd"});
    auto a = unify(b);
    auto c = unify(b);
    EXPECT_EQ(dump(a), dump(c));
    ASSERT_EQ(a.size(), c.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.state_key(i), c.state_key(i));
    // every state reachable, numbered in BFS order
    std::vector<bool> seen(a.size(), false);
    std::vector<std::size_t> order{a.initial()};
    seen[a.initial()] = true;
    for (std::size_t h = 0; h < order.size(); ++h) {
        for (auto t : a.successors(order[h])) {
            if (!seen[t]) {
                seen[t] = true;
                order.push_back(t);
            }
        }
    }
    EXPECT_EQ(order.size(), a.size());
    for (std::size_t i = 0; i < order.size(); ++i) EXPECT_EQ(order[i], i);
}

TEST(Unify, GuardsNeverReturnToDc) {
    testgen::Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        auto uts = unify(testgen::random_bundle(rng, {}));
        for (auto [s, t] : uts.transitions()) {
            const auto& a = uts.state(s).gvs;
            const auto& b = uts.state(t).gvs;
            for (std::size_t g = 0; g < a.size(); ++g) {
                if (a.at(g) != GuardValue::DontCare) {
                    EXPECT_NE(b.at(g), GuardValue::DontCare);
                }
            }
        }
    }
}

TEST(Unify, SizeBoundedByProduct) {
    // each follower slot can also show `-`
    testgen::Rng rng(13);
    for (int i = 0; i < 100; ++i) {
        auto parts = build_components(testgen::random_bundle(rng, {}));
        std::size_t bound = parts.sd.states.size();
        if (parts.smd) bound *= parts.smd->states.size() + 1;
        if (parts.ad) bound *= parts.ad->states.size() + 1;
        for (std::size_t g = 0; g < parts.guards.size(); ++g) bound *= 3;
        EXPECT_LE(unify(parts).size(), bound);
    }
}

TEST(Unify, GuardlessBundlesDoNotBranch) {
    testgen::Rng rng(9);
    testgen::GenConfig cfg;
    cfg.guards = 0;
    cfg.unique_messages = true;
    for (int i = 0; i < 100; ++i) {
        auto uts = unify(testgen::random_bundle(rng, cfg));
        for (std::size_t s = 0; s < uts.size(); ++s) EXPECT_LE(uts.successors(s).size(), 1u);
    }
}

TEST(Unify, RepeatedLabelsMergeEvenWithoutGuards) {
    // states are identified by name, so the two `a` positions are one state
    auto b = parse_pair("sequence S\nlifeline A\nmsg a: A -> A\nmsg b: A -> A\nmsg a: A -> A\nmsg c: A -> A\n",
                        "statemachine M\ninitial S0\nstate S0\ntrans S0 -> S0\n");
    auto uts = unify(b);
    auto a = uts.find("a-S0--", uts.state(0).gvs);
    ASSERT_TRUE(a);
    EXPECT_EQ(uts.successors(*a).size(), 2u);
}

TEST(ReachableStats, DeclaredIsNamesTimesGrid) {
    auto uts = unify(load({"/atm/atm_sd.ubd", "/atm/atm_smd.ubd", "/atm/atm_ad.ubd"}));
    auto st = reachable_stats(uts);
    EXPECT_EQ(st.reachable, uts.size());
    EXPECT_EQ(st.declared % 27, 0u);
    EXPECT_EQ(st, (ReachableStats{648, 34}));
}
