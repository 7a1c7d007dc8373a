#include <gtest/gtest.h>

#include <algorithm>

#include "generators.hpp"
#include "uml2ts/diagram_io.hpp"
#include "uml2ts/diagram_model.hpp"

using namespace uml2ts;

namespace {

bool mentions(const ValidationReport& r, const std::string& text) {
    return std::any_of(r.begin(), r.end(), [&](const Violation& v) { return v.message.find(text) != std::string::npos; });
}

SequenceDiagram tiny_sd() {
    SequenceDiagram sd;
    sd.name = "S";
    sd.lifelines = {"A", "B"};
    sd.body.push_back(SdMessage{"hello", "A", "B"});
    return sd;
}

ActivityDiagram tiny_ad() {
    ActivityDiagram ad;
    ad.name = "Act";
    ad.nodes = {{"initial", AdNodeKind::Initial}, {"work", AdNodeKind::Action}, {"done", AdNodeKind::Final}};
    ad.edges = {{"initial", "work", {}}, {"work", "done", {}}};
    return ad;
}

DiagramBundle atm() {
    std::string dir = UML2TS_FIXTURES "/atm/";
    return load_bundle({dir + "atm_sd.ubd", dir + "atm_smd.ubd", dir + "atm_ad.ubd"});
}

}  // namespace

TEST(Validate, SdAloneNeedsSecondDiagram) {
    DiagramBundle b{tiny_sd(), std::nullopt, std::nullopt};
    EXPECT_TRUE(mentions(validate(b), "bundle requires a second diagram"));
}

TEST(Validate, AtmFixtureIsValid) {
    auto b = atm();
    auto r = validate(b);
    for (const auto& v : r) ADD_FAILURE() << v.str();
}

TEST(Validate, AltBranchWithoutGuard) {
    auto sd = tiny_sd();
    sd.body.push_back(SdAlt{{SdBranch{{{"g", true}}, {SdMessage{"x", "A", "B"}}}, SdBranch{{}, {SdMessage{"y", "B", "A"}}}}});
    auto r = validate(sd);
    EXPECT_TRUE(mentions(r, "alt branch without guard"));
    // the report names the offending element
    auto it = std::find_if(r.begin(), r.end(), [](const Violation& v) { return v.message == "alt branch without guard"; });
    EXPECT_NE(it->path.find("branch 2"), std::string::npos);
}

TEST(Validate, SdStructuralRules) {
    auto sd = tiny_sd();
    sd.body.push_back(SdMessage{"ping", "A", "C"});
    sd.body.push_back(SdOpt{{}, {SdMessage{"o", "A", "B"}}});
    sd.body.push_back(SdLoop{{{"g", true}}, {}});
    sd.body.push_back(SdPar{{{SdMessage{"p", "A", "B"}}}});
    sd.body.push_back(SdMessage{"bad-name", "A", "B"});
    auto r = validate(sd);
    EXPECT_TRUE(mentions(r, "undeclared lifeline 'C'"));
    EXPECT_TRUE(mentions(r, "opt without guard"));
    EXPECT_TRUE(mentions(r, "empty body"));
    EXPECT_TRUE(mentions(r, "par needs at least two operands"));
    EXPECT_TRUE(mentions(r, "reserved character '-'"));
}

TEST(Validate, GuardNamesMayNotBeReserved) {
    EXPECT_TRUE(is_reserved_guard_name("State"));
    EXPECT_TRUE(is_reserved_guard_name("and"));
    EXPECT_FALSE(is_reserved_guard_name("CardOk"));
    auto sd = tiny_sd();
    sd.body.push_back(SdOpt{{{"State", true}}, {SdMessage{"o", "A", "B"}}});
    EXPECT_TRUE(mentions(validate(sd), "reserved guard name"));
}

TEST(Validate, SmdRules) {
    StateMachineDiagram smd;
    smd.name = "M";
    smd.states = {"A", "B"};
    smd.initial = "Z";
    smd.transitions = {{"A", "C", std::nullopt, {}}, {"A", "B", std::nullopt, {}}};
    auto r = validate(smd);
    EXPECT_TRUE(mentions(r, "initial state 'Z' is not declared"));
    EXPECT_TRUE(mentions(r, "undeclared state 'C'"));
    EXPECT_TRUE(mentions(r, "multiple outgoing transitions require guards"));
}

TEST(Validate, RegionsMustBeDisjointAndClosed) {
    StateMachineDiagram smd;
    smd.name = "M";
    smd.states = {"Top"};
    smd.initial = "Top";
    smd.regions = {SmRegion{"L", {"P"}, "P", {}}, SmRegion{"R", {"P", "Q"}, "Q", {}}};
    EXPECT_TRUE(mentions(validate(smd), "declared more than once"));
    smd.regions[1] = SmRegion{"R", {"Q"}, "Q", {}};
    smd.regions[0].transitions.push_back({"P", "Top", std::nullopt, {}});
    EXPECT_TRUE(mentions(validate(smd), "leaves the region"));
}

TEST(Validate, AdRules) {
    auto ad = tiny_ad();
    ad.nodes.push_back({"d", AdNodeKind::Decision});
    ad.edges[1] = {"work", "d", {}};
    ad.edges.push_back({"d", "done", {{"g", true}}});
    ad.edges.push_back({"d", "work", {}});
    EXPECT_TRUE(mentions(validate(ad), "without guard"));

    auto two = tiny_ad();
    two.nodes.push_back({"initial2", AdNodeKind::Initial});
    EXPECT_TRUE(mentions(validate(two), "exactly one initial node"));
}

TEST(Validate, ForkNeedsMatchingJoin) {
    ActivityDiagram ad;
    ad.name = "Act";
    ad.nodes = {{"initial", AdNodeKind::Initial}, {"f", AdNodeKind::Fork}, {"a", AdNodeKind::Action},
                {"b", AdNodeKind::Action},         {"j", AdNodeKind::Join}, {"done", AdNodeKind::Final}};
    ad.edges = {{"initial", "f", {}}, {"f", "a", {}}, {"f", "b", {}}, {"a", "j", {}}, {"b", "j", {}}, {"j", "done", {}}};
    EXPECT_TRUE(validate(ad).empty());
    EXPECT_EQ(matching_join(ad, "f"), "j");
    ad.edges[4] = {"b", "done", {}};
    EXPECT_TRUE(mentions(validate(ad), "fork is not matched"));
}

TEST(CollectGuards, AtmOrder) {
    EXPECT_EQ(collect_guards(atm()), (GuardList{"CardOk", "PinOk", "BalOk"}));
}

TEST(CollectGuards, GuardlessIsEmpty) {
    DiagramBundle b{tiny_sd(), std::nullopt, tiny_ad()};
    EXPECT_TRUE(collect_guards(b).empty());
}

TEST(CollectGuards, SdGuardsFirstAndDeduplicated) {
    auto sd = tiny_sd();
    sd.body.push_back(SdAlt{{SdBranch{{{"g1", true}}, {SdMessage{"x", "A", "B"}}},
                             SdBranch{{{"g1", false}, {"g2", true}}, {SdMessage{"y", "B", "A"}}},
                             SdBranch{{{"g1", false}, {"g2", false}}, {SdMessage{"z", "B", "A"}}}}});
    auto ad = tiny_ad();
    ad.nodes.push_back({"d", AdNodeKind::Decision});
    ad.edges[1] = {"work", "d", {}};
    ad.edges.push_back({"d", "done", {{"g0", true}}});
    ad.edges.push_back({"d", "done", {{"g2", false}}});
    DiagramBundle b{sd, std::nullopt, ad};
    auto once = collect_guards(b);
    EXPECT_EQ(once, (GuardList{"g1", "g2", "g0"}));
    EXPECT_EQ(collect_guards(b), once);
}

TEST(CollectGuards, RandomBundlesHaveNoDuplicates) {
    testgen::Rng rng(7);
    for (int i = 0; i < 100; ++i) {
        auto b = testgen::random_bundle(rng, {});
        auto g = collect_guards(b);
        auto sorted = g;
        std::sort(sorted.begin(), sorted.end());
        EXPECT_EQ(std::adjacent_find(sorted.begin(), sorted.end()), sorted.end());
    }
}

TEST(Identifier, Rules) {
    EXPECT_TRUE(is_identifier("Card_Ok2"));
    EXPECT_FALSE(is_identifier("2x"));
    EXPECT_FALSE(is_identifier("a-b"));
    EXPECT_FALSE(is_identifier(""));
}
