#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "generators.hpp"
#include "uml2ts/diagram_io.hpp"

using namespace uml2ts;

namespace {

const std::string kDir = UML2TS_FIXTURES;

const char* kSd =
    "sequence Shop\n"
    "lifeline Buyer\n"
    "lifeline Till\n"
    "\n"
    "msg Pay: Buyer -> Till\n"
    "alt [Cash]\n"
    "  msg Change: Till -> Buyer\n"
    "else [!Cash]\n"
    "  msg Receipt: Till -> Buyer\n"
    "end\n";

}  // namespace

TEST(ParseDiagram, Sequence) {
    auto d = parse_diagram(kSd);
    ASSERT_EQ(kind_of(d), DiagramKind::Sequence);
    const auto& sd = std::get<SequenceDiagram>(d);
    EXPECT_EQ(sd.name, "Shop");
    EXPECT_EQ(sd.lifelines, (std::vector<std::string>{"Buyer", "Till"}));
    ASSERT_EQ(sd.body.size(), 2u);
    const auto& alt = std::get<SdAlt>(sd.body[1].node);
    ASSERT_EQ(alt.branches.size(), 2u);
    EXPECT_EQ(alt.branches[1].guards, (GuardSet{{"Cash", false}}));
}

TEST(ParseDiagram, CrlfAccepted) {
    std::string crlf;
    for (const char* c = kSd; *c; ++c) {
        if (*c == '\n') crlf += '\r';
        crlf += *c;
    }
    EXPECT_EQ(std::get<SequenceDiagram>(parse_diagram(crlf)), std::get<SequenceDiagram>(parse_diagram(kSd)));
}

TEST(ParseDiagram, ErrorsCarryLocation) {
    try {
        parse_diagram("sequence S\nlifeline A\nmsg x A -> A\n", "bad.ubd");
        FAIL() << "no error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.location().file, "bad.ubd");
        EXPECT_EQ(e.location().line, 3);
        EXPECT_GT(e.location().column, 1);
        EXPECT_EQ(std::string(e.what()).rfind("bad.ubd:3:", 0), 0u);
    }
    EXPECT_THROW(parse_diagram("diagram X\n"), ParseError);
    EXPECT_THROW(parse_diagram("sequence S\nlifeline A\nopt [g]\n  msg a: A -> A\n"), ParseError);
    EXPECT_THROW(parse_diagram("statemachine M\nstate A-B\n"), ParseError);
}

TEST(Serialize, FixturesAreCanonicalFixpoints) {
    for (const char* f : {"/atm/atm_sd.ubd", "/atm/atm_smd.ubd", "/atm/atm_ad.ubd", "/door/door_sd.ubd",
                          "/door/door_smd.ubd", "/vending/vending_sd.ubd", "/vending/vending_ad.ubd"}) {
        auto d = parse_diagram(read_text_file(kDir + f), f);
        std::string once = serialize_diagram(d);
        auto again = parse_diagram(once);
        EXPECT_EQ(again, d) << f;
        EXPECT_EQ(serialize_diagram(again), once) << f;
    }
}

TEST(Serialize, RandomRoundTrips) {
    testgen::Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        auto b = testgen::random_bundle(rng, {});
        EXPECT_EQ(std::get<SequenceDiagram>(parse_diagram(serialize_diagram(b.sd))), b.sd);
        if (b.smd) {
            EXPECT_EQ(std::get<StateMachineDiagram>(parse_diagram(serialize_diagram(*b.smd))), *b.smd);
        }
        if (b.ad) {
            EXPECT_EQ(std::get<ActivityDiagram>(parse_diagram(serialize_diagram(*b.ad))), *b.ad);
        }
    }
}

TEST(LoadBundle, ClassifiesByHeader) {
    auto b = load_bundle({kDir + "/vending/vending_ad.ubd", kDir + "/vending/vending_sd.ubd"});
    EXPECT_EQ(b.sd.name, "Purchase");
    EXPECT_FALSE(b.smd);
    ASSERT_TRUE(b.ad);
}

TEST(LoadBundle, Errors) {
    EXPECT_THROW(load_bundle({kDir + "/atm/atm_smd.ubd", kDir + "/atm/atm_ad.ubd"}), BundleError);
    EXPECT_THROW(load_bundle({kDir + "/atm/atm_sd.ubd"}), BundleError);
    EXPECT_THROW(load_bundle({kDir + "/atm/atm_sd.ubd", kDir + "/atm/atm_sd.ubd"}), BundleError);
    EXPECT_THROW(load_bundle({kDir + "/atm/atm_sd.ubd", kDir + "/atm/missing.ubd"}), BundleError);
}
