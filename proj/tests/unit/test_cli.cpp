#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <json.hpp>
#include <sstream>

#include "uml2ts/cli.hpp"
#include "uml2ts/diagram_io.hpp"
#include "uml2ts/smv_subset.hpp"

using namespace uml2ts;

namespace {

const std::string kDir = UML2TS_FIXTURES;

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> atm_files() {
    return {kDir + "/atm/atm_sd.ubd", kDir + "/atm/atm_smd.ubd", kDir + "/atm/atm_ad.ubd"};
}

std::vector<std::string> with(std::vector<std::string> head, const std::vector<std::string>& tail) {
    head.insert(head.end(), tail.begin(), tail.end());
    return head;
}

}  // namespace

TEST(ParseProps, FormulasPatternsAndComments) {
    auto props = cli::parse_props(
        "# comment\n"
        "\n"
        "EF (State = A)\n"
        "pattern absence after-q p: State = X; q: g = false\n");
    ASSERT_EQ(props.size(), 2u);
    EXPECT_EQ(props[1], parse_ctl("AG (g = false -> AG (!(State = X)))"));
}

TEST(ParseProps, ErrorsNameTheLine) {
    try {
        cli::parse_props("EF (State = A)\n\nAG (x = \n");
        FAIL();
    } catch (const cli::PropsError& e) {
        EXPECT_EQ(std::string(e.what()).rfind("line 3:", 0), 0u) << e.what();
    }
    EXPECT_THROW(cli::parse_props("pattern sometimes global p: a = b\n"), cli::PropsError);
    EXPECT_THROW(cli::parse_props("pattern absence global q: a = b\n"), cli::PropsError);
}

TEST(Cli, BuildPrintsDumpAndStats) {
    auto r = run(with({"build"}, atm_files()));
    EXPECT_EQ(r.code, cli::kOk);
    EXPECT_NE(r.out.find("# guards: CardOk PinOk BalOk"), std::string::npos);
    EXPECT_NE(r.out.find("declared=648 reachable=34"), std::string::npos);
    auto s = run(with({"build", "--stats-only"}, atm_files()));
    EXPECT_EQ(s.out, "declared=648 reachable=34\n");
}

TEST(Cli, BuildJson) {
    auto r = run(with({"build", "--json"}, atm_files()));
    ASSERT_EQ(r.code, cli::kOk);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["declared"], 648);
    EXPECT_EQ(j["reachable"], 34);
}

TEST(Cli, CheckExitCodes) {
    auto ok = run(with({"check", "--props", kDir + "/vending/vending.props"},
                       {kDir + "/vending/vending_sd.ubd", kDir + "/vending/vending_ad.ubd"}));
    EXPECT_EQ(ok.code, cli::kOk) << ok.err;
    EXPECT_EQ(ok.out.rfind("SATISFIED ", 0), 0u);

    auto bad = run(with({"check", "--props", kDir + "/atm/requirements.props"}, atm_files()));
    EXPECT_EQ(bad.code, cli::kViolated);
    EXPECT_NE(bad.out.find("VIOLATED  A [ "), std::string::npos);
    EXPECT_NE(bad.out.find("counterexample:"), std::string::npos);
    EXPECT_NE(bad.out.find("-- loop starts here --"), std::string::npos);
}

TEST(Cli, CheckInlineFormula) {
    auto r = run(with({"check", "-f", "EF (State = End-Idle-End)"}, atm_files()));
    EXPECT_EQ(r.code, cli::kOk) << r.out << r.err;
}

TEST(Cli, Errors) {
    EXPECT_EQ(run({"build", kDir + "/atm/atm_sd.ubd"}).code, cli::kError);
    EXPECT_EQ(run(with({"check", "-f", "AG ("}, atm_files())).code, cli::kError);
    EXPECT_EQ(run(with({"check", "-f", "EF (State = Nowhere)"}, atm_files())).code, cli::kError);
    EXPECT_EQ(run({"frobnicate"}).code, cli::kError);
    auto r = run({"pattern", "absence", "--scope", "between-q-r", "--p", "a = b"});
    EXPECT_EQ(r.code, cli::kError);
}

TEST(Cli, CrossValidateNeedsBinary) {
    if (std::getenv("UML2TS_NUSMV")) GTEST_SKIP() << "UML2TS_NUSMV is set";
    auto r = run(with({"check", "--cross-validate", "-f", "EF (State = End-Idle-End)"}, atm_files()));
    EXPECT_EQ(r.code, cli::kError);
    EXPECT_NE(r.err.find("UML2TS_NUSMV"), std::string::npos);
}

TEST(Cli, EmitWritesConformingModel) {
    auto path = std::filesystem::temp_directory_path() / "uml2ts_cli_emit.smv";
    auto r = run(with({"emit", "--props", kDir + "/atm/requirements.props", "-o", path.string()}, atm_files()));
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    auto text = read_text_file(path);
    EXPECT_FALSE(smv_grammar_error(text));
    EXPECT_NE(text.find("CTLSPEC"), std::string::npos);
    std::filesystem::remove(path);

    auto paper = run(with({"emit", "--paper-style"}, atm_files()));
    EXPECT_NE(paper.out.find("State=Start-Start-Start & CardOk=dc & PinOk=dc & BalOk=dc : InsertCard-Idle-InsertCard;"),
              std::string::npos);
}

TEST(Cli, PatternCommand) {
    auto r = run({"pattern", "existence", "--scope", "after-q", "--p", "State = P", "--q", "State = Q"});
    EXPECT_EQ(r.code, cli::kOk) << r.err;
    EXPECT_EQ(r.out, "A [ !(State = Q) W (State = Q & AF (State = P)) ]\n");
}
