#include "uml2ts/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "uml2ts/checker.hpp"
#include "uml2ts/diagram_io.hpp"
#include "uml2ts/smv_emit.hpp"
#include "uml2ts/unifier.hpp"

namespace uml2ts::cli {

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

Formula pattern_line(std::string_view rest, std::size_t line) {
    auto fail = [&](const std::string& msg) -> PropsError {
        return PropsError("line " + std::to_string(line) + ": " + msg);
    };
    std::istringstream words{std::string(rest)};
    std::string kind_text, scope_text;
    words >> kind_text >> scope_text;
    auto kind = parse_pattern_kind(kind_text);
    auto scope = parse_pattern_scope(scope_text);
    if (!kind) throw fail("unknown pattern '" + kind_text + "'");
    if (!scope) throw fail("unknown scope '" + scope_text + "'");
    std::string tail;
    std::getline(words, tail, '\0');
    PatternSpec spec{*kind, *scope, {}, {}, {}, {}};
    std::size_t pos = 0;
    while (pos < tail.size()) {
        std::size_t end = tail.find(';', pos);
        if (end == std::string::npos) end = tail.size();
        std::string item = trim(std::string_view(tail).substr(pos, end - pos));
        pos = end + 1;
        if (item.empty()) continue;
        auto colon = item.find(':');
        if (colon == std::string::npos) throw fail("expected '<anchor>: <formula>'");
        std::string name = trim(item.substr(0, colon));
        Formula f;
        try {
            f = parse_ctl(item.substr(colon + 1));
        } catch (const CtlSyntaxError& e) {
            throw fail(e.what());
        }
        if (name == "p") spec.p = f;
        else if (name == "q") spec.q = f;
        else if (name == "r") spec.r = f;
        else if (name == "s") spec.s = f;
        else throw fail("unknown anchor '" + name + "'");
    }
    try {
        return instantiate_pattern(spec);
    } catch (const PatternError& e) {
        throw fail(e.what());
    }
}

struct Scenario {
    DiagramBundle bundle;
    UnifiedTS uts;
};

Scenario load(const std::vector<std::string>& files) {
    std::vector<std::filesystem::path> paths(files.begin(), files.end());
    Scenario s;
    s.bundle = load_bundle(paths);
    auto report = validate(s.bundle);
    if (!report.empty()) {
        std::string msg = "invalid bundle:";
        for (const auto& v : report) msg += "\n  " + v.str();
        throw BundleError(msg);
    }
    s.uts = unify(s.bundle);
    return s;
}

std::vector<Formula> load_props(const std::string& file, const std::vector<std::string>& inline_formulas) {
    std::vector<Formula> props;
    if (!file.empty()) {
        try {
            props = parse_props(read_text_file(file));
        } catch (const PropsError& e) {
            throw PropsError(file + ": " + e.what());
        }
    }
    for (const auto& text : inline_formulas) {
        try {
            props.push_back(parse_ctl(text));
        } catch (const CtlSyntaxError& e) {
            throw PropsError("formula '" + text + "': " + e.what());
        }
    }
    return props;
}

void write_or_print(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

nlohmann::json trace_json(const UnifiedTS& uts, const Trace& t) {
    nlohmann::json states = nlohmann::json::array();
    for (auto s : t.prefix) {
        nlohmann::json gvs = nlohmann::json::object();
        for (std::size_t i = 0; i < uts.guards().size(); ++i) {
            gvs[uts.guards()[i]] = std::string(to_string(uts.state(s).gvs.at(i)));
        }
        states.push_back({{"state", uts.names()[s]}, {"gvs", gvs}});
    }
    nlohmann::json j = {{"states", states}};
    j["loop_start"] = t.loop_start ? nlohmann::json(*t.loop_start) : nlohmann::json(nullptr);
    return j;
}

// NuSMV prints one `-- specification <f>  is true|false` line per spec.
std::vector<bool> run_nusmv(const std::string& binary, const std::string& smv_text) {
    auto dir = std::filesystem::temp_directory_path();
    auto path = dir / ("uml2ts_" + std::to_string(std::hash<std::string>{}(smv_text)) + ".smv");
    {
        std::ofstream f(path);
        f << smv_text;
    }
    std::string cmd = "\"" + binary + "\" \"" + path.string() + "\" 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) throw std::runtime_error("cannot run " + binary);
    std::string output;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) output.append(buf, n);
    int status = pclose(pipe);
    std::filesystem::remove(path);
    std::vector<bool> verdicts;
    std::istringstream lines(output);
    for (std::string line; std::getline(lines, line);) {
        if (line.rfind("-- specification", 0) != 0) continue;
        if (line.size() >= 7 && line.compare(line.size() - 7, 7, "is true") == 0) verdicts.push_back(true);
        else if (line.size() >= 8 && line.compare(line.size() - 8, 8, "is false") == 0) verdicts.push_back(false);
    }
    if (status != 0 && verdicts.empty()) throw std::runtime_error("NuSMV failed:\n" + output);
    return verdicts;
}

}  // namespace

std::vector<Formula> parse_props(std::string_view text) {
    std::vector<Formula> out;
    std::size_t line = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string content = trim(text.substr(pos, end - pos));
        pos = end + 1;
        ++line;
        if (content.empty() || content[0] == '#') continue;
        if (content.rfind("pattern ", 0) == 0) {
            out.push_back(pattern_line(std::string_view(content).substr(8), line));
            continue;
        }
        try {
            out.push_back(parse_ctl(content));
        } catch (const CtlSyntaxError& e) {
            throw PropsError("line " + std::to_string(line) + ": " + e.what());
        }
    }
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"UML behavioral diagrams to transition systems and SMV", "uml2ts"};
    app.require_subcommand(1);

    std::vector<std::string> files;
    std::string out_path;
    std::string props_path;
    std::vector<std::string> formulas;
    bool stats_only = false;
    bool json = false;
    bool paper_style = false;
    bool cross_validate = false;

    auto* build = app.add_subcommand("build", "build the unified transition system");
    build->add_option("files", files, "diagram files (.ubd)")->required();
    build->add_option("-o,--out", out_path, "write the dump here");
    build->add_flag("--stats-only", stats_only, "print only the state counts");
    build->add_flag("--json", json, "JSON report");

    auto* emit = app.add_subcommand("emit", "write an SMV model");
    emit->add_option("files", files, "diagram files (.ubd)")->required();
    emit->add_option("--props", props_path, "property file");
    emit->add_option("-f,--formula", formulas, "CTL formula (repeatable)")->allow_extra_args(false);
    emit->add_option("-o,--out", out_path, "output .smv file");
    emit->add_flag("--paper-style", paper_style, "keep '-' in state identifiers");

    auto* check_cmd = app.add_subcommand("check", "model check properties");
    check_cmd->add_option("files", files, "diagram files (.ubd)")->required();
    check_cmd->add_option("--props", props_path, "property file");
    check_cmd->add_option("-f,--formula", formulas, "CTL formula (repeatable)")->allow_extra_args(false);
    check_cmd->add_flag("--json", json, "JSON report");
    check_cmd->add_flag("--cross-validate", cross_validate, "compare verdicts with NuSMV (UML2TS_NUSMV)");

    std::string kind_text, scope_text = "global";
    std::string p_text, q_text, r_text, s_text;
    auto* pattern = app.add_subcommand("pattern", "instantiate a specification pattern");
    pattern->add_option("kind", kind_text, "absence|existence|universality|precedence|response")->required();
    pattern->add_option("--scope", scope_text, "global|before-r|after-q|between-q-r|after-q-until-r");
    pattern->add_option("--p", p_text, "P proposition");
    pattern->add_option("--q", q_text, "Q proposition");
    pattern->add_option("--r", r_text, "R proposition");
    pattern->add_option("--s", s_text, "S proposition");

    std::vector<std::string> argv_storage{"uml2ts"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_storage) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kError;
    }

    try {
        if (pattern->parsed()) {
            auto kind = parse_pattern_kind(kind_text);
            auto scope = parse_pattern_scope(scope_text);
            if (!kind || !scope) {
                err << "error: unknown pattern cell '" << kind_text << "/" << scope_text << "'; supported:";
                for (const auto& c : supported_cells()) err << " " << c;
                err << "\n";
                return kError;
            }
            PatternSpec spec{*kind, *scope, {}, {}, {}, {}};
            if (!p_text.empty()) spec.p = parse_ctl(p_text);
            if (!q_text.empty()) spec.q = parse_ctl(q_text);
            if (!r_text.empty()) spec.r = parse_ctl(r_text);
            if (!s_text.empty()) spec.s = parse_ctl(s_text);
            out << render_ctl(instantiate_pattern(spec)) << "\n";
            return kOk;
        }

        Scenario sc = load(files);
        auto stats = reachable_stats(sc.uts);

        if (build->parsed()) {
            if (json) {
                nlohmann::json j = {{"declared", stats.declared},
                                    {"reachable", stats.reachable},
                                    {"transitions", sc.uts.transition_count()},
                                    {"guards", sc.uts.guards()}};
                out << j.dump(2) << "\n";
                return kOk;
            }
            if (!stats_only) write_or_print(out_path, dump(sc.uts), out);
            out << "declared=" << stats.declared << " reachable=" << stats.reachable << "\n";
            return kOk;
        }

        auto props = load_props(props_path, formulas);

        if (emit->parsed()) {
            SmvOptions opts;
            opts.paper_style = paper_style;
            write_or_print(out_path, emit_smv(sc.uts, props, opts), out);
            return kOk;
        }

        // check
        std::vector<Verdict> verdicts;
        for (const auto& f : props) verdicts.push_back(check(sc.uts, f));
        bool all = std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.satisfied; });

        std::optional<bool> agree;
        if (cross_validate) {
            const char* bin = std::getenv("UML2TS_NUSMV");
            if (!bin || !*bin) {
                err << "error: --cross-validate needs UML2TS_NUSMV to name a NuSMV binary\n";
                return kError;
            }
            auto nusmv = run_nusmv(bin, emit_smv(sc.uts, props));
            agree = nusmv.size() == verdicts.size();
            for (std::size_t i = 0; *agree && i < nusmv.size(); ++i) agree = nusmv[i] == verdicts[i].satisfied;
        }

        if (json) {
            nlohmann::json list = nlohmann::json::array();
            for (const auto& v : verdicts) {
                nlohmann::json j = {{"formula", render_ctl(v.formula)}, {"satisfied", v.satisfied}};
                if (v.trace) j["trace"] = trace_json(sc.uts, *v.trace);
                list.push_back(j);
            }
            nlohmann::json report = {{"declared", stats.declared}, {"reachable", stats.reachable}, {"properties", list}};
            if (agree) report["nusmv_agrees"] = *agree;
            out << report.dump(2) << "\n";
        } else {
            for (const auto& v : verdicts) {
                out << (v.satisfied ? "SATISFIED " : "VIOLATED  ") << render_ctl(v.formula) << "\n";
                if (v.trace) {
                    out << "counterexample:\n" << format_trace(sc.uts, *v.trace);
                } else if (!v.satisfied) {
                    out << "(no counterexample for this formula shape)\n";
                }
            }
            if (agree) out << "nusmv: " << (*agree ? "verdicts agree" : "verdicts DIFFER") << "\n";
        }
        if (agree && !*agree) return kError;
        return all ? kOk : kViolated;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kError;
    }
}

}  // namespace uml2ts::cli
