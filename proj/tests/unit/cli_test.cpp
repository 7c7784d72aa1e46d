#include "support.hpp"

#include "cli.hpp"
#include "olgpp/schema.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace olgpp;
using namespace olgpp::test;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult invoke(std::vector<std::string> args, const std::string& input = "") {
    std::istringstream in(input);
    std::ostringstream out, err;
    int code = olgpp::cli::run(args, in, out, err);
    return {code, out.str(), err.str()};
}

std::string fx(const char* name) {
    return fixture_path(name).string();
}

class TempFile {
public:
    TempFile(const std::string& name, const std::string& content)
        : path_(std::filesystem::temp_directory_path() / ("olgpp_cli_" + std::to_string(::getpid()) + "_" + name)) {
        std::ofstream(path_) << content;
    }
    ~TempFile() { std::filesystem::remove(path_); }
    std::string str() const { return path_.string(); }

private:
    std::filesystem::path path_;
};

const char* kCyclic =
    "document \"cyclic\" {version: \"1\"}\n"
    "node a obligation_trigger\nnode b obligation_trigger\n"
    "edge x1 EXCEPTS a -> b\nedge x2 EXCEPTS b -> a\n";

} // namespace

TEST(Cli, ValidateClean) {
    RunResult o = invoke({"validate", fx("carlsbad.olg")});
    EXPECT_EQ(o.code, olgpp::cli::ok);
    EXPECT_EQ(o.out, "0 violations\n");
}

TEST(Cli, ValidateReportsViolations) {
    RunResult o = invoke({"validate", fx("q1.olg")});
    EXPECT_EQ(o.code, olgpp::cli::violations);
    EXPECT_NE(o.out.find("BadEndpoint"), std::string::npos);
    EXPECT_NE(o.out.find("7 violations\n"), std::string::npos);
    RunResult j = invoke({"validate", fx("q1.olg"), "--format", "json"});
    EXPECT_EQ(j.code, olgpp::cli::violations);
    EXPECT_EQ(nlohmann::json::parse(j.out).size(), 7u);
}

TEST(Cli, ValidateSyntaxErrorIsUsage) {
    TempFile bad("bad.olg", "document \"x\" {version: \"1\"}\nnode n1 party {label: }\n");
    RunResult o = invoke({"validate", bad.str()});
    EXPECT_EQ(o.code, olgpp::cli::usage);
    EXPECT_NE(o.err.find("SyntaxError"), std::string::npos);
    EXPECT_NE(o.err.find("2:"), std::string::npos);
}

TEST(Cli, MissingFileIsUsage) {
    EXPECT_EQ(invoke({"validate", "/nonexistent/doc.olg"}).code, olgpp::cli::usage);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(invoke({}).code, olgpp::cli::usage);
    EXPECT_EQ(invoke({"frobnicate"}).code, olgpp::cli::usage);
    EXPECT_EQ(invoke({"ask", fx("heights.olg")}).code, olgpp::cli::usage);
    EXPECT_EQ(invoke({"validate", fx("carlsbad.olg"), "--format", "yaml"}).code, olgpp::cli::usage);
    EXPECT_EQ(invoke({"--help"}).code, olgpp::cli::ok);
}

TEST(Cli, QueryFromFileAndStdin) {
    RunResult file = invoke({"query", fx("q1.olg"), "--query-file", fx("q1.cq")});
    EXPECT_EQ(file.code, olgpp::cli::ok);
    EXPECT_NE(file.out.find("Civic Center Plaza"), std::string::npos);
    EXPECT_NE(file.out.find("(1 row)"), std::string::npos);
    EXPECT_NE(file.err.find("warning: document has 7 schema violations"), std::string::npos);

    RunResult piped = invoke({"query", fx("q1.olg"), "-"}, fixture_text("q1.cq"));
    EXPECT_EQ(piped.out, file.out);
    RunResult positional = invoke({"query", fx("q1.olg"), fx("q1.cq")});
    EXPECT_EQ(positional.out, file.out);

    RunResult csv = invoke({"query", fx("q2.olg"), fx("q2.cq"), "--format", "csv"});
    EXPECT_EQ(csv.code, olgpp::cli::ok);
    EXPECT_EQ(csv.out.rfind("Jurisdiction,RegulatoryCode,", 0), 0u);
    EXPECT_TRUE(csv.err.empty());
}

TEST(Cli, QueryErrors) {
    TempFile unbound("unbound.cq", "MATCH (a) RETURN b.x");
    EXPECT_EQ(invoke({"query", fx("carlsbad.olg"), unbound.str()}).code, olgpp::cli::usage);
    TempFile hybrid("hybrid.cq", "MATCH (s) MATCH (prereq:Edge:prerequisite)-[:x]->(s) RETURN s");
    RunResult o = invoke({"query", fx("carlsbad.olg"), hybrid.str()});
    EXPECT_EQ(o.code, olgpp::cli::usage);
    EXPECT_NE(o.err.find("relationship cannot be matched as a node"), std::string::npos);
    RunResult limit = invoke({"query", fx("q1.olg"), fx("q1.cq"), "--max-bindings", "5"});
    EXPECT_EQ(limit.code, olgpp::cli::resolution);
    EXPECT_NE(limit.err.find("ResourceLimit"), std::string::npos);
}

TEST(Cli, AskTheatre) {
    RunResult o = invoke({"ask", fx("heights.olg"), "--context", fx("theatre.ctx")});
    EXPECT_EQ(o.code, olgpp::cli::ok);
    EXPECT_EQ(o.out, "o3: at most 8 stories [obligation]\n");
}

TEST(Cli, AskIsByteIdentical) {
    for (const char* ctx : {"theatre.ctx", "business.ctx", "elsewhere.ctx"}) {
        RunResult a = invoke({"ask", fx("heights.olg"), "-c", fx(ctx)});
        RunResult b = invoke({"ask", fx("heights.olg"), "-c", fx(ctx)});
        EXPECT_EQ(a.out, b.out);
        RunResult ja = invoke({"ask", fx("heights.olg"), "-c", fx(ctx), "--format", "json"});
        RunResult jb = invoke({"ask", fx("heights.olg"), "-c", fx(ctx), "--format", "json"});
        EXPECT_EQ(ja.out, jb.out);
    }
}

TEST(Cli, AskNoRulesAndConflicts) {
    TempFile nobody("nobody.ctx", "party \"nobody\"\n");
    EXPECT_EQ(invoke({"ask", fx("heights.olg"), "-c", nobody.str()}).out, "no applicable rules\n");

    TempFile doc("conflict.olg",
                 "document \"c\" {version: \"1\"}\nnode w what\nnode ban obligation_trigger {label: \"no parking\"}\n"
                 "node ok obligation_trigger {label: \"parking allowed\"}\nnode p party\n"
                 "edge d1 deontic_modality ban -> p {type: \"prohibition\"}\nedge d2 deontic_modality ok -> p {type: \"permission\"}\n"
                 "edge w1 whatRel ban -> w\nedge w2 whatRel ok -> w\n");
    TempFile ctx("any.ctx", "party \"p\"\n");
    RunResult o = invoke({"ask", doc.str(), "-c", ctx.str()});
    EXPECT_EQ(o.code, olgpp::cli::ok);
    EXPECT_EQ(o.out, "ban: no parking [prohibition]\nok: parking allowed [permission]\nconflict: ban vs ok\n");
}

TEST(Cli, ExplainTrace) {
    RunResult o = invoke({"explain", fx("heights.olg"), "--context", fx("theatre.ctx")});
    EXPECT_EQ(o.code, olgpp::cli::ok);
    EXPECT_NE(o.out.find("DEFEAT o1 by o3 excepted via x2,x1\n"), std::string::npos);
    EXPECT_NE(o.out.find("DEFEAT o2 by o3 excepted via x2\n"), std::string::npos);
    EXPECT_NE(o.out.find("WINNER o3 [obligation]\n"), std::string::npos);
    EXPECT_EQ(o.out.rfind("EVAL ", 0), 0u);
}

TEST(Cli, CycleIsResolutionError) {
    TempFile doc("cyclic.olg", kCyclic);
    TempFile ctx("empty.ctx", "fact anything true\n");
    RunResult o = invoke({"ask", doc.str(), "-c", ctx.str()});
    EXPECT_EQ(o.code, olgpp::cli::resolution);
    EXPECT_NE(o.err.find("DefeasibilityCycle"), std::string::npos);
    EXPECT_EQ(invoke({"explain", doc.str(), "-c", ctx.str()}).code, olgpp::cli::resolution);
}

TEST(Cli, ContextSyntaxErrorIsUsage) {
    TempFile ctx("bad.ctx", "position nowhere\n");
    EXPECT_EQ(invoke({"ask", fx("heights.olg"), "-c", ctx.str()}).code, olgpp::cli::usage);
}

TEST(Cli, SchemaOverride) {
    TempFile schema("tiny.schema", std::string(TypeSchema::builtin_text()));
    EXPECT_EQ(invoke({"validate", fx("carlsbad.olg"), "--schema", schema.str()}).code, olgpp::cli::ok);
    TempFile broken("broken.schema", "node {\n");
    EXPECT_EQ(invoke({"validate", fx("carlsbad.olg"), "--schema", broken.str()}).code, olgpp::cli::usage);

    ::setenv("OLGPP_SCHEMA", broken.str().c_str(), 1);
    int via_env = invoke({"validate", fx("carlsbad.olg")}).code;
    int flag_wins = invoke({"validate", fx("carlsbad.olg"), "--schema", schema.str()}).code;
    ::unsetenv("OLGPP_SCHEMA");
    EXPECT_EQ(via_env, olgpp::cli::usage);
    EXPECT_EQ(flag_wins, olgpp::cli::ok);
}
