#include "cli.hpp"

#include "olgpp/defeasibility.hpp"
#include "olgpp/error.hpp"
#include "olgpp/ingest.hpp"
#include "olgpp/query.hpp"
#include "olgpp/schema.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

namespace olgpp::cli {
namespace {

struct Options {
    std::string document;
    std::string schema;
    std::string format = "text";
    std::string query_file;
    std::string query_positional;
    std::string context_file;
    std::size_t max_bindings = ExecOptions{}.max_bindings;
};

TypeSchema schema_for(const Options& o) {
    std::string path = o.schema;
    if (path.empty()) {
        if (const char* env = std::getenv("OLGPP_SCHEMA"); env && *env) path = env;
    }
    if (path.empty()) return TypeSchema::builtin();
    return TypeSchema::load(path);
}

int exit_for(const Error& e) {
    switch (e.code()) {
    case ErrorCode::DefeasibilityCycle:
    case ErrorCode::LogicCycle:
    case ErrorCode::SubclassCycle:
    case ErrorCode::ContainmentCycle:
    case ErrorCode::UnresolvableLeaf:
    case ErrorCode::MalformedGroup:
    case ErrorCode::ResourceLimit:
        return resolution;
    default:
        return usage;
    }
}

BuildResult load(const Options& o) {
    TypeSchema schema = schema_for(o);
    return build_graph(load_document(o.document), schema);
}

void warn_violations(const BuildResult& built, std::ostream& err) {
    if (!built.violations.empty()) {
        err << "warning: document has " << built.violations.size() << " schema violation"
            << (built.violations.size() == 1 ? "" : "s") << "\n";
    }
}

int cmd_validate(const Options& o, std::ostream& out) {
    BuildResult built = load(o);
    if (o.format == "json") {
        auto arr = nlohmann::json::array();
        for (const auto& v : built.violations) {
            arr.push_back({{"subject", v.subject}, {"kind", std::string(to_string(v.kind))}, {"message", v.message}});
        }
        out << arr.dump(2) << "\n";
    } else {
        for (const auto& v : built.violations) out << v.subject << ": " << to_string(v.kind) << ": " << v.message << "\n";
        out << built.violations.size() << (built.violations.size() == 1 ? " violation\n" : " violations\n");
    }
    return built.violations.empty() ? ok : violations;
}

int cmd_query(const Options& o, std::istream& in, std::ostream& out, std::ostream& err) {
    std::string source = o.query_file.empty() ? o.query_positional : o.query_file;
    std::string text;
    if (source.empty() || source == "-") {
        text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    } else {
        text = read_file(source);
    }
    QueryAST ast = parse_query(text);
    BuildResult built = load(o);
    warn_violations(built, err);
    ResultTable table = execute(ast, built.graph, ExecOptions{o.max_bindings});
    TableFormat fmt = o.format == "csv" ? TableFormat::csv : o.format == "json" ? TableFormat::json : TableFormat::text;
    out << format_table(table, fmt);
    return ok;
}

Ruling rule(const Options& o, const BuildResult& built) {
    ContextSpec spec = parse_context(read_file(o.context_file));
    return resolve(built.graph, spec.context, spec.scope);
}

int cmd_ask(const Options& o, std::ostream& out, std::ostream& err) {
    BuildResult built = load(o);
    warn_violations(built, err);
    Ruling ruling = rule(o, built);
    if (o.format == "json") {
        out << ruling_to_json(built.graph, ruling) << "\n";
        return ok;
    }
    if (ruling.winners.empty()) out << "no applicable rules\n";
    for (const auto& id : ruling.winners) {
        DeonticTrigger t = describe_trigger(built.graph, id);
        out << id << ": " << (t.label.empty() ? id : t.label) << " [" << to_string(t.modality) << "]\n";
    }
    for (const auto& [a, b] : ruling.conflicts) out << "conflict: " << a << " vs " << b << "\n";
    return ok;
}

int cmd_explain(const Options& o, std::ostream& out, std::ostream& err) {
    BuildResult built = load(o);
    warn_violations(built, err);
    Ruling ruling = rule(o, built);
    if (o.format == "json") {
        out << ruling_to_json(built.graph, ruling) << "\n";
        return ok;
    }
    for (const auto& line : ruling.explanation) out << line << "\n";
    return ok;
}

} // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rule graphs: validate documents, run pattern queries, resolve which rules apply."};
    app.name("olgpp");
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("document", o.document, "Rule document (.olg text or JSON)")->required();
        sub->add_option("--schema", o.schema, "Schema file; defaults to $OLGPP_SCHEMA, then the built-in schema");
    };

    CLI::App* validate = app.add_subcommand("validate", "Check a document against the schema");
    common(validate);
    validate->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));

    CLI::App* query = app.add_subcommand("query", "Run a pattern query and print the result table");
    common(query);
    query->add_option("query", o.query_positional, "Query file, or - for stdin");
    query->add_option("--query-file,-q", o.query_file, "Query file, or - for stdin");
    query->add_option("--format", o.format, "text, csv or json")->check(CLI::IsMember({"text", "csv", "json"}));
    query->add_option("--max-bindings", o.max_bindings, "Abort after exploring this many partial bindings")
        ->check(CLI::PositiveNumber);

    CLI::App* ask = app.add_subcommand("ask", "Print the rules that win in a context");
    common(ask);
    ask->add_option("--context,-c", o.context_file, "Context file")->required();
    ask->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));

    CLI::App* explain = app.add_subcommand("explain", "Print the full resolution trace for a context");
    common(explain);
    explain->add_option("--context,-c", o.context_file, "Context file")->required();
    explain->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? ok : usage;
    }

    try {
        if (validate->parsed()) return cmd_validate(o, out);
        if (query->parsed()) return cmd_query(o, in, out, err);
        if (ask->parsed()) return cmd_ask(o, out, err);
        return cmd_explain(o, out, err);
    } catch (const Error& e) {
        err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
        return exit_for(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    }
}

} // namespace olgpp::cli
