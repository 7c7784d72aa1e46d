#ifndef OLGPP_INGEST_HPP
#define OLGPP_INGEST_HPP

#include "olgpp/graph.hpp"
#include "olgpp/logic.hpp"
#include "olgpp/schema.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace olgpp {

struct DocumentMeta {
    std::string name;
    std::string version;
    std::string source;
    std::string comments;

    friend bool operator==(const DocumentMeta&, const DocumentMeta&) = default;
};

/// Anchor of the local planar frame, in degrees.
struct Origin {
    double lat = 0;
    double lon = 0;

    friend bool operator==(const Origin&, const Origin&) = default;
};

/// Structural content of a rule document. Every spec carries an id; edge
/// ids are left empty when the document writes `_`.
struct RuleDocument {
    DocumentMeta meta;
    std::optional<Origin> origin;
    std::vector<NodeSpec> nodes;
    std::vector<EdgeSpec> edges;

    friend bool operator==(const RuleDocument&, const RuleDocument&) = default;
};

/// Text form:
///
///     document "carlsbad" {version: "1", source: "Municipal Code 8.36"}
///     origin {lat: 33.158, long: -117.350}
///     node n1 obligation_trigger {label: "Permission: ..."}
///     node j1 location/jurisdiction {boundary: polygon((0,0),(10,0),(10,10))}
///     edge e1 whatRel n1 -> n2 {}
///
/// Input starting with '{' is read as the JSON form instead. Throws
/// SyntaxError (line and column), Error(DuplicateNodeId), Error(DuplicateId).
RuleDocument parse_document(std::string_view text);
RuleDocument load_document(const std::filesystem::path& path);

/// Text form that parse_document reads back to an equal document.
std::string serialize_document(const RuleDocument& doc);

struct BuildResult {
    Graph graph;
    std::vector<Violation> violations;
};

/// Materializes the document. Types the schema does not know are still
/// added so the graph is complete; they surface as UnknownType violations
/// alongside everything validate_graph reports and the geometry checks.
/// Reified location_predicate nodes with `from`/`to` become edges.
BuildResult build_graph(const RuleDocument& doc, const TypeSchema& schema);

/// A question's situation plus an optional trigger scope.
struct ContextSpec {
    EvalContext context;
    std::optional<std::vector<NodeId>> scope;
};

/// Lines of `party "p1"`, `position point(x,y)`, `instant at(...)`,
/// `fact name true`, `scope [a, b]`, optionally after a `context "name"`
/// header. Throws SyntaxError.
ContextSpec parse_context(std::string_view text);

std::string read_file(const std::filesystem::path& path);

} // namespace olgpp

#endif
