#ifndef OLGPP_SCHEMA_HPP
#define OLGPP_SCHEMA_HPP

#include "olgpp/graph.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace olgpp {

/// Allowed endpoint of an edge type: a node type, optionally narrowed to a
/// subtype. An empty type is the wildcard.
struct EndpointRef {
    std::string type;
    std::optional<std::string> subtype;

    bool matches(const NodeRecord& node) const;
    std::string to_string() const;
};

struct NodeTypeDef {
    std::string name;
    std::set<std::string> subtypes;
    bool open_subtypes = false;  // any subtype accepted (semantic entities)
    std::vector<std::string> required;
    std::map<std::string, std::vector<std::string>> required_by_subtype;
    std::map<std::string, std::set<Value::Kind>> kinds;
};

struct EdgeTypeDef {
    std::string name;
    std::vector<EndpointRef> src;
    std::vector<EndpointRef> dst;
    std::vector<std::string> required;
    std::map<std::string, std::set<Value::Kind>> kinds;
    bool acyclic = false;
    /// When set, only edges whose `type` property equals this value take
    /// part in the acyclicity check (location_predicate within).
    std::optional<std::string> acyclic_when_type;
};

/// The OLG++ vocabulary. Immutable once parsed.
class TypeSchema {
public:
    /// Throws SyntaxError for malformed text and Error(SchemaError) for
    /// semantic problems (unknown endpoint types, duplicate definitions).
    static TypeSchema parse(std::string_view text);
    static TypeSchema load(const std::filesystem::path& path);
    /// Schema compiled into the library from core/schema/olgpp.schema.
    static const TypeSchema& builtin();
    static std::string_view builtin_text();

    const std::string& version() const { return version_; }
    const NodeTypeDef* node_type(std::string_view name) const;
    const EdgeTypeDef* edge_type(std::string_view name) const;
    const std::map<std::string, NodeTypeDef>& node_types() const { return nodes_; }
    const std::map<std::string, EdgeTypeDef>& edge_types() const { return edges_; }
    const std::map<std::string, std::string>& aliases() const { return aliases_; }

    /// Registered names for graph construction, aliases included.
    Vocabulary vocabulary() const;

private:
    std::string version_;
    std::map<std::string, NodeTypeDef> nodes_;
    std::map<std::string, EdgeTypeDef> edges_;
    std::map<std::string, std::string> aliases_;
};

enum class ViolationKind {
    MissingProp,
    BadEndpoint,
    UnknownType,
    CycleWhereForbidden,
    BadValueKind,
    DegenerateRegion,
    InconsistentContainment,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::string subject;  // node or edge id
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
};

/// Whole-graph structural check. Pure; violations are ordered by subject
/// then kind.
std::vector<Violation> validate_graph(const Graph& graph, const TypeSchema& schema);

/// Transitive subclass_of ancestors, nearest first (BFS order, ties by id).
/// Throws SubclassCycle when the closure reaches the start node again.
std::vector<NodeId> subclass_ancestors(const Graph& graph, std::string_view node);

} // namespace olgpp

#endif
