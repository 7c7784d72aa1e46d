#ifndef OLGPP_GRAPH_HPP
#define OLGPP_GRAPH_HPP

#include "olgpp/value.hpp"

#include <chrono>
#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace olgpp {

using NodeId = std::string;
using EdgeId = std::string;

/// Orders identifiers with embedded numbers numerically: n2 < n10.
struct NaturalLess {
    using is_transparent = void;
    bool operator()(std::string_view a, std::string_view b) const;
};

/// Type names compare case-insensitively and ignore '_' and '-', so that
/// "LogicNode", "logic_node" and "logicnode" name the same type.
std::string normalize_type_name(std::string_view name);

enum class Status { active, superseded, draft };

std::string_view to_string(Status status);
std::optional<Status> parse_status(std::string_view text);

using Date = std::chrono::year_month_day;

struct BaseProps {
    Date created_date{std::chrono::year{1970} / 1 / 1};
    Date modified_date{std::chrono::year{1970} / 1 / 1};
    Status status = Status::active;
    /// Edges only; an absolute window outside of which the edge is inert.
    std::optional<TimeWindow> temporal_validity;

    friend bool operator==(const BaseProps&, const BaseProps&) = default;
};

struct NodeRecord {
    NodeId id;
    std::string node_type;
    std::optional<std::string> subtype;
    std::string label;
    PropertyMap props;
    BaseProps base;

    const Value* prop(std::string_view key) const;
};

struct EdgeRecord {
    EdgeId id;
    NodeId src;
    NodeId dst;
    std::string edge_type;
    PropertyMap props;
    BaseProps base;

    const Value* prop(std::string_view key) const;
};

/// Insertion request; id is engine-assigned when empty.
struct NodeSpec {
    std::optional<NodeId> id;
    std::string node_type;
    std::optional<std::string> subtype;
    std::string label;
    PropertyMap props;
    BaseProps base;

    friend bool operator==(const NodeSpec&, const NodeSpec&) = default;
};

struct EdgeSpec {
    std::optional<EdgeId> id;
    NodeId src;
    NodeId dst;
    std::string edge_type;
    PropertyMap props;
    BaseProps base;

    friend bool operator==(const EdgeSpec&, const EdgeSpec&) = default;
};

/// The registered type names a graph accepts. Keys are normalized names,
/// values the canonical spelling stored on records. Aliases map extra
/// spellings to a canonical name.
struct Vocabulary {
    std::map<std::string, std::string> node_types;
    std::map<std::string, std::string> edge_types;

    void add_node_type(std::string_view canonical);
    void add_edge_type(std::string_view canonical);
    void add_edge_alias(std::string_view alias, std::string_view canonical);

    std::optional<std::string> resolve_node_type(std::string_view name) const;
    std::optional<std::string> resolve_edge_type(std::string_view name) const;
};

enum class Direction { out, in, both };

struct Adjacent {
    EdgeId edge;
    NodeId node;

    friend bool operator==(const Adjacent&, const Adjacent&) = default;
};

/// Property test used by match_nodes. Equality predicates are answered from
/// the property index; arbitrary predicates fall back to a scan.
class PropPredicate {
public:
    static PropPredicate eq(Value v);
    static PropPredicate where(std::function<bool(const Value&)> test);

    bool operator()(const Value* v) const;
    const std::optional<Value>& equality() const { return equals_; }

private:
    std::optional<Value> equals_;
    std::function<bool(const Value&)> test_;
};

using PropFilter = std::map<std::string, PropPredicate, std::less<>>;

/// Directed property graph. Built by a single writer; after that every
/// const member is safe to call from any number of threads.
class Graph {
public:
    explicit Graph(Vocabulary vocabulary);

    /// Throws UnknownNodeType, DuplicateId, InvalidValue (heterogeneous list).
    NodeId add_node(NodeSpec spec);
    /// Throws UnknownEdgeType, MissingEndpoint, DuplicateId, InvalidValue.
    EdgeId add_edge(EdgeSpec spec);

    const NodeRecord* find_node(std::string_view id) const;
    const EdgeRecord* find_edge(std::string_view id) const;
    /// Throws MissingNode.
    const NodeRecord& node(std::string_view id) const;
    const EdgeRecord& edge(std::string_view id) const;

    /// Nodes whose type or subtype equals node_type (normalized) and whose
    /// properties satisfy every filter entry; ordered by id.
    std::vector<NodeId> match_nodes(std::optional<std::string_view> node_type,
                                    const PropFilter& filter = {}) const;

    /// Throws MissingNode. Ordered by edge id; `both` lists out-edges first.
    std::vector<Adjacent> neighbors(std::string_view node, Direction direction,
                                    std::optional<std::string_view> edge_type = std::nullopt) const;

    /// Edge records leaving / entering a node, ordered by edge id.
    std::vector<const EdgeRecord*> out_edges(std::string_view node,
                                             std::optional<std::string_view> edge_type = std::nullopt) const;
    std::vector<const EdgeRecord*> in_edges(std::string_view node,
                                            std::optional<std::string_view> edge_type = std::nullopt) const;

    /// All records in id order.
    std::vector<const NodeRecord*> nodes() const;
    std::vector<const EdgeRecord*> edges() const;

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    const Vocabulary& vocabulary() const { return vocabulary_; }

    /// True when name (normalized) equals the node's type or subtype.
    static bool has_type(const NodeRecord& node, std::string_view name);

    /// Referential-integrity audit; one message per dangling endpoint.
    std::vector<std::string> integrity_errors() const;

private:
    using Index = std::vector<std::size_t>;

    void insert_sorted(Index& index, std::size_t node_index) const;
    void insert_sorted_edge(Index& index, std::size_t edge_index) const;
    std::vector<const EdgeRecord*> collect(const Index& index, std::optional<std::string_view> edge_type) const;
    std::string fresh_id(const std::map<std::string, std::size_t, NaturalLess>& used, std::size_t& counter) const;

    Vocabulary vocabulary_;
    std::deque<NodeRecord> nodes_;
    std::deque<EdgeRecord> edges_;
    std::map<std::string, std::size_t, NaturalLess> node_ids_;
    std::map<std::string, std::size_t, NaturalLess> edge_ids_;
    std::vector<Index> out_;
    std::vector<Index> in_;
    std::map<std::string, Index, std::less<>> type_index_;
    std::map<std::pair<std::string, std::string>, Index, std::less<>> prop_index_;
    std::size_t next_node_ = 1;
    std::size_t next_edge_ = 1;
};

} // namespace olgpp

#endif
