#ifndef OLGPP_QUERY_HPP
#define OLGPP_QUERY_HPP

#include "olgpp/graph.hpp"
#include "olgpp/value.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace olgpp {

using PatternProps = std::vector<std::pair<std::string, Value>>;

struct NodePattern {
    std::string var;  // empty when anonymous
    std::optional<std::string> label;
    PatternProps props;

    friend bool operator==(const NodePattern&, const NodePattern&) = default;
};

enum class EdgeDirection { out, in, either };

struct EdgePattern {
    std::string var;
    std::vector<std::string> types;  // alternatives; empty matches any
    PatternProps props;
    EdgeDirection direction = EdgeDirection::out;

    friend bool operator==(const EdgePattern&, const EdgePattern&) = default;
};

/// node (edge node)*; nodes.size() == edges.size() + 1.
struct PathPattern {
    std::vector<NodePattern> nodes;
    std::vector<EdgePattern> edges;

    friend bool operator==(const PathPattern&, const PathPattern&) = default;
};

enum class CompareOp { eq, ne, lt, le, gt, ge, contains, in, starts_with, ends_with };
enum class ExprKind { literal, property, variable, compare, is_null, is_not_null, conj, disj, negation, exists, pattern, case_when };

std::string_view to_string(CompareOp op);

/// Expression node. `literal` with no value is null. For `exists` the
/// pattern holds the subpattern and args[0] (if any) its WHERE; `pattern` is
/// a path used as a predicate; `case_when` args are cond, value pairs with
/// an optional trailing ELSE value.
struct Expr {
    ExprKind kind = ExprKind::literal;
    std::optional<Value> value;
    std::string var;
    std::string key;
    CompareOp op = CompareOp::eq;
    std::vector<Expr> args;
    std::vector<PathPattern> pattern;

    friend bool operator==(const Expr&, const Expr&) = default;
};

struct MatchClause {
    std::vector<PathPattern> paths;

    friend bool operator==(const MatchClause&, const MatchClause&) = default;
};

struct WhereClause {
    Expr condition;

    friend bool operator==(const WhereClause&, const WhereClause&) = default;
};

using Clause = std::variant<MatchClause, WhereClause>;

struct ReturnItem {
    Expr expr;
    std::string alias;

    friend bool operator==(const ReturnItem&, const ReturnItem&) = default;
};

struct OrderKey {
    std::string alias;
    bool descending = false;

    friend bool operator==(const OrderKey&, const OrderKey&) = default;
};

struct ReturnClause {
    bool distinct = false;
    std::vector<ReturnItem> items;
    std::vector<OrderKey> order_by;
    std::optional<std::size_t> limit;

    friend bool operator==(const ReturnClause&, const ReturnClause&) = default;
};

struct QueryAST {
    /// Header flag: labels also match superclasses of typed nodes.
    bool subclass_match = false;
    std::vector<Clause> clauses;
    ReturnClause returns;

    std::size_t match_count() const;
    std::size_t pattern_count() const;
    std::size_t exists_count() const;

    friend bool operator==(const QueryAST&, const QueryAST&) = default;
};

/// Throws SyntaxError (with the expected token) and Error(UnboundVariable).
QueryAST parse_query(std::string_view text);

/// Canonical text; parse_query(to_string(ast)) == ast.
std::string to_string(const QueryAST& ast);
std::string to_string(const Expr& expr);
std::string to_string(const PathPattern& path);

struct ExecOptions {
    /// Upper bound on partial bindings explored, subqueries included.
    std::size_t max_bindings = 1'000'000;
};

using Cell = std::optional<Value>;

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// Labels match node_type or subtype after normalization; a `type`
/// property falls back to the subtype (nodes) or edge type (edges) when the
/// record has no explicit one. A missing property makes every comparison on
/// it false. Throws Error(ResourceLimit).
ResultTable execute(const QueryAST& ast, const Graph& graph, const ExecOptions& options = {});

/// Every full binding of the query's variables, in execution order, before
/// projection. Column i is the i-th named variable in order of appearance.
struct BindingTable {
    std::vector<std::string> variables;
    std::vector<std::vector<std::string>> rows;
};
BindingTable execute_bindings(const QueryAST& ast, const Graph& graph, const ExecOptions& options = {});

enum class TableFormat { text, csv, json };

std::string format_table(const ResultTable& table, TableFormat format);

} // namespace olgpp

#endif
