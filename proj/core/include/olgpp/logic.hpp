#ifndef OLGPP_LOGIC_HPP
#define OLGPP_LOGIC_HPP

#include "olgpp/geometry.hpp"
#include "olgpp/graph.hpp"
#include "olgpp/temporal.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace olgpp {

/// The situation a compliance question is asked about. Facts follow the
/// closed-world reading: a fact that is not listed is false.
struct EvalContext {
    std::optional<NodeId> party;
    std::optional<GeoPoint> position;
    std::optional<Instant> instant;
    std::map<std::string, bool, std::less<>> facts;

    bool empty() const { return !party && !position && !instant && facts.empty(); }
};

enum class Connective { And, Or, Not, Leaf };
enum class Evaluator { spatial, temporal, fact, party };

std::string_view to_string(Connective op);
std::string_view to_string(Evaluator evaluator);

struct ConditionRef {
    NodeId node;
    Evaluator evaluator = Evaluator::fact;

    friend bool operator==(const ConditionRef&, const ConditionRef&) = default;
};

/// Condition tree. NOT has one child, AND/OR at least two, LEAF none; the
/// factories enforce this and throw MalformedGroup otherwise.
struct ExprTree {
    Connective op = Connective::Leaf;
    std::vector<ExprTree> children;
    std::optional<ConditionRef> leaf;

    static ExprTree make_leaf(NodeId node, Evaluator evaluator = Evaluator::fact);
    static ExprTree all_of(std::vector<ExprTree> children);
    static ExprTree any_of(std::vector<ExprTree> children);
    static ExprTree negate(ExprTree child);

    std::size_t leaf_count() const;

    friend bool operator==(const ExprTree&, const ExprTree&) = default;
};

/// Compact text form: OR(AND(c1@fact,c2@temporal),NOT(c3@fact)).
std::string to_string(const ExprTree& tree);
/// Inverse of to_string. Throws SyntaxError or MalformedGroup.
ExprTree parse_expr(std::string_view text);

/// Connective of a logic group, read from `operator`, then `type`, then
/// `group_type`, then `evaluation` ("All conditions must be met" -> AND).
std::optional<Connective> group_connective(const NodeRecord& group);

/// Expands a logic_node (or a lone condition) into a tree. Members are the
/// sources of `member` edges into the group. Groups joined by `and`/`or`
/// edges form one parent over all of them, ordered by id. Throws
/// LogicCycle, MalformedGroup, MissingNode.
ExprTree build_tree(const Graph& graph, std::string_view root);

/// Short-circuit evaluation; children run in tree order. Throws
/// UnresolvableLeaf when a leaf needs a position, instant or party the
/// context does not provide.
bool evaluate(const ExprTree& tree, const EvalContext& ctx, const Graph& graph);

/// Folds addition / multiplication / maximum edges leaving root over the
/// operand nodes in id order; operands are numeric `value` properties or
/// nested formulas. Throws EmptyFormula, NonNumericOperand, LogicCycle.
double evaluate_formula(const Graph& graph, std::string_view root);

} // namespace olgpp

#endif
