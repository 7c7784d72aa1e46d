#include "olgpp/logic.hpp"

#include "olgpp/error.hpp"
#include "olgpp/parties.hpp"
#include "olgpp/spatial.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace olgpp {

std::string_view to_string(Connective op) {
    switch (op) {
    case Connective::And: return "AND";
    case Connective::Or: return "OR";
    case Connective::Not: return "NOT";
    case Connective::Leaf: return "LEAF";
    }
    return "?";
}

std::string_view to_string(Evaluator evaluator) {
    switch (evaluator) {
    case Evaluator::spatial: return "spatial";
    case Evaluator::temporal: return "temporal";
    case Evaluator::fact: return "fact";
    case Evaluator::party: return "party";
    }
    return "?";
}

namespace {

std::optional<Evaluator> parse_evaluator(std::string_view text) {
    if (text == "spatial") return Evaluator::spatial;
    if (text == "temporal") return Evaluator::temporal;
    if (text == "fact") return Evaluator::fact;
    if (text == "party") return Evaluator::party;
    return std::nullopt;
}

std::string upper(std::string_view s) {
    std::string out;
    for (char c : s) out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    return out;
}

const std::string* string_prop(const NodeRecord& n, std::string_view key) {
    const Value* v = n.prop(key);
    return v && v->is_string() ? &v->as_string() : nullptr;
}

} // namespace

ExprTree ExprTree::make_leaf(NodeId node, Evaluator evaluator) {
    ExprTree t;
    t.op = Connective::Leaf;
    t.leaf = ConditionRef{std::move(node), evaluator};
    return t;
}

ExprTree ExprTree::all_of(std::vector<ExprTree> children) {
    if (children.size() < 2) throw Error(ErrorCode::MalformedGroup, "AND needs at least two members");
    ExprTree t;
    t.op = Connective::And;
    t.children = std::move(children);
    return t;
}

ExprTree ExprTree::any_of(std::vector<ExprTree> children) {
    if (children.size() < 2) throw Error(ErrorCode::MalformedGroup, "OR needs at least two members");
    ExprTree t;
    t.op = Connective::Or;
    t.children = std::move(children);
    return t;
}

ExprTree ExprTree::negate(ExprTree child) {
    ExprTree t;
    t.op = Connective::Not;
    t.children.push_back(std::move(child));
    return t;
}

std::size_t ExprTree::leaf_count() const {
    if (op == Connective::Leaf) return 1;
    std::size_t n = 0;
    for (const auto& c : children) n += c.leaf_count();
    return n;
}

std::string to_string(const ExprTree& tree) {
    if (tree.op == Connective::Leaf) {
        return tree.leaf->node + "@" + std::string(to_string(tree.leaf->evaluator));
    }
    std::string out(to_string(tree.op));
    out += "(";
    for (std::size_t i = 0; i < tree.children.size(); ++i) {
        if (i) out += ",";
        out += to_string(tree.children[i]);
    }
    return out + ")";
}

namespace {

class ExprParser {
public:
    explicit ExprParser(std::string_view text) : text_(text) {}

    ExprTree parse() {
        ExprTree t = node();
        skip();
        if (pos_ != text_.size()) fail("trailing input");
        return t;
    }

private:
    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    [[noreturn]] void fail(const std::string& msg) {
        throw SyntaxError(1, pos_ + 1, msg);
    }

    std::string word() {
        skip();
        std::size_t start = pos_;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '/' || c == '-' || c == ':') {
                ++pos_;
            } else {
                break;
            }
        }
        if (start == pos_) fail("expected identifier");
        return std::string(text_.substr(start, pos_ - start));
    }

    ExprTree node() {
        std::string head = word();
        skip();
        if (pos_ < text_.size() && text_[pos_] == '@') {
            ++pos_;
            auto ev = parse_evaluator(word());
            if (!ev) fail("unknown evaluator");
            return ExprTree::make_leaf(head, *ev);
        }
        if (pos_ >= text_.size() || text_[pos_] != '(') {
            return ExprTree::make_leaf(head, Evaluator::fact);
        }
        ++pos_;
        std::vector<ExprTree> kids;
        kids.push_back(node());
        skip();
        while (pos_ < text_.size() && text_[pos_] == ',') {
            ++pos_;
            kids.push_back(node());
            skip();
        }
        if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
        ++pos_;
        std::string op = upper(head);
        if (op == "AND") return ExprTree::all_of(std::move(kids));
        if (op == "OR") return ExprTree::any_of(std::move(kids));
        if (op == "NOT") {
            if (kids.size() != 1) throw Error(ErrorCode::MalformedGroup, "NOT takes exactly one operand");
            return ExprTree::negate(std::move(kids.front()));
        }
        fail("unknown connective '" + head + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

std::optional<Connective> connective_word(std::string_view text) {
    std::string u = upper(text);
    if (u == "AND" || u == "ALL") return Connective::And;
    if (u == "OR" || u == "ANY") return Connective::Or;
    if (u == "NOT") return Connective::Not;
    return std::nullopt;
}

} // namespace

ExprTree parse_expr(std::string_view text) {
    return ExprParser(text).parse();
}

std::optional<Connective> group_connective(const NodeRecord& group) {
    for (const char* key : {"operator", "type", "group_type"}) {
        if (const auto* s = string_prop(group, key)) {
            if (auto c = connective_word(*s)) return c;
        }
    }
    if (const auto* eval = string_prop(group, "evaluation")) {
        if (auto c = connective_word(*eval)) return c;
        std::string u = upper(*eval);
        if (u.find("\xE2\x88\xA7") != std::string::npos || u.find(" AND ") != std::string::npos) return Connective::And;
        if (u.find("\xE2\x88\xA8") != std::string::npos || u.find(" OR ") != std::string::npos) return Connective::Or;
        if (u.starts_with("ALL ")) return Connective::And;
        if (u.starts_with("ANY ") || u.starts_with("AT LEAST ONE") || u.starts_with("EITHER")) return Connective::Or;
    }
    return std::nullopt;
}

namespace {

bool is_logic_node(const NodeRecord& n) {
    return normalize_type_name(n.node_type) == "logicnode";
}

bool is_condition(const NodeRecord& n) {
    return normalize_type_name(n.node_type) == "condition";
}

Evaluator leaf_evaluator(const NodeRecord& n) {
    if (const auto* s = string_prop(n, "evaluator")) {
        if (auto ev = parse_evaluator(*s)) return *ev;
        throw Error(ErrorCode::MalformedGroup, "condition " + n.id + " names unknown evaluator '" + *s + "'");
    }
    if (n.prop("window")) return Evaluator::temporal;
    if (n.prop("predicate")) return Evaluator::spatial;
    if (n.prop("party")) return Evaluator::party;
    return Evaluator::fact;
}

ExprTree condition_leaf(const NodeRecord& n) {
    ExprTree leaf = ExprTree::make_leaf(n.id, leaf_evaluator(n));
    const Value* negate = n.prop("negate");
    if (negate && negate->is_bool() && negate->as_bool()) return ExprTree::negate(std::move(leaf));
    return leaf;
}

class TreeBuilder {
public:
    explicit TreeBuilder(const Graph& graph) : graph_(graph) {}

    ExprTree component(const std::string& root) {
        // Groups joined by and/or edges, in either direction.
        std::set<std::string, NaturalLess> members{root};
        std::vector<std::string> stack{root};
        std::set<std::string> connector_types;
        while (!stack.empty()) {
            std::string cur = std::move(stack.back());
            stack.pop_back();
            for (const char* type : {"and", "or"}) {
                for (const auto& adj : graph_.neighbors(cur, Direction::both, type)) {
                    const NodeRecord& other = graph_.node(adj.node);
                    if (!is_logic_node(other)) continue;
                    connector_types.insert(type);
                    if (members.insert(adj.node).second) stack.push_back(adj.node);
                }
            }
        }
        if (members.size() == 1) return group(root);
        if (connector_types.size() > 1) {
            throw Error(ErrorCode::MalformedGroup, "groups joined to " + root + " mix 'and' and 'or' connectors");
        }
        for (const auto& m : members) {
            if (active_.contains(m)) throw Error(ErrorCode::LogicCycle, "logic group " + m + " contains itself");
        }
        std::vector<ExprTree> kids;
        for (const auto& m : members) kids.push_back(group(m));
        return *connector_types.begin() == "or" ? ExprTree::any_of(std::move(kids)) : ExprTree::all_of(std::move(kids));
    }

    ExprTree group(const std::string& id) {
        const NodeRecord& g = graph_.node(id);
        if (is_condition(g)) return condition_leaf(g);
        if (!is_logic_node(g)) {
            throw Error(ErrorCode::MalformedGroup, id + " is " + g.node_type + ", not a logic group or condition");
        }
        if (!active_.insert(id).second) throw Error(ErrorCode::LogicCycle, "logic group " + id + " contains itself");

        auto op = group_connective(g);
        if (!op) throw Error(ErrorCode::MalformedGroup, "logic group " + id + " has no recognizable connective");

        std::vector<std::string> member_ids;
        for (const auto* e : graph_.in_edges(id, "member")) member_ids.push_back(e->src);
        std::sort(member_ids.begin(), member_ids.end(), NaturalLess{});
        member_ids.erase(std::unique(member_ids.begin(), member_ids.end()), member_ids.end());
        apply_evaluation_order(g, member_ids);

        std::vector<ExprTree> kids;
        for (const auto& m : member_ids) {
            if (active_.contains(m)) throw Error(ErrorCode::LogicCycle, "logic group " + m + " contains itself");
            const NodeRecord& member = graph_.node(m);
            if (is_condition(member)) {
                kids.push_back(condition_leaf(member));
            } else if (is_logic_node(member)) {
                kids.push_back(component(m));
            } else {
                throw Error(ErrorCode::MalformedGroup, "member " + m + " of " + id + " is neither condition nor logic group");
            }
        }
        active_.erase(id);

        switch (*op) {
        case Connective::And:
            if (kids.size() < 2) throw Error(ErrorCode::MalformedGroup, "AND group " + id + " has fewer than two members");
            return ExprTree::all_of(std::move(kids));
        case Connective::Or:
            if (kids.size() < 2) throw Error(ErrorCode::MalformedGroup, "OR group " + id + " has fewer than two members");
            return ExprTree::any_of(std::move(kids));
        case Connective::Not:
            if (kids.size() != 1) throw Error(ErrorCode::MalformedGroup, "NOT group " + id + " needs exactly one member");
            return ExprTree::negate(std::move(kids.front()));
        case Connective::Leaf: break;
        }
        throw Error(ErrorCode::MalformedGroup, "logic group " + id + " has no connective");
    }

private:
    // evaluation_order lists member ids to try first; the rest follow by id.
    static void apply_evaluation_order(const NodeRecord& g, std::vector<std::string>& members) {
        const Value* order = g.prop("evaluation_order");
        if (!order || !order->is_list()) return;
        std::vector<std::string> first;
        for (const auto& item : order->as_list()) {
            if (!item.is_string()) continue;
            auto it = std::find(members.begin(), members.end(), item.as_string());
            if (it != members.end()) {
                first.push_back(*it);
                members.erase(it);
            }
        }
        first.insert(first.end(), members.begin(), members.end());
        members = std::move(first);
    }

    const Graph& graph_;
    std::set<std::string> active_;
};

bool eval_leaf(const ConditionRef& ref, const EvalContext& ctx, const Graph& graph) {
    const NodeRecord& n = graph.node(ref.node);
    auto unresolvable = [&](const std::string& what) {
        return Error(ErrorCode::UnresolvableLeaf, "condition " + n.id + " (" + std::string(to_string(ref.evaluator)) +
                                                      ") needs " + what);
    };
    switch (ref.evaluator) {
    case Evaluator::fact: {
        const auto* key = string_prop(n, "fact");
        auto it = ctx.facts.find(key ? std::string_view(*key) : std::string_view(n.id));
        return it != ctx.facts.end() && it->second;
    }
    case Evaluator::temporal: {
        const Value* w = n.prop("window");
        if (!w || !w->get_if<TimeWindow>()) throw unresolvable("a window property");
        if (!ctx.instant) throw unresolvable("an instant in the context");
        return in_window(*ctx.instant, *w->get_if<TimeWindow>());
    }
    case Evaluator::spatial: {
        const auto* kind_text = string_prop(n, "predicate");
        auto kind = kind_text ? parse_spatial_kind(*kind_text) : std::nullopt;
        if (!kind) throw unresolvable("a spatial predicate kind");
        SpatialPredicate pred;
        pred.kind = *kind;
        if (const Value* target = n.prop("target")) {
            if (const auto* p = target->get_if<GeoPoint>()) {
                pred.target = *p;
            } else if (const auto* poly = target->get_if<Polygon>()) {
                pred.target = Region::make(*poly, n.id);
            } else if (target->is_string()) {
                const NodeRecord& t = graph.node(target->as_string());
                if (auto region = node_region(t)) {
                    pred.target = *region;
                } else if (auto pos = node_position(t)) {
                    pred.target = *pos;
                } else {
                    throw unresolvable("target " + t.id + " to carry a boundary or position");
                }
            } else {
                throw unresolvable("a point, polygon or node id target");
            }
        } else {
            throw unresolvable("a target");
        }
        if (const Value* d = n.prop("distance")) {
            if (d->is_number()) pred.distance = d->as_number();
        }
        if (!ctx.position) throw unresolvable("a position in the context");
        return eval_spatial(pred, *ctx.position);
    }
    case Evaluator::party: {
        const auto* who = string_prop(n, "party");
        if (!who) throw unresolvable("a party property");
        if (!ctx.party) throw unresolvable("a party in the context");
        return holder_covers(graph, *who, *ctx.party, ctx.instant).has_value();
    }
    }
    return false;
}

} // namespace

ExprTree build_tree(const Graph& graph, std::string_view root) {
    const NodeRecord& r = graph.node(root);
    if (is_condition(r)) return condition_leaf(r);
    if (!is_logic_node(r)) {
        throw Error(ErrorCode::MalformedGroup, std::string(root) + " is not a logic group");
    }
    return TreeBuilder(graph).component(std::string(root));
}

bool evaluate(const ExprTree& tree, const EvalContext& ctx, const Graph& graph) {
    switch (tree.op) {
    case Connective::Leaf: return eval_leaf(*tree.leaf, ctx, graph);
    case Connective::Not: return !evaluate(tree.children.front(), ctx, graph);
    case Connective::And:
        for (const auto& c : tree.children) {
            if (!evaluate(c, ctx, graph)) return false;
        }
        return true;
    case Connective::Or:
        for (const auto& c : tree.children) {
            if (evaluate(c, ctx, graph)) return true;
        }
        return false;
    }
    return false;
}

namespace {

constexpr const char* kFormulaOps[] = {"addition", "multiplication", "maximum"};

double formula_value(const Graph& graph, const std::string& id, std::set<std::string>& active, bool top) {
    std::string op;
    std::vector<std::string> operands;
    for (const char* type : kFormulaOps) {
        for (const auto* e : graph.out_edges(id, type)) {
            if (!op.empty() && op != type) {
                throw Error(ErrorCode::NonNumericOperand, "formula at " + id + " mixes '" + op + "' and '" + type + "'");
            }
            op = type;
            operands.push_back(e->dst);
        }
    }
    if (op.empty()) {
        if (top) throw Error(ErrorCode::EmptyFormula, "node " + id + " has no formula operands");
        const Value* v = graph.node(id).prop("value");
        if (!v || !v->is_number()) throw Error(ErrorCode::NonNumericOperand, "operand " + id + " has no numeric value");
        return v->as_number();
    }
    if (!active.insert(id).second) throw Error(ErrorCode::LogicCycle, "formula cycle through " + id);
    std::sort(operands.begin(), operands.end(), NaturalLess{});
    double acc = formula_value(graph, operands.front(), active, false);
    for (std::size_t i = 1; i < operands.size(); ++i) {
        double v = formula_value(graph, operands[i], active, false);
        if (op == "addition") acc += v;
        else if (op == "multiplication") acc *= v;
        else acc = std::max(acc, v);
    }
    active.erase(id);
    return acc;
}

} // namespace

double evaluate_formula(const Graph& graph, std::string_view root) {
    std::set<std::string> active;
    return formula_value(graph, std::string(root), active, true);
}

} // namespace olgpp
