#include "support.hpp"

#include "olgpp/error.hpp"
#include "olgpp/schema.hpp"

#include <gtest/gtest.h>

using namespace olgpp;
using namespace olgpp::test;

namespace {

Graph builtin_graph() {
    return Graph(TypeSchema::builtin().vocabulary());
}

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::SchemaError;
}

} // namespace

TEST(Graph, AddNodeAssignsFreshIdAndKeepsLabel) {
    Graph g = builtin_graph();
    NodeId vendor = g.add_node(NodeSpec{.node_type = "party", .label = "Food Truck Vendor"});
    NodeId limit = g.add_node(NodeSpec{.node_type = "timex", .label = "60-Minute Time Limit"});
    EXPECT_NE(vendor, limit);
    EXPECT_EQ(g.node(vendor).label, "Food Truck Vendor");
    EXPECT_EQ(g.node(limit).node_type, "timex");
}

TEST(Graph, UnknownNodeTypeIsRejected) {
    Graph g = builtin_graph();
    EXPECT_EQ(code_of([&] { g.add_node(NodeSpec{.node_type = "nonsense"}); }), ErrorCode::UnknownNodeType);
}

TEST(Graph, DuplicateExplicitIdIsRejected) {
    Graph g = builtin_graph();
    g.add_node(NodeSpec{.id = "n1", .node_type = "party"});
    EXPECT_EQ(code_of([&] { g.add_node(NodeSpec{.id = "n1", .node_type = "what"}); }), ErrorCode::DuplicateId);
}

TEST(Graph, FreshIdsSkipExplicitOnes) {
    Graph g = builtin_graph();
    NodeId a = g.add_node(NodeSpec{.node_type = "party"});
    g.add_node(NodeSpec{.id = "n2", .node_type = "party"});
    NodeId b = g.add_node(NodeSpec{.node_type = "party"});
    EXPECT_NE(a, b);
    EXPECT_NE(b, "n2");
    EXPECT_EQ(g.node_count(), 3u);
}

TEST(Graph, EdgesAndAdjacency) {
    Graph g = builtin_graph();
    g.add_node(NodeSpec{.id = "n1", .node_type = "obligation_trigger"});
    g.add_node(NodeSpec{.id = "n2", .node_type = "what"});
    EdgeId e = g.add_edge(EdgeSpec{.src = "n1", .dst = "n2", .edge_type = "whatRel"});
    EXPECT_EQ(g.edge(e).src, "n1");
    EXPECT_EQ(g.out_edges("n1").size(), 1u);
    EXPECT_EQ(g.in_edges("n2").size(), 1u);
    EXPECT_TRUE(g.out_edges("n2").empty());
}

TEST(Graph, DanglingEdgeIsMissingEndpoint) {
    Graph g = builtin_graph();
    g.add_node(NodeSpec{.id = "n1", .node_type = "obligation_trigger"});
    EXPECT_EQ(code_of([&] { g.add_edge(EdgeSpec{.src = "n1", .dst = "nowhere", .edge_type = "whatRel"}); }),
              ErrorCode::MissingEndpoint);
    EXPECT_EQ(code_of([&] { g.add_edge(EdgeSpec{.src = "n1", .dst = "n1", .edge_type = "bogus"}); }),
              ErrorCode::UnknownEdgeType);
}

TEST(Graph, ExceptsAliasResolvesToException) {
    Graph g = builtin_graph();
    g.add_node(NodeSpec{.id = "o1", .node_type = "obligation_trigger"});
    g.add_node(NodeSpec{.id = "o2", .node_type = "obligation_trigger"});
    EdgeId e = g.add_edge(EdgeSpec{.src = "o2", .dst = "o1", .edge_type = "EXCEPTS"});
    EXPECT_EQ(g.edge(e).edge_type, "exception");
}

TEST(Graph, HeterogeneousListIsInvalid) {
    Graph g = builtin_graph();
    NodeSpec spec{.node_type = "what"};
    spec.props["mixed"] = Value(Value::List{Value("a"), Value(1)});
    EXPECT_EQ(code_of([&] { g.add_node(spec); }), ErrorCode::InvalidValue);
}

TEST(Graph, NeighborsOfCarlsbadN1) {
    BuildResult b = load_fixture("carlsbad.olg");
    std::vector<NodeId> out;
    for (const auto& a : b.graph.neighbors("n1", Direction::out)) out.push_back(a.node);
    EXPECT_EQ(out, (std::vector<NodeId>{"n2", "n3", "n4"}));
}

TEST(Graph, NeighborsOfIsolatedNodeIsEmpty) {
    Graph g = builtin_graph();
    g.add_node(NodeSpec{.id = "alone", .node_type = "party"});
    EXPECT_TRUE(g.neighbors("alone", Direction::both).empty());
    EXPECT_EQ(code_of([&] { g.neighbors("ghost", Direction::both); }), ErrorCode::MissingNode);
}

TEST(Graph, NeighborsMatchEdgeScan) {
    BuildResult b = load_fixture("q1.olg");
    const Graph& g = b.graph;
    for (const auto* n : g.nodes()) {
        std::vector<Adjacent> expected;
        for (const auto* e : g.edges())
            if (e->src == n->id) expected.push_back({e->id, e->dst});
        EXPECT_EQ(g.neighbors(n->id, Direction::out), expected) << n->id;
    }
}

TEST(Graph, MatchNodesPartyGroupInQ1) {
    BuildResult b = load_fixture("q1.olg");
    PropFilter f;
    f.emplace("group_type", PropPredicate::eq(Value("food_truck")));
    EXPECT_EQ(b.graph.match_nodes("party", f).size(), 1u);
}

TEST(Graph, MatchNodesOnEmptyGraph) {
    Graph g = builtin_graph();
    EXPECT_TRUE(g.match_nodes("party").empty());
}

TEST(Graph, NaturalOrder) {
    NaturalLess less;
    EXPECT_TRUE(less("n2", "n10"));
    EXPECT_FALSE(less("n10", "n2"));
    EXPECT_TRUE(less("a", "b"));
    EXPECT_EQ(normalize_type_name("Logic_Node"), normalize_type_name("logicnode"));
}

// Index coherence: match_nodes agrees with a linear scan over random graphs.
TEST(GraphProperty, MatchNodesEqualsScan) {
    Rng rng(20240101);
    const char* types[] = {"party", "what", "timex", "condition"};
    const char* colours[] = {"red", "green", "blue"};
    for (int round = 0; round < 20; ++round) {
        Graph g = builtin_graph();
        int n = std::uniform_int_distribution<int>(0, 1000)(rng);
        for (int i = 0; i < n; ++i) {
            NodeSpec spec{.node_type = types[rng() % 4]};
            if (rng() % 3) spec.props["colour"] = Value(colours[rng() % 3]);
            if (rng() % 2) spec.props["size"] = Value(static_cast<int>(rng() % 10));
            g.add_node(std::move(spec));
        }
        std::string type = types[rng() % 4];
        std::string colour = colours[rng() % 3];
        int min_size = static_cast<int>(rng() % 10);
        PropFilter f;
        f.emplace("colour", PropPredicate::eq(Value(colour)));
        f.emplace("size", PropPredicate::where([&](const Value& v) { return v.is_number() && v.as_number() >= min_size; }));

        std::vector<NodeId> expected;
        for (const auto* node : g.nodes()) {
            if (node->node_type != type) continue;
            const Value* c = node->prop("colour");
            const Value* s = node->prop("size");
            if (!c || !(*c == Value(colour))) continue;
            if (!s || !s->is_number() || s->as_number() < min_size) continue;
            expected.push_back(node->id);
        }
        EXPECT_EQ(g.match_nodes(type, f), expected);
        EXPECT_EQ(g.match_nodes(type, f), g.match_nodes(type, f));
        EXPECT_TRUE(g.integrity_errors().empty());
    }
}

TEST(GraphProperty, FilterSelectsThreeOfFive) {
    Graph g = builtin_graph();
    for (int i = 1; i <= 5; ++i) {
        NodeSpec spec{.id = "p" + std::to_string(i), .node_type = "party"};
        spec.props["kind"] = Value(i % 2 ? "vendor" : "resident");
        g.add_node(std::move(spec));
    }
    PropFilter f;
    f.emplace("kind", PropPredicate::eq(Value("vendor")));
    EXPECT_EQ(g.match_nodes("party", f), (std::vector<NodeId>{"p1", "p3", "p5"}));
}
