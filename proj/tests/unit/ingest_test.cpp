#include "support.hpp"

#include "olgpp/error.hpp"
#include "olgpp/schema.hpp"

#include <gtest/gtest.h>

using namespace olgpp;
using namespace olgpp::test;
using namespace std::chrono_literals;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::SchemaError;
}

std::vector<ViolationKind> kinds(const BuildResult& b) {
    std::vector<ViolationKind> out;
    for (const auto& v : b.violations) out.push_back(v.kind);
    return out;
}

const char* kHeader = "document \"t\" {version: \"1\"}\n";

Value random_atom(Rng& rng, int kind) {
    static const char* strings[] = {"plain", "with \"quotes\"", "back\\slash", "multi\nline", "", "ünïcode", "a, b: {c}"};
    switch (kind) {
    case 0: return Value(strings[rng() % 7]);
    case 1: return Value(static_cast<double>(static_cast<int>(rng() % 2000) - 1000) / 8.0);
    case 2: return Value(static_cast<bool>(rng() % 2));
    case 3: return Value(parse_instant("2024-01-01") + std::chrono::seconds(rng() % 10'000'000));
    case 4: {
        int s = static_cast<int>(rng() % 600);
        return Value(TimeWindow::daily(Minutes(s), Minutes(s + 1 + rng() % 600), rng() % 2 ? DaySet::all() : parse_days("mon-fri")));
    }
    case 5: return Value(Minutes(1 + rng() % 500));
    case 6: return Value(GeoPoint{static_cast<double>(rng() % 100), -static_cast<double>(rng() % 100) / 4});
    default: return Value(Polygon{{{0, 0}, {static_cast<double>(1 + rng() % 9), 0}, {0, 3.5}}});
    }
}

Value random_value(Rng& rng) {
    int kind = static_cast<int>(rng() % 9);
    if (kind == 8) {
        int inner = static_cast<int>(rng() % 3);
        Value::List items;
        for (int i = 0, n = static_cast<int>(rng() % 4); i < n; ++i) items.push_back(random_atom(rng, inner));
        return Value(std::move(items));
    }
    return random_atom(rng, kind);
}

RuleDocument random_document(Rng& rng) {
    RuleDocument doc;
    doc.meta = {"doc" + std::to_string(rng() % 100), std::to_string(1 + rng() % 5), rng() % 2 ? "some \"source\"" : "",
                rng() % 2 ? "comment" : ""};
    if (rng() % 2) doc.origin = Origin{32.5 + (rng() % 100) / 1000.0, -117.0 - (rng() % 100) / 1000.0};
    const std::pair<const char*, const char*> types[] = {
        {"party", nullptr}, {"party", "party_group"}, {"what", nullptr}, {"semantic", "sidewalk"},
        {"location", "jurisdiction"}, {"obligation_trigger", nullptr}, {"condition", nullptr}};
    int n = 1 + static_cast<int>(rng() % 8);
    for (int i = 0; i < n; ++i) {
        NodeSpec s;
        s.id = "n" + std::to_string(i);
        auto [t, sub] = types[rng() % 7];
        s.node_type = t;
        if (sub) s.subtype = sub;
        if (rng() % 2) s.label = "label " + std::to_string(i) + (rng() % 2 ? " \"q\"" : "");
        for (int k = 0, m = static_cast<int>(rng() % 4); k < m; ++k) s.props["p" + std::to_string(k)] = random_value(rng);
        if (rng() % 3 == 0) s.base.status = Status::draft;
        if (rng() % 3 == 0) {
            s.base.created_date = std::chrono::year{2023} / 5 / 1;
            s.base.modified_date = std::chrono::year{2024} / 1 / 15;
        }
        doc.nodes.push_back(std::move(s));
    }
    int m = static_cast<int>(rng() % 8);
    for (int i = 0; i < m; ++i) {
        EdgeSpec e;
        if (rng() % 3) e.id = "e" + std::to_string(i);
        e.src = "n" + std::to_string(rng() % n);
        e.dst = "n" + std::to_string(rng() % n);
        e.edge_type = rng() % 2 ? "whatRel" : "semantic_relation";
        if (rng() % 2) e.props["name"] = Value("stored_at");
        if (rng() % 3 == 0)
            e.base.temporal_validity = TimeWindow::absolute(parse_instant("2024-01-01"), parse_instant("2024-12-31T23:59"));
        doc.edges.push_back(std::move(e));
    }
    return doc;
}

} // namespace

TEST(Ingest, CarlsbadParsesToEightNodesSevenEdges) {
    RuleDocument doc = parse_document(fixture_text("carlsbad.olg"));
    EXPECT_EQ(doc.nodes.size(), 8u);
    EXPECT_EQ(doc.edges.size(), 7u);
    EXPECT_EQ(doc.meta.name, "carlsbad");
    EXPECT_EQ(doc.meta.version, "1");
    EXPECT_EQ(doc.nodes[6].props.at("limit"), Value(Minutes(60)));
}

TEST(Ingest, CarlsbadBuildsClean) {
    BuildResult b = load_fixture("carlsbad.olg");
    EXPECT_TRUE(b.violations.empty());
    EXPECT_EQ(b.graph.node_count(), 8u);
    EXPECT_EQ(b.graph.node("n3").label, "Food Truck Vendor");
}

TEST(Ingest, EmptyFileNeedsHeader) {
    try {
        parse_document("");
        FAIL();
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.line(), 1u);
        EXPECT_NE(e.detail().find("document"), std::string::npos);
    }
}

TEST(Ingest, DuplicateNodeId) {
    std::string text = std::string(kHeader) + "node n1 party\nnode n1 what\n";
    EXPECT_EQ(code_of([&] { parse_document(text); }), ErrorCode::DuplicateNodeId);
}

TEST(Ingest, SyntaxErrorsCarryPosition) {
    std::string text = std::string(kHeader) + "node n1 party {label: }\n";
    try {
        parse_document(text);
        FAIL();
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_GT(e.column(), 1u);
    }
    EXPECT_THROW(parse_document(std::string(kHeader) + "edge e1 whatRel a b\n"), SyntaxError);
    EXPECT_THROW(parse_document("document \"t\" {}\n"), SyntaxError);
}

TEST(Ingest, ExceptsBetweenWrongTypesIsBadEndpoint) {
    std::string text = std::string(kHeader) + "node t timex\nnode p party\nedge x EXCEPTS t -> p\n";
    BuildResult b = build_graph(parse_document(text), TypeSchema::builtin());
    EXPECT_EQ(kinds(b), (std::vector<ViolationKind>{ViolationKind::BadEndpoint, ViolationKind::BadEndpoint}));
}

TEST(Ingest, TwoPointPolygonIsDegenerate) {
    std::string text = std::string(kHeader) + "node j location/jurisdiction {boundary: polygon((0,0),(1,1))}\n";
    BuildResult b = build_graph(parse_document(text), TypeSchema::builtin());
    EXPECT_EQ(kinds(b), (std::vector<ViolationKind>{ViolationKind::DegenerateRegion}));
    EXPECT_EQ(b.graph.node_count(), 1u);
}

TEST(Ingest, UnknownTypesStillBuild) {
    std::string text = std::string(kHeader) + "node a gizmo\nnode b party\nedge e frob a -> b\n";
    BuildResult b = build_graph(parse_document(text), TypeSchema::builtin());
    EXPECT_EQ(b.graph.node_count(), 2u);
    EXPECT_EQ(b.graph.edge_count(), 1u);
    EXPECT_EQ(kinds(b), (std::vector<ViolationKind>{ViolationKind::UnknownType, ViolationKind::UnknownType}));
}

TEST(Ingest, UnitsNormalizeAndKeepRaw) {
    BuildResult b = load_fixture("residential.olg");
    const NodeRecord& c2 = b.graph.node("c2");
    ASSERT_TRUE(c2.prop("distance"));
    EXPECT_DOUBLE_EQ(c2.prop("distance")->as_number(), 152.4);
    EXPECT_EQ(*c2.prop("raw"), Value(Value::List{Value("distance=500ft")}));
    EXPECT_EQ(*b.graph.node("c1").prop("window"), Value(TimeWindow::daily(6h, 18h)));
}

TEST(Ingest, OriginProjectsLatLong) {
    std::string text = std::string(kHeader) +
                       "origin {lat: 32.7, long: -117.1}\nnode s location/specific_location {lat: 32.7, long: -117.1}\n";
    BuildResult b = build_graph(parse_document(text), TypeSchema::builtin());
    EXPECT_EQ(*b.graph.node("s").prop("position"), Value(GeoPoint{0, 0}));
}

TEST(Ingest, ReifiedPredicateBecomesEdge) {
    std::string text = std::string(kHeader) +
                       "node a location/jurisdiction\nnode b location/jurisdiction\n"
                       "node w location/location_predicate {from: \"a\", to: \"b\", type: \"within\"}\n";
    BuildResult b = build_graph(parse_document(text), TypeSchema::builtin());
    EXPECT_EQ(b.graph.node_count(), 2u);
    ASSERT_NE(b.graph.find_edge("w"), nullptr);
    EXPECT_EQ(b.graph.edge("w").edge_type, "location_predicate");
    EXPECT_EQ(jurisdiction_chain(b.graph, "a"), (std::vector<NodeId>{"b"}));
}

TEST(Ingest, ContainmentDisagreementIsViolation) {
    std::string text = std::string(kHeader) +
                       "node a location/jurisdiction {boundary: polygon((0,0),(1,0),(1,1))}\n"
                       "node b location/jurisdiction {boundary: polygon((5,5),(6,5),(6,6))}\n"
                       "edge w location_predicate a -> b {type: \"within\"}\n";
    BuildResult b = build_graph(parse_document(text), TypeSchema::builtin());
    EXPECT_EQ(kinds(b), (std::vector<ViolationKind>{ViolationKind::InconsistentContainment}));
}

TEST(Ingest, JsonFormMatchesTextForm) {
    std::string json = R"json({
      "document": {"name": "carlsbad", "version": "1", "source": "Carlsbad Municipal Code, food trucks"},
      "nodes": [
        {"id": "n5", "type": "obligation_trigger", "label": "Prohibition: Parking or standing for more than 60 minutes."},
        {"id": "n7", "type": "timex", "props": {"limit": {"$literal": "duration(60min)"}}}
      ],
      "edges": [{"id": "e6", "type": "temporal", "src": "n5", "dst": "n7"}]
    })json";
    RuleDocument j = parse_document(json);
    RuleDocument t = parse_document(std::string("document \"carlsbad\" {version: \"1\", source: \"Carlsbad Municipal Code, food trucks\"}\n") +
                                    "node n5 obligation_trigger {label: \"Prohibition: Parking or standing for more than 60 minutes.\"}\n"
                                    "node n7 timex {limit: duration(60min)}\n"
                                    "edge e6 temporal n5 -> n7\n");
    EXPECT_EQ(j, t);
}

TEST(Ingest, Context) {
    ContextSpec c = parse_context("context \"x\"\nparty \"owners\"\nposition point(1,2)\ninstant at(2024-01-02T03:04)\n"
                                  "fact permit true\nfact emergency false\nscope [o1, o2]\n");
    EXPECT_EQ(c.context.party, NodeId("owners"));
    EXPECT_EQ(c.context.position, (GeoPoint{1, 2}));
    EXPECT_EQ(c.context.instant, parse_instant("2024-01-02T03:04"));
    EXPECT_EQ(c.context.facts.at("permit"), true);
    EXPECT_EQ(c.context.facts.at("emergency"), false);
    EXPECT_EQ(c.scope, (std::vector<NodeId>{"o1", "o2"}));
    EXPECT_THROW(parse_context("fact permit maybe\n"), SyntaxError);
    EXPECT_TRUE(parse_context("").context.facts.empty());
}

TEST(Ingest, FixturesRoundTrip) {
    for (const char* name : {"carlsbad.olg", "heights.olg", "overrides.olg", "residential.olg", "cbd.olg", "q1.olg", "q2.olg",
                             "carlsbad_sidewalk.olg"}) {
        RuleDocument doc = parse_document(fixture_text(name));
        EXPECT_EQ(parse_document(serialize_document(doc)), doc) << name;
    }
}

// parse(serialize(doc)) == doc for random documents, and serialization is a
// fixpoint after one round.
TEST(IngestProperty, RandomDocumentsRoundTrip) {
    Rng rng(314);
    for (int round = 0; round < 300; ++round) {
        RuleDocument doc = random_document(rng);
        std::string text = serialize_document(doc);
        RuleDocument back = parse_document(text);
        ASSERT_EQ(back, doc) << text;
        EXPECT_EQ(serialize_document(back), text);
    }
}

// A clean build implies a clean validate_graph.
TEST(IngestProperty, CleanBuildImpliesCleanValidation) {
    for (const char* name : {"carlsbad.olg", "heights.olg", "overrides.olg", "residential.olg", "cbd.olg", "q2.olg"}) {
        BuildResult b = load_fixture(name);
        ASSERT_TRUE(b.violations.empty()) << name;
        EXPECT_TRUE(validate_graph(b.graph, TypeSchema::builtin()).empty()) << name;
    }
}

TEST(Values, LiteralRoundTrip) {
    Rng rng(9);
    for (int i = 0; i < 500; ++i) {
        Value v = random_value(rng);
        std::string text = std::string(kHeader) + "node n what {v: " + v.to_literal() + "}\n";
        EXPECT_EQ(parse_document(text).nodes[0].props.at("v"), v) << v.to_literal();
    }
}
