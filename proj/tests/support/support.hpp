#ifndef OLGPP_TEST_SUPPORT_HPP
#define OLGPP_TEST_SUPPORT_HPP

#include "olgpp/defeasibility.hpp"
#include "olgpp/geometry.hpp"
#include "olgpp/graph.hpp"
#include "olgpp/ingest.hpp"
#include "olgpp/logic.hpp"
#include "olgpp/parties.hpp"
#include "olgpp/query.hpp"
#include "olgpp/spatial.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace olgpp::test {

using Rng = std::mt19937_64;

// ---------------------------------------------------------------- fixtures

std::filesystem::path fixture_path(const std::string& name);
BuildResult load_fixture(const std::string& name);
ContextSpec load_context(const std::string& name);
std::string fixture_text(const std::string& name);

// ---------------------------------------------------------------- resolver

/// A random defeasibility graph with its ground truth kept outside the
/// graph: which triggers the context makes applicable and which edges
/// connect them.
struct ResolverCase {
    struct Link {
        std::string type;  // exception, override, precedence
        std::string src;
        std::string dst;
        double level = 0;
    };
    Graph graph{Vocabulary{}};
    EvalContext ctx;
    std::vector<std::string> triggers;
    std::set<std::string> applicable;
    std::vector<Link> links;
};

/// Up to 6 triggers and 6 links; `acyclic` keeps exception and override
/// links acyclic, otherwise a cycle among applicable triggers is injected.
ResolverCase random_resolver_case(Rng& rng, bool acyclic);

struct OracleRuling {
    bool cycle = false;
    std::set<std::string> winners;
    std::set<std::tuple<std::string, std::string, DefeatReason>> defeats;  // loser, by, reason
};

/// Transitive-closure evaluation of the defeat rules over the case's
/// ground truth.
OracleRuling resolve_oracle(const ResolverCase& c);

// ---------------------------------------------------------------- query

struct OracleNode {
    std::string var;
    std::optional<std::string> label;
    std::optional<std::pair<std::string, std::string>> prop;  // key = value
};

struct OracleEdge {
    std::string var;  // empty when anonymous
    std::optional<std::string> type;
    EdgeDirection direction = EdgeDirection::out;
};

struct OraclePath {
    std::vector<OracleNode> nodes;
    std::vector<OracleEdge> edges;
};

struct OracleFilter {
    enum class Kind { prop_eq, prop_ne, not_exists } kind = Kind::prop_eq;
    std::string var;
    std::string key;
    std::string value;
    // not_exists: (var)-[:type]->(fresh:label), optionally fresh.key = value
    std::string edge_type;
    std::string label;
    bool inner_prop = false;
};

struct QueryCase {
    Graph graph{Vocabulary{}};
    std::vector<OraclePath> paths;
    std::vector<OracleFilter> filters;
    std::vector<std::string> returned;  // named variables, in return order
    std::string text;
};

/// Random graph (≤30 nodes) and conjunctive query (≤3 paths).
QueryCase random_query_case(Rng& rng);

/// Every binding tuple of the case's variables, by exhaustive enumeration,
/// projected to `returned`; sorted.
std::vector<std::vector<std::string>> query_oracle(const QueryCase& c);

/// Rows of a result table as id strings, sorted.
std::vector<std::vector<std::string>> sorted_rows(const ResultTable& t);

// ---------------------------------------------------------------- geometry

/// Convex, counter-clockwise polygon with 3..12 vertices.
std::vector<GeoPoint> random_convex_polygon(Rng& rng);

/// Half-plane classification for convex CCW polygons; nullopt within
/// `band` of the boundary.
std::optional<bool> convex_oracle(const std::vector<GeoPoint>& poly, GeoPoint p, double band);

// ---------------------------------------------------------------- logic

/// Facts c1..c4 from the low four bits of `mask` (bit i is c(i+1)).
bool residential_truth(unsigned mask);

} // namespace olgpp::test

#endif
