#include "olgpp/spatial.hpp"

#include "olgpp/error.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace olgpp {

namespace {

bool is_within_edge(const EdgeRecord& e) {
    const Value* t = e.prop("type");
    return t && t->is_string() && parse_spatial_kind(t->as_string()) == SpatialKind::within;
}

bool is_jurisdiction(const NodeRecord& n) {
    return n.subtype && normalize_type_name(*n.subtype) == "jurisdiction";
}

std::vector<const EdgeRecord*> within_edges(const Graph& graph, const std::string& id) {
    std::vector<const EdgeRecord*> out;
    for (const auto* e : graph.out_edges(id, "location_predicate")) {
        if (is_within_edge(*e)) out.push_back(e);
    }
    return out;
}

} // namespace

std::optional<Region> node_region(const NodeRecord& node) {
    const Value* b = node.prop("boundary");
    if (!b) return std::nullopt;
    const Polygon* poly = b->get_if<Polygon>();
    if (!poly) return std::nullopt;
    return Region::make(*poly, node.label.empty() ? node.id : node.label);
}

std::optional<GeoPoint> node_position(const NodeRecord& node) {
    const Value* p = node.prop("position");
    if (!p) return std::nullopt;
    if (const GeoPoint* g = p->get_if<GeoPoint>()) return *g;
    return std::nullopt;
}

std::vector<NodeId> jurisdiction_chain(const Graph& graph, std::string_view location) {
    if (normalize_type_name(graph.node(location).node_type) != "location") {
        throw Error(ErrorCode::InvalidValue, "'" + std::string(location) + "' is not a location");
    }

    enum class Color { grey, black };
    std::map<std::string, Color, NaturalLess> color;
    std::function<void(const std::string&)> visit = [&](const std::string& id) {
        color[id] = Color::grey;
        for (const auto* e : within_edges(graph, id)) {
            auto it = color.find(e->dst);
            if (it != color.end() && it->second == Color::grey) {
                throw Error(ErrorCode::ContainmentCycle,
                            "containment cycle through '" + e->dst + "' (edge " + e->id + ")");
            }
            if (it == color.end()) visit(e->dst);
        }
        color[id] = Color::black;
    };
    visit(std::string(location));

    // Nearest-first: BFS levels, ties by id.
    std::vector<NodeId> out;
    std::set<std::string, NaturalLess> seen{std::string(location)};
    std::vector<std::string> frontier{std::string(location)};
    while (!frontier.empty()) {
        std::vector<std::string> next;
        for (const auto& id : frontier) {
            for (const auto* e : within_edges(graph, id)) {
                if (seen.insert(e->dst).second) next.push_back(e->dst);
            }
        }
        std::sort(next.begin(), next.end(), NaturalLess{});
        for (const auto& id : next) {
            if (is_jurisdiction(graph.node(id))) out.push_back(id);
        }
        frontier = std::move(next);
    }
    return out;
}

std::vector<NodeId> effective_obligations(const Graph& graph, std::string_view jurisdiction) {
    std::vector<NodeId> scope{std::string(jurisdiction)};
    auto chain = jurisdiction_chain(graph, jurisdiction);
    scope.insert(scope.end(), chain.begin(), chain.end());

    std::set<NodeId, NaturalLess> out;
    for (const auto& j : scope) {
        for (const auto* e : graph.out_edges(j, "has_jurisdiction")) out.insert(e->dst);
    }
    return {out.begin(), out.end()};
}

std::vector<NodeId> trigger_jurisdictions(const Graph& graph, std::string_view trigger) {
    std::set<NodeId, NaturalLess> out;
    for (const auto* e : graph.in_edges(trigger, "has_jurisdiction")) out.insert(e->src);
    return {out.begin(), out.end()};
}

} // namespace olgpp
