#include "olgpp/parties.hpp"

#include "olgpp/error.hpp"
#include "olgpp/schema.hpp"

#include <set>
#include <vector>

namespace olgpp {

namespace {

bool is_collective(const NodeRecord& n) {
    const Value* v = n.prop("is_collective");
    return v && v->is_bool() && v->as_bool();
}

bool reaches_member(const Graph& graph, const std::string& group, std::string_view party) {
    std::set<std::string, NaturalLess> seen{group};
    std::vector<std::string> stack{group};
    while (!stack.empty()) {
        std::string cur = std::move(stack.back());
        stack.pop_back();
        for (const auto* e : graph.out_edges(cur, "has_member")) {
            if (e->dst == party) return true;
            if (seen.insert(e->dst).second) stack.push_back(e->dst);
        }
    }
    return false;
}

bool delegation_active(const EdgeRecord& e, std::optional<Instant> at) {
    if (e.base.status != Status::active) return false;
    const Value* revoked = e.prop("revoked");
    if (revoked && revoked->is_bool() && revoked->as_bool()) return false;
    const Value* duration = e.prop("duration");
    if (!duration) return true;
    const TimeWindow* w = duration->get_if<TimeWindow>();
    if (!w || !at) return false;
    return in_window(*at, *w);
}

} // namespace

std::optional<std::string> holder_covers(const Graph& graph, std::string_view holder, std::string_view party,
                                         std::optional<Instant> at) {
    const NodeRecord& h = graph.node(holder);
    if (holder == party) return "direct";
    if (!graph.find_node(party)) return std::nullopt;

    if (reaches_member(graph, h.id, party)) return "has_member";

    if (is_collective(h)) {
        for (const auto* group_edge : graph.out_edges(h.id, "member_of")) {
            for (const auto* e : graph.out_edges(party, "membership")) {
                if (e->dst == group_edge->dst) return "collective";
            }
            for (const auto* e : graph.out_edges(party, "member_of")) {
                if (e->dst == group_edge->dst) return "collective";
            }
        }
    }

    try {
        for (const auto& ancestor : subclass_ancestors(graph, party)) {
            if (ancestor == holder) return "subclass_of";
        }
    } catch (const Error& e) {
        if (e.code() != ErrorCode::SubclassCycle) throw;
    }

    for (const auto* e : graph.out_edges(h.id, "delegation")) {
        if (e->dst == party && delegation_active(*e, at)) return "delegation " + e->id;
    }
    return std::nullopt;
}

} // namespace olgpp
