#include "olgpp/defeasibility.hpp"

#include "olgpp/error.hpp"
#include "olgpp/parties.hpp"
#include "olgpp/spatial.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>
#include <map>

namespace olgpp {

std::string_view to_string(Modality modality) {
    switch (modality) {
    case Modality::obligation: return "obligation";
    case Modality::prohibition: return "prohibition";
    case Modality::permission: return "permission";
    case Modality::entitlement: return "entitlement";
    }
    return "?";
}

std::optional<Modality> parse_modality(std::string_view text) {
    std::string n = normalize_type_name(text);
    if (n == "obligation" || n == "duty") return Modality::obligation;
    if (n == "prohibition" || n == "prohibited") return Modality::prohibition;
    if (n == "permission" || n == "permitted") return Modality::permission;
    if (n == "entitlement" || n == "right") return Modality::entitlement;
    return std::nullopt;
}

bool opposing(Modality a, Modality b) {
    return (a == Modality::prohibition) != (b == Modality::prohibition);
}

std::string_view to_string(DefeatReason reason) {
    switch (reason) {
    case DefeatReason::excepted: return "excepted";
    case DefeatReason::overridden: return "overridden";
    case DefeatReason::precedence: return "precedence";
    }
    return "?";
}

std::optional<Outcome> parse_outcome(std::string_view text) {
    if (text == "true") return Outcome::satisfied;
    if (text == "false") return Outcome::unsatisfied;
    if (text == "late") return Outcome::late;
    return std::nullopt;
}

namespace {

bool is_trigger(const NodeRecord& n) {
    return normalize_type_name(n.node_type) == "obligationtrigger";
}

bool is_condition_node(const NodeRecord& n) {
    std::string t = normalize_type_name(n.node_type);
    return t == "logicnode" || t == "condition";
}

const NodeRecord& trigger_node(const Graph& graph, std::string_view id) {
    const NodeRecord& n = graph.node(id);
    if (!is_trigger(n)) {
        throw Error(ErrorCode::InvalidValue, "'" + n.id + "' is " + n.node_type + ", not an obligation_trigger");
    }
    return n;
}

std::optional<Modality> string_modality(const Value* v) {
    if (v && v->is_string()) return parse_modality(v->as_string());
    return std::nullopt;
}

Modality trigger_modality(const Graph& graph, const NodeRecord& n) {
    for (const auto* e : graph.out_edges(n.id, "deontic_modality")) {
        if (auto m = string_modality(e->prop("type"))) return *m;
    }
    for (const auto* e : graph.in_edges(n.id, "deontic_modality")) {
        if (auto m = string_modality(e->prop("type"))) return *m;
    }
    if (auto m = string_modality(n.prop("modality"))) return *m;
    auto colon = n.label.find(':');
    if (colon != std::string::npos) {
        if (auto m = parse_modality(n.label.substr(0, colon))) return *m;
    }
    return Modality::obligation;
}

constexpr const char* kWindowEdges[] = {"during", "on", "recurring", "temporal", "temporal_modifier"};

// Edge that takes part in resolution for this context.
bool edge_live(const EdgeRecord& e, const EvalContext& ctx) {
    if (e.base.status != Status::active) return false;
    if (e.base.temporal_validity && ctx.instant && !in_window(*ctx.instant, *e.base.temporal_validity)) return false;
    return true;
}

// Regions of a jurisdiction and of every location nested inside it.
std::vector<Region> covering_regions(const Graph& graph, const NodeId& jurisdiction) {
    std::vector<Region> out;
    std::set<NodeId, NaturalLess> seen{jurisdiction};
    std::deque<NodeId> queue{jurisdiction};
    while (!queue.empty()) {
        NodeId cur = queue.front();
        queue.pop_front();
        if (auto r = node_region(graph.node(cur))) out.push_back(std::move(*r));
        for (const auto* e : graph.in_edges(cur, "location_predicate")) {
            const Value* t = e->prop("type");
            if (!t || !t->is_string() || parse_spatial_kind(t->as_string()) != SpatialKind::within) continue;
            if (seen.insert(e->src).second) queue.push_back(e->src);
        }
    }
    return out;
}

} // namespace

DeonticTrigger describe_trigger(const Graph& graph, std::string_view id) {
    const NodeRecord& n = trigger_node(graph, id);
    DeonticTrigger t;
    t.id = n.id;
    t.label = n.label;
    t.modality = trigger_modality(graph, n);

    std::set<NodeId, NaturalLess> holders;
    for (const char* type : {"deontic_modality", "performed_by"}) {
        for (const auto* e : graph.out_edges(n.id, type)) {
            if (Graph::has_type(graph.node(e->dst), "party")) holders.insert(e->dst);
        }
    }
    t.holders.assign(holders.begin(), holders.end());

    std::vector<ExprTree> parts;
    std::set<NodeId, NaturalLess> seen_roots;
    for (const char* type : {"if_true", "if_false"}) {
        for (const auto* e : graph.out_edges(n.id, type)) {
            const NodeRecord& dst = graph.node(e->dst);
            if (!is_condition_node(dst)) continue;
            if (!seen_roots.insert(std::string(type) + ":" + dst.id).second) continue;
            ExprTree tree = build_tree(graph, dst.id);
            parts.push_back(std::string_view(type) == "if_true" ? std::move(tree) : ExprTree::negate(std::move(tree)));
        }
    }
    if (parts.size() == 1) t.condition = std::move(parts.front());
    else if (parts.size() > 1) t.condition = ExprTree::all_of(std::move(parts));

    t.jurisdictions = trigger_jurisdictions(graph, n.id);

    for (const char* type : kWindowEdges) {
        for (const auto* e : graph.out_edges(n.id, type)) {
            const Value* w = graph.node(e->dst).prop("window");
            if (w && w->get_if<TimeWindow>()) t.windows.push_back(*w->get_if<TimeWindow>());
        }
    }
    return t;
}

namespace {

std::optional<std::string> check_applicable(const Graph& graph, const DeonticTrigger& t, const EvalContext& ctx) {
    const NodeRecord& n = graph.node(t.id);
    if (n.base.status != Status::active) return "status " + std::string(to_string(n.base.status));

    if (ctx.party && !t.holders.empty()) {
        bool covered = false;
        for (const auto& h : t.holders) {
            if (holder_covers(graph, h, *ctx.party, ctx.instant)) {
                covered = true;
                break;
            }
        }
        if (!covered) return "party " + *ctx.party + " is not a holder";
    }

    if (ctx.position && !t.jurisdictions.empty()) {
        bool inside = false;
        for (const auto& j : t.jurisdictions) {
            auto regions = covering_regions(graph, j);
            if (regions.empty()) {
                throw Error(ErrorCode::UnresolvableLeaf,
                            "jurisdiction " + j + " of " + t.id + " has no boundary to test the position against");
            }
            for (const auto& r : regions) {
                if (contains(r, *ctx.position)) {
                    inside = true;
                    break;
                }
            }
            if (inside) break;
        }
        if (!inside) return "position outside jurisdiction";
    }

    if (ctx.instant && !t.windows.empty()) {
        bool any = std::any_of(t.windows.begin(), t.windows.end(),
                               [&](const TimeWindow& w) { return in_window(*ctx.instant, w); });
        if (!any) return "instant outside time windows";
    }

    if (t.condition && !evaluate(*t.condition, ctx, graph)) return "condition false";
    return std::nullopt;
}

// Shortest live paths of one edge type from src to every reachable node,
// passing only through nodes in `through`. Ties go to lower edge ids.
std::map<NodeId, std::vector<EdgeId>, NaturalLess> reach(const Graph& graph, const NodeId& src,
                                                         std::string_view type,
                                                         const std::set<NodeId, NaturalLess>& through,
                                                         const EvalContext& ctx) {
    std::map<NodeId, std::vector<EdgeId>, NaturalLess> paths;
    std::deque<NodeId> queue{src};
    std::map<NodeId, std::vector<EdgeId>, NaturalLess> trail{{src, {}}};
    while (!queue.empty()) {
        NodeId cur = queue.front();
        queue.pop_front();
        for (const auto* e : graph.out_edges(cur, type)) {
            if (!edge_live(*e, ctx)) continue;
            if (trail.contains(e->dst)) continue;
            auto route = trail[cur];
            route.push_back(e->id);
            trail[e->dst] = route;
            paths[e->dst] = route;
            if (through.contains(e->dst)) queue.push_back(e->dst);
        }
    }
    return paths;
}

void check_acyclic(const Graph& graph, std::string_view type, const std::set<NodeId, NaturalLess>& nodes,
                   const EvalContext& ctx) {
    enum class Color { grey, black };
    std::map<NodeId, Color, NaturalLess> color;
    std::vector<NodeId> stack;
    std::function<void(const NodeId&)> visit = [&](const NodeId& id) {
        color[id] = Color::grey;
        stack.push_back(id);
        for (const auto* e : graph.out_edges(id, type)) {
            if (!edge_live(*e, ctx) || !nodes.contains(e->dst)) continue;
            auto it = color.find(e->dst);
            if (it == color.end()) {
                visit(e->dst);
            } else if (it->second == Color::grey) {
                auto start = std::find(stack.begin(), stack.end(), e->dst);
                std::string cycle;
                for (auto s = start; s != stack.end(); ++s) cycle += *s + " -> ";
                throw Error(ErrorCode::DefeasibilityCycle,
                            std::string(type) + " cycle among applicable triggers: " + cycle + e->dst);
            }
        }
        stack.pop_back();
        color[id] = Color::black;
    };
    for (const auto& n : nodes) {
        if (!color.contains(n)) visit(n);
    }
}

std::string join(const std::vector<EdgeId>& ids) {
    std::string out;
    for (const auto& id : ids) {
        if (!out.empty()) out += ",";
        out += id;
    }
    return out;
}

double precedence_level(const EdgeRecord& e) {
    const Value* v = e.prop("level");
    return v && v->is_number() ? v->as_number() : 0.0;
}

std::set<NodeId, NaturalLess> what_targets(const Graph& graph, const NodeId& id) {
    std::set<NodeId, NaturalLess> out;
    for (const auto* e : graph.out_edges(id, "whatRel")) out.insert(e->dst);
    return out;
}

} // namespace

std::optional<std::string> inapplicable_reason(const Graph& graph, std::string_view trigger, const EvalContext& ctx) {
    return check_applicable(graph, describe_trigger(graph, trigger), ctx);
}

bool applicable(const Graph& graph, std::string_view trigger, const EvalContext& ctx) {
    return !inapplicable_reason(graph, trigger, ctx);
}

Ruling resolve(const Graph& graph, const EvalContext& ctx, const std::optional<std::vector<NodeId>>& scope) {
    Ruling ruling;
    auto& trace = ruling.explanation;

    std::set<NodeId, NaturalLess> gathered;
    if (scope) {
        for (const auto& id : *scope) gathered.insert(trigger_node(graph, id).id);
    } else {
        for (const auto* n : graph.nodes()) {
            if (is_trigger(*n)) gathered.insert(n->id);
        }
    }

    std::map<NodeId, DeonticTrigger, NaturalLess> triggers;
    std::set<NodeId, NaturalLess> applicable_set;
    for (const auto& id : gathered) {
        DeonticTrigger t = describe_trigger(graph, id);
        auto reason = check_applicable(graph, t, ctx);
        if (reason) {
            trace.push_back("EVAL " + id + " not applicable: " + *reason);
        } else {
            trace.push_back("EVAL " + id + " applicable");
            applicable_set.insert(id);
        }
        triggers.emplace(id, std::move(t));
    }

    check_acyclic(graph, "exception", applicable_set, ctx);
    check_acyclic(graph, "override", applicable_set, ctx);

    auto record = [&](const NodeId& loser, const NodeId& by, DefeatReason reason, std::vector<EdgeId> via) {
        trace.push_back("DEFEAT " + loser + " by " + by + " " + std::string(to_string(reason)) + " via " + join(via));
        ruling.defeated.push_back({loser, by, reason, std::move(via)});
    };

    // Exceptions: every applicable trigger defeats what it reaches.
    std::set<NodeId, NaturalLess> excepted;
    std::vector<Defeat> pending;
    for (const auto& y : applicable_set) {
        for (auto& [x, via] : reach(graph, y, "exception", applicable_set, ctx)) {
            if (!applicable_set.contains(x) || x == y) continue;
            excepted.insert(x);
            pending.push_back({x, y, DefeatReason::excepted, std::move(via)});
        }
    }
    std::set<NodeId, NaturalLess> survivors;
    for (const auto& id : applicable_set) {
        if (!excepted.contains(id)) survivors.insert(id);
    }

    // Overrides: only survivors defeat, and only survivors are defeated.
    std::set<NodeId, NaturalLess> overridden;
    for (const auto& y : survivors) {
        for (auto& [x, via] : reach(graph, y, "override", applicable_set, ctx)) {
            if (!survivors.contains(x) || x == y) continue;
            overridden.insert(x);
            pending.push_back({x, y, DefeatReason::overridden, std::move(via)});
        }
    }
    std::set<NodeId, NaturalLess> remaining;
    for (const auto& id : survivors) {
        if (!overridden.contains(id)) remaining.insert(id);
    }

    // Precedence: the strongest edge of each connected pair decides.
    struct Strongest {
        double level;
        const EdgeRecord* edge;
    };
    std::map<std::pair<NodeId, NodeId>, Strongest> strongest;
    for (const auto& a : remaining) {
        for (const auto* e : graph.out_edges(a, "precedence")) {
            if (!edge_live(*e, ctx) || !remaining.contains(e->dst) || e->dst == a) continue;
            auto key = std::make_pair(a, e->dst);
            double level = precedence_level(*e);
            auto it = strongest.find(key);
            if (it == strongest.end() || level > it->second.level) strongest[key] = {level, e};
        }
    }
    std::set<NodeId, NaturalLess> outranked;
    std::set<std::pair<NodeId, NodeId>> visited_pairs;
    for (const auto& [key, s] : strongest) {
        auto [a, b] = key;
        auto canonical = NaturalLess{}(a, b) ? std::make_pair(a, b) : std::make_pair(b, a);
        if (!visited_pairs.insert(canonical).second) continue;
        auto reverse = strongest.find({b, a});
        if (reverse == strongest.end() || s.level > reverse->second.level) {
            outranked.insert(b);
            pending.push_back({b, a, DefeatReason::precedence, {s.edge->id}});
        } else if (reverse->second.level > s.level) {
            outranked.insert(a);
            pending.push_back({a, b, DefeatReason::precedence, {reverse->second.edge->id}});
        } else {
            trace.push_back("WARN precedence tie between " + canonical.first + " and " + canonical.second +
                            " at level " + format_number(s.level) + "; both kept");
        }
    }

    std::stable_sort(pending.begin(), pending.end(), [](const Defeat& l, const Defeat& r) {
        if (l.reason != r.reason) return l.reason < r.reason;
        if (l.loser != r.loser) return NaturalLess{}(l.loser, r.loser);
        return NaturalLess{}(l.by, r.by);
    });
    for (auto& d : pending) record(d.loser, d.by, d.reason, std::move(d.via));

    for (const auto& id : remaining) {
        if (outranked.contains(id)) continue;
        ruling.winners.push_back(id);
        trace.push_back("WINNER " + id + " [" + std::string(to_string(triggers.at(id).modality)) + "]");
    }

    for (std::size_t i = 0; i < ruling.winners.size(); ++i) {
        for (std::size_t j = i + 1; j < ruling.winners.size(); ++j) {
            const auto& a = triggers.at(ruling.winners[i]);
            const auto& b = triggers.at(ruling.winners[j]);
            if (!opposing(a.modality, b.modality)) continue;
            auto wa = what_targets(graph, a.id);
            auto wb = what_targets(graph, b.id);
            bool shared = wa.empty() || wb.empty() ||
                          std::any_of(wa.begin(), wa.end(), [&](const NodeId& w) { return wb.contains(w); });
            if (!shared) continue;
            ruling.conflicts.emplace_back(a.id, b.id);
            trace.push_back("CONFLICT " + a.id + " [" + std::string(to_string(a.modality)) + "] vs " + b.id + " [" +
                            std::string(to_string(b.modality)) + "]");
        }
    }
    return ruling;
}

std::vector<NodeId> consequences(const Graph& graph, std::string_view antecedent, Outcome outcome) {
    graph.node(antecedent);
    const char* type = outcome == Outcome::satisfied ? "if_true" : outcome == Outcome::unsatisfied ? "if_false" : "if_late";
    std::set<NodeId, NaturalLess> out;
    for (const auto* e : graph.out_edges(antecedent, type)) out.insert(e->dst);
    return {out.begin(), out.end()};
}

std::vector<UnmetPrerequisite> check_prerequisites(const Graph& graph, std::string_view trigger,
                                                   const std::set<NodeId, NaturalLess>& satisfied) {
    graph.node(trigger);
    std::vector<UnmetPrerequisite> out;
    std::set<NodeId, NaturalLess> seen;
    for (const auto* e : graph.in_edges(trigger, "prerequisite")) {
        if (satisfied.contains(e->src) || !seen.insert(e->src).second) continue;
        UnmetPrerequisite u{e->src, e->id, std::nullopt};
        if (const Value* g = e->prop("grace_period")) {
            if (const auto* m = g->get_if<Minutes>()) u.grace_period = *m;
        }
        out.push_back(std::move(u));
    }
    std::sort(out.begin(), out.end(),
              [](const UnmetPrerequisite& a, const UnmetPrerequisite& b) { return NaturalLess{}(a.node, b.node); });
    return out;
}

std::vector<std::pair<NodeId, NodeId>> check_mutual_exclusivity(const Graph& graph,
                                                                const std::set<NodeId, NaturalLess>& active) {
    std::set<std::pair<NodeId, NodeId>> seen;
    std::vector<std::pair<NodeId, NodeId>> out;
    for (const auto& a : active) {
        if (!graph.find_node(a)) continue;
        for (const auto* e : graph.out_edges(a, "mutual_exclusivity")) {
            if (!active.contains(e->dst) || e->dst == a) continue;
            auto pair = NaturalLess{}(a, e->dst) ? std::make_pair(a, e->dst) : std::make_pair(e->dst, a);
            if (seen.insert(pair).second) out.push_back(pair);
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) {
        if (l.first != r.first) return NaturalLess{}(l.first, r.first);
        return NaturalLess{}(l.second, r.second);
    });
    return out;
}

std::string ruling_to_json(const Graph& graph, const Ruling& ruling) {
    using nlohmann::json;
    json doc;
    doc["winners"] = json::array();
    for (const auto& id : ruling.winners) {
        const NodeRecord& n = graph.node(id);
        doc["winners"].push_back({{"id", id},
                                  {"label", n.label},
                                  {"modality", std::string(to_string(trigger_modality(graph, n)))}});
    }
    doc["defeated"] = json::array();
    for (const auto& d : ruling.defeated) {
        doc["defeated"].push_back(
            {{"loser", d.loser}, {"by", d.by}, {"reason", std::string(to_string(d.reason))}, {"via", d.via}});
    }
    doc["conflicts"] = json::array();
    for (const auto& [a, b] : ruling.conflicts) doc["conflicts"].push_back({a, b});
    doc["trace"] = ruling.explanation;
    return doc.dump(2);
}

} // namespace olgpp
