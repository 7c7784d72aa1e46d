#include "support.hpp"

#include "olgpp/schema.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#ifndef OLGPP_FIXTURE_DIR
#error "OLGPP_FIXTURE_DIR must point at the fixtures directory"
#endif

namespace olgpp::test {

std::filesystem::path fixture_path(const std::string& name) {
    return std::filesystem::path(OLGPP_FIXTURE_DIR) / name;
}

BuildResult load_fixture(const std::string& name) {
    return build_graph(load_document(fixture_path(name)), TypeSchema::builtin());
}

ContextSpec load_context(const std::string& name) {
    return parse_context(read_file(fixture_path(name)));
}

std::string fixture_text(const std::string& name) {
    return read_file(fixture_path(name));
}

namespace {

int uniform(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool chance(Rng& rng, double p) {
    return std::bernoulli_distribution(p)(rng);
}

} // namespace

// ---------------------------------------------------------------- resolver

ResolverCase random_resolver_case(Rng& rng, bool acyclic) {
    ResolverCase c;
    c.graph = Graph(TypeSchema::builtin().vocabulary());
    int n = uniform(rng, 1, 6);
    for (int i = 1; i <= n; ++i) {
        std::string id = "t" + std::to_string(i);
        c.triggers.push_back(id);
        c.graph.add_node(NodeSpec{.id = id, .node_type = "obligation_trigger", .label = "rule " + id});
    }

    // Applicability: a trigger with a condition applies iff its fact holds.
    std::vector<bool> has_condition(n), fact(n);
    for (int i = 0; i < n; ++i) {
        has_condition[i] = chance(rng, 0.7);
        fact[i] = chance(rng, 0.6);
    }
    if (!acyclic) {
        // The injected cycle needs applicable members.
        for (int i = 0; i < std::min(n, 2); ++i) fact[i] = true;
    }
    for (int i = 0; i < n; ++i) {
        const std::string& id = c.triggers[i];
        if (has_condition[i]) {
            std::string cond = "c" + std::to_string(i + 1);
            std::string name = "f" + std::to_string(i + 1);
            c.graph.add_node(NodeSpec{.id = cond, .node_type = "condition", .props = {{"fact", Value(name)}}});
            c.graph.add_edge(EdgeSpec{.src = id, .dst = cond, .edge_type = "if_true"});
            c.ctx.facts[name] = fact[i];
        }
        if (!has_condition[i] || fact[i]) c.applicable.insert(id);
    }

    // Exception and override links respect a random rank, which keeps them
    // acyclic; precedence links are unconstrained.
    std::vector<int> rank(n);
    for (int i = 0; i < n; ++i) rank[i] = i;
    std::shuffle(rank.begin(), rank.end(), rng);
    int links = uniform(rng, 0, acyclic ? 6 : 3);
    for (int k = 0; k < links && n > 1; ++k) {
        int a = uniform(rng, 0, n - 1), b = uniform(rng, 0, n - 1);
        if (a == b) continue;
        int kind = uniform(rng, 0, 2);
        ResolverCase::Link link;
        link.type = kind == 0 ? "exception" : kind == 1 ? "override" : "precedence";
        if (kind < 2 && rank[a] < rank[b]) std::swap(a, b);
        link.src = c.triggers[a];
        link.dst = c.triggers[b];
        if (kind == 2) link.level = uniform(rng, 1, 3);
        c.links.push_back(link);
    }
    if (!acyclic) {
        std::string type = chance(rng, 0.5) ? "exception" : "override";
        if (n == 1) {
            c.links.push_back({type, c.triggers[0], c.triggers[0], 0});
        } else {
            c.links.push_back({type, c.triggers[0], c.triggers[1], 0});
            c.links.push_back({type, c.triggers[1], c.triggers[0], 0});
        }
    }
    for (const auto& l : c.links) {
        EdgeSpec e{.src = l.src, .dst = l.dst, .edge_type = l.type};
        if (l.type == "precedence") e.props["level"] = Value(l.level);
        c.graph.add_edge(std::move(e));
    }
    return c;
}

OracleRuling resolve_oracle(const ResolverCase& c) {
    OracleRuling out;
    std::vector<std::string> s1(c.applicable.begin(), c.applicable.end());
    std::size_t m = s1.size();
    auto index = [&](const std::string& id) -> std::optional<std::size_t> {
        auto it = std::find(s1.begin(), s1.end(), id);
        if (it == s1.end()) return std::nullopt;
        return static_cast<std::size_t>(it - s1.begin());
    };
    // Warshall closure of one link type over the subgraph induced by S1.
    auto closure = [&](const std::string& type) {
        std::vector<std::vector<bool>> r(m, std::vector<bool>(m, false));
        for (const auto& l : c.links) {
            if (l.type != type) continue;
            auto a = index(l.src), b = index(l.dst);
            if (a && b) r[*a][*b] = true;
        }
        for (std::size_t k = 0; k < m; ++k)
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j)
                    if (r[i][k] && r[k][j]) r[i][j] = true;
        return r;
    };
    auto exc = closure("exception");
    auto ovr = closure("override");
    for (std::size_t i = 0; i < m; ++i) {
        if (exc[i][i] || ovr[i][i]) out.cycle = true;
    }
    if (out.cycle) return out;

    std::set<std::string> excepted;
    for (std::size_t y = 0; y < m; ++y)
        for (std::size_t x = 0; x < m; ++x)
            if (x != y && exc[y][x]) {
                excepted.insert(s1[x]);
                out.defeats.emplace(s1[x], s1[y], DefeatReason::excepted);
            }
    std::set<std::string> s2;
    for (const auto& id : s1)
        if (!excepted.contains(id)) s2.insert(id);

    std::set<std::string> overridden;
    for (std::size_t y = 0; y < m; ++y)
        for (std::size_t x = 0; x < m; ++x)
            if (x != y && ovr[y][x] && s2.contains(s1[y]) && s2.contains(s1[x])) {
                overridden.insert(s1[x]);
                out.defeats.emplace(s1[x], s1[y], DefeatReason::overridden);
            }
    std::set<std::string> s3;
    for (const auto& id : s2)
        if (!overridden.contains(id)) s3.insert(id);

    std::set<std::string> outranked;
    for (const auto& a : s3) {
        for (const auto& b : s3) {
            if (!(a < b)) continue;
            std::optional<double> ab, ba;
            for (const auto& l : c.links) {
                if (l.type != "precedence") continue;
                if (l.src == a && l.dst == b) ab = std::max(ab.value_or(l.level), l.level);
                if (l.src == b && l.dst == a) ba = std::max(ba.value_or(l.level), l.level);
            }
            if (!ab && !ba) continue;
            double la = ab.value_or(-1e300), lb = ba.value_or(-1e300);
            if (la > lb) {
                outranked.insert(b);
                out.defeats.emplace(b, a, DefeatReason::precedence);
            } else if (lb > la) {
                outranked.insert(a);
                out.defeats.emplace(a, b, DefeatReason::precedence);
            }
        }
    }
    for (const auto& id : s3)
        if (!outranked.contains(id)) out.winners.insert(id);
    return out;
}

// ---------------------------------------------------------------- query

namespace {

const char* const kLabels[] = {"a", "b", "c", "d"};
const char* const kKeys[] = {"k", "m"};
const char* const kValues[] = {"u", "v"};

std::string quote(const std::string& s) {
    return "'" + s + "'";
}

} // namespace

QueryCase random_query_case(Rng& rng) {
    QueryCase c;
    Vocabulary vocab;
    for (const char* t : {"a", "b", "c"}) vocab.add_node_type(t);
    for (const char* t : {"r", "s"}) vocab.add_edge_type(t);
    c.graph = Graph(vocab);

    int n = uniform(rng, 1, 30);
    std::vector<std::string> ids;
    for (int i = 1; i <= n; ++i) {
        NodeSpec spec;
        spec.id = "v" + std::to_string(i);
        spec.node_type = kLabels[uniform(rng, 0, 2)];
        if (spec.node_type == "a" && chance(rng, 0.4)) spec.subtype = "d";
        for (const char* k : kKeys) {
            if (chance(rng, 0.6)) spec.props[k] = Value(kValues[uniform(rng, 0, 1)]);
        }
        ids.push_back(c.graph.add_node(std::move(spec)));
    }
    int edges = uniform(rng, 0, 2 * n);
    for (int i = 1; i <= edges; ++i) {
        EdgeSpec spec;
        spec.id = "x" + std::to_string(i);
        spec.src = ids[uniform(rng, 0, n - 1)];
        spec.dst = ids[uniform(rng, 0, n - 1)];
        spec.edge_type = chance(rng, 0.5) ? "r" : "s";
        c.graph.add_edge(std::move(spec));
    }

    // Query: node variables n0..n3, joined by reuse.
    std::vector<std::string> bound;
    int next_var = 0, next_edge = 0;
    auto pick_node = [&]() {
        OracleNode node;
        if (!bound.empty() && (next_var >= 4 || chance(rng, 0.45))) {
            node.var = bound[uniform(rng, 0, static_cast<int>(bound.size()) - 1)];
        } else {
            node.var = "n" + std::to_string(next_var++);
            bound.push_back(node.var);
        }
        if (chance(rng, 0.4)) node.label = kLabels[uniform(rng, 0, 3)];
        if (chance(rng, 0.2)) node.prop = {kKeys[uniform(rng, 0, 1)], kValues[uniform(rng, 0, 1)]};
        return node;
    };
    int paths = uniform(rng, 1, 3);
    for (int p = 0; p < paths; ++p) {
        OraclePath path;
        path.nodes.push_back(pick_node());
        int len = uniform(rng, p == 0 ? 1 : 0, 2);
        for (int i = 0; i < len; ++i) {
            OracleEdge e;
            if (chance(rng, 0.3)) e.var = "e" + std::to_string(next_edge++);
            if (chance(rng, 0.7)) e.type = chance(rng, 0.5) ? "r" : "s";
            int d = uniform(rng, 0, 2);
            e.direction = d == 0 ? EdgeDirection::out : d == 1 ? EdgeDirection::in : EdgeDirection::either;
            path.edges.push_back(e);
            path.nodes.push_back(pick_node());
        }
        c.paths.push_back(std::move(path));
    }
    int filters = uniform(rng, 0, 2);
    for (int f = 0; f < filters; ++f) {
        OracleFilter flt;
        flt.var = bound[uniform(rng, 0, static_cast<int>(bound.size()) - 1)];
        int kind = uniform(rng, 0, 2);
        if (kind == 2) {
            flt.kind = OracleFilter::Kind::not_exists;
            flt.edge_type = chance(rng, 0.5) ? "r" : "s";
            flt.label = kLabels[uniform(rng, 0, 3)];
            flt.inner_prop = chance(rng, 0.4);
            flt.key = kKeys[uniform(rng, 0, 1)];
            flt.value = kValues[uniform(rng, 0, 1)];
        } else {
            flt.kind = kind == 0 ? OracleFilter::Kind::prop_eq : OracleFilter::Kind::prop_ne;
            flt.key = kKeys[uniform(rng, 0, 1)];
            flt.value = kValues[uniform(rng, 0, 1)];
        }
        c.filters.push_back(std::move(flt));
    }

    c.returned = bound;
    for (const auto& p : c.paths)
        for (const auto& e : p.edges)
            if (!e.var.empty()) c.returned.push_back(e.var);

    std::ostringstream q;
    q << "MATCH ";
    for (std::size_t p = 0; p < c.paths.size(); ++p) {
        if (p) q << ", ";
        const auto& path = c.paths[p];
        auto node_text = [&](const OracleNode& node) {
            q << "(" << node.var;
            if (node.label) q << ":" << *node.label;
            if (node.prop) q << " {" << node.prop->first << ": " << quote(node.prop->second) << "}";
            q << ")";
        };
        node_text(path.nodes[0]);
        for (std::size_t i = 0; i < path.edges.size(); ++i) {
            const auto& e = path.edges[i];
            std::string inner = e.var + (e.type ? ":" + *e.type : "");
            if (e.direction == EdgeDirection::in) q << "<-[" << inner << "]-";
            else if (e.direction == EdgeDirection::out) q << "-[" << inner << "]->";
            else q << "-[" << inner << "]-";
            node_text(path.nodes[i + 1]);
        }
    }
    if (!c.filters.empty()) {
        q << "\nWHERE ";
        for (std::size_t f = 0; f < c.filters.size(); ++f) {
            if (f) q << " AND ";
            const auto& flt = c.filters[f];
            switch (flt.kind) {
            case OracleFilter::Kind::prop_eq: q << flt.var << "." << flt.key << " = " << quote(flt.value); break;
            case OracleFilter::Kind::prop_ne: q << flt.var << "." << flt.key << " <> " << quote(flt.value); break;
            case OracleFilter::Kind::not_exists: {
                std::string w = "w" + std::to_string(f);
                q << "NOT EXISTS { MATCH (" << flt.var << ")-[:" << flt.edge_type << "]->(" << w << ":" << flt.label
                  << ")";
                if (flt.inner_prop) q << " WHERE " << w << "." << flt.key << " = " << quote(flt.value);
                q << " }";
                break;
            }
            }
        }
    }
    q << "\nRETURN ";
    for (std::size_t i = 0; i < c.returned.size(); ++i) q << (i ? ", " : "") << c.returned[i];
    c.text = q.str();
    return c;
}

std::vector<std::vector<std::string>> query_oracle(const QueryCase& c) {
    std::vector<const NodeRecord*> nodes = c.graph.nodes();
    std::vector<const EdgeRecord*> edges = c.graph.edges();

    std::vector<std::string> vars;
    for (const auto& p : c.paths)
        for (const auto& n : p.nodes)
            if (std::find(vars.begin(), vars.end(), n.var) == vars.end()) vars.push_back(n.var);

    auto has_label = [](const NodeRecord& n, const std::string& label) {
        return n.node_type == label || (n.subtype && *n.subtype == label);
    };
    auto prop_is = [](const NodeRecord& n, const std::string& key, const std::string& value) {
        auto it = n.props.find(key);
        return it != n.props.end() && it->second.is_string() && it->second.as_string() == value;
    };
    auto prop_differs = [](const NodeRecord& n, const std::string& key, const std::string& value) {
        auto it = n.props.find(key);
        return it != n.props.end() && it->second.is_string() && it->second.as_string() != value;
    };
    auto edge_fits = [](const EdgeRecord& e, const OracleEdge& pat, const std::string& a, const std::string& b) {
        if (pat.type && e.edge_type != *pat.type) return false;
        switch (pat.direction) {
        case EdgeDirection::out: return e.src == a && e.dst == b;
        case EdgeDirection::in: return e.src == b && e.dst == a;
        case EdgeDirection::either: return (e.src == a && e.dst == b) || (e.src == b && e.dst == a);
        }
        return false;
    };

    std::vector<std::vector<std::string>> rows;
    std::map<std::string, const NodeRecord*> assign;

    auto node_ok = [&](const OracleNode& pn, const NodeRecord& n) {
        if (pn.label && !has_label(n, *pn.label)) return false;
        if (pn.prop && !prop_is(n, pn.prop->first, pn.prop->second)) return false;
        return true;
    };

    auto finish = [&]() {
        for (const auto& f : c.filters) {
            const NodeRecord& n = *assign.at(f.var);
            if (f.kind == OracleFilter::Kind::prop_eq && !prop_is(n, f.key, f.value)) return;
            if (f.kind == OracleFilter::Kind::prop_ne && !prop_differs(n, f.key, f.value)) return;
            if (f.kind == OracleFilter::Kind::not_exists) {
                for (const auto* e : edges) {
                    if (e->edge_type != f.edge_type || e->src != n.id) continue;
                    const NodeRecord& w = c.graph.node(e->dst);
                    if (!has_label(w, f.label)) continue;
                    if (f.inner_prop && !prop_is(w, f.key, f.value)) continue;
                    return;
                }
            }
        }
        // Each pattern edge contributes every parallel edge that fits.
        std::vector<std::vector<const EdgeRecord*>> choices;
        std::vector<std::string> edge_vars;
        for (const auto& p : c.paths) {
            for (std::size_t i = 0; i < p.edges.size(); ++i) {
                const std::string& a = assign.at(p.nodes[i].var)->id;
                const std::string& b = assign.at(p.nodes[i + 1].var)->id;
                std::vector<const EdgeRecord*> fit;
                for (const auto* e : edges)
                    if (edge_fits(*e, p.edges[i], a, b)) fit.push_back(e);
                if (fit.empty()) return;
                choices.push_back(std::move(fit));
                edge_vars.push_back(p.edges[i].var);
            }
        }
        std::vector<std::size_t> pick(choices.size(), 0);
        while (true) {
            std::map<std::string, std::string> value;
            for (const auto& [v, n] : assign) value[v] = n->id;
            for (std::size_t i = 0; i < choices.size(); ++i)
                if (!edge_vars[i].empty()) value[edge_vars[i]] = choices[i][pick[i]]->id;
            std::vector<std::string> row;
            for (const auto& r : c.returned) row.push_back(value.at(r));
            rows.push_back(std::move(row));
            std::size_t k = 0;
            while (k < pick.size() && ++pick[k] == choices[k].size()) pick[k++] = 0;
            if (k == pick.size()) break;
        }
    };

    std::function<void(std::size_t)> assign_var = [&](std::size_t i) {
        if (i == vars.size()) {
            finish();
            return;
        }
        for (const auto* n : nodes) {
            bool ok = true;
            for (const auto& p : c.paths)
                for (const auto& pn : p.nodes)
                    if (pn.var == vars[i] && !node_ok(pn, *n)) ok = false;
            if (!ok) continue;
            assign[vars[i]] = n;
            assign_var(i + 1);
            assign.erase(vars[i]);
        }
    };
    assign_var(0);
    std::sort(rows.begin(), rows.end());
    return rows;
}

std::vector<std::vector<std::string>> sorted_rows(const ResultTable& t) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : t.rows) {
        std::vector<std::string> row;
        for (const auto& cell : r) row.push_back(cell ? cell->to_display() : std::string("<null>"));
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end());
    return rows;
}

// ---------------------------------------------------------------- geometry

std::vector<GeoPoint> random_convex_polygon(Rng& rng) {
    std::uniform_real_distribution<double> centre(-100.0, 100.0), radius(1.0, 50.0),
        angle(0.0, 2 * std::numbers::pi);
    while (true) {
        int k = uniform(rng, 3, 12);
        double cx = centre(rng), cy = centre(rng), r = radius(rng);
        std::vector<double> a(k);
        for (auto& x : a) x = angle(rng);
        std::sort(a.begin(), a.end());
        std::vector<GeoPoint> poly;
        for (double t : a) poly.push_back({cx + r * std::cos(t), cy + r * std::sin(t)});
        // Reject near-degenerate draws (repeated angles, collinear runs).
        double area = 0;
        bool sharp = true;
        for (int i = 0; i < k; ++i) {
            const GeoPoint& p = poly[i];
            const GeoPoint& q = poly[(i + 1) % k];
            const GeoPoint& s = poly[(i + 2) % k];
            area += p.x * q.y - q.x * p.y;
            double turn = (q.x - p.x) * (s.y - q.y) - (q.y - p.y) * (s.x - q.x);
            if (turn <= 1e-6) sharp = false;
        }
        if (area / 2 > 1.0 && sharp) return poly;
    }
}

std::optional<bool> convex_oracle(const std::vector<GeoPoint>& poly, GeoPoint p, double band) {
    bool inside = true;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const GeoPoint& a = poly[i];
        const GeoPoint& b = poly[(i + 1) % poly.size()];
        double dx = b.x - a.x, dy = b.y - a.y;
        double len2 = dx * dx + dy * dy;
        double t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
        double ex = a.x + t * dx - p.x, ey = a.y + t * dy - p.y;
        if (std::sqrt(ex * ex + ey * ey) <= band) return std::nullopt;
        if (dx * (p.y - a.y) - dy * (p.x - a.x) < 0) inside = false;
    }
    return inside;
}

// ---------------------------------------------------------------- logic

bool residential_truth(unsigned mask) {
    bool c1 = mask & 1u, c2 = mask & 2u, c3 = mask & 4u, c4 = mask & 8u;
    return (c1 && c2) || (c3 && c4);
}

} // namespace olgpp::test
