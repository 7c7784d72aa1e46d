#include "olgpp/schema.hpp"

#include "olgpp/error.hpp"
#include "scanner.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

namespace olgpp {

// Defined in the generated builtin_schema.cpp.
std::string_view builtin_schema_source();

namespace {

std::optional<Value::Kind> parse_kind(std::string_view text) {
    static const std::pair<std::string_view, Value::Kind> table[] = {
        {"string", Value::Kind::string},   {"number", Value::Kind::number},
        {"boolean", Value::Kind::boolean}, {"list", Value::Kind::list},
        {"instant", Value::Kind::instant}, {"window", Value::Kind::window},
        {"duration", Value::Kind::duration}, {"point", Value::Kind::point},
        {"polygon", Value::Kind::polygon},
    };
    for (const auto& [name, kind] : table) {
        if (name == text) return kind;
    }
    return std::nullopt;
}

std::vector<std::string> string_list(const Value& v, std::string_view what) {
    if (!v.is_list()) throw Error(ErrorCode::SchemaError, std::string(what) + " must be a list");
    std::vector<std::string> out;
    for (const auto& item : v.as_list()) {
        if (!item.is_string()) throw Error(ErrorCode::SchemaError, std::string(what) + " must list names");
        out.push_back(item.as_string());
    }
    return out;
}

std::map<std::string, std::set<Value::Kind>> kind_list(const Value& v) {
    std::map<std::string, std::set<Value::Kind>> out;
    for (const auto& entry : string_list(v, "kinds")) {
        auto eq = entry.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::SchemaError, "kinds entry '" + entry + "' lacks '='");
        std::string prop = entry.substr(0, eq);
        std::string rest = entry.substr(eq + 1);
        std::size_t start = 0;
        while (start <= rest.size()) {
            auto bar = rest.find('|', start);
            auto name = rest.substr(start, bar == std::string::npos ? std::string::npos : bar - start);
            auto kind = parse_kind(name);
            if (!kind) throw Error(ErrorCode::SchemaError, "unknown value kind '" + name + "'");
            out[prop].insert(*kind);
            if (bar == std::string::npos) break;
            start = bar + 1;
        }
    }
    return out;
}

EndpointRef parse_endpoint(const std::string& text) {
    if (text == "*") return {};
    auto slash = text.find('/');
    if (slash == std::string::npos) return {text, std::nullopt};
    return {text.substr(0, slash), text.substr(slash + 1)};
}

template <class F>
void for_each_prop(const detail::ScannedProps& props, F&& f) {
    for (const auto& [key, lit] : props) f(key, lit.value);
}

std::string kinds_text(const std::set<Value::Kind>& kinds) {
    std::string out;
    for (auto k : kinds) {
        if (!out.empty()) out += "|";
        out += to_string(k);
    }
    return out;
}

std::string describe_node(const NodeRecord& n) {
    return n.node_type + (n.subtype ? "/" + *n.subtype : std::string{});
}

std::string endpoint_rule(const EdgeTypeDef& def) {
    auto side = [](const std::vector<EndpointRef>& refs) {
        std::string out;
        for (const auto& r : refs) {
            if (!out.empty()) out += "|";
            out += r.to_string();
        }
        return out;
    };
    return def.name + ": " + side(def.src) + " -> " + side(def.dst);
}

} // namespace

bool EndpointRef::matches(const NodeRecord& node) const {
    if (type.empty()) return true;
    if (normalize_type_name(node.node_type) != normalize_type_name(type)) return false;
    if (!subtype) return true;
    return node.subtype && normalize_type_name(*node.subtype) == normalize_type_name(*subtype);
}

std::string EndpointRef::to_string() const {
    if (type.empty()) return "*";
    return subtype ? type + "/" + *subtype : type;
}

TypeSchema TypeSchema::parse(std::string_view text) {
    detail::Scanner in(text);
    TypeSchema schema;
    if (in.at_end()) in.fail("schema header required");
    if (in.identifier("'schema' header") != "schema") {
        in.fail_at(1, 1, "schema file must start with a 'schema' header");
    }
    in.name("schema name");
    auto header = in.props();
    for (const auto& [key, lit] : header) {
        if (key == "version" && lit.value.is_string()) schema.version_ = lit.value.as_string();
    }
    if (schema.version_.empty()) in.fail("schema header needs a nonempty version");

    struct PendingSubtype {
        std::string type, subtype;
        detail::ScannedProps props;
        std::size_t line;
    };
    std::vector<PendingSubtype> pending;

    while (!in.at_end()) {
        std::size_t line = in.line(), col = in.column();
        std::string keyword = in.identifier("record keyword");
        try {
            if (keyword == "node") {
                std::string name = in.name("node type");
                detail::ScannedProps props;
                if (in.peek() == '{') props = in.props();
                auto slash = name.find('/');
                if (slash != std::string::npos) {
                    pending.push_back({name.substr(0, slash), name.substr(slash + 1), std::move(props), line});
                    continue;
                }
                if (schema.nodes_.contains(name)) throw Error(ErrorCode::SchemaError, "duplicate node type '" + name + "'");
                NodeTypeDef def;
                def.name = name;
                for_each_prop(props, [&](const std::string& key, const Value& v) {
                    if (key == "subtypes") {
                        if (v.is_string() && v.as_string() == "*") {
                            def.open_subtypes = true;
                        } else {
                            for (auto& s : string_list(v, "subtypes")) def.subtypes.insert(s);
                        }
                    } else if (key == "required") {
                        def.required = string_list(v, "required");
                    } else if (key == "kinds") {
                        def.kinds = kind_list(v);
                    } else {
                        throw Error(ErrorCode::SchemaError, "unknown node attribute '" + key + "'");
                    }
                });
                schema.nodes_.emplace(name, std::move(def));
            } else if (keyword == "edge") {
                std::string name = in.name("edge type");
                detail::ScannedProps props;
                if (in.peek() == '{') props = in.props();
                if (schema.edges_.contains(name)) throw Error(ErrorCode::SchemaError, "duplicate edge type '" + name + "'");
                EdgeTypeDef def;
                def.name = name;
                for_each_prop(props, [&](const std::string& key, const Value& v) {
                    if (key == "src" || key == "dst") {
                        auto& side = key == "src" ? def.src : def.dst;
                        for (const auto& s : string_list(v, key)) side.push_back(parse_endpoint(s));
                    } else if (key == "required") {
                        def.required = string_list(v, "required");
                    } else if (key == "kinds") {
                        def.kinds = kind_list(v);
                    } else if (key == "acyclic") {
                        if (v.is_bool()) {
                            def.acyclic = v.as_bool();
                        } else if (v.is_string() && v.as_string().starts_with("type=")) {
                            def.acyclic = true;
                            def.acyclic_when_type = v.as_string().substr(5);
                        } else {
                            throw Error(ErrorCode::SchemaError, "acyclic must be a boolean or \"type=<value>\"");
                        }
                    } else {
                        throw Error(ErrorCode::SchemaError, "unknown edge attribute '" + key + "'");
                    }
                });
                if (def.src.empty() || def.dst.empty()) {
                    throw Error(ErrorCode::SchemaError, "edge type '" + name + "' needs src and dst endpoint rules");
                }
                schema.edges_.emplace(name, std::move(def));
            } else if (keyword == "alias") {
                std::string alias = in.name("alias");
                std::string target = in.name("alias target");
                schema.aliases_[alias] = target;
            } else {
                in.fail_at(line, col, "unknown record '" + keyword + "'");
            }
        } catch (const SyntaxError&) {
            throw;
        } catch (const Error& e) {
            throw Error(ErrorCode::SchemaError, "schema line " + std::to_string(line) + ": " + e.what());
        }
    }

    auto schema_error = [](std::size_t line, const std::string& msg) {
        return Error(ErrorCode::SchemaError, "schema line " + std::to_string(line) + ": " + msg);
    };

    for (auto& p : pending) {
        auto it = schema.nodes_.find(p.type);
        if (it == schema.nodes_.end()) throw schema_error(p.line, "subtype rule for unknown type '" + p.type + "'");
        auto& def = it->second;
        if (!def.open_subtypes && !def.subtypes.contains(p.subtype)) {
            throw schema_error(p.line, "'" + p.subtype + "' is not a subtype of '" + p.type + "'");
        }
        for (const auto& [key, lit] : p.props) {
            if (key == "required") {
                auto& req = def.required_by_subtype[p.subtype];
                for (auto& r : string_list(lit.value, "required")) req.push_back(r);
            } else if (key == "kinds") {
                for (auto& [prop, kinds] : kind_list(lit.value)) def.kinds[prop].insert(kinds.begin(), kinds.end());
            } else {
                throw schema_error(p.line, "unknown subtype attribute '" + key + "'");
            }
        }
    }

    for (const auto& [name, def] : schema.edges_) {
        for (const auto* side : {&def.src, &def.dst}) {
            for (const auto& ref : *side) {
                if (ref.type.empty()) continue;
                auto it = schema.nodes_.find(ref.type);
                if (it == schema.nodes_.end()) {
                    throw Error(ErrorCode::SchemaError, "edge '" + name + "' names unknown node type '" + ref.type + "'");
                }
                if (ref.subtype && !it->second.open_subtypes && !it->second.subtypes.contains(*ref.subtype)) {
                    throw Error(ErrorCode::SchemaError, "edge '" + name + "' names unknown subtype '" + ref.to_string() + "'");
                }
            }
        }
    }
    for (const auto& [alias, target] : schema.aliases_) {
        if (!schema.edges_.contains(target)) {
            throw Error(ErrorCode::SchemaError, "alias '" + alias + "' targets unknown edge type '" + target + "'");
        }
    }
    return schema;
}

TypeSchema TypeSchema::load(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw Error(ErrorCode::SchemaError, "cannot read schema file '" + path.string() + "'");
    std::ostringstream buf;
    buf << file.rdbuf();
    return parse(buf.str());
}

std::string_view TypeSchema::builtin_text() {
    return builtin_schema_source();
}

const TypeSchema& TypeSchema::builtin() {
    static const TypeSchema schema = parse(builtin_schema_source());
    return schema;
}

const NodeTypeDef* TypeSchema::node_type(std::string_view name) const {
    auto wanted = normalize_type_name(name);
    for (const auto& [key, def] : nodes_) {
        if (normalize_type_name(key) == wanted) return &def;
    }
    return nullptr;
}

const EdgeTypeDef* TypeSchema::edge_type(std::string_view name) const {
    auto wanted = normalize_type_name(name);
    for (const auto& [key, def] : edges_) {
        if (normalize_type_name(key) == wanted) return &def;
    }
    for (const auto& [alias, target] : aliases_) {
        if (normalize_type_name(alias) == wanted) return &edges_.at(target);
    }
    return nullptr;
}

Vocabulary TypeSchema::vocabulary() const {
    Vocabulary v;
    for (const auto& [name, def] : nodes_) v.add_node_type(name);
    for (const auto& [name, def] : edges_) v.add_edge_type(name);
    for (const auto& [alias, target] : aliases_) v.add_edge_alias(alias, target);
    return v;
}

std::string_view to_string(ViolationKind kind) {
    switch (kind) {
    case ViolationKind::MissingProp: return "MissingProp";
    case ViolationKind::BadEndpoint: return "BadEndpoint";
    case ViolationKind::UnknownType: return "UnknownType";
    case ViolationKind::CycleWhereForbidden: return "CycleWhereForbidden";
    case ViolationKind::BadValueKind: return "BadValueKind";
    case ViolationKind::DegenerateRegion: return "DegenerateRegion";
    case ViolationKind::InconsistentContainment: return "InconsistentContainment";
    }
    return "?";
}

namespace {

void check_props(const PropertyMap& props, const std::vector<std::string>& required,
                 const std::map<std::string, std::set<Value::Kind>>& kinds, const std::string& subject,
                 const std::string& type_text, std::vector<Violation>& out) {
    for (const auto& key : required) {
        if (!props.contains(key)) {
            out.push_back({ViolationKind::MissingProp, subject,
                           type_text + " " + subject + " lacks required property '" + key + "'"});
        }
    }
    for (const auto& [key, value] : props) {
        if (!value.homogeneous()) {
            out.push_back({ViolationKind::BadValueKind, subject,
                           type_text + " " + subject + ": property '" + key + "' is a heterogeneous list"});
            continue;
        }
        auto it = kinds.find(key);
        if (it != kinds.end() && !it->second.contains(value.kind())) {
            out.push_back({ViolationKind::BadValueKind, subject,
                           type_text + " " + subject + ": property '" + key + "' must be " +
                               kinds_text(it->second) + ", got " + std::string(to_string(value.kind()))});
        }
    }
}

bool has_type_prop(const EdgeRecord& e, std::string_view type) {
    const Value* t = e.prop("type");
    return t && t->is_string() && normalize_type_name(t->as_string()) == normalize_type_name(type);
}

bool participates(const EdgeRecord& e, const EdgeTypeDef& def) {
    return !def.acyclic_when_type || has_type_prop(e, *def.acyclic_when_type);
}

// One violation per edge that closes a cycle in a DFS over the edge type.
void find_cycles(const Graph& graph, const EdgeTypeDef& def, std::vector<Violation>& out) {
    enum class Color { white, grey, black };
    std::map<std::string, Color, NaturalLess> color;
    std::function<void(const std::string&)> visit = [&](const std::string& id) {
        color[id] = Color::grey;
        for (const auto* e : graph.out_edges(id, def.name)) {
            if (!participates(*e, def) || !graph.find_node(e->dst)) continue;
            Color c = color.contains(e->dst) ? color[e->dst] : Color::white;
            if (c == Color::grey) {
                out.push_back({ViolationKind::CycleWhereForbidden, e->id,
                               "edge " + e->id + " (" + def.name + ") closes a cycle through " + e->dst +
                                   "; " + def.name + " must be acyclic"});
            } else if (c == Color::white) {
                visit(e->dst);
            }
        }
        color[id] = Color::black;
    };
    for (const auto* n : graph.nodes()) {
        if (!color.contains(n->id)) visit(n->id);
    }
}

std::optional<Region> boundary_region(const NodeRecord& n) {
    const Value* b = n.prop("boundary");
    if (!b) return std::nullopt;
    const Polygon* poly = b->get_if<Polygon>();
    if (!poly) return std::nullopt;
    try {
        return Region::make(*poly, n.label.empty() ? n.id : n.label);
    } catch (const Error&) {
        return std::nullopt;  // reported by ingest geometry checks
    }
}

} // namespace

std::vector<Violation> validate_graph(const Graph& graph, const TypeSchema& schema) {
    std::vector<Violation> out;

    for (const auto* n : graph.nodes()) {
        const NodeTypeDef* def = schema.node_type(n->node_type);
        if (!def) {
            out.push_back({ViolationKind::UnknownType, n->id, "node " + n->id + " has unknown type '" + n->node_type + "'"});
            continue;
        }
        if (n->subtype && !def->open_subtypes && !def->subtypes.contains(*n->subtype)) {
            out.push_back({ViolationKind::UnknownType, n->id,
                           "node " + n->id + ": '" + *n->subtype + "' is not a subtype of " + def->name});
        }
        std::vector<std::string> required = def->required;
        if (n->subtype) {
            auto it = def->required_by_subtype.find(*n->subtype);
            if (it != def->required_by_subtype.end()) required.insert(required.end(), it->second.begin(), it->second.end());
        }
        check_props(n->props, required, def->kinds, n->id, describe_node(*n), out);
    }

    for (const auto* e : graph.edges()) {
        const EdgeTypeDef* def = schema.edge_type(e->edge_type);
        if (!def) {
            out.push_back({ViolationKind::UnknownType, e->id, "edge " + e->id + " has unknown type '" + e->edge_type + "'"});
            continue;
        }
        const NodeRecord* src = graph.find_node(e->src);
        const NodeRecord* dst = graph.find_node(e->dst);
        if (!src || !dst) {
            out.push_back({ViolationKind::BadEndpoint, e->id,
                           "edge " + e->id + " (" + def->name + ") has a missing endpoint"});
            continue;
        }
        auto allowed = [](const std::vector<EndpointRef>& refs, const NodeRecord& n) {
            return std::any_of(refs.begin(), refs.end(), [&](const EndpointRef& r) { return r.matches(n); });
        };
        if (!allowed(def->src, *src)) {
            out.push_back({ViolationKind::BadEndpoint, e->id,
                           "edge " + e->id + " (" + def->name + ") source " + src->id + " is " + describe_node(*src) +
                               "; rule " + endpoint_rule(*def)});
        }
        if (!allowed(def->dst, *dst)) {
            out.push_back({ViolationKind::BadEndpoint, e->id,
                           "edge " + e->id + " (" + def->name + ") target " + dst->id + " is " + describe_node(*dst) +
                               "; rule " + endpoint_rule(*def)});
        }
        check_props(e->props, def->required, def->kinds, e->id, "edge(" + def->name + ")", out);

        // Asserted containment must agree with geometry when both exist.
        if (def->name == "location_predicate" && has_type_prop(*e, "within")) {
            auto outer = boundary_region(*dst);
            if (outer) {
                auto inner = boundary_region(*src);
                const Value* pos = src->prop("position");
                bool disagree = false;
                if (inner) {
                    disagree = !region_within(*inner, *outer);
                } else if (pos && pos->get_if<GeoPoint>()) {
                    disagree = !contains(*outer, *pos->get_if<GeoPoint>());
                }
                if (disagree) {
                    out.push_back({ViolationKind::InconsistentContainment, e->id,
                                   "edge " + e->id + " asserts " + src->id + " within " + dst->id +
                                       " but the geometry disagrees"});
                }
            }
        }
    }

    for (const auto& [name, def] : schema.edge_types()) {
        if (def.acyclic) find_cycles(graph, def, out);
    }

    std::stable_sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
        if (a.subject != b.subject) return NaturalLess{}(a.subject, b.subject);
        return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    });
    return out;
}

std::vector<NodeId> subclass_ancestors(const Graph& graph, std::string_view node) {
    graph.node(node);  // MissingNode
    // Cycle check over everything reachable, then BFS for nearest-first order.
    enum class Color { white, grey, black };
    std::map<std::string, Color, NaturalLess> color;
    std::function<void(const std::string&)> visit = [&](const std::string& id) {
        color[id] = Color::grey;
        for (const auto* e : graph.out_edges(id, "subclass_of")) {
            auto it = color.find(e->dst);
            if (it != color.end() && it->second == Color::grey) {
                throw Error(ErrorCode::SubclassCycle, "subclass_of cycle through '" + e->dst + "' (edge " + e->id + ")");
            }
            if (it == color.end()) visit(e->dst);
        }
        color[id] = Color::black;
    };
    visit(std::string(node));

    std::vector<NodeId> out;
    std::set<std::string, NaturalLess> seen{std::string(node)};
    std::vector<std::string> frontier{std::string(node)};
    while (!frontier.empty()) {
        std::vector<std::string> next;
        for (const auto& id : frontier) {
            for (const auto* e : graph.out_edges(id, "subclass_of")) {
                if (seen.insert(e->dst).second) next.push_back(e->dst);
            }
        }
        std::sort(next.begin(), next.end(), NaturalLess{});
        out.insert(out.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    return out;
}

} // namespace olgpp
