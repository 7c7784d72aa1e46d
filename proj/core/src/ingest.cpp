#include "olgpp/ingest.hpp"

#include "olgpp/error.hpp"
#include "scanner.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace olgpp {

namespace {

using detail::ScannedLiteral;
using detail::ScannedProps;
using detail::Scanner;

struct Position {
    std::size_t line = 1;
    std::size_t column = 1;
};

[[noreturn]] void fail(Position at, const std::string& message) {
    throw SyntaxError(at.line, at.column, message);
}

Date to_date(const Value& v, Position at, std::string_view key) {
    if (const Instant* t = v.get_if<Instant>()) {
        return Date{std::chrono::floor<std::chrono::days>(*t)};
    }
    if (v.is_string()) {
        try {
            Instant t = parse_instant(v.as_string());
            return Date{std::chrono::floor<std::chrono::days>(t)};
        } catch (const Error&) {
        }
    }
    fail(at, "'" + std::string(key) + "' must be date(YYYY-MM-DD)");
}

// Routes one property to the record: base properties and the label are
// lifted out, everything else stays in the map.
void apply_prop(const std::string& key, const ScannedLiteral& lit, std::string* label, PropertyMap& props,
                BaseProps& base, Position at) {
    const Value& v = lit.value;
    if (key == "label" && label) {
        if (!v.is_string()) fail(at, "'label' must be a string");
        *label = v.as_string();
    } else if (key == "created_date") {
        base.created_date = to_date(v, at, key);
    } else if (key == "modified_date") {
        base.modified_date = to_date(v, at, key);
    } else if (key == "status") {
        auto s = v.is_string() ? parse_status(v.as_string()) : std::nullopt;
        if (!s) fail(at, "'status' must be active, superseded or draft");
        base.status = *s;
    } else if (key == "temporal_validity") {
        const TimeWindow* w = v.get_if<TimeWindow>();
        if (!w) fail(at, "'temporal_validity' must be a time window");
        base.temporal_validity = *w;
    } else {
        if (!v.homogeneous()) fail(at, "list property '" + key + "' mixes element kinds");
        props[key] = v;
    }
    if (!lit.raw.empty()) {
        Value::List raw;
        if (auto it = props.find("raw"); it != props.end() && it->second.is_list()) raw = it->second.as_list();
        raw.emplace_back(key + "=" + lit.raw);
        props["raw"] = Value(std::move(raw));
    }
}

void check_dates(const BaseProps& base, const std::string& id, Position at) {
    if (base.modified_date < base.created_date) {
        fail(at, id + ": modified_date precedes created_date");
    }
}


struct ParseState {
    RuleDocument doc;
    std::map<std::string, Position, NaturalLess> node_at;
    std::set<std::string, NaturalLess> edge_ids;
    std::vector<Position> edge_at;

    void add_node(NodeSpec spec, Position at) {
        check_dates(spec.base, *spec.id, at);
        if (!node_at.emplace(*spec.id, at).second) {
            throw Error(ErrorCode::DuplicateNodeId, std::to_string(at.line) + ":" + std::to_string(at.column) +
                                                        ": duplicate node id '" + *spec.id + "'");
        }
        doc.nodes.push_back(std::move(spec));
    }

    void add_edge(EdgeSpec spec, Position at) {
        std::string shown = spec.id ? *spec.id : "edge";
        check_dates(spec.base, shown, at);
        if (spec.id && (!edge_ids.insert(*spec.id).second || node_at.contains(*spec.id))) {
            throw Error(ErrorCode::DuplicateId, std::to_string(at.line) + ":" + std::to_string(at.column) +
                                                    ": duplicate edge id '" + *spec.id + "'");
        }
        doc.edges.push_back(std::move(spec));
        edge_at.push_back(at);
    }

    RuleDocument finish() {
        for (std::size_t i = 0; i < doc.edges.size(); ++i) {
            const auto& e = doc.edges[i];
            for (const auto* end : {&e.src, &e.dst}) {
                if (!node_at.contains(*end)) {
                    fail(edge_at[i], "edge " + (e.id ? *e.id : std::string("_")) + " references undeclared node '" +
                                         *end + "'");
                }
            }
            if (e.id && node_at.contains(*e.id)) {
                throw Error(ErrorCode::DuplicateId, "edge id '" + *e.id + "' is also a node id");
            }
        }
        return std::move(doc);
    }
};

void split_type(const std::string& written, std::string& type, std::optional<std::string>& subtype) {
    auto slash = written.find('/');
    if (slash == std::string::npos) {
        type = written;
        subtype.reset();
    } else {
        type = written.substr(0, slash);
        subtype = written.substr(slash + 1);
    }
}

RuleDocument parse_text(std::string_view text) {
    Scanner in(text);
    ParseState state;
    if (in.at_end()) in.fail("document header required");
    Position head{in.line(), in.column()};
    if (!in.peek_identifier() || in.identifier("'document' header") != "document") {
        fail(head, "a rule document must start with a 'document' header");
    }
    auto& meta = state.doc.meta;
    meta.name = in.name("document name");
    Position props_at{in.line(), in.column()};
    if (in.peek() == '{') {
        for (const auto& [key, lit] : in.props()) {
            if (!lit.value.is_string()) fail(props_at, "document '" + key + "' must be a string");
            const std::string& s = lit.value.as_string();
            if (key == "version") meta.version = s;
            else if (key == "source") meta.source = s;
            else if (key == "comments") meta.comments = s;
            else fail(props_at, "unknown document attribute '" + key + "'");
        }
    }
    if (meta.version.empty()) fail(head, "document header needs a nonempty version");

    while (!in.at_end()) {
        Position at{in.line(), in.column()};
        std::string keyword = in.identifier("'node', 'edge' or 'origin'");
        if (keyword == "origin") {
            if (state.doc.origin) fail(at, "origin declared twice");
            Origin o;
            bool lat = false, lon = false;
            for (const auto& [key, lit] : in.props()) {
                if (!lit.value.is_number() || !lit.raw.empty()) fail(at, "origin '" + key + "' must be a plain number");
                if (key == "lat") {
                    o.lat = lit.value.as_number();
                    lat = true;
                } else if (key == "long" || key == "lon") {
                    o.lon = lit.value.as_number();
                    lon = true;
                } else {
                    fail(at, "unknown origin attribute '" + key + "'");
                }
            }
            if (!lat || !lon) fail(at, "origin needs lat and long");
            state.doc.origin = o;
        } else if (keyword == "node") {
            NodeSpec spec;
            spec.id = in.name("node id");
            split_type(in.name("node type"), spec.node_type, spec.subtype);
            if (in.peek() == '{') {
                Position p{in.line(), in.column()};
                for (const auto& [key, lit] : in.props()) apply_prop(key, lit, &spec.label, spec.props, spec.base, p);
            }
            state.add_node(std::move(spec), at);
        } else if (keyword == "edge") {
            EdgeSpec spec;
            std::string id = in.name("edge id or _");
            if (id != "_") spec.id = id;
            spec.edge_type = in.name("edge type");
            spec.src = in.name("source node id");
            in.expect("->", "between edge endpoints");
            spec.dst = in.name("target node id");
            if (in.peek() == '{') {
                Position p{in.line(), in.column()};
                for (const auto& [key, lit] : in.props()) apply_prop(key, lit, nullptr, spec.props, spec.base, p);
            }
            state.add_edge(std::move(spec), at);
        } else if (keyword == "document") {
            fail(at, "only one document header is allowed");
        } else {
            fail(at, "unknown record '" + keyword + "'; expected node, edge or origin");
        }
    }
    return state.finish();
}

// ---- JSON form ----

using nlohmann::json;

ScannedLiteral json_literal(const json& j, const std::string& where) {
    Position at{1, 1};
    switch (j.type()) {
    case json::value_t::string: return {Value(j.get<std::string>()), {}};
    case json::value_t::boolean: return {Value(j.get<bool>()), {}};
    case json::value_t::number_integer:
    case json::value_t::number_unsigned:
    case json::value_t::number_float: return {Value(j.get<double>()), {}};
    case json::value_t::array: {
        Value::List items;
        for (const auto& item : j) items.push_back(json_literal(item, where).value);
        return {Value(std::move(items)), {}};
    }
    case json::value_t::object: {
        if (j.size() == 1 && j.contains("$literal") && j["$literal"].is_string()) {
            std::string text = j["$literal"].get<std::string>();
            Scanner in(text);
            ScannedLiteral lit = in.literal();
            if (!in.at_end()) fail(at, where + ": trailing text in $literal '" + text + "'");
            return lit;
        }
        fail(at, where + ": objects must be {\"$literal\": \"...\"}");
    }
    default: fail(at, where + ": unsupported JSON value");
    }
}

std::string json_string(const json& obj, const char* key, const std::string& where, bool required) {
    if (!obj.contains(key)) {
        if (required) fail({1, 1}, where + " needs \"" + key + "\"");
        return {};
    }
    if (!obj[key].is_string()) fail({1, 1}, where + ": \"" + key + "\" must be a string");
    return obj[key].get<std::string>();
}

RuleDocument parse_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // Byte offset to line/column.
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw SyntaxError(line, col, "invalid JSON document");
    }
    if (!j.is_object()) fail({1, 1}, "a JSON document must be an object");
    ParseState state;
    if (!j.contains("document") || !j["document"].is_object()) fail({1, 1}, "\"document\" header object required");
    const json& head = j["document"];
    auto& meta = state.doc.meta;
    meta.name = json_string(head, "name", "document", true);
    meta.version = json_string(head, "version", "document", true);
    meta.source = json_string(head, "source", "document", false);
    meta.comments = json_string(head, "comments", "document", false);
    if (meta.version.empty()) fail({1, 1}, "document header needs a nonempty version");

    if (j.contains("origin")) {
        const json& o = j["origin"];
        auto num = [&](const char* k) -> double {
            if (!o.contains(k) || !o[k].is_number()) fail({1, 1}, std::string("origin needs numeric ") + k);
            return o[k].get<double>();
        };
        state.doc.origin = Origin{num("lat"), o.contains("long") ? num("long") : num("lon")};
    }

    auto props_of = [](const json& obj, const std::string& where, std::string* label, PropertyMap& props,
                       BaseProps& base) {
        if (!obj.contains("props")) return;
        if (!obj["props"].is_object()) fail({1, 1}, where + ": \"props\" must be an object");
        for (const auto& [key, value] : obj["props"].items()) {
            apply_prop(key, json_literal(value, where + "." + key), label, props, base, {1, 1});
        }
    };

    if (j.contains("nodes")) {
        for (const auto& n : j["nodes"]) {
            NodeSpec spec;
            spec.id = json_string(n, "id", "node", true);
            std::string where = "node " + *spec.id;
            spec.node_type = json_string(n, "type", where, true);
            std::string sub = json_string(n, "subtype", where, false);
            if (!sub.empty()) spec.subtype = sub;
            spec.label = json_string(n, "label", where, false);
            props_of(n, where, &spec.label, spec.props, spec.base);
            state.add_node(std::move(spec), {1, 1});
        }
    }
    if (j.contains("edges")) {
        for (const auto& e : j["edges"]) {
            EdgeSpec spec;
            std::string id = json_string(e, "id", "edge", false);
            if (!id.empty() && id != "_") spec.id = id;
            std::string where = "edge " + (id.empty() ? std::string("_") : id);
            spec.edge_type = json_string(e, "type", where, true);
            spec.src = json_string(e, "src", where, true);
            spec.dst = json_string(e, "dst", where, true);
            props_of(e, where, nullptr, spec.props, spec.base);
            state.add_edge(std::move(spec), {1, 1});
        }
    }
    return state.finish();
}

// ---- serialization ----

bool bare_safe(std::string_view s) {
    if (s.empty() || s == "_" || s == "true" || s == "false") return false;
    if (!(std::isalnum(static_cast<unsigned char>(s.front())) || s.front() == '_')) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '/';
    });
}

std::string name_text(std::string_view s) {
    return bare_safe(s) ? std::string(s) : quote_string(s);
}

std::string date_text(Date d) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "date(%04d-%02u-%02u)", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

std::string props_text(const std::string* label, const PropertyMap& props, const BaseProps& base) {
    std::vector<std::string> parts;
    if (label && !label->empty()) parts.push_back("label: " + quote_string(*label));
    const BaseProps defaults;
    if (base.created_date != defaults.created_date) parts.push_back("created_date: " + date_text(base.created_date));
    if (base.modified_date != defaults.modified_date) parts.push_back("modified_date: " + date_text(base.modified_date));
    if (base.status != defaults.status) parts.push_back("status: " + std::string(to_string(base.status)));
    if (base.temporal_validity) parts.push_back("temporal_validity: " + format_window(*base.temporal_validity));
    for (const auto& [key, value] : props) parts.push_back(name_text(key) + ": " + value.to_literal());
    if (parts.empty()) return {};
    std::string out = " {";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ", ";
        out += parts[i];
    }
    return out + "}";
}

} // namespace

RuleDocument parse_document(std::string_view text) {
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') return parse_json(text);
    return parse_text(text);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidValue, "cannot read '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

RuleDocument load_document(const std::filesystem::path& path) {
    return parse_document(read_file(path));
}

std::string serialize_document(const RuleDocument& doc) {
    std::string out = "document " + quote_string(doc.meta.name) + " {version: " + quote_string(doc.meta.version);
    if (!doc.meta.source.empty()) out += ", source: " + quote_string(doc.meta.source);
    if (!doc.meta.comments.empty()) out += ", comments: " + quote_string(doc.meta.comments);
    out += "}\n";
    if (doc.origin) {
        out += "origin {lat: " + format_number(doc.origin->lat) + ", long: " + format_number(doc.origin->lon) + "}\n";
    }
    if (!doc.nodes.empty()) out += "\n";
    for (const auto& n : doc.nodes) {
        std::string type = n.node_type + (n.subtype ? "/" + *n.subtype : "");
        out += "node " + name_text(n.id.value_or("")) + " " + name_text(type) + props_text(&n.label, n.props, n.base) +
               "\n";
    }
    if (!doc.edges.empty()) out += "\n";
    for (const auto& e : doc.edges) {
        out += "edge " + (e.id ? name_text(*e.id) : std::string("_")) + " " + name_text(e.edge_type) + " " +
               name_text(e.src) + " -> " + name_text(e.dst) + props_text(nullptr, e.props, e.base) + "\n";
    }
    return out;
}

namespace {

bool is_reified_predicate(const NodeSpec& n) {
    bool typed = normalize_type_name(n.node_type) == "locationpredicate" ||
                 (normalize_type_name(n.node_type) == "location" && n.subtype &&
                  normalize_type_name(*n.subtype) == "locationpredicate");
    const Value* from = n.props.contains("from") ? &n.props.at("from") : nullptr;
    const Value* to = n.props.contains("to") ? &n.props.at("to") : nullptr;
    return typed && from && to && from->is_string() && to->is_string();
}

std::optional<double> number_prop(const PropertyMap& props, std::string_view key) {
    auto it = props.find(key);
    if (it == props.end() || !it->second.is_number()) return std::nullopt;
    return it->second.as_number();
}

void check_geometry(const std::string& subject, const PropertyMap& props, std::vector<Violation>& out) {
    for (const auto& [key, value] : props) {
        const Polygon* poly = value.get_if<Polygon>();
        if (!poly) continue;
        try {
            Region::make(*poly, subject);
        } catch (const Error& e) {
            out.push_back({ViolationKind::DegenerateRegion, subject,
                           subject + ": property '" + key + "' is not a usable region: " + e.what()});
        }
    }
}

} // namespace

BuildResult build_graph(const RuleDocument& doc, const TypeSchema& schema) {
    Vocabulary vocabulary = schema.vocabulary();
    std::vector<NodeSpec> nodes;
    std::vector<EdgeSpec> edges;

    for (const auto& n : doc.nodes) {
        if (is_reified_predicate(n)) {
            EdgeSpec e;
            e.id = n.id;
            e.edge_type = "location_predicate";
            e.src = n.props.at("from").as_string();
            e.dst = n.props.at("to").as_string();
            e.props = n.props;
            e.props.erase("from");
            e.props.erase("to");
            if (!n.label.empty()) e.props["label"] = Value(n.label);
            e.base = n.base;
            edges.push_back(std::move(e));
            continue;
        }
        NodeSpec copy = n;
        if (doc.origin && !copy.props.contains("position")) {
            auto lat = number_prop(copy.props, "lat");
            auto lon = number_prop(copy.props, "long");
            if (!lon) lon = number_prop(copy.props, "lon");
            if (lat && lon) {
                copy.props["position"] = Value(project_latlong(*lat, *lon, doc.origin->lat, doc.origin->lon));
            }
        }
        nodes.push_back(std::move(copy));
    }
    edges.insert(edges.end(), doc.edges.begin(), doc.edges.end());

    for (const auto& n : nodes) {
        if (!vocabulary.resolve_node_type(n.node_type)) vocabulary.add_node_type(n.node_type);
    }
    for (const auto& e : edges) {
        if (!vocabulary.resolve_edge_type(e.edge_type)) vocabulary.add_edge_type(e.edge_type);
    }

    BuildResult result{Graph(std::move(vocabulary)), {}};
    std::vector<Violation> extra;
    for (auto& n : nodes) {
        std::string id = n.id.value_or("");
        check_geometry(id.empty() ? "node" : id, n.props, extra);
        try {
            result.graph.add_node(std::move(n));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::InvalidValue) throw;
            extra.push_back({ViolationKind::BadValueKind, id, e.what()});
        }
    }
    for (auto& e : edges) {
        std::string id = e.id.value_or("");
        check_geometry(id.empty() ? "edge" : id, e.props, extra);
        try {
            result.graph.add_edge(std::move(e));
        } catch (const Error& err) {
            if (err.code() == ErrorCode::MissingEndpoint) {
                extra.push_back({ViolationKind::BadEndpoint, id, err.what()});
            } else if (err.code() == ErrorCode::InvalidValue) {
                extra.push_back({ViolationKind::BadValueKind, id, err.what()});
            } else {
                throw;
            }
        }
    }

    result.violations = validate_graph(result.graph, schema);
    result.violations.insert(result.violations.end(), extra.begin(), extra.end());
    std::stable_sort(result.violations.begin(), result.violations.end(), [](const Violation& a, const Violation& b) {
        if (a.subject != b.subject) return NaturalLess{}(a.subject, b.subject);
        return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    });
    return result;
}

ContextSpec parse_context(std::string_view text) {
    Scanner in(text);
    ContextSpec spec;
    if (!in.at_end() && in.peek_identifier()) {
        // Optional header.
        Scanner probe = in;
        if (probe.identifier("keyword") == "context") {
            in.identifier("keyword");
            if (!in.at_end() && (in.peek() == '"' || in.peek() == '\'')) in.name("context name");
        }
    }
    while (!in.at_end()) {
        Position at{in.line(), in.column()};
        std::string keyword = in.identifier("context entry");
        if (keyword == "party") {
            spec.context.party = in.name("party id");
        } else if (keyword == "position") {
            Value v = in.literal().value;
            const GeoPoint* p = v.get_if<GeoPoint>();
            if (!p) fail(at, "position must be point(x,y)");
            if (!std::isfinite(p->x) || !std::isfinite(p->y)) fail(at, "position must be finite");
            spec.context.position = *p;
        } else if (keyword == "instant") {
            Value v = in.literal().value;
            const Instant* t = v.get_if<Instant>();
            if (!t) fail(at, "instant must be at(YYYY-MM-DDTHH:MM)");
            spec.context.instant = *t;
        } else if (keyword == "fact") {
            std::string name = in.name("fact name");
            if (name.empty()) fail(at, "fact names must be nonempty");
            Value v = in.literal().value;
            if (!v.is_bool()) fail(at, "fact '" + name + "' must be true or false");
            spec.context.facts[name] = v.as_bool();
        } else if (keyword == "scope") {
            Value v = in.literal().value;
            if (!v.is_list()) fail(at, "scope must be a list of trigger ids");
            std::vector<NodeId> ids;
            for (const auto& item : v.as_list()) {
                if (!item.is_string()) fail(at, "scope entries must be ids");
                ids.push_back(item.as_string());
            }
            spec.scope = std::move(ids);
        } else {
            fail(at, "unknown context entry '" + keyword + "'");
        }
    }
    return spec;
}

} // namespace olgpp
