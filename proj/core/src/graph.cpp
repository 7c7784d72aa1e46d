#include "olgpp/graph.hpp"

#include "olgpp/error.hpp"

#include <algorithm>
#include <cctype>

namespace olgpp {

bool NaturalLess::operator()(std::string_view a, std::string_view b) const {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        bool da = std::isdigit(static_cast<unsigned char>(a[i]));
        bool db = std::isdigit(static_cast<unsigned char>(b[j]));
        if (da && db) {
            std::size_t si = i, sj = j;
            while (si < a.size() && a[si] == '0') ++si;
            while (sj < b.size() && b[sj] == '0') ++sj;
            std::size_t ei = si, ej = sj;
            while (ei < a.size() && std::isdigit(static_cast<unsigned char>(a[ei]))) ++ei;
            while (ej < b.size() && std::isdigit(static_cast<unsigned char>(b[ej]))) ++ej;
            std::size_t li = ei - si, lj = ej - sj;
            if (li != lj) return li < lj;
            int c = a.substr(si, li).compare(b.substr(sj, lj));
            if (c != 0) return c < 0;
            i = ei;
            j = ej;
            continue;
        }
        if (a[i] != b[j]) return static_cast<unsigned char>(a[i]) < static_cast<unsigned char>(b[j]);
        ++i;
        ++j;
    }
    if ((a.size() - i) != (b.size() - j)) return (a.size() - i) < (b.size() - j);
    // Equal under the numeric reading ("n01" vs "n1"): fall back to bytes.
    return a < b;
}

std::string normalize_type_name(std::string_view name) {
    std::string out;
    out.reserve(name.size());
    for (char c : name) {
        if (c == '_' || c == '-') continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

std::string_view to_string(Status status) {
    switch (status) {
    case Status::active: return "active";
    case Status::superseded: return "superseded";
    case Status::draft: return "draft";
    }
    return "?";
}

std::optional<Status> parse_status(std::string_view text) {
    if (text == "active") return Status::active;
    if (text == "superseded") return Status::superseded;
    if (text == "draft") return Status::draft;
    return std::nullopt;
}

const Value* NodeRecord::prop(std::string_view key) const {
    auto it = props.find(key);
    return it == props.end() ? nullptr : &it->second;
}

const Value* EdgeRecord::prop(std::string_view key) const {
    auto it = props.find(key);
    return it == props.end() ? nullptr : &it->second;
}

void Vocabulary::add_node_type(std::string_view canonical) {
    node_types[normalize_type_name(canonical)] = std::string(canonical);
}

void Vocabulary::add_edge_type(std::string_view canonical) {
    edge_types[normalize_type_name(canonical)] = std::string(canonical);
}

void Vocabulary::add_edge_alias(std::string_view alias, std::string_view canonical) {
    edge_types[normalize_type_name(alias)] = std::string(canonical);
}

std::optional<std::string> Vocabulary::resolve_node_type(std::string_view name) const {
    auto it = node_types.find(normalize_type_name(name));
    if (it == node_types.end()) return std::nullopt;
    return it->second;
}

std::optional<std::string> Vocabulary::resolve_edge_type(std::string_view name) const {
    auto it = edge_types.find(normalize_type_name(name));
    if (it == edge_types.end()) return std::nullopt;
    return it->second;
}

PropPredicate PropPredicate::eq(Value v) {
    PropPredicate p;
    p.equals_ = std::move(v);
    return p;
}

PropPredicate PropPredicate::where(std::function<bool(const Value&)> test) {
    PropPredicate p;
    p.test_ = std::move(test);
    return p;
}

bool PropPredicate::operator()(const Value* v) const {
    if (v == nullptr) return false;
    if (equals_) return *v == *equals_;
    return test_ ? test_(*v) : true;
}

Graph::Graph(Vocabulary vocabulary) : vocabulary_(std::move(vocabulary)) {}

std::string Graph::fresh_id(const std::map<std::string, std::size_t, NaturalLess>& used,
                            std::size_t& counter) const {
    for (;;) {
        std::string candidate = std::to_string(counter++);
        if (!used.contains(candidate)) return candidate;
    }
}

void Graph::insert_sorted(Index& index, std::size_t node_index) const {
    auto pos = std::lower_bound(index.begin(), index.end(), node_index, [&](std::size_t a, std::size_t b) {
        return NaturalLess{}(nodes_[a].id, nodes_[b].id);
    });
    index.insert(pos, node_index);
}

void Graph::insert_sorted_edge(Index& index, std::size_t edge_index) const {
    auto pos = std::lower_bound(index.begin(), index.end(), edge_index, [&](std::size_t a, std::size_t b) {
        return NaturalLess{}(edges_[a].id, edges_[b].id);
    });
    index.insert(pos, edge_index);
}

namespace {

void check_kinds(const PropertyMap& props, std::string_view owner) {
    for (const auto& [key, value] : props) {
        if (!value.homogeneous()) {
            throw Error(ErrorCode::InvalidValue,
                        "property '" + key + "' of " + std::string(owner) + " is a heterogeneous list");
        }
    }
}

} // namespace

NodeId Graph::add_node(NodeSpec spec) {
    auto canonical = vocabulary_.resolve_node_type(spec.node_type);
    if (!canonical) {
        throw Error(ErrorCode::UnknownNodeType, "unknown node type '" + spec.node_type + "'");
    }
    NodeId id = spec.id ? *spec.id : fresh_id(node_ids_, next_node_);
    if (node_ids_.contains(id)) {
        throw Error(ErrorCode::DuplicateId, "duplicate node id '" + id + "'");
    }
    check_kinds(spec.props, "node " + id);

    std::size_t index = nodes_.size();
    nodes_.push_back(NodeRecord{id, *canonical, std::move(spec.subtype), std::move(spec.label),
                                std::move(spec.props), spec.base});
    node_ids_.emplace(id, index);
    out_.emplace_back();
    in_.emplace_back();

    const NodeRecord& rec = nodes_.back();
    insert_sorted(type_index_[normalize_type_name(rec.node_type)], index);
    if (rec.subtype && normalize_type_name(*rec.subtype) != normalize_type_name(rec.node_type)) {
        insert_sorted(type_index_[normalize_type_name(*rec.subtype)], index);
    }
    for (const auto& [key, value] : rec.props) {
        insert_sorted(prop_index_[{key, value.to_literal()}], index);
    }
    return id;
}

EdgeId Graph::add_edge(EdgeSpec spec) {
    auto canonical = vocabulary_.resolve_edge_type(spec.edge_type);
    if (!canonical) {
        throw Error(ErrorCode::UnknownEdgeType, "unknown edge type '" + spec.edge_type + "'");
    }
    auto src = node_ids_.find(spec.src);
    auto dst = node_ids_.find(spec.dst);
    if (src == node_ids_.end() || dst == node_ids_.end()) {
        const std::string& missing = src == node_ids_.end() ? spec.src : spec.dst;
        throw Error(ErrorCode::MissingEndpoint,
                    "edge endpoint '" + missing + "' does not exist (" + *canonical + ")");
    }
    EdgeId id = spec.id ? *spec.id : fresh_id(edge_ids_, next_edge_);
    if (edge_ids_.contains(id)) {
        throw Error(ErrorCode::DuplicateId, "duplicate edge id '" + id + "'");
    }
    check_kinds(spec.props, "edge " + id);

    std::size_t index = edges_.size();
    std::size_t src_index = src->second;
    std::size_t dst_index = dst->second;
    edges_.push_back(EdgeRecord{id, std::move(spec.src), std::move(spec.dst), *canonical,
                                std::move(spec.props), spec.base});
    edge_ids_.emplace(id, index);
    insert_sorted_edge(out_[src_index], index);
    insert_sorted_edge(in_[dst_index], index);
    return id;
}

const NodeRecord* Graph::find_node(std::string_view id) const {
    auto it = node_ids_.find(id);
    return it == node_ids_.end() ? nullptr : &nodes_[it->second];
}

const EdgeRecord* Graph::find_edge(std::string_view id) const {
    auto it = edge_ids_.find(id);
    return it == edge_ids_.end() ? nullptr : &edges_[it->second];
}

const NodeRecord& Graph::node(std::string_view id) const {
    if (const auto* n = find_node(id)) return *n;
    throw Error(ErrorCode::MissingNode, "no node '" + std::string(id) + "'");
}

const EdgeRecord& Graph::edge(std::string_view id) const {
    if (const auto* e = find_edge(id)) return *e;
    throw Error(ErrorCode::MissingNode, "no edge '" + std::string(id) + "'");
}

bool Graph::has_type(const NodeRecord& node, std::string_view name) {
    auto wanted = normalize_type_name(name);
    return normalize_type_name(node.node_type) == wanted ||
           (node.subtype && normalize_type_name(*node.subtype) == wanted);
}

std::vector<NodeId> Graph::match_nodes(std::optional<std::string_view> node_type, const PropFilter& filter) const {
    // Seed from the narrowest available index.
    const Index* seed = nullptr;
    Index all;
    if (node_type) {
        auto it = type_index_.find(normalize_type_name(*node_type));
        if (it == type_index_.end()) return {};
        seed = &it->second;
    }
    for (const auto& [key, pred] : filter) {
        if (!pred.equality()) continue;
        auto it = prop_index_.find(std::pair<std::string, std::string>{key, pred.equality()->to_literal()});
        if (it == prop_index_.end()) return {};
        if (seed == nullptr || it->second.size() < seed->size()) seed = &it->second;
    }
    if (seed == nullptr) {
        for (const auto& [id, index] : node_ids_) all.push_back(index);
        seed = &all;
    }

    std::vector<NodeId> out;
    for (std::size_t index : *seed) {
        const NodeRecord& n = nodes_[index];
        if (node_type && !has_type(n, *node_type)) continue;
        bool ok = std::all_of(filter.begin(), filter.end(),
                              [&](const auto& entry) { return entry.second(n.prop(entry.first)); });
        if (ok) out.push_back(n.id);
    }
    return out;
}

std::vector<const EdgeRecord*> Graph::collect(const Index& index, std::optional<std::string_view> edge_type) const {
    std::optional<std::string> wanted;
    if (edge_type) {
        wanted = vocabulary_.resolve_edge_type(*edge_type);
        if (!wanted) return {};
    }
    std::vector<const EdgeRecord*> out;
    for (std::size_t e : index) {
        const EdgeRecord& rec = edges_[e];
        if (wanted && rec.edge_type != *wanted) continue;
        out.push_back(&rec);
    }
    return out;
}

std::vector<const EdgeRecord*> Graph::out_edges(std::string_view node, std::optional<std::string_view> edge_type) const {
    auto it = node_ids_.find(node);
    if (it == node_ids_.end()) throw Error(ErrorCode::MissingNode, "no node '" + std::string(node) + "'");
    return collect(out_[it->second], edge_type);
}

std::vector<const EdgeRecord*> Graph::in_edges(std::string_view node, std::optional<std::string_view> edge_type) const {
    auto it = node_ids_.find(node);
    if (it == node_ids_.end()) throw Error(ErrorCode::MissingNode, "no node '" + std::string(node) + "'");
    return collect(in_[it->second], edge_type);
}

std::vector<Adjacent> Graph::neighbors(std::string_view node, Direction direction,
                                       std::optional<std::string_view> edge_type) const {
    std::vector<Adjacent> out;
    if (direction == Direction::out || direction == Direction::both) {
        for (const auto* e : out_edges(node, edge_type)) out.push_back({e->id, e->dst});
    }
    if (direction == Direction::in || direction == Direction::both) {
        for (const auto* e : in_edges(node, edge_type)) out.push_back({e->id, e->src});
    }
    return out;
}

std::vector<const NodeRecord*> Graph::nodes() const {
    std::vector<const NodeRecord*> out;
    out.reserve(nodes_.size());
    for (const auto& [id, index] : node_ids_) out.push_back(&nodes_[index]);
    return out;
}

std::vector<const EdgeRecord*> Graph::edges() const {
    std::vector<const EdgeRecord*> out;
    out.reserve(edges_.size());
    for (const auto& [id, index] : edge_ids_) out.push_back(&edges_[index]);
    return out;
}

std::vector<std::string> Graph::integrity_errors() const {
    std::vector<std::string> out;
    for (const auto* e : edges()) {
        if (!node_ids_.contains(e->src)) out.push_back("edge " + e->id + ": missing src " + e->src);
        if (!node_ids_.contains(e->dst)) out.push_back("edge " + e->id + ": missing dst " + e->dst);
    }
    return out;
}

} // namespace olgpp
