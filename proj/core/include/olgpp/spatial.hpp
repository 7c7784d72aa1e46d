#ifndef OLGPP_SPATIAL_HPP
#define OLGPP_SPATIAL_HPP

#include "olgpp/geometry.hpp"
#include "olgpp/graph.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace olgpp {

/// The node's `boundary` polygon as a validated Region, if it has one.
/// Throws DegenerateRegion when the polygon is present but unusable.
std::optional<Region> node_region(const NodeRecord& node);

/// The node's `position` point, if any.
std::optional<GeoPoint> node_position(const NodeRecord& node);

/// Jurisdictions containing the node via location_predicate{type: within}
/// edges, innermost first. Throws ContainmentCycle, MissingNode.
std::vector<NodeId> jurisdiction_chain(const Graph& graph, std::string_view location);

/// Triggers attached by has_jurisdiction to the jurisdiction or any of its
/// ancestors, ordered by id. Throws ContainmentCycle, MissingNode.
std::vector<NodeId> effective_obligations(const Graph& graph, std::string_view jurisdiction);

/// Jurisdictions linked to a trigger by has_jurisdiction, ordered by id.
std::vector<NodeId> trigger_jurisdictions(const Graph& graph, std::string_view trigger);

} // namespace olgpp

#endif
