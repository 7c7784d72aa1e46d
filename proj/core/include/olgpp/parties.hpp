#ifndef OLGPP_PARTIES_HPP
#define OLGPP_PARTIES_HPP

#include "olgpp/graph.hpp"
#include "olgpp/temporal.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace olgpp {

/// Whether a rule addressed to `holder` binds `party`, and why.
///
/// The holder covers the party when they are the same node; when the holder
/// is a party group reaching the party through has_member edges; when the
/// holder is a collective group whose member_of entity the party belongs to
/// by a membership edge; when the holder is a subclass_of ancestor of the
/// party; or when the holder delegates to the party through an active
/// delegation edge whose duration (if any) covers `at`.
///
/// Returns a short reason ("direct", "has_member", "collective",
/// "subclass_of", "delegation <edge>") or nullopt.
std::optional<std::string> holder_covers(const Graph& graph, std::string_view holder, std::string_view party,
                                         std::optional<Instant> at);

} // namespace olgpp

#endif
