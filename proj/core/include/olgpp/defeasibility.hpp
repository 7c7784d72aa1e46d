#ifndef OLGPP_DEFEASIBILITY_HPP
#define OLGPP_DEFEASIBILITY_HPP

#include "olgpp/graph.hpp"
#include "olgpp/logic.hpp"
#include "olgpp/temporal.hpp"

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace olgpp {

enum class Modality { obligation, prohibition, permission, entitlement };

std::string_view to_string(Modality modality);
std::optional<Modality> parse_modality(std::string_view text);

/// Prohibition against any of the other three.
bool opposing(Modality a, Modality b);

/// What the graph says about one obligation_trigger node.
struct DeonticTrigger {
    NodeId id;
    std::string label;
    Modality modality = Modality::obligation;
    std::vector<NodeId> holders;
    std::optional<ExprTree> condition;
    std::vector<NodeId> jurisdictions;
    std::vector<TimeWindow> windows;
};

/// Throws MissingNode, InvalidValue (not an obligation_trigger), and the
/// logic errors of a malformed condition.
DeonticTrigger describe_trigger(const Graph& graph, std::string_view trigger);

/// nullopt when the trigger applies in ctx, else a short reason.
std::optional<std::string> inapplicable_reason(const Graph& graph, std::string_view trigger, const EvalContext& ctx);
bool applicable(const Graph& graph, std::string_view trigger, const EvalContext& ctx);

enum class DefeatReason { excepted, overridden, precedence };

std::string_view to_string(DefeatReason reason);

struct Defeat {
    NodeId loser;
    NodeId by;
    DefeatReason reason;
    std::vector<EdgeId> via;  // edge path from `by` to `loser`

    friend bool operator==(const Defeat&, const Defeat&) = default;
};

struct Ruling {
    std::vector<NodeId> winners;
    std::vector<Defeat> defeated;
    std::vector<std::pair<NodeId, NodeId>> conflicts;
    /// Tagged lines: EVAL, DEFEAT, WARN, WINNER, CONFLICT.
    std::vector<std::string> explanation;
};

/// Gathers applicable triggers, removes those reached by an applicable
/// trigger over exception edges, then those reached by a survivor over
/// override edges, then the lower side of each precedence pair. Chains may
/// pass only through applicable triggers. Edges that are not active, or
/// whose temporal_validity excludes ctx.instant, are ignored.
/// Throws DefeasibilityCycle and whatever applicability evaluation throws.
Ruling resolve(const Graph& graph, const EvalContext& ctx,
               const std::optional<std::vector<NodeId>>& scope = std::nullopt);

enum class Outcome { satisfied, unsatisfied, late };

std::optional<Outcome> parse_outcome(std::string_view text);  // true, false, late

/// Targets of the if_true / if_false / if_late edges leaving the
/// antecedent, ordered by id. Throws MissingNode.
std::vector<NodeId> consequences(const Graph& graph, std::string_view antecedent, Outcome outcome);

struct UnmetPrerequisite {
    NodeId node;
    EdgeId edge;
    std::optional<Minutes> grace_period;

    friend bool operator==(const UnmetPrerequisite&, const UnmetPrerequisite&) = default;
};

/// Sources of prerequisite edges into the trigger that are not satisfied.
std::vector<UnmetPrerequisite> check_prerequisites(const Graph& graph, std::string_view trigger,
                                                   const std::set<NodeId, NaturalLess>& satisfied);

/// Each mutual_exclusivity edge with both ends active, as an ordered pair,
/// once per unordered pair.
std::vector<std::pair<NodeId, NodeId>> check_mutual_exclusivity(const Graph& graph,
                                                                const std::set<NodeId, NaturalLess>& active);

/// {"winners":[{id,label,modality}],"defeated":[{loser,by,reason,via}],
///  "conflicts":[[a,b]],"trace":[...]}
std::string ruling_to_json(const Graph& graph, const Ruling& ruling);

} // namespace olgpp

#endif
