#include "olgpp/error.hpp"

namespace olgpp {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::UnknownNodeType: return "UnknownNodeType";
    case ErrorCode::UnknownEdgeType: return "UnknownEdgeType";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::MissingEndpoint: return "MissingEndpoint";
    case ErrorCode::MissingNode: return "MissingNode";
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::SubclassCycle: return "SubclassCycle";
    case ErrorCode::DegenerateRegion: return "DegenerateRegion";
    case ErrorCode::MalformedPredicate: return "MalformedPredicate";
    case ErrorCode::ContainmentCycle: return "ContainmentCycle";
    case ErrorCode::NegativeInterval: return "NegativeInterval";
    case ErrorCode::InvalidWindow: return "InvalidWindow";
    case ErrorCode::LogicCycle: return "LogicCycle";
    case ErrorCode::MalformedGroup: return "MalformedGroup";
    case ErrorCode::UnresolvableLeaf: return "UnresolvableLeaf";
    case ErrorCode::NonNumericOperand: return "NonNumericOperand";
    case ErrorCode::EmptyFormula: return "EmptyFormula";
    case ErrorCode::DefeasibilityCycle: return "DefeasibilityCycle";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::DuplicateNodeId: return "DuplicateNodeId";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::ResourceLimit: return "ResourceLimit";
    case ErrorCode::SchemaError: return "SchemaError";
    }
    return "Unknown";
}

} // namespace olgpp
