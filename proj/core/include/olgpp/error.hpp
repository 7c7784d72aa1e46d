#ifndef OLGPP_ERROR_HPP
#define OLGPP_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace olgpp {

enum class ErrorCode {
    UnknownNodeType,
    UnknownEdgeType,
    DuplicateId,
    MissingEndpoint,
    MissingNode,
    InvalidValue,
    SubclassCycle,
    DegenerateRegion,
    MalformedPredicate,
    ContainmentCycle,
    NegativeInterval,
    InvalidWindow,
    LogicCycle,
    MalformedGroup,
    UnresolvableLeaf,
    NonNumericOperand,
    EmptyFormula,
    DefeasibilityCycle,
    SyntaxError,
    DuplicateNodeId,
    UnboundVariable,
    ResourceLimit,
    SchemaError,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every failure the engine reports. The code is stable
/// and is what callers (and the CLI exit-code mapping) switch on.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Parse failure with a 1-based source position.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t line, std::size_t column, const std::string& message)
        : Error(ErrorCode::SyntaxError, format(line, column, message)),
          line_(line), column_(column), detail_(message) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    static std::string format(std::size_t line, std::size_t column, const std::string& message) {
        return std::to_string(line) + ":" + std::to_string(column) + ": " + message;
    }

    std::size_t line_;
    std::size_t column_;
    std::string detail_;
};

} // namespace olgpp

#endif
