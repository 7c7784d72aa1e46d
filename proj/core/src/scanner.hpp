#ifndef OLGPP_SRC_SCANNER_HPP
#define OLGPP_SRC_SCANNER_HPP

// Character scanner for the declarative text formats (rule documents,
// schema files, context files). Whitespace, including newlines, separates
// tokens; '#' starts a comment that runs to end of line.

#include "olgpp/value.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace olgpp::detail {

struct ScannedLiteral {
    Value value;
    std::string raw;  // source text when a unit was normalized, else empty
};

using ScannedProps = std::vector<std::pair<std::string, ScannedLiteral>>;

class Scanner {
public:
    explicit Scanner(std::string_view text) : text_(text) {}

    void skip_space();
    bool at_end();
    char peek();
    bool consume(char c);
    bool consume(std::string_view token);
    void expect(char c, std::string_view context);
    void expect(std::string_view token, std::string_view context);

    bool peek_identifier();
    /// [A-Za-z_][A-Za-z0-9_./]*
    std::string identifier(std::string_view what);
    /// Identifier or quoted string.
    std::string name(std::string_view what);

    ScannedLiteral literal();
    ScannedProps props();

    /// Position of the next non-space character.
    std::size_t line();
    std::size_t column();

    [[noreturn]] void fail(const std::string& message);
    [[noreturn]] void fail_at(std::size_t line, std::size_t column, const std::string& message);

private:
    std::string quoted();
    ScannedLiteral number();
    Value function_literal(const std::string& fn, std::size_t line, std::size_t col);
    std::string raw_until(char stop);
    double plain_number(std::string_view context);
    GeoPoint coordinate_pair();
    void advance();

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

/// Length units accepted after numbers; returns meters per unit or 0.
double meters_per_unit(std::string_view unit);

} // namespace olgpp::detail

#endif
