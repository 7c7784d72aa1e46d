#include "scanner.hpp"

#include "olgpp/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace olgpp::detail {

namespace {

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '/';
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_commas(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == ',') {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

} // namespace

double meters_per_unit(std::string_view unit) {
    if (unit == "m") return 1.0;
    if (unit == "km") return 1000.0;
    if (unit == "ft") return 0.3048;
    if (unit == "mi") return 1609.344;
    return 0.0;
}

void Scanner::advance() {
    if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
    } else {
        ++col_;
    }
    ++pos_;
}

void Scanner::skip_space() {
    while (pos_ < text_.size()) {
        char c = text_[pos_];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance();
        } else if (c == '#') {
            while (pos_ < text_.size() && text_[pos_] != '\n') advance();
        } else {
            break;
        }
    }
}

bool Scanner::at_end() {
    skip_space();
    return pos_ >= text_.size();
}

char Scanner::peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
}

bool Scanner::consume(char c) {
    if (peek() != c) return false;
    advance();
    return true;
}

bool Scanner::consume(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) != token) return false;
    for (std::size_t i = 0; i < token.size(); ++i) advance();
    return true;
}

void Scanner::expect(char c, std::string_view context) {
    if (!consume(c)) {
        fail(std::string("expected '") + c + "' " + std::string(context));
    }
}

void Scanner::expect(std::string_view token, std::string_view context) {
    if (!consume(token)) {
        fail("expected '" + std::string(token) + "' " + std::string(context));
    }
}

std::size_t Scanner::line() {
    skip_space();
    return line_;
}

std::size_t Scanner::column() {
    skip_space();
    return col_;
}

void Scanner::fail(const std::string& message) {
    skip_space();
    std::string found = pos_ < text_.size() ? "'" + std::string(1, text_[pos_]) + "'" : "end of input";
    throw SyntaxError(line_, col_, message + ", found " + found);
}

void Scanner::fail_at(std::size_t line, std::size_t column, const std::string& message) {
    throw SyntaxError(line, column, message);
}

bool Scanner::peek_identifier() {
    return ident_start(peek());
}

std::string Scanner::identifier(std::string_view what) {
    if (!peek_identifier()) fail("expected " + std::string(what));
    std::string out;
    while (pos_ < text_.size() && ident_char(text_[pos_])) {
        out.push_back(text_[pos_]);
        advance();
    }
    return out;
}

std::string Scanner::name(std::string_view what) {
    char c = peek();
    if (c == '"' || c == '\'') return quoted();
    // Bare names may start with a digit (engine-style numeric ids).
    if (std::isdigit(static_cast<unsigned char>(c))) {
        std::string out;
        while (pos_ < text_.size() && ident_char(text_[pos_])) {
            out.push_back(text_[pos_]);
            advance();
        }
        return out;
    }
    return identifier(what);
}

std::string Scanner::quoted() {
    char quote = text_[pos_];
    std::size_t l = line_, c = col_;
    advance();
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != quote) {
        char ch = text_[pos_];
        if (ch == '\\' && pos_ + 1 < text_.size()) {
            advance();
            char esc = text_[pos_];
            switch (esc) {
            case 'n': out.push_back('\n'); break;
            case 't': out.push_back('\t'); break;
            default: out.push_back(esc);
            }
        } else {
            out.push_back(ch);
        }
        advance();
    }
    if (pos_ >= text_.size()) fail_at(l, c, "unterminated string");
    advance();
    return out;
}

ScannedLiteral Scanner::number() {
    std::size_t start = pos_;
    std::size_t l = line_, c = col_;
    if (text_[pos_] == '-' || text_[pos_] == '+') advance();
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
        advance();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E') && pos_ + 1 < text_.size() &&
        (std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) || text_[pos_ + 1] == '-' ||
         text_[pos_ + 1] == '+')) {
        advance();
        if (text_[pos_] == '-' || text_[pos_] == '+') advance();
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance();
    }
    std::string_view digits = text_.substr(start, pos_ - start);
    double value = 0.0;
    std::string_view parse = digits;
    if (!parse.empty() && parse.front() == '+') parse.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(parse.data(), parse.data() + parse.size(), value);
    if (ec != std::errc{} || ptr != parse.data() + parse.size()) {
        fail_at(l, c, "malformed number '" + std::string(digits) + "'");
    }
    std::size_t unit_start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) advance();
    std::string_view unit = text_.substr(unit_start, pos_ - unit_start);
    if (unit.empty()) return {Value(value), {}};
    double factor = meters_per_unit(unit);
    if (factor == 0.0) fail_at(l, c, "unknown unit '" + std::string(unit) + "'");
    return {Value(value * factor), std::string(text_.substr(start, pos_ - start))};
}

std::string Scanner::raw_until(char stop) {
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != stop) {
        out.push_back(text_[pos_]);
        advance();
    }
    if (pos_ >= text_.size()) fail(std::string("expected '") + stop + "'");
    return out;
}

double Scanner::plain_number(std::string_view context) {
    char c = peek();
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.')) {
        fail("expected number " + std::string(context));
    }
    auto lit = number();
    if (!lit.raw.empty()) fail("units are not allowed " + std::string(context));
    return lit.value.as_number();
}

GeoPoint Scanner::coordinate_pair() {
    expect('(', "to open coordinate pair");
    double x = plain_number("for x");
    expect(',', "between coordinates");
    double y = plain_number("for y");
    expect(')', "to close coordinate pair");
    return GeoPoint{x, y};
}

Value Scanner::function_literal(const std::string& fn, std::size_t l, std::size_t c) {
    try {
        if (fn == "point") {
            double x = plain_number("for x");
            expect(',', "in point(x,y)");
            double y = plain_number("for y");
            expect(')', "to close point(...)");
            return Value(GeoPoint{x, y});
        }
        if (fn == "polygon") {
            Polygon poly;
            poly.points.push_back(coordinate_pair());
            while (consume(',')) poly.points.push_back(coordinate_pair());
            expect(')', "to close polygon(...)");
            return Value(std::move(poly));
        }
        std::string body = raw_until(')');
        advance();
        auto args = split_commas(body);
        if (fn == "at") {
            if (args.size() != 1) fail_at(l, c, "at(...) takes one ISO-8601 instant");
            return Value(parse_instant(args[0]));
        }
        if (fn == "date") {
            if (args.size() != 1 || args[0].size() != 10) fail_at(l, c, "date(...) takes YYYY-MM-DD");
            return Value(parse_instant(args[0]));
        }
        if (fn == "between") {
            if (args.size() != 2) fail_at(l, c, "between(...) takes two instants");
            return Value(TimeWindow::absolute(parse_instant(args[0]), parse_instant(args[1])));
        }
        if (fn == "daily") {
            if (args.size() != 2 && args.size() != 3) fail_at(l, c, "daily(...) takes HH:MM,HH:MM[,days]");
            DaySet days = args.size() == 3 ? parse_days(args[2]) : DaySet::all();
            return Value(TimeWindow::daily(parse_time_of_day(args[0]), parse_time_of_day(args[1]), days));
        }
        if (fn == "duration") {
            if (args.size() != 1) fail_at(l, c, "duration(...) takes one length like 60min");
            return Value(parse_duration(args[0]));
        }
    } catch (const SyntaxError&) {
        throw;
    } catch (const Error& e) {
        fail_at(l, c, e.what());
    }
    fail_at(l, c, "unknown literal function '" + fn + "'");
}

ScannedLiteral Scanner::literal() {
    char c = peek();
    std::size_t l = line_, col = col_;
    if (c == '"' || c == '\'') return {Value(quoted()), {}};
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') return number();
    if (c == '[') {
        advance();
        Value::List items;
        if (!consume(']')) {
            do {
                items.push_back(literal().value);
            } while (consume(','));
            expect(']', "to close list");
        }
        return {Value(std::move(items)), {}};
    }
    if (ident_start(c)) {
        std::string word = identifier("literal");
        if (word == "true") return {Value(true), {}};
        if (word == "false") return {Value(false), {}};
        if (pos_ < text_.size() && text_[pos_] == '(') {
            advance();
            return {function_literal(word, l, col), {}};
        }
        return {Value(std::move(word)), {}};
    }
    fail("expected a literal value");
}

ScannedProps Scanner::props() {
    ScannedProps out;
    expect('{', "to open property block");
    if (consume('}')) return out;
    do {
        std::size_t l = line(), c = column();
        std::string key = name("property name");
        for (const auto& [existing, _] : out) {
            if (existing == key) fail_at(l, c, "duplicate property '" + key + "'");
        }
        expect(':', "after property name");
        out.emplace_back(std::move(key), literal());
    } while (consume(','));
    expect('}', "to close property block");
    return out;
}

} // namespace olgpp::detail
