#ifndef OLGPP_VALUE_HPP
#define OLGPP_VALUE_HPP

#include "olgpp/geometry.hpp"
#include "olgpp/temporal.hpp"

#include <compare>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace olgpp {

/// Property value: an atomic literal or a homogeneous list of them.
class Value {
public:
    enum class Kind { string, number, boolean, list, instant, window, duration, point, polygon };
    using List = std::vector<Value>;

    Value() : data_(std::string{}) {}
    Value(std::string s) : data_(std::move(s)) {}
    Value(const char* s) : data_(std::string(s)) {}
    Value(std::string_view s) : data_(std::string(s)) {}
    Value(double n) : data_(n) {}
    Value(int n) : data_(static_cast<double>(n)) {}
    Value(bool b) : data_(b) {}
    Value(List items) : data_(std::move(items)) {}
    Value(Instant t) : data_(t) {}
    Value(TimeWindow w) : data_(w) {}
    Value(Minutes d) : data_(d) {}
    Value(GeoPoint p) : data_(p) {}
    Value(Polygon p) : data_(std::move(p)) {}

    Kind kind() const { return static_cast<Kind>(data_.index()); }

    template <class T>
    const T* get_if() const { return std::get_if<T>(&data_); }

    bool is_string() const { return kind() == Kind::string; }
    bool is_number() const { return kind() == Kind::number; }
    bool is_bool() const { return kind() == Kind::boolean; }
    bool is_list() const { return kind() == Kind::list; }

    const std::string& as_string() const { return std::get<std::string>(data_); }
    double as_number() const { return std::get<double>(data_); }
    bool as_bool() const { return std::get<bool>(data_); }
    const List& as_list() const { return std::get<List>(data_); }

    /// Lists (recursively) hold a single element kind.
    bool homogeneous() const;

    /// Document-syntax literal; parses back to an equal Value.
    std::string to_literal() const;
    /// Plain rendering for tables: strings unquoted, numbers shortest form.
    std::string to_display() const;

    friend bool operator==(const Value& a, const Value& b);
    /// Total order: by kind, then by content.
    friend std::strong_ordering compare(const Value& a, const Value& b);

private:
    std::variant<std::string, double, bool, List, Instant, TimeWindow, Minutes, GeoPoint, Polygon> data_;
};

std::string_view to_string(Value::Kind kind);
std::string format_number(double n);
std::string quote_string(std::string_view s);

using PropertyMap = std::map<std::string, Value, std::less<>>;

} // namespace olgpp

#endif
