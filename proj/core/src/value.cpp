#include "olgpp/value.hpp"

#include <charconv>
#include <cmath>

namespace olgpp {

std::string_view to_string(Value::Kind kind) {
    switch (kind) {
    case Value::Kind::string: return "string";
    case Value::Kind::number: return "number";
    case Value::Kind::boolean: return "boolean";
    case Value::Kind::list: return "list";
    case Value::Kind::instant: return "instant";
    case Value::Kind::window: return "window";
    case Value::Kind::duration: return "duration";
    case Value::Kind::point: return "point";
    case Value::Kind::polygon: return "polygon";
    }
    return "?";
}

std::string format_number(double n) {
    if (std::isfinite(n) && n == std::floor(n) && std::abs(n) < 1e15) {
        return std::to_string(static_cast<long long>(n));
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, n);
    return std::string(buf, ptr);
}

std::string quote_string(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
        }
    }
    return out + "\"";
}

bool Value::homogeneous() const {
    if (!is_list()) return true;
    const auto& items = as_list();
    for (const auto& item : items) {
        if (item.kind() != items.front().kind() || !item.homogeneous()) return false;
    }
    return true;
}

namespace {

std::string point_text(GeoPoint p) {
    return "(" + format_number(p.x) + "," + format_number(p.y) + ")";
}

} // namespace

std::string Value::to_literal() const {
    switch (kind()) {
    case Kind::string: return quote_string(as_string());
    case Kind::number: return format_number(as_number());
    case Kind::boolean: return as_bool() ? "true" : "false";
    case Kind::list: {
        std::string out = "[";
        for (std::size_t i = 0; i < as_list().size(); ++i) {
            if (i) out += ", ";
            out += as_list()[i].to_literal();
        }
        return out + "]";
    }
    case Kind::instant: return "at(" + format_instant(*get_if<Instant>()) + ")";
    case Kind::window: return format_window(*get_if<TimeWindow>());
    case Kind::duration: return "duration(" + std::to_string(get_if<Minutes>()->count()) + "min)";
    case Kind::point: return "point" + point_text(*get_if<GeoPoint>());
    case Kind::polygon: {
        std::string out = "polygon(";
        const auto& pts = get_if<Polygon>()->points;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) out += ",";
            out += point_text(pts[i]);
        }
        return out + ")";
    }
    }
    return {};
}

std::string Value::to_display() const {
    switch (kind()) {
    case Kind::string: return as_string();
    case Kind::list: {
        std::string out = "[";
        for (std::size_t i = 0; i < as_list().size(); ++i) {
            if (i) out += ", ";
            out += as_list()[i].to_display();
        }
        return out + "]";
    }
    default: return to_literal();
    }
}

bool operator==(const Value& a, const Value& b) {
    return a.data_ == b.data_;
}

std::strong_ordering compare(const Value& a, const Value& b) {
    if (a.kind() != b.kind()) return a.data_.index() <=> b.data_.index();
    switch (a.kind()) {
    case Value::Kind::string: return a.as_string() <=> b.as_string();
    case Value::Kind::number: {
        double x = a.as_number(), y = b.as_number();
        if (x < y) return std::strong_ordering::less;
        if (y < x) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }
    case Value::Kind::boolean: return a.as_bool() <=> b.as_bool();
    case Value::Kind::instant: return *a.get_if<Instant>() <=> *b.get_if<Instant>();
    case Value::Kind::duration: return *a.get_if<Minutes>() <=> *b.get_if<Minutes>();
    case Value::Kind::list: {
        const auto& x = a.as_list();
        const auto& y = b.as_list();
        for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
            auto c = compare(x[i], y[i]);
            if (c != 0) return c;
        }
        return x.size() <=> y.size();
    }
    default: return a.to_literal() <=> b.to_literal();
    }
}

} // namespace olgpp
