#include "olgpp/geometry.hpp"

#include "olgpp/error.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <limits>
#include <numbers>

namespace olgpp {

namespace {

double cross(GeoPoint o, GeoPoint a, GeoPoint b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(GeoPoint p, GeoPoint a, GeoPoint b) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

int orientation(GeoPoint a, GeoPoint b, GeoPoint c) {
    double v = cross(a, b, c);
    if (v > 0) return 1;
    if (v < 0) return -1;
    return 0;
}

bool segments_intersect(GeoPoint p1, GeoPoint p2, GeoPoint q1, GeoPoint q2) {
    int o1 = orientation(p1, p2, q1);
    int o2 = orientation(p1, p2, q2);
    int o3 = orientation(q1, q2, p1);
    int o4 = orientation(q1, q2, p2);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(q1, p1, p2)) return true;
    if (o2 == 0 && on_segment(q2, p1, p2)) return true;
    if (o3 == 0 && on_segment(p1, q1, q2)) return true;
    if (o4 == 0 && on_segment(p2, q1, q2)) return true;
    return false;
}

bool proper_crossing(GeoPoint p1, GeoPoint p2, GeoPoint q1, GeoPoint q2) {
    int o1 = orientation(p1, p2, q1);
    int o2 = orientation(p1, p2, q2);
    int o3 = orientation(q1, q2, p1);
    int o4 = orientation(q1, q2, p2);
    return o1 * o2 < 0 && o3 * o4 < 0;
}

bool on_boundary(const std::vector<GeoPoint>& poly, GeoPoint p) {
    for (std::size_t i = 0, n = poly.size(); i < n; ++i) {
        if (distance_to_segment(p, poly[i], poly[(i + 1) % n]) <= kBoundaryTolerance) return true;
    }
    return false;
}

// Crossing-number test for a point known to be off the boundary.
bool crossing_inside(const std::vector<GeoPoint>& poly, GeoPoint p) {
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const GeoPoint& a = poly[i];
        const GeoPoint& b = poly[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            double x_at = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x_at) inside = !inside;
        }
    }
    return inside;
}

} // namespace

Region Region::make(std::vector<GeoPoint> polygon, std::string name) {
    auto fail = [&](const std::string& why) {
        return Error(ErrorCode::DegenerateRegion,
                     "degenerate region" + (name.empty() ? std::string{} : " '" + name + "'") + ": " + why);
    };
    if (polygon.size() >= 2 && polygon.front() == polygon.back()) polygon.pop_back();
    if (polygon.size() < 3) throw fail("needs at least 3 vertices, got " + std::to_string(polygon.size()));
    for (const auto& p : polygon) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw fail("non-finite coordinate");
    }
    if (std::abs(signed_area(polygon)) <= 1e-12) throw fail("zero area");
    const std::size_t n = polygon.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
            const GeoPoint& a1 = polygon[i];
            const GeoPoint& a2 = polygon[(i + 1) % n];
            const GeoPoint& b1 = polygon[j];
            const GeoPoint& b2 = polygon[(j + 1) % n];
            if (adjacent) {
                // Adjacent edges share one vertex; anything more is a fold-back.
                GeoPoint shared = (j == i + 1) ? a2 : a1;
                GeoPoint other_a = (j == i + 1) ? a1 : a2;
                GeoPoint other_b = (j == i + 1) ? b2 : b1;
                if (orientation(shared, other_a, other_b) == 0 &&
                    (on_segment(other_a, shared, other_b) || on_segment(other_b, shared, other_a))) {
                    throw fail("edges " + std::to_string(i) + " and " + std::to_string(j) + " fold back");
                }
                continue;
            }
            if (segments_intersect(a1, a2, b1, b2)) {
                throw fail("edges " + std::to_string(i) + " and " + std::to_string(j) + " intersect");
            }
        }
    }
    Region r;
    r.name_ = std::move(name);
    r.polygon_ = std::move(polygon);
    auto [min_x, max_x] = std::minmax_element(r.polygon_.begin(), r.polygon_.end(),
                                              [](auto& a, auto& b) { return a.x < b.x; });
    auto [min_y, max_y] = std::minmax_element(r.polygon_.begin(), r.polygon_.end(),
                                              [](auto& a, auto& b) { return a.y < b.y; });
    r.min_x_ = min_x->x;
    r.max_x_ = max_x->x;
    r.min_y_ = min_y->y;
    r.max_y_ = max_y->y;
    return r;
}

double signed_area(const std::vector<GeoPoint>& polygon) {
    double sum = 0.0;
    for (std::size_t i = 0, n = polygon.size(); i < n; ++i) {
        const auto& a = polygon[i];
        const auto& b = polygon[(i + 1) % n];
        sum += a.x * b.y - b.x * a.y;
    }
    return sum / 2.0;
}

double distance(GeoPoint a, GeoPoint b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

double distance_to_segment(GeoPoint p, GeoPoint a, GeoPoint b) {
    double dx = b.x - a.x;
    double dy = b.y - a.y;
    double len2 = dx * dx + dy * dy;
    if (len2 == 0.0) return distance(p, a);
    double t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
    return distance(p, GeoPoint{a.x + t * dx, a.y + t * dy});
}

bool contains(const Region& region, GeoPoint p) {
    const auto& poly = region.polygon();
    if (p.x < region.min_x() - kBoundaryTolerance || p.x > region.max_x() + kBoundaryTolerance ||
        p.y < region.min_y() - kBoundaryTolerance || p.y > region.max_y() + kBoundaryTolerance) {
        return false;
    }
    return on_boundary(poly, p) || crossing_inside(poly, p);
}

double distance_to_region(const Region& region, GeoPoint p) {
    if (contains(region, p)) return 0.0;
    const auto& poly = region.polygon();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0, n = poly.size(); i < n; ++i) {
        best = std::min(best, distance_to_segment(p, poly[i], poly[(i + 1) % n]));
    }
    return best;
}

bool region_within(const Region& inner, const Region& outer) {
    for (const auto& v : inner.polygon()) {
        if (!contains(outer, v)) return false;
    }
    const auto& a = inner.polygon();
    const auto& b = outer.polygon();
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (proper_crossing(a[i], a[(i + 1) % a.size()], b[j], b[(j + 1) % b.size()])) return false;
        }
    }
    return true;
}

std::optional<SpatialKind> parse_spatial_kind(std::string_view text) {
    std::string key;
    for (char c : text) {
        if (c == '_' || c == '-' || c == ' ') continue;
        key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (key == "within" || key == "inside") return SpatialKind::within;
    if (key == "outside") return SpatialKind::outside;
    if (key == "northof") return SpatialKind::north_of;
    if (key == "southof") return SpatialKind::south_of;
    if (key == "eastof") return SpatialKind::east_of;
    if (key == "westof") return SpatialKind::west_of;
    if (key == "withindistance" || key == "proximityto") return SpatialKind::within_distance;
    return std::nullopt;
}

std::string_view to_string(SpatialKind kind) {
    switch (kind) {
    case SpatialKind::within: return "within";
    case SpatialKind::outside: return "outside";
    case SpatialKind::north_of: return "north_of";
    case SpatialKind::south_of: return "south_of";
    case SpatialKind::east_of: return "east_of";
    case SpatialKind::west_of: return "west_of";
    case SpatialKind::within_distance: return "within_distance";
    }
    return "?";
}

bool eval_spatial(const SpatialPredicate& pred, GeoPoint p) {
    bool wants_distance = pred.kind == SpatialKind::within_distance;
    if (wants_distance != pred.distance.has_value()) {
        throw Error(ErrorCode::MalformedPredicate,
                    std::string("distance must be given exactly for within_distance (kind ") +
                        std::string(to_string(pred.kind)) + ")");
    }
    if (pred.distance && !(*pred.distance > 0.0)) {
        throw Error(ErrorCode::MalformedPredicate, "within_distance requires a positive distance");
    }

    const Region* region = std::get_if<Region>(&pred.target);
    const GeoPoint* point = std::get_if<GeoPoint>(&pred.target);
    double min_x = region ? region->min_x() : point->x;
    double max_x = region ? region->max_x() : point->x;
    double min_y = region ? region->min_y() : point->y;
    double max_y = region ? region->max_y() : point->y;

    switch (pred.kind) {
    case SpatialKind::within:
        return region ? contains(*region, p) : distance(p, *point) <= kBoundaryTolerance;
    case SpatialKind::outside:
        return region ? !contains(*region, p) : distance(p, *point) > kBoundaryTolerance;
    case SpatialKind::north_of: return p.y > max_y;
    case SpatialKind::south_of: return p.y < min_y;
    case SpatialKind::east_of: return p.x > max_x;
    case SpatialKind::west_of: return p.x < min_x;
    case SpatialKind::within_distance: {
        double d = region ? distance_to_region(*region, p) : distance(p, *point);
        return d <= *pred.distance;
    }
    }
    return false;
}

GeoPoint project_latlong(double lat, double lon, double origin_lat, double origin_lon) {
    constexpr double kEarthRadius = 6371008.8;
    constexpr double kDeg = std::numbers::pi / 180.0;
    return GeoPoint{kEarthRadius * (lon - origin_lon) * kDeg * std::cos(origin_lat * kDeg),
                    kEarthRadius * (lat - origin_lat) * kDeg};
}

} // namespace olgpp
