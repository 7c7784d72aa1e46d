#ifndef OLGPP_GEOMETRY_HPP
#define OLGPP_GEOMETRY_HPP

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace olgpp {

/// Planar point in meters (easting, northing) of a document's local frame.
struct GeoPoint {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Unvalidated vertex list as written in a document.
struct Polygon {
    std::vector<GeoPoint> points;

    friend bool operator==(const Polygon&, const Polygon&) = default;
};

/// Points closer than this to a region edge count as on the boundary.
inline constexpr double kBoundaryTolerance = 1e-9;

/// A simple polygon with nonzero area; construction validates, so every
/// Region in hand is usable by the predicates below.
class Region {
public:
    /// Throws DegenerateRegion for < 3 vertices, zero area, non-finite
    /// coordinates or self-intersection.
    static Region make(std::vector<GeoPoint> polygon, std::string name = {});
    static Region make(const Polygon& polygon, std::string name = {}) { return make(polygon.points, std::move(name)); }

    const std::string& name() const { return name_; }
    const std::vector<GeoPoint>& polygon() const { return polygon_; }

    double min_x() const { return min_x_; }
    double max_x() const { return max_x_; }
    double min_y() const { return min_y_; }
    double max_y() const { return max_y_; }

private:
    Region() = default;

    std::string name_;
    std::vector<GeoPoint> polygon_;
    double min_x_ = 0, max_x_ = 0, min_y_ = 0, max_y_ = 0;
};

/// Closed containment: boundary points (within kBoundaryTolerance) are inside.
bool contains(const Region& region, GeoPoint p);

double distance(GeoPoint a, GeoPoint b);
double distance_to_segment(GeoPoint p, GeoPoint a, GeoPoint b);
/// Zero when p is inside the region, else distance to its boundary.
double distance_to_region(const Region& region, GeoPoint p);
double signed_area(const std::vector<GeoPoint>& polygon);

/// Every vertex of inner lies in outer and no edges cross.
bool region_within(const Region& inner, const Region& outer);

enum class SpatialKind { within, outside, north_of, south_of, east_of, west_of, within_distance };

std::optional<SpatialKind> parse_spatial_kind(std::string_view text);
std::string_view to_string(SpatialKind kind);

struct SpatialPredicate {
    SpatialKind kind = SpatialKind::within;
    std::variant<GeoPoint, Region> target;
    std::optional<double> distance;  // meters, only for within_distance
};

/// Throws MalformedPredicate unless distance is present exactly for
/// within_distance and is positive.
bool eval_spatial(const SpatialPredicate& pred, GeoPoint p);

/// Equirectangular projection around an origin; meters.
GeoPoint project_latlong(double lat, double lon, double origin_lat, double origin_lon);

} // namespace olgpp

#endif
