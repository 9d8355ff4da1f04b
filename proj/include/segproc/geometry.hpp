#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace segproc {

inline constexpr double kPi = 3.14159265358979323846;

// Absolute tolerance for degenerate (near-collinear) intersection cases.
inline constexpr double kGeomTol = 1e-12;

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

// Axial direction: phi and phi + pi describe the same segment, so directions
// are kept canonically in [0, pi).
double canonical_direction(double phi);

struct Segment {
    Point2 center;
    double length = 0.0;
    double direction = 0.0;  // in [0, pi)

    Segment() = default;
    Segment(Point2 c, double len, double phi);
};

struct Configuration {
    std::vector<Segment> segments;

    std::size_t size() const { return segments.size(); }
    bool empty() const { return segments.empty(); }
};

struct RectWindow {
    Point2 lower_left;
    double width = 1.0;
    double height = 1.0;

    double area() const { return width * height; }
    bool contains(const Point2& p) const {
        return p.x >= lower_left.x && p.x <= lower_left.x + width && p.y >= lower_left.y &&
               p.y <= lower_left.y + height;
    }
};

// Disk centered at the origin with diameter e_a.
struct DiskWindow {
    double diameter = 1.0;

    double radius() const { return diameter / 2.0; }
    double area() const;
};

std::pair<Point2, Point2> endpoints(const Segment& s);

// Closed segments share at least one point. Collinear overlap counts.
bool intersects(const Segment& u, const Segment& v);

// Number of segments of x, excluding entries identical to u, hit by u.
int hit_count(const Segment& u, const Configuration& x);

// Number of unordered intersecting pairs.
long total_intersections(const Configuration& x);

// Torus variants: opposite edges of the window are identified and segments
// interact through the nearest image. Valid while segment lengths stay below
// half the window size.
Point2 wrap_into(const Point2& p, const RectWindow& w);
Segment nearest_image(const Segment& v, const Point2& ref, const RectWindow& w);
bool intersects_torus(const Segment& u, const Segment& v, const RectWindow& w);
int hit_count_torus(const Segment& u, const Configuration& x, const RectWindow& w);
long total_intersections_torus(const Configuration& x, const RectWindow& w);

// d(u) = max_{z in u} ||z|| / e_a; the maximum over a segment is attained at
// an endpoint.
double max_norm_distance(const Segment& u, const DiskWindow& w);

bool contained_in_disk(const Segment& u, const DiskWindow& w);

// Rotate about the origin; direction moves mod pi, length is unchanged.
Segment rotate(const Segment& u, double angle);

}  // namespace segproc
