#include "segproc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace segproc {

double canonical_direction(double phi) {
    double d = std::fmod(phi, kPi);
    if (d < 0.0) d += kPi;
    if (d >= kPi) d = 0.0;
    return d;
}

Segment::Segment(Point2 c, double len, double phi)
    : center(c), length(len), direction(canonical_direction(phi)) {
    if (!(len > 0.0)) throw std::invalid_argument("Segment: length must be positive");
    if (!std::isfinite(c.x) || !std::isfinite(c.y))
        throw std::invalid_argument("Segment: center must be finite");
}

double DiskWindow::area() const { return kPi * radius() * radius(); }

std::pair<Point2, Point2> endpoints(const Segment& s) {
    const double hx = 0.5 * s.length * std::cos(s.direction);
    const double hy = 0.5 * s.length * std::sin(s.direction);
    return {Point2{s.center.x - hx, s.center.y - hy}, Point2{s.center.x + hx, s.center.y + hy}};
}

namespace {

double cross(const Point2& o, const Point2& a, const Point2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(const Point2& p, const Point2& q, const Point2& r) {
    return q.x <= std::max(p.x, r.x) + kGeomTol && q.x >= std::min(p.x, r.x) - kGeomTol &&
           q.y <= std::max(p.y, r.y) + kGeomTol && q.y >= std::min(p.y, r.y) - kGeomTol;
}

int orientation(const Point2& p, const Point2& q, const Point2& r) {
    const double c = cross(p, q, r);
    if (c > kGeomTol) return 1;
    if (c < -kGeomTol) return -1;
    return 0;
}

}  // namespace

bool intersects(const Segment& u, const Segment& v) {
    const auto [p1, p2] = endpoints(u);
    const auto [q1, q2] = endpoints(v);

    const int o1 = orientation(p1, p2, q1);
    const int o2 = orientation(p1, p2, q2);
    const int o3 = orientation(q1, q2, p1);
    const int o4 = orientation(q1, q2, p2);

    if (o1 != o2 && o3 != o4) return true;

    if (o1 == 0 && on_segment(p1, q1, p2)) return true;
    if (o2 == 0 && on_segment(p1, q2, p2)) return true;
    if (o3 == 0 && on_segment(q1, p1, q2)) return true;
    if (o4 == 0 && on_segment(q1, p2, q2)) return true;
    return false;
}

namespace {

bool identical(const Segment& a, const Segment& b) {
    return a.center.x == b.center.x && a.center.y == b.center.y && a.length == b.length &&
           a.direction == b.direction;
}

}  // namespace

int hit_count(const Segment& u, const Configuration& x) {
    int n = 0;
    bool skipped_self = false;
    for (const Segment& v : x.segments) {
        if (!skipped_self && identical(u, v)) {
            skipped_self = true;
            continue;
        }
        if (intersects(u, v)) ++n;
    }
    return n;
}

long total_intersections(const Configuration& x) {
    long n = 0;
    const auto& s = x.segments;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if (intersects(s[i], s[j])) ++n;
    return n;
}

Point2 wrap_into(const Point2& p, const RectWindow& w) {
    double fx = std::fmod(p.x - w.lower_left.x, w.width);
    double fy = std::fmod(p.y - w.lower_left.y, w.height);
    if (fx < 0.0) fx += w.width;
    if (fy < 0.0) fy += w.height;
    return Point2{w.lower_left.x + fx, w.lower_left.y + fy};
}

Segment nearest_image(const Segment& v, const Point2& ref, const RectWindow& w) {
    Segment out = v;
    out.center.x -= w.width * std::round((v.center.x - ref.x) / w.width);
    out.center.y -= w.height * std::round((v.center.y - ref.y) / w.height);
    return out;
}

bool intersects_torus(const Segment& u, const Segment& v, const RectWindow& w) {
    return intersects(u, nearest_image(v, u.center, w));
}

int hit_count_torus(const Segment& u, const Configuration& x, const RectWindow& w) {
    int n = 0;
    bool skipped_self = false;
    for (const Segment& v : x.segments) {
        if (!skipped_self && identical(u, v)) {
            skipped_self = true;
            continue;
        }
        if (intersects_torus(u, v, w)) ++n;
    }
    return n;
}

long total_intersections_torus(const Configuration& x, const RectWindow& w) {
    long n = 0;
    const auto& s = x.segments;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if (intersects_torus(s[i], s[j], w)) ++n;
    return n;
}

double max_norm_distance(const Segment& u, const DiskWindow& w) {
    const auto [a, b] = endpoints(u);
    const double na = std::hypot(a.x, a.y);
    const double nb = std::hypot(b.x, b.y);
    return std::max(na, nb) / w.diameter;
}

bool contained_in_disk(const Segment& u, const DiskWindow& w) {
    const auto [a, b] = endpoints(u);
    const double r = w.radius();
    return std::hypot(a.x, a.y) <= r && std::hypot(b.x, b.y) <= r;
}

Segment rotate(const Segment& u, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Segment out = u;
    out.center = Point2{c * u.center.x - s * u.center.y, s * u.center.x + c * u.center.y};
    out.direction = canonical_direction(u.direction + angle);
    return out;
}

}  // namespace segproc
