#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "segproc/geometry.hpp"

using namespace segproc;

namespace {
Segment seg(double cx, double cy, double len, double phi) {
    return Segment{Point2{cx, cy}, len, phi};
}
}  // namespace

TEST_CASE("canonical_direction reduces mod pi into [0, pi)") {
    CHECK(canonical_direction(0.0) == doctest::Approx(0.0));
    CHECK(canonical_direction(kPi) == doctest::Approx(0.0));
    CHECK(canonical_direction(-kPi / 4.0) == doctest::Approx(3.0 * kPi / 4.0));
    CHECK(canonical_direction(5.0 * kPi / 2.0) == doctest::Approx(kPi / 2.0));
    for (double phi : {-7.3, -0.1, 0.0, 1.0, 3.2, 12.9}) {
        const double c = canonical_direction(phi);
        CHECK(c >= 0.0);
        CHECK(c < kPi);
        CHECK(std::abs(std::sin(c - phi)) < 1e-12);
    }
}

TEST_CASE("endpoints are symmetric about the center") {
    const Segment u = seg(0.3, -0.2, 1.0, kPi / 3.0);
    const auto [p, q] = endpoints(u);
    CHECK((p.x + q.x) / 2.0 == doctest::Approx(0.3));
    CHECK((p.y + q.y) / 2.0 == doctest::Approx(-0.2));
    CHECK(std::hypot(p.x - q.x, p.y - q.y) == doctest::Approx(1.0));
}

TEST_CASE("intersects: crossing, disjoint, touching, collinear") {
    // plus sign through the origin
    CHECK(intersects(seg(0, 0, 1, 0.0), seg(0, 0, 1, kPi / 2.0)));
    // parallel and offset
    CHECK_FALSE(intersects(seg(0, 0, 1, 0.0), seg(0, 0.1, 1, 0.0)));
    // far apart
    CHECK_FALSE(intersects(seg(0, 0, 1, 0.3), seg(5, 5, 1, 1.2)));
    // endpoint touching: [−1,0]–[0,0] and [0,0]–[0,1]
    CHECK(intersects(seg(-0.5, 0, 1, 0.0), seg(0, 0.5, 1, kPi / 2.0)));
    // collinear with overlap
    CHECK(intersects(seg(0, 0, 1, 0.0), seg(0.6, 0, 1, 0.0)));
    // collinear without overlap
    CHECK_FALSE(intersects(seg(0, 0, 1, 0.0), seg(2.5, 0, 1, 0.0)));
    // T-junction: endpoint in the interior of the other segment
    CHECK(intersects(seg(0, 0, 2, 0.0), seg(0.2, 0.5, 1, kPi / 2.0)));
}

TEST_CASE("hit_count skips exactly one identical entry") {
    const Segment u = seg(0, 0, 1, 0.0);
    Configuration x;
    x.segments = {u, seg(0, 0, 1, kPi / 2.0), seg(0.1, 0, 1, kPi / 2.0), seg(9, 9, 1, 0.0)};
    CHECK(hit_count(u, x) == 2);
    // duplicate of u present: only one copy is skipped
    x.segments.push_back(u);
    CHECK(hit_count(u, x) == 3);
}

TEST_CASE("total_intersections counts unordered pairs") {
    Configuration x;
    x.segments = {seg(0, 0, 1, 0.0), seg(0, 0, 1, kPi / 2.0), seg(0, 0, 1, kPi / 4.0)};
    CHECK(total_intersections(x) == 3);
    x.segments.push_back(seg(10, 10, 1, 0.0));
    CHECK(total_intersections(x) == 3);
    // pair sum identity: sum of hit counts = 2 * pairs
    int hits = 0;
    for (const Segment& s : x.segments) hits += hit_count(s, x);
    CHECK(hits == 2 * total_intersections(x));
}

TEST_CASE("wrap_into maps points into the window") {
    const RectWindow w{{0.0, 0.0}, 1.0, 1.0};
    const Point2 p = wrap_into(Point2{1.25, -0.25}, w);
    CHECK(p.x == doctest::Approx(0.25));
    CHECK(p.y == doctest::Approx(0.75));
    const Point2 q = wrap_into(Point2{0.5, 0.5}, w);
    CHECK(q.x == doctest::Approx(0.5));
    CHECK(q.y == doctest::Approx(0.5));
}

TEST_CASE("nearest_image shifts by whole window periods") {
    const RectWindow w{{0.0, 0.0}, 1.0, 1.0};
    const Segment v = seg(0.95, 0.5, 0.1, 0.0);
    const Segment img = nearest_image(v, Point2{0.05, 0.5}, w);
    CHECK(img.center.x == doctest::Approx(-0.05));
    CHECK(img.center.y == doctest::Approx(0.5));
    CHECK(img.length == doctest::Approx(v.length));
    CHECK(img.direction == doctest::Approx(v.direction));
}

TEST_CASE("intersects_torus sees across the boundary") {
    const RectWindow w{{0.0, 0.0}, 1.0, 1.0};
    // horizontal segments near the left/right edges; they meet only through
    // the identification of the edges
    const Segment a = seg(0.04, 0.5, 0.1, 0.0);
    const Segment b = seg(0.97, 0.5, 0.1, 0.0);
    CHECK_FALSE(intersects(a, b));
    CHECK(intersects_torus(a, b, w));
    // and interior behaviour matches the plain test
    const Segment c = seg(0.5, 0.5, 0.2, 0.0);
    const Segment d = seg(0.5, 0.5, 0.2, kPi / 2.0);
    CHECK(intersects_torus(c, d, w) == intersects(c, d));
    // corner wrap
    const Segment e = seg(0.02, 0.02, 0.15, kPi / 4.0);
    const Segment f = seg(0.98, 0.98, 0.15, kPi / 4.0 + kPi / 2.0);
    CHECK(intersects_torus(e, f, w));
}

TEST_CASE("torus counts are consistent with the pair identity") {
    const RectWindow w{{0.0, 0.0}, 1.0, 1.0};
    Configuration x;
    x.segments = {seg(0.04, 0.5, 0.1, 0.0), seg(0.97, 0.5, 0.1, 0.0), seg(0.5, 0.5, 0.2, 0.0),
                  seg(0.5, 0.52, 0.2, kPi / 2.0)};
    long hits = 0;
    for (const Segment& s : x.segments) hits += hit_count_torus(s, x, w);
    CHECK(hits == 2 * total_intersections_torus(x, w));
    CHECK(total_intersections_torus(x, w) == 2);
}

TEST_CASE("max_norm_distance attains the endpoint maximum") {
    const DiskWindow w{1.0};
    // horizontal segment through the origin: endpoints at distance r/2
    CHECK(max_norm_distance(seg(0, 0, 0.5, 0.0), w) == doctest::Approx(0.25));
    // center on the y-axis, horizontal: endpoints at sqrt(w^2 + r^2/4)
    CHECK(max_norm_distance(seg(0, 0.3, 0.4, 0.0), w) ==
          doctest::Approx(std::sqrt(0.09 + 0.04)));
    // vertical segment shifted up: farthest endpoint at w + r/2
    CHECK(max_norm_distance(seg(0, 0.2, 0.2, kPi / 2.0), w) == doctest::Approx(0.3));
}

TEST_CASE("contained_in_disk and the d(u) <= 1/2 invariant") {
    const DiskWindow w{1.0};
    CHECK(contained_in_disk(seg(0, 0, 0.99, 0.0), w));
    CHECK_FALSE(contained_in_disk(seg(0, 0.3, 0.9, 0.0), w));
    CHECK(contained_in_disk(seg(0, 0.3, 0.2, 0.0), w));
    CHECK(max_norm_distance(seg(0, 0.3, 0.2, 0.0), w) <= 0.5);
    // boundary case: endpoint exactly on the circle
    const Segment b = seg(0, 0, 1.0, 0.7);
    CHECK(contained_in_disk(b, w));
    CHECK(max_norm_distance(b, w) == doctest::Approx(0.5));
}

TEST_CASE("rotate preserves length and moves direction mod pi") {
    const Segment u = seg(0.3, 0.0, 0.4, 0.2);
    const Segment v = rotate(u, kPi / 2.0);
    CHECK(v.length == doctest::Approx(0.4));
    CHECK(std::hypot(v.center.x, v.center.y) == doctest::Approx(0.3));
    CHECK(v.center.x == doctest::Approx(0.0));
    CHECK(v.center.y == doctest::Approx(0.3));
    CHECK(v.direction == doctest::Approx(canonical_direction(0.2 + kPi / 2.0)));
    // d(u) is rotation invariant
    const DiskWindow w{1.0};
    CHECK(max_norm_distance(u, w) == doctest::Approx(max_norm_distance(v, w)));
}
