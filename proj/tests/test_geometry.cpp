#include <doctest.h>

#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "swarmsim/errors.hpp"
#include "swarmsim/geometry.hpp"
#include "swarmsim/random.hpp"

using namespace swarmsim;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Point2> random_points(RandomStream& rng, std::size_t n, double scale = 1.0) {
    std::vector<Point2> p;
    for (std::size_t i = 0; i < n; ++i) p.push_back({rng.uniform(-scale, scale), rng.uniform(-scale, scale)});
    return p;
}

}  // namespace

TEST_CASE("distance") {
    CHECK(distance({0, 0}, {3, 4}) == 5.0);
    CHECK(distance({1, 1}, {1, 1}) == 0.0);
    CHECK(distance({-0.5, 0}, {0.5, 0}) == 1.0);
    RandomStream rng(1);
    for (int i = 0; i < 1000; ++i) {
        const Point2 a{rng.uniform(-5, 5), rng.uniform(-5, 5)}, b{rng.uniform(-5, 5), rng.uniform(-5, 5)};
        CHECK(distance(a, b) == distance(b, a));
        CHECK(distance(a, b) == Approx(oracle::dist(a, b)).epsilon(1e-14));
    }
}

TEST_CASE("midpoint") {
    CHECK(midpoint({0, 0}, {2, 0}) == Point2{1, 0});
    CHECK(midpoint({0.3, -7}, {0.3, -7}) == Point2{0.3, -7});
    // Adjacent floats: the midpoint rounds onto one of the endpoints.
    const double a = 0.7;
    const double b = std::nextafter(a, 1.0);
    const Point2 m = midpoint({a, 0}, {b, 0});
    CHECK((m.x == a || m.x == b));
}

TEST_CASE("centroid") {
    const std::vector<Point2> tri{{0, 0}, {1, 0}, {0, 1}};
    CHECK(centroid(tri).x == Approx(1.0 / 3));
    CHECK(centroid(tri).y == Approx(1.0 / 3));
    const std::vector<Point2> one{{2.5, -1}};
    CHECK(centroid(one) == Point2{2.5, -1});
    const std::vector<Point2> sq{{0, 0}, {2, 0}, {0, 2}, {2, 2}};
    CHECK(centroid(sq) == Point2{1, 1});
    CHECK_THROWS_AS(centroid(std::span<const Point2>{}), ContractViolation);
}

TEST_CASE("interior angles") {
    auto a = interior_angles({0, 0}, {1, 0}, {0, 1});
    CHECK(a[0] == Approx(kPi / 2));
    CHECK(a[1] == Approx(kPi / 4));
    CHECK(a[2] == Approx(kPi / 4));

    a = interior_angles({0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2});
    for (double v : a) CHECK(v == Approx(kPi / 3));

    const Point2 r1{-0.5, 0}, r2{0.5, 0}, r3{0, 2};
    a = interior_angles(r1, r2, r3);
    CHECK(a[0] == Approx(oracle::angle_at(r1, r2, r3)).epsilon(1e-12));
    CHECK(a[1] == Approx(oracle::angle_at(r2, r1, r3)).epsilon(1e-12));
    CHECK(a[2] == Approx(oracle::angle_at(r3, r1, r2)).epsilon(1e-12));
    CHECK(a[0] == Approx(1.3258).epsilon(1e-4));
    CHECK(a[2] == Approx(0.4900).epsilon(1e-3));

    CHECK_THROWS_AS(interior_angles({0, 0}, {0, 0}, {1, 1}), DegenerateConfiguration);
}

TEST_CASE("interior angles are chirality-free") {
    RandomStream rng(2);
    for (int i = 0; i < 1000; ++i) {
        const auto p = random_points(rng, 3);
        const auto a = interior_angles(p[0], p[1], p[2]);
        const auto m = interior_angles({-p[0].x, p[0].y}, {-p[1].x, p[1].y}, {-p[2].x, p[2].y});
        for (int k = 0; k < 3; ++k) CHECK(a[k] == Approx(m[k]).epsilon(1e-12));
    }
}

TEST_CASE("smallest enclosing circle: fixed cases") {
    const std::vector<Point2> three{{1, 0}, {-1, 0}, {0, 1}};
    Circle c = smallest_enclosing_circle(three);
    CHECK(c.center.x == Approx(0).epsilon(1e-12));
    CHECK(std::abs(c.center.y) < 1e-12);
    CHECK(c.radius == Approx(1));

    const std::vector<Point2> pair{{0, 0}, {2, 0}};
    c = smallest_enclosing_circle(pair);
    CHECK(c.center == Point2{1, 0});
    CHECK(c.radius == 1.0);

    const std::vector<Point2> single{{3, 4}};
    c = smallest_enclosing_circle(single);
    CHECK(c.center == Point2{3, 4});
    CHECK(c.radius == 0.0);
}

TEST_CASE("smallest enclosing circle matches brute force") {
    RandomStream rng(3);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t n = 1 + rng.below(10);
        const auto p = random_points(rng, n, 10.0);
        const Circle c = smallest_enclosing_circle(p);
        const auto ref = oracle::brute_force_sec(p);
        CHECK(c.radius == Approx(ref.r).epsilon(1e-9));
        CHECK(std::abs(c.center.x - ref.cx) < 1e-8);
        CHECK(std::abs(c.center.y - ref.cy) < 1e-8);
        for (Point2 q : p) CHECK(c.contains(q));
    }
}

TEST_CASE("smallest enclosing circle is order independent") {
    RandomStream rng(4);
    auto p = random_points(rng, 20);
    const Circle a = smallest_enclosing_circle(p);
    std::reverse(p.begin(), p.end());
    const Circle b = smallest_enclosing_circle(p);
    CHECK(a.radius == Approx(b.radius).epsilon(1e-12));
}

TEST_CASE("geometric median") {
    const std::vector<Point2> square{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    Point2 m = geometric_median(square, 1e-12);
    CHECK(m.x == Approx(0.5).epsilon(1e-9));
    CHECK(m.y == Approx(0.5).epsilon(1e-9));

    const std::vector<Point2> tri{{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}};
    m = geometric_median(tri, 1e-12);
    const Point2 g = centroid(tri);
    CHECK(distance(m, g) < 1e-9);

    const std::vector<Point2> line{{0, 0}, {1, 0}, {10, 0}};
    m = geometric_median(line, 1e-12);
    CHECK(distance(m, {1, 0}) < 1e-9);
}

TEST_CASE("geometric median on collinear points is the 1-D median") {
    RandomStream rng(5);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 3 + 2 * rng.below(4);  // odd
        std::vector<double> xs;
        std::vector<Point2> p;
        for (std::size_t i = 0; i < n; ++i) {
            xs.push_back(rng.uniform(-10, 10));
            p.push_back({xs.back(), 0.0});
        }
        std::sort(xs.begin(), xs.end());
        const Point2 m = geometric_median(p, 1e-12);
        CHECK(std::abs(m.x - xs[n / 2]) < 1e-7);
        CHECK(std::abs(m.y) < 1e-12);
    }
}

TEST_CASE("geometric median never loses to the centroid") {
    RandomStream rng(6);
    const double tol = 1e-12;
    for (int trial = 0; trial < 10000; ++trial) {
        const std::size_t n = 3 + rng.below(8);
        const auto p = random_points(rng, n);
        const Point2 m = geometric_median(p, tol);
        CHECK(sum_of_distances(p, m) <= sum_of_distances(p, centroid(p)) + tol);
    }
}

TEST_CASE("geometric median with coincident inputs") {
    const std::vector<Point2> p{{0, 0}, {0, 0}, {0, 0}, {5, 5}};
    const Point2 m = geometric_median(p, 1e-12);
    CHECK(m == Point2{0, 0});
}

TEST_CASE("banded compare") {
    const IntervalKind cc{Bound::Closed, Bound::Closed};
    const IntervalKind co{Bound::Closed, Bound::Open};
    const IntervalKind oc{Bound::Open, Bound::Closed};
    const IntervalKind oo{Bound::Open, Bound::Open};

    CHECK(banded_compare(0.0, 0, 0, kDefaultBand, cc));
    CHECK(banded_compare(1e-6, 0, 0, kDefaultBand, cc));
    CHECK(banded_compare(-1e-6, 0, 0, kDefaultBand, cc));
    CHECK_FALSE(banded_compare(1.1e-6, 0, 0, kDefaultBand, cc));

    // [A,B[ shifts down by the band
    CHECK_FALSE(banded_compare(1.0, 0, 1, kDefaultBand, co));
    CHECK(banded_compare(1.0 - 2e-6, 0, 1, kDefaultBand, co));
    CHECK(banded_compare(-1e-6, 0, 1, kDefaultBand, co));
    // ]A,B] shifts up
    CHECK_FALSE(banded_compare(1e-6, 0, 1, kDefaultBand, oc));
    CHECK(banded_compare(1.0 + 1e-6, 0, 1, kDefaultBand, oc));
    // ]A,B[ narrows
    CHECK_FALSE(banded_compare(1e-6, 0, 1, kDefaultBand, oo));
    CHECK_FALSE(banded_compare(1 - 1e-6, 0, 1, kDefaultBand, oo));
    CHECK(banded_compare(0.5, 0, 1, kDefaultBand, oo));

    // zero band is plain membership
    CHECK(banded_compare(0.0, 0, 1, 0.0, co));
    CHECK_FALSE(banded_compare(1.0, 0, 1, 0.0, co));
    CHECK_FALSE(banded_compare(0.0, 0, 1, 0.0, oc));
    CHECK(banded_compare(1.0, 0, 1, 0.0, oc));
}

TEST_CASE("local frames") {
    const LocalFrame id = LocalFrame::identity();
    CHECK(to_local(id, {1.5, -2}) == Point2{1.5, -2});

    const LocalFrame quarter(kPi / 2, false);
    const Point2 q = to_local(quarter, {1, 0});
    CHECK(std::abs(q.x) < 1e-15);
    CHECK(q.y == Approx(-1));

    RandomStream rng(7);
    for (int i = 0; i < 10000; ++i) {
        const double rot = rng.uniform(0, kTwoPi);
        const bool refl = rng.bernoulli(0.5);
        const Point2 origin{rng.uniform(-5, 5), rng.uniform(-5, 5)};
        const LocalFrame f(rot, refl, origin);
        const Point2 p{rng.uniform(-5, 5), rng.uniform(-5, 5)};
        const Point2 l = to_local(f, p);
        const Point2 ref = oracle::to_local(rot, refl, origin, p);
        CHECK(distance(l, ref) < 1e-12);
        CHECK(distance(from_local(f, l), p) < 1e-12);
    }
}

TEST_CASE("midpoint is frame equivariant") {
    RandomStream rng(8);
    for (int i = 0; i < 10000; ++i) {
        const LocalFrame f(rng.uniform(0, kTwoPi), rng.bernoulli(0.5), {rng.uniform(-3, 3), rng.uniform(-3, 3)});
        const Point2 a{rng.uniform(-3, 3), rng.uniform(-3, 3)}, b{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        const Point2 back = from_local(f, midpoint(to_local(f, a), to_local(f, b)));
        CHECK(distance(back, midpoint(a, b)) < 1e-9);
    }
}

TEST_CASE("polar offsets") {
    const PolarOffset p = PolarOffset::from_cartesian({0, -2});
    CHECK(p.r == 2.0);
    CHECK(p.theta == Approx(3 * kPi / 2));
    const Point2 back = p.to_cartesian();
    CHECK(std::abs(back.x) < 1e-15);
    CHECK(back.y == Approx(-2));
    CHECK(normalize_angle(-kPi / 2) == Approx(3 * kPi / 2));
    CHECK(normalize_angle(5 * kPi) == Approx(kPi));
    CHECK(normalize_angle(0.0) == 0.0);
}
