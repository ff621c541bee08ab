#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "swarmsim/error_models.hpp"
#include "swarmsim/errors.hpp"
#include "swarmsim/random.hpp"

using namespace swarmsim;
using doctest::Approx;

TEST_CASE("seed derivation") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(derive_seed(42, i));
    CHECK(seen.size() == 10000);
    CHECK(derive_seed(42, 7) == derive_seed(42, 7));
    CHECK(derive_seed(42, 7) != derive_seed(43, 7));
    CHECK(derive_seed(1, 0, StreamId::Perception) != derive_seed(1, 0, StreamId::Motion));
}

TEST_CASE("random stream ranges") {
    RandomStream rng(9);
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform01();
        CHECK((u >= 0.0 && u < 1.0));
        const double v = rng.uniform01_open_closed();
        CHECK((v > 0.0 && v <= 1.0));
        CHECK(rng.below(7) < 7);
    }
    RandomStream a(10), b(10);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("below is uniform") {
    RandomStream rng(11);
    std::array<int, 5> counts{};
    const int n = 500000;
    for (int i = 0; i < n; ++i) ++counts[rng.below(5)];
    for (int c : counts) CHECK(double(c) / n == Approx(0.2).epsilon(0.02));
}

TEST_CASE("no error is the identity and draws nothing") {
    RandomStream a(12), b(12);
    const VisionErrorSpec none;
    const Point2 p{0.3, -1.7};
    CHECK(perturb(p, none, a) == p);
    CHECK(a.next_u64() == b.next_u64());

    VisionErrorSpec zero;
    zero.kind = VisionErrorKind::Relative;
    CHECK(zero.is_identity());
    CHECK(perturb(p, zero, a) == p);
    zero.kind = VisionErrorKind::Absolute;
    CHECK(perturb(p, zero, a) == p);
}

TEST_CASE("absolute model formula") {
    VisionErrorSpec s;
    s.kind = VisionErrorKind::Absolute;
    s.err = 0.25;
    const Point2 out = apply_error({1.0, 2.0}, s, {0.25, 0.0});
    CHECK(out.x == 1.25);
    CHECK(out.y == 2.0);
}

TEST_CASE("relative and abs_rel model formulas") {
    VisionErrorSpec s;
    s.kind = VisionErrorKind::Relative;
    s.err_dist = 0.1;
    Point2 out = apply_error({1.0, 0.0}, s, {0.1, 0.0});
    CHECK(out.x == Approx(1.1));
    CHECK(std::abs(out.y) < 1e-15);

    out = apply_error({0.0, 2.0}, s, {-0.5, std::numbers::pi / 2});
    CHECK(out.x == Approx(-1.0));
    CHECK(std::abs(out.y) < 1e-12);

    s.kind = VisionErrorKind::AbsRel;
    out = apply_error({2.0, 0.0}, s, {0.5, 0.0});
    CHECK(out.x == Approx(2.5));
    // a radius pushed below zero clamps to the observer
    out = apply_error({0.2, 0.0}, s, {-0.5, 0.0});
    CHECK(out == Point2{0.0, 0.0});
}

TEST_CASE("absolute containment") {
    VisionErrorSpec s;
    s.kind = VisionErrorKind::Absolute;
    s.err = 0.01;
    RandomStream rng(13);
    const Point2 p{0.7, -0.2};
    double max_seen = 0.0;
    for (int i = 0; i < 1000000; ++i) {
        const Point2 q = perturb(p, s, rng);
        max_seen = std::max(max_seen, distance(p, q));
    }
    CHECK(max_seen <= s.err * (1 + 1e-12));
    CHECK(max_seen > 0.99 * s.err);
}

TEST_CASE("relative containment") {
    VisionErrorSpec s;
    s.kind = VisionErrorKind::Relative;
    s.err_dist = 0.1;
    s.err_angle = 0.2;
    RandomStream rng(14);
    const Point2 p{3.0, 4.0};
    const double r = 5.0;
    const double theta = std::atan2(4.0, 3.0);
    for (int i = 0; i < 100000; ++i) {
        const Point2 q = perturb(p, s, rng);
        const double rq = q.norm();
        CHECK(rq >= r * (1 - s.err_dist) - 1e-12);
        CHECK(rq <= r * (1 + s.err_dist) + 1e-12);
        double d = std::atan2(q.y, q.x) - theta;
        CHECK(std::abs(d) <= s.err_angle + 1e-12);
    }
}

TEST_CASE("compass offsets") {
    RandomStream rng(15);
    CompassErrorSpec c;
    c.kind = CompassErrorKind::Static;
    c.max_error = 0.1;
    initialize_compass(c, rng);
    const double fixed = c.current_offset;
    CHECK(std::abs(fixed) <= 0.1);
    refresh_compass(c, rng);
    CHECK(c.current_offset == fixed);

    c.kind = CompassErrorKind::Dynamic;
    bool changed = false;
    for (int i = 0; i < 10; ++i) {
        refresh_compass(c, rng);
        CHECK(std::abs(c.current_offset) <= 0.1);
        changed = changed || c.current_offset != fixed;
    }
    CHECK(changed);

    CompassErrorSpec none;
    initialize_compass(none, rng);
    CHECK(none.current_offset == 0.0);
}

TEST_CASE("string forms") {
    for (auto k : {VisionErrorKind::None, VisionErrorKind::Absolute, VisionErrorKind::Relative,
                   VisionErrorKind::AbsRel})
        CHECK(vision_kind_from_string(to_string(k)) == k);
    for (auto k : {CompassErrorKind::None, CompassErrorKind::Static, CompassErrorKind::Dynamic})
        CHECK(compass_kind_from_string(to_string(k)) == k);
    CHECK(draw_at_from_string(to_string(DrawAt::Init)) == DrawAt::Init);
    CHECK_THROWS_AS(vision_kind_from_string("gaussian"), ConfigError);
}
