#include "swarmsim/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "swarmsim/errors.hpp"

namespace swarmsim {

double normalize_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    // fmod of a tiny negative value plus 2π can round up to 2π itself
    if (t >= kTwoPi) t = 0.0;
    return t;
}

PolarOffset PolarOffset::from_cartesian(Point2 p) {
    return {p.norm(), normalize_angle(std::atan2(p.y, p.x))};
}

Point2 PolarOffset::to_cartesian() const {
    return {r * std::cos(theta), r * std::sin(theta)};
}

bool Circle::contains(Point2 p, double slack) const {
    return distance(center, p) <= radius + slack;
}

LocalFrame::LocalFrame(double rotation, bool reflect, Point2 origin)
    : rotation_(rotation),
      reflect_(reflect),
      origin_(origin),
      cos_(std::cos(rotation)),
      sin_(std::sin(rotation)) {}

LocalFrame LocalFrame::with_origin(Point2 origin) const {
    LocalFrame f = *this;
    f.origin_ = origin;
    return f;
}

LocalFrame LocalFrame::rotated(double extra) const {
    return LocalFrame(rotation_ + extra, reflect_, origin_);
}

Point2 direction_to_local(const LocalFrame& f, Point2 v) {
    // rotate by -rotation, then mirror y
    Point2 r{f.cos_ * v.x + f.sin_ * v.y, -f.sin_ * v.x + f.cos_ * v.y};
    if (f.reflect_) r.y = -r.y;
    return r;
}

Point2 to_local(const LocalFrame& f, Point2 p) {
    return direction_to_local(f, p - f.origin_);
}

Point2 from_local(const LocalFrame& f, Point2 p) {
    if (f.reflect_) p.y = -p.y;
    Point2 r{f.cos_ * p.x - f.sin_ * p.y, f.sin_ * p.x + f.cos_ * p.y};
    return r + f.origin_;
}

double distance(Point2 a, Point2 b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

Point2 midpoint(Point2 a, Point2 b) {
    return {(a.x + b.x) / 2.0, (a.y + b.y) / 2.0};
}

Point2 centroid(std::span<const Point2> points) {
    if (points.empty()) throw ContractViolation("centroid of an empty point set");
    Point2 sum;
    for (const auto& p : points) sum = sum + p;
    return sum / static_cast<double>(points.size());
}

std::array<double, 3> interior_angles(Point2 a, Point2 b, Point2 c) {
    if (a == b || b == c || a == c)
        throw DegenerateConfiguration("interior_angles: coincident vertices");
    auto at = [](Point2 v, Point2 p, Point2 q) {
        const Point2 u = p - v;
        const Point2 w = q - v;
        return std::atan2(std::abs(cross(u, w)), dot(u, w));
    };
    return {at(a, b, c), at(b, c, a), at(c, a, b)};
}

namespace {

Circle circle_from_two(Point2 a, Point2 b) {
    const Point2 c = midpoint(a, b);
    return {c, std::max(distance(c, a), distance(c, b))};
}

// Circumcircle; an invalid (negative radius) circle for collinear input.
Circle circumcircle(Point2 a, Point2 b, Point2 c) {
    const double ox = (std::min({a.x, b.x, c.x}) + std::max({a.x, b.x, c.x})) / 2.0;
    const double oy = (std::min({a.y, b.y, c.y}) + std::max({a.y, b.y, c.y})) / 2.0;
    const double ax = a.x - ox, ay = a.y - oy;
    const double bx = b.x - ox, by = b.y - oy;
    const double cx = c.x - ox, cy = c.y - oy;
    const double d = (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by)) * 2.0;
    if (d == 0.0) return {{}, -1.0};
    const double x = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) +
                      (cx * cx + cy * cy) * (ay - by)) / d;
    const double y = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) +
                      (cx * cx + cy * cy) * (bx - ax)) / d;
    const Point2 center{ox + x, oy + y};
    return {center, std::max({distance(center, a), distance(center, b), distance(center, c)})};
}

constexpr double kContainSlack = 1e-14;

bool inside(const Circle& c, Point2 p) {
    return c.radius >= 0.0 && distance(c.center, p) <= c.radius * (1.0 + kContainSlack);
}

// Smallest circle with p and q on its boundary enclosing pts[0..end).
Circle with_two_points(std::span<const Point2> pts, std::size_t end, Point2 p, Point2 q) {
    const Circle base = circle_from_two(p, q);
    Circle left{{}, -1.0};
    Circle right{{}, -1.0};
    const Point2 pq = q - p;
    for (std::size_t i = 0; i < end; ++i) {
        const Point2 r = pts[i];
        if (inside(base, r)) continue;
        const double side = cross(pq, r - p);
        const Circle c = circumcircle(p, q, r);
        if (c.radius < 0.0) continue;
        const double cside = cross(pq, c.center - p);
        if (side > 0.0 && (left.radius < 0.0 || cside > cross(pq, left.center - p)))
            left = c;
        else if (side < 0.0 && (right.radius < 0.0 || cside < cross(pq, right.center - p)))
            right = c;
    }
    if (left.radius < 0.0 && right.radius < 0.0) return base;
    if (left.radius < 0.0) return right;
    if (right.radius < 0.0) return left;
    return left.radius <= right.radius ? left : right;
}

Circle with_one_point(std::span<const Point2> pts, std::size_t end, Point2 p) {
    Circle c{p, 0.0};
    for (std::size_t i = 0; i < end; ++i) {
        const Point2 q = pts[i];
        if (inside(c, q)) continue;
        c = (c.radius == 0.0) ? circle_from_two(p, q) : with_two_points(pts, i, p, q);
    }
    return c;
}

}  // namespace

Circle smallest_enclosing_circle(std::span<const Point2> points) {
    if (points.empty()) throw ContractViolation("smallest_enclosing_circle of an empty set");
    std::vector<Point2> pts(points.begin(), points.end());
    std::mt19937_64 shuffle_engine(0x5EC5EC5EC5EC5EC5ULL ^ pts.size());
    std::shuffle(pts.begin(), pts.end(), shuffle_engine);

    Circle c{{}, -1.0};
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (c.radius < 0.0 || !inside(c, pts[i])) c = with_one_point(pts, i, pts[i]);
    }
    return c;
}

double sum_of_distances(std::span<const Point2> points, Point2 to) {
    double s = 0.0;
    for (const auto& p : points) s += distance(p, to);
    return s;
}

Point2 geometric_median(std::span<const Point2> points, double tolerance) {
    if (points.empty()) throw ContractViolation("geometric_median of an empty set");
    if (!(tolerance > 0.0)) throw ContractViolation("geometric_median tolerance must be positive");
    if (points.size() == 1) return points.front();

    constexpr int kMaxIterations = 100000;
    Point2 y = centroid(points);
    for (int it = 0; it < kMaxIterations; ++it) {
        // Vardi-Zhang guard: input points coinciding with y are pulled out of
        // the weighted average and handled through their multiplicity.
        Point2 num;
        double denom = 0.0;
        Point2 pull;
        int coincident = 0;
        for (const auto& p : points) {
            const double d = distance(p, y);
            if (d == 0.0) {
                ++coincident;
                continue;
            }
            num = num + p / d;
            denom += 1.0 / d;
            pull = pull + (p - y) / d;
        }
        if (denom == 0.0) return y;  // every point sits on y
        Point2 next = num / denom;
        if (coincident > 0) {
            const double r = pull.norm();
            if (r <= coincident) return y;  // y is optimal
            const double eta = coincident / r;
            next = next * (1.0 - eta) + y * eta;
        }
        const double step = distance(next, y);
        y = next;
        if (step < tolerance) break;
    }

    const Point2* nearest = nullptr;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : points) {
        const double d = distance(p, y);
        if (d < best) {
            best = d;
            nearest = &p;
        }
    }
    if (nearest && best < tolerance &&
        sum_of_distances(points, *nearest) <= sum_of_distances(points, y))
        return *nearest;
    return y;
}

bool banded_compare(double value, double lo, double hi, double band, IntervalKind kind) {
    double a = lo;
    double b = hi;
    if (kind.lo == Bound::Closed && kind.hi == Bound::Open) {
        a -= band;
        b -= band;
    } else if (kind.lo == Bound::Closed && kind.hi == Bound::Closed) {
        a -= band;
        b += band;
    } else if (kind.lo == Bound::Open && kind.hi == Bound::Closed) {
        a += band;
        b += band;
    } else {
        a += band;
        b -= band;
    }
    const bool lo_ok = kind.lo == Bound::Closed ? value >= a : value > a;
    const bool hi_ok = kind.hi == Bound::Closed ? value <= b : value < b;
    return lo_ok && hi_ok;
}

}  // namespace swarmsim
