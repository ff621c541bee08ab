#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <span>

namespace swarmsim {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point2 operator*(Point2 a, double k) { return {a.x * k, a.y * k}; }
    friend constexpr Point2 operator*(double k, Point2 a) { return {a.x * k, a.y * k}; }
    friend constexpr Point2 operator/(Point2 a, double k) { return {a.x / k, a.y / k}; }
    friend constexpr bool operator==(Point2, Point2) = default;

    double norm() const { return std::hypot(x, y); }
    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle into [0, 2π).
double normalize_angle(double theta);

struct PolarOffset {
    double r = 0.0;
    double theta = 0.0;  // [0, 2π)

    static PolarOffset from_cartesian(Point2 p);
    Point2 to_cartesian() const;
};

struct Circle {
    Point2 center;
    double radius = 0.0;

    bool contains(Point2 p, double slack = 1e-9) const;
};

/// A robot's private coordinate system: origin at the robot, arbitrary
/// orientation and handedness. Cosine and sine are cached at construction.
class LocalFrame {
public:
    LocalFrame() = default;
    LocalFrame(double rotation, bool reflect, Point2 origin = {});

    double rotation() const { return rotation_; }
    bool reflect() const { return reflect_; }
    Point2 origin() const { return origin_; }

    LocalFrame with_origin(Point2 origin) const;
    LocalFrame rotated(double extra) const;

    static LocalFrame identity() { return {}; }

private:
    double rotation_ = 0.0;
    bool reflect_ = false;
    Point2 origin_;
    double cos_ = 1.0;
    double sin_ = 0.0;

    friend Point2 to_local(const LocalFrame&, Point2);
    friend Point2 from_local(const LocalFrame&, Point2);
    friend Point2 direction_to_local(const LocalFrame&, Point2);
};

double distance(Point2 a, Point2 b);
Point2 midpoint(Point2 a, Point2 b);

/// Throws ContractViolation on empty input.
Point2 centroid(std::span<const Point2> points);

/// Unsigned angle at each vertex, in vertex order. Opposite orientations
/// are indistinguishable. Throws DegenerateConfiguration on coincident points.
std::array<double, 3> interior_angles(Point2 a, Point2 b, Point2 c);

/// Randomized incremental construction with a fixed internal shuffle, so
/// the result is a pure function of the input.
Circle smallest_enclosing_circle(std::span<const Point2> points);

double sum_of_distances(std::span<const Point2> points, Point2 to);

/// Weiszfeld iteration started at the centroid. Stops once successive
/// iterates move less than `tolerance`; snaps to an input point when the
/// iterate lands within `tolerance` of it and the snap does not worsen the
/// objective.
Point2 geometric_median(std::span<const Point2> points, double tolerance);

enum class Bound { Closed, Open };

struct IntervalKind {
    Bound lo = Bound::Closed;
    Bound hi = Bound::Closed;
};

inline constexpr double kDefaultBand = 1e-6;

/// Interval membership with bounds widened or shifted by `band`:
///   [A,B[ -> [A-b, B-b[     [A,B] -> [A-b, B+b]
///   ]A,B] -> ]A+b, B+b]     ]A,B[ -> ]A+b, B-b[
bool banded_compare(double value, double lo, double hi, double band, IntervalKind kind);

Point2 to_local(const LocalFrame& frame, Point2 p);
Point2 from_local(const LocalFrame& frame, Point2 p);
/// Rotation/reflection only (no translation); for displacement vectors.
Point2 direction_to_local(const LocalFrame& frame, Point2 v);

}  // namespace swarmsim
