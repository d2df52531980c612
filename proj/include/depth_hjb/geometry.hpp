#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "depth_hjb/errors.hpp"

namespace depth_hjb {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator-() const { return {-x, -y}; }
    bool operator==(const Vec2&) const = default;
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double norm_sq(Vec2 a) { return a.x * a.x + a.y * a.y; }
// Counter-clockwise perpendicular.
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }

/// Unit vector on S^{n-1}, n in {1,2}. In 2D it also carries the angle it
/// was built from so the angle parameterization round-trips exactly.
class Direction {
  public:
    // 2D direction (cos t, sin t); t is wrapped into [0, 2pi).
    static Direction from_angle(double theta) {
        double t = wrap_angle(theta);
        Direction d;
        d.dim_ = 2;
        d.v_ = {std::cos(t), std::sin(t)};
        d.angle_ = t;
        return d;
    }

    // Normalizes an arbitrary nonzero 2D vector.
    static Direction from_vector(Vec2 v) {
        double n = norm(v);
        if (!(n > 0.0) || !std::isfinite(n)) {
            throw DomainError("Direction::from_vector: zero or non-finite vector");
        }
        Direction d;
        d.dim_ = 2;
        d.v_ = {v.x / n, v.y / n};
        d.angle_ = wrap_angle(std::atan2(d.v_.y, d.v_.x));
        return d;
    }

    // 1D direction, sign in {-1,+1}.
    static Direction axis1d(int sign) {
        if (sign != 1 && sign != -1) throw DomainError("Direction::axis1d: sign must be +-1");
        Direction d;
        d.dim_ = 1;
        d.v_ = {static_cast<double>(sign), 0.0};
        d.angle_ = sign > 0 ? 0.0 : kPi;
        return d;
    }

    int dim() const { return dim_; }
    Vec2 vec() const { return v_; }
    double x() const { return v_.x; }
    double y() const { return v_.y; }
    double angle() const { return angle_; }
    Direction reversed() const {
        return dim_ == 1 ? axis1d(v_.x > 0 ? -1 : 1) : from_angle(angle_ + kPi);
    }

    static double wrap_angle(double t) {
        double w = std::fmod(t, kTwoPi);
        if (w < 0.0) w += kTwoPi;
        if (w >= kTwoPi) w = 0.0;
        return w;
    }

  private:
    int dim_ = 2;
    Vec2 v_{1.0, 0.0};
    double angle_ = 0.0;
};

// Shortest angular distance between two angles.
inline double angle_distance(double a, double b) {
    double d = std::fabs(Direction::wrap_angle(a) - Direction::wrap_angle(b));
    return std::min(d, kTwoPi - d);
}

/// Invertible affine map x -> A x + b.
struct AffineMap2 {
    // Row-major 2x2 linear part.
    std::array<std::array<double, 2>, 2> a{{{1.0, 0.0}, {0.0, 1.0}}};
    Vec2 b{0.0, 0.0};

    static AffineMap2 identity() { return {}; }
    static AffineMap2 linear(double a00, double a01, double a10, double a11, Vec2 shift = {}) {
        AffineMap2 m;
        m.a = {{{a00, a01}, {a10, a11}}};
        m.b = shift;
        return m;
    }
    static AffineMap2 rotation(double theta, Vec2 center = {}) {
        double c = std::cos(theta), s = std::sin(theta);
        AffineMap2 m = linear(c, -s, s, c);
        m.b = center - m.apply_linear(center);
        return m;
    }

    double det() const { return a[0][0] * a[1][1] - a[0][1] * a[1][0]; }

    Vec2 apply(Vec2 p) const { return apply_linear(p) + b; }
    Vec2 apply_linear(Vec2 p) const {
        return {a[0][0] * p.x + a[0][1] * p.y, a[1][0] * p.x + a[1][1] * p.y};
    }
    // A^T p (used to pull halfspace normals through the map).
    Vec2 apply_linear_transpose(Vec2 p) const {
        return {a[0][0] * p.x + a[1][0] * p.y, a[0][1] * p.x + a[1][1] * p.y};
    }

    AffineMap2 inverse() const {
        double d = det();
        if (std::fabs(d) < 1e-300) throw SingularTransform("AffineMap2: singular linear part");
        AffineMap2 inv = linear(a[1][1] / d, -a[0][1] / d, -a[1][0] / d, a[0][0] / d);
        inv.b = -inv.apply_linear(b);
        return inv;
    }

    bool is_identity() const {
        return a[0][0] == 1.0 && a[0][1] == 0.0 && a[1][0] == 0.0 && a[1][1] == 1.0 &&
               b.x == 0.0 && b.y == 0.0;
    }
};

/// Strictly convex polygon, vertices in CCW order.
class ConvexPolygon {
  public:
    ConvexPolygon() = default;
    explicit ConvexPolygon(std::vector<Vec2> vertices);

    const std::vector<Vec2>& vertices() const { return verts_; }
    std::size_t size() const { return verts_.size(); }
    double area() const { return area_; }
    double diameter() const;
    Vec2 bbox_min() const { return bbox_min_; }
    Vec2 bbox_max() const { return bbox_max_; }

    bool contains(Vec2 p, double tol = 0.0) const;

    // Area of the polygon clipped to the halfplane {y : (y - p).n >= 0}.
    double clipped_area(Vec2 p, Vec2 n) const;

    // Intersection of the line {p + t d} with the polygon, as a t-interval.
    // Empty optional when the line misses the polygon.
    std::optional<std::pair<double, double>> line_interval(Vec2 p, Vec2 d) const;

    // Chord length of the line {p + t d} inside the polygon (0 if it misses).
    double chord_length(Vec2 p, Vec2 d) const;

    ConvexPolygon transformed(const AffineMap2& map) const;

  private:
    std::vector<Vec2> verts_;
    double area_ = 0.0;
    Vec2 bbox_min_{0.0, 0.0};
    Vec2 bbox_max_{0.0, 0.0};
};

// Shoelace area of an arbitrary closed polyline (positive if CCW).
double polygon_area(const std::vector<Vec2>& pts);

// Convex hull (Andrew monotone chain), CCW, no duplicate endpoint.
std::vector<Vec2> convex_hull(std::vector<Vec2> pts);

}  // namespace depth_hjb
