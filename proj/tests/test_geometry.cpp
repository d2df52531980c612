#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "depth_hjb/geometry.hpp"

using namespace depth_hjb;

TEST_CASE("directions are unit and the angle parameterization round-trips") {
    for (int k = 0; k < 720; ++k) {
        double theta = kTwoPi * k / 720.0 + 0.123;
        Direction d = Direction::from_angle(theta);
        CHECK(std::fabs(norm(d.vec()) - 1.0) <= 1e-12);
        CHECK(std::fabs(d.x() - std::cos(d.angle())) <= 1e-12);
        CHECK(std::fabs(d.y() - std::sin(d.angle())) <= 1e-12);
        CHECK(angle_distance(d.angle(), theta) <= 1e-12);
    }
}

TEST_CASE("from_vector is scale invariant") {
    Vec2 v{3.0, -4.0};
    Direction a = Direction::from_vector(v);
    Direction b = Direction::from_vector(v * 17.5);
    CHECK(a.x() == doctest::Approx(b.x()).epsilon(1e-15));
    CHECK(a.y() == doctest::Approx(b.y()).epsilon(1e-15));
    CHECK(std::fabs(norm(a.vec()) - 1.0) <= 1e-12);
    CHECK_THROWS_AS(Direction::from_vector({0.0, 0.0}), DomainError);
}

TEST_CASE("1d directions") {
    CHECK(Direction::axis1d(1).x() == 1.0);
    CHECK(Direction::axis1d(-1).x() == -1.0);
    CHECK(Direction::axis1d(1).reversed().x() == -1.0);
    CHECK_THROWS_AS(Direction::axis1d(0), DomainError);
}

namespace {

ConvexPolygon unit_square() {
    return ConvexPolygon({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}});
}

}  // namespace

TEST_CASE("polygon validation") {
    CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {1, 0}}), DomainError);
    // clockwise
    CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}}), DomainError);
    // collinear vertex
    CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {0.5, 0.0}, {1, 0}, {1, 1}, {0, 1}}), DomainError);
}

TEST_CASE("halfplane clip areas") {
    ConvexPolygon sq = unit_square();
    CHECK(sq.area() == doctest::Approx(1.0));
    CHECK(sq.clipped_area({0.25, 0.5}, {1.0, 0.0}) == doctest::Approx(0.75));
    CHECK(sq.clipped_area({0.5, 0.5}, {0.0, 1.0}) == doctest::Approx(0.5));
    CHECK(sq.clipped_area({2.0, 0.0}, {1.0, 0.0}) == doctest::Approx(0.0));
    CHECK(sq.clipped_area({-1.0, 0.0}, {1.0, 0.0}) == doctest::Approx(1.0));
}

TEST_CASE("chords") {
    ConvexPolygon sq = unit_square();
    CHECK(sq.chord_length({0.5, 0.5}, {0.0, 1.0}) == doctest::Approx(1.0));
    double inv = 1.0 / std::sqrt(2.0);
    CHECK(sq.chord_length({0.5, 0.5}, {inv, inv}) == doctest::Approx(std::sqrt(2.0)));
    CHECK(sq.chord_length({2.0, 2.0}, {0.0, 1.0}) == 0.0);
    auto iv = sq.line_interval({0.25, 0.5}, {0.0, 1.0});
    REQUIRE(iv.has_value());
    CHECK(iv->first == doctest::Approx(-0.5));
    CHECK(iv->second == doctest::Approx(0.5));
}

TEST_CASE("containment with distance tolerance") {
    ConvexPolygon sq = unit_square();
    CHECK(sq.contains({0.5, 0.5}));
    CHECK(sq.contains({0.0, 0.5}));
    CHECK_FALSE(sq.contains({-0.01, 0.5}));
    CHECK(sq.contains({-0.01, 0.5}, 0.02));
    CHECK_FALSE(sq.contains({0.01, 0.5}, -0.02));
}

TEST_CASE("affine maps invert and compose") {
    AffineMap2 shear = AffineMap2::linear(1.0, 0.5, 0.0, 1.0, {0.2, -0.1});
    AffineMap2 inv = shear.inverse();
    Vec2 p{0.3, 0.7};
    Vec2 q = inv.apply(shear.apply(p));
    CHECK(q.x == doctest::Approx(p.x).epsilon(1e-14));
    CHECK(q.y == doctest::Approx(p.y).epsilon(1e-14));
    CHECK(shear.det() == doctest::Approx(1.0));
    CHECK(AffineMap2::identity().is_identity());
    CHECK_FALSE(shear.is_identity());
    CHECK_THROWS_AS(AffineMap2::linear(1.0, 2.0, 2.0, 4.0).inverse(), SingularTransform);

    AffineMap2 rot = AffineMap2::rotation(0.5 * kPi, {0.5, 0.5});
    Vec2 r = rot.apply({1.0, 0.0});
    CHECK(r.x == doctest::Approx(1.0));
    CHECK(r.y == doctest::Approx(1.0));
}

TEST_CASE("transformed polygons keep orientation") {
    ConvexPolygon sq = unit_square();
    AffineMap2 shear = AffineMap2::linear(1.0, 0.5, 0.0, 1.0);
    ConvexPolygon sheared = sq.transformed(shear);
    CHECK(sheared.area() == doctest::Approx(1.0));
    // reflection flips orientation; the constructor would reject CW input
    AffineMap2 reflect = AffineMap2::linear(-1.0, 0.0, 0.0, 1.0);
    ConvexPolygon mirrored = sq.transformed(reflect);
    CHECK(mirrored.area() == doctest::Approx(1.0));
}

TEST_CASE("convex hull of a point cloud") {
    std::vector<Vec2> pts{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0.2, 0.9}};
    auto hull = convex_hull(pts);
    CHECK(hull.size() == 4);
    CHECK(polygon_area(hull) == doctest::Approx(1.0));
}
