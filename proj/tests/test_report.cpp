#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "depth_hjb/report.hpp"

using namespace depth_hjb;

namespace {

Density unit_square() {
    return Density::uniform_convex_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

double square_depth(double x, double y) {
    if (x < 0 || x > 1 || y < 0 || y > 1) return 0.0;
    return 2.0 * std::min({x * y, (1 - x) * y, x * (1 - y), (1 - x) * (1 - y)});
}

GridField square_exact_field(const GridSpec& spec) {
    GridField f(spec);
    for (int j = 0; j < spec.ny; ++j) {
        for (int i = 0; i < spec.nx; ++i) {
            Vec2 p = spec.node(i, j);
            f.at(i, j) = square_depth(p.x, p.y);
            bool inside = p.x > 1e-12 && p.x < 1 - 1e-12 && p.y > 1e-12 && p.y < 1 - 1e-12;
            f.state(i, j) = inside ? NodeState::Fixed : NodeState::Boundary;
        }
    }
    return f;
}

double polyline_area(const Polyline& pl) { return std::fabs(polygon_area(pl.points)); }

}  // namespace

TEST_CASE("compare_fields metrics") {
    GridSpec spec = GridSpec::cover({0, 0}, {1, 1}, 1.0 / 16.0, 1);
    GridField t = square_exact_field(spec);

    ComparisonReport same = compare_fields(t, t);
    CHECK(same.l_inf == 0.0);
    CHECK(same.l1_mean == 0.0);
    CHECK(same.signed_max == 0.0);

    GridField shifted = t;
    for (double& v : shifted.values) v -= 0.01;
    ComparisonReport rep = compare_fields(shifted, t);
    CHECK(rep.l_inf == doctest::Approx(0.01));
    CHECK(rep.signed_max == doctest::Approx(-0.01));
    CHECK(rep.l1_mean == doctest::Approx(0.01));
    CHECK(rep.l_inf >= std::fabs(rep.signed_max));
    CHECK(rep.l_inf >= rep.l1_mean);

    GridSpec other = GridSpec::cover({0, 0}, {1, 1}, 1.0 / 8.0, 1);
    GridField small(other);
    CHECK_THROWS_AS(compare_fields(t, small), ShapeMismatch);
}

TEST_CASE("contours of the exact square depth are nested closed convex curves") {
    GridSpec spec = GridSpec::cover({0, 0}, {1, 1}, 1.0 / 128.0, 1);
    GridField t = square_exact_field(spec);
    auto contours = extract_contours(t, {0.1, 0.25, 0.6});

    REQUIRE(contours.size() == 3);
    CHECK_FALSE(contours[0].empty);
    CHECK_FALSE(contours[1].empty);
    REQUIRE(contours[0].polylines.size() == 1);
    REQUIRE(contours[1].polylines.size() == 1);
    CHECK(contours[0].polylines[0].closed);
    CHECK(contours[1].polylines[0].closed);
    // nested: the higher level encloses less area
    CHECK(polyline_area(contours[1].polylines[0]) < polyline_area(contours[0].polylines[0]));
    // level above the maximum 0.5: warning entry
    CHECK(contours[2].empty);
    CHECK(contours[2].polylines.empty());

    // convexity of level sets: hull area within 2% of enclosed area
    for (int k = 0; k < 2; ++k) {
        const Polyline& pl = contours[k].polylines[0];
        double area = polyline_area(pl);
        double hull_area = std::fabs(polygon_area(convex_hull(pl.points)));
        CHECK(hull_area <= area * 1.02);
    }
}

TEST_CASE("gaussian depth contours are near-circular at the oracle radius") {
    Density g = Density::gaussian2d({0, 0}, {{{1, 0}, {0, 1}}});
    GridSpec spec = GridSpec::cover({-3, -3}, {3, 3}, 6.0 / 256.0, 0, BoundaryKind::TruncatedBox);
    GridField f(spec);
    for (int j = 0; j < spec.ny; ++j) {
        for (int i = 0; i < spec.nx; ++i) {
            f.at(i, j) = *g.closed_form_depth(spec.node(i, j));
            f.state(i, j) = NodeState::Fixed;
        }
    }
    auto contours = extract_contours(f, {0.1, 0.2, 0.3, 0.4});
    REQUIRE(contours.size() == 4);
    double prev_area = 1e300;
    for (const LevelContours& lc : contours) {
        REQUIRE(lc.polylines.size() == 1);
        const Polyline& pl = lc.polylines[0];
        CHECK(pl.closed);
        double rmin = 1e300, rmax = 0.0;
        for (Vec2 p : pl.points) {
            rmin = std::min(rmin, norm(p));
            rmax = std::max(rmax, norm(p));
        }
        CHECK(rmax / rmin <= 1.05);  // eccentricity proxy
        // oracle radius: depth Phi(-r) = level  =>  r from the closed form
        double r_lo = 0.0, r_hi = 5.0;
        for (int it = 0; it < 100; ++it) {
            double mid = 0.5 * (r_lo + r_hi);
            (normal_cdf(-mid) > lc.level ? r_lo : r_hi) = mid;
        }
        double r_star = 0.5 * (r_lo + r_hi);
        CHECK(std::fabs(0.5 * (rmin + rmax) - r_star) <= 2.0 * spec.spacing);
        double area = polyline_area(pl);
        CHECK(area < prev_area);
        prev_area = area;
    }
}

TEST_CASE("convergence table on the square and in 1D") {
    Density sq = unit_square();
    SolverConfig cfg;
    auto reference = [&](const GridSpec& spec) { return square_exact_field(spec); };
    auto rows = convergence_table(sq, {1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0}, cfg, reference);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].ratio == 0.0);
    // the scheme reproduces the square exactly, so every row sits at the floor
    for (const auto& r : rows) CHECK(r.l_inf <= 1e-7);

    CHECK_THROWS_AS(convergence_table(sq, {0.25}, cfg, reference), DomainError);

    // 1D uniform: the trapezoid scheme is exact at any spacing
    Density u1 = Density::uniform1d(0, 1);
    auto ref1d = [&](const GridSpec& spec) {
        GridField f(spec);
        for (int i = 0; i < spec.nx; ++i) {
            f.at(i, 0) = *u1.closed_form_depth(spec.node(i, 0));
            f.states[i] = (i == 0 || i == spec.nx - 1) ? NodeState::Boundary : NodeState::Fixed;
        }
        return f;
    };
    auto rows1d = convergence_table(u1, {1.0 / 16.0, 1.0 / 64.0}, cfg, ref1d);
    for (const auto& r : rows1d) CHECK(r.l_inf <= 1e-12);
}

TEST_CASE("oracle field marks states like the solver") {
    Density sq = unit_square();
    GridSpec spec = GridSpec::cover({0, 0}, {1, 1}, 0.125, 2);
    GridField f = oracle_depth_field(sq, spec);
    CHECK(f.state(0, 0) == NodeState::Boundary);
    CHECK(f.at(0, 0) == 0.0);
    int ic = static_cast<int>(std::lround((0.5 - spec.origin.x) / spec.spacing));
    CHECK(f.state(ic, ic) == NodeState::Fixed);
    CHECK(f.at(ic, ic) == doctest::Approx(0.5).epsilon(1e-9));
}
