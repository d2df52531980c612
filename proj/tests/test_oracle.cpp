#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "depth_hjb/oracle.hpp"
#include "depth_hjb/rng.hpp"

using namespace depth_hjb;

namespace {

Density unit_square() {
    return Density::uniform_convex_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

// Exact depth of the uniform unit square.
double square_depth(double x, double y) {
    return 2.0 * std::min({x * y, (1 - x) * y, x * (1 - y), (1 - x) * (1 - y)});
}

bool has_angle(const std::vector<Direction>& dirs, double angle, double tol) {
    return std::any_of(dirs.begin(), dirs.end(), [&](const Direction& d) {
        return angle_distance(d.angle(), angle) <= tol;
    });
}

}  // namespace

TEST_CASE("square depths match the closed form") {
    Density sq = unit_square();
    DepthResult r = tukey_depth(sq, {0.25, 0.25});
    CHECK(r.depth == doctest::Approx(0.125).epsilon(1e-6));
    CHECK(r.argmin_dirs.size() == 1);

    Rng rng(31);
    for (int t = 0; t < 25; ++t) {
        Vec2 x{rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95)};
        CHECK(tukey_depth(sq, x).depth == doctest::Approx(square_depth(x.x, x.y)).epsilon(1e-5));
    }
}

TEST_CASE("square center is a full plateau with cardinal representatives") {
    DepthResult r = tukey_depth(unit_square(), {0.5, 0.5});
    CHECK(r.depth == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(r.plateau);
    REQUIRE(r.argmin_dirs.size() == 4);
    for (int q = 0; q < 4; ++q) CHECK(has_angle(r.argmin_dirs, q * 0.5 * kPi, 1e-12));
}

TEST_CASE("depth outside or on the hull is zero without search") {
    Density sq = unit_square();
    CHECK(tukey_depth(sq, {2.0, 2.0}).depth == 0.0);
    CHECK(tukey_depth(sq, {0.0, 0.5}).depth == 0.0);
    CHECK(tukey_depth(sq, {1.0, 1.0}).argmin_dirs.empty());
}

TEST_CASE("1d depths") {
    Density u = Density::uniform1d(0, 1);
    DepthResult r = tukey_depth(u, {0.3, 0.0});
    CHECK(r.depth == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(r.argmin_dirs.size() == 1);
    CHECK(r.argmin_dirs[0].x() == -1.0);  // the left halfspace carries the smaller mass
    DepthResult mid = tukey_depth(u, {0.5, 0.0});
    CHECK(mid.depth == doctest::Approx(0.5));
    CHECK(mid.argmin_dirs.size() == 2);
}

TEST_CASE("cauchy depth equals the arctan law") {
    Density c = Density::cauchy2d({0, 0}, 1.0);
    for (double r : {0.5, 1.0, 2.5}) {
        double expected = 0.5 - std::atan(r) / kPi;
        CHECK(tukey_depth(c, {r, 0.0}).depth == doctest::Approx(expected).epsilon(1e-9));
        CHECK(*c.closed_form_depth({r, 0.0}) == doctest::Approx(expected).epsilon(1e-15));
    }
}

TEST_CASE("finite-difference gradients match the paper formulas") {
    Density sq = unit_square();
    Vec2 g = depth_gradient_fd(sq, {0.25, 0.3}, 1e-3);
    CHECK(g.x == doctest::Approx(2.0 * 0.3).epsilon(1e-3));
    CHECK(g.y == doctest::Approx(2.0 * 0.25).epsilon(1e-3));

    Density gauss = Density::gaussian2d({0, 0}, {{{1, 0}, {0, 1}}});
    Vec2 gg = depth_gradient_fd(gauss, {1.0, 0.0}, 1e-3);
    double phi1 = std::exp(-0.5) / std::sqrt(kTwoPi);
    CHECK(std::fabs(gg.x + phi1) <= 1e-4);
    CHECK(std::fabs(gg.y) <= 1e-4);

    CHECK_THROWS_AS(depth_gradient_fd(sq, {0.5, 0.5}, 1e-3), NonUniqueArgmin);
}

namespace {

// The finite difference needs the depth to be smooth across the whole
// stencil, not just a unique argmin at x: near a singular line the argmin
// direction jumps between stencil points. Detect that via the oracle itself.
bool fd_stencil_is_smooth(const Density& d, Vec2 x, double step, const Direction& nu_at_x) {
    const Vec2 stencil[4] = {{x.x + step, x.y}, {x.x - step, x.y},
                             {x.x, x.y + step}, {x.x, x.y - step}};
    for (Vec2 p : stencil) {
        DepthResult r = tukey_depth(d, p);
        if (r.argmin_dirs.size() != 1) return false;
        if (angle_distance(r.argmin_dirs[0].angle(), nu_at_x.angle()) > 0.2) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("gradient consistency: fd gradient equals -nu * slice") {
    std::vector<Density> ds = {unit_square(), Density::gaussian2d({0, 0}, {{{1, 0}, {0, 1}}}),
                               Density::cauchy2d({0, 0}, 1.0)};
    Rng rng(404);
    for (const Density& d : ds) {
        int checked = 0;
        while (checked < 20) {
            Vec2 x{rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9)};
            DepthResult r = tukey_depth(d, x);
            if (r.argmin_dirs.size() != 1) continue;
            if (!fd_stencil_is_smooth(d, x, 1e-3, r.argmin_dirs[0])) continue;
            Direction nu = r.argmin_dirs[0];
            Vec2 expected = -d.slice_integral(x, nu) * nu.vec();
            Vec2 fd = depth_gradient_fd(d, x, 1e-3);
            CHECK(norm(fd - expected) <= 1e-3);
            ++checked;
        }
    }
}

TEST_CASE("balanced chords at minimizing directions") {
    Density sq = unit_square();
    CHECK(check_balanced_chord(sq, {0.25, 0.5}, Direction::from_angle(0.0)) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(check_balanced_chord(sq, {0.25, 0.5}, Direction::from_angle(0.5 * kPi)) ==
          doctest::Approx(0.5));
    DepthResult r = tukey_depth(sq, {0.3, 0.3});
    REQUIRE(r.argmin_dirs.size() >= 1);
    CHECK(check_balanced_chord(sq, {0.3, 0.3}, r.argmin_dirs[0]) <= 1e-3);
    CHECK_THROWS_AS(
        check_balanced_chord(Density::gaussian2d({0, 0}, {{{1, 0}, {0, 1}}}), {0, 0},
                             Direction::from_angle(0.0)),
        NotUniformConvex);
}

TEST_CASE("superdifferential generators") {
    Density sq = unit_square();
    auto gens = superdifferential_hull(sq, {0.5, 0.5});
    REQUIRE(gens.size() == 4);
    // generators -nu * chord(nu): the four axis chords have length 1
    for (Vec2 g : gens) CHECK(norm(g) == doctest::Approx(1.0).epsilon(1e-9));
    bool found_px = false, found_py = false;
    for (Vec2 g : gens) {
        if (std::fabs(g.x - 1.0) < 1e-9 && std::fabs(g.y) < 1e-9) found_px = true;
        if (std::fabs(g.y - 1.0) < 1e-9 && std::fabs(g.x) < 1e-9) found_py = true;
    }
    CHECK(found_px);
    CHECK(found_py);

    auto single = superdifferential_hull(sq, {0.25, 0.25});
    REQUIRE(single.size() == 1);
    DepthResult r = tukey_depth(sq, {0.25, 0.25});
    Vec2 expected = -sq.slice_integral({0.25, 0.25}, r.argmin_dirs[0]) * r.argmin_dirs[0].vec();
    CHECK(norm(single[0] - expected) <= 1e-9);

    auto oned = superdifferential_hull(Density::uniform1d(0, 1), {0.5, 0.0});
    REQUIRE(oned.size() == 2);
    std::vector<double> xs{oned[0].x, oned[1].x};
    std::sort(xs.begin(), xs.end());
    CHECK(xs[0] == doctest::Approx(-1.0));
    CHECK(xs[1] == doctest::Approx(1.0));
}

TEST_CASE("probe grid: depth never exceeds one half") {
    std::vector<Density> ds = {unit_square(), Density::gaussian2d({0, 0}, {{{1, 0}, {0, 1}}}),
                               Density::valley(0.05)};
    for (const Density& d : ds) {
        auto [lo, hi] = d.support_bbox();
        for (int j = 0; j < 20; ++j) {
            for (int i = 0; i < 20; ++i) {
                Vec2 x{lo.x + (hi.x - lo.x) * (i + 0.5) / 20.0,
                       lo.y + (hi.y - lo.y) * (j + 0.5) / 20.0};
                CHECK(tukey_depth(d, x).depth <= 0.5 + 2e-6);
            }
        }
    }
}

TEST_CASE("monotone refinement: doubling the coarse grid never raises the depth") {
    Density sq = unit_square();
    Rng rng(8);
    for (int t = 0; t < 10; ++t) {
        Vec2 x{rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9)};
        DirectionSearchConfig c1, c2;
        c1.coarse_count = 180;
        c2.coarse_count = 360;
        CHECK(tukey_depth(sq, x, c2).depth <= tukey_depth(sq, x, c1).depth + 1e-6);
    }
}

TEST_CASE("valley argmin structure and the subsolution violation at the origin") {
    const double eps = 0.01;
    Density v = Density::valley(eps);
    DepthResult r = tukey_depth(v, {0, 0});
    // trapezoid areas of the psi knot table (see test_density)
    double den = 2.0 * eps + (1.0 - eps) * 8.4 / 16.0;
    double expected_depth = (eps + (1.0 - eps) * (389.0 / 120.0) / 16.0) / den;
    double z_west = (eps + (1.0 - eps) * 4.0 / 16.0) / den;
    CHECK(r.depth == doctest::Approx(expected_depth).epsilon(1e-5));
    CHECK_FALSE(r.plateau);
    REQUIRE(r.argmin_dirs.size() == 2);
    CHECK(has_angle(r.argmin_dirs, 0.25 * kPi, 1e-4));
    CHECK(has_angle(r.argmin_dirs, -0.25 * kPi, 1e-4));
    // second-best local minimum is the west one
    CHECK(r.gap == doctest::Approx(z_west - expected_depth).epsilon(1e-3));

    // midpoint of the two superdifferential generators beats the valley slice
    auto gens = superdifferential_hull(v, {0, 0});
    REQUIRE(gens.size() == 2);
    Vec2 mid = 0.5 * (gens[0] + gens[1]);
    double h_value = norm(mid) - v.slice_integral({0, 0}, Direction::from_vector(mid));
    CHECK(h_value > 0.8);
}

TEST_CASE("search config validation") {
    DirectionSearchConfig bad;
    bad.coarse_count = 4;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = DirectionSearchConfig{};
    bad.cluster_tol = 1e-9;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}
