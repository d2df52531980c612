#include "depth_hjb/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "depth_hjb/errors.hpp"

namespace depth_hjb {

void DirectionSearchConfig::validate() const {
    if (coarse_count < 8) throw DomainError("DirectionSearchConfig: coarse_count must be >= 8");
    if (!(refine_tol > 0.0)) throw DomainError("DirectionSearchConfig: refine_tol must be > 0");
    if (cluster_tol < refine_tol)
        throw DomainError("DirectionSearchConfig: cluster_tol must be >= refine_tol");
}

namespace {

constexpr double kInvPhi = 0.6180339887498949;  // 1/golden ratio

struct Candidate {
    double angle;
    double value;
};

// Golden-section minimization of f over [lo, hi].
template <typename F>
Candidate golden_min(F&& f, double lo, double hi, double tol, int max_iters) {
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < max_iters && (b - a) > tol; ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        }
    }
    double xm = 0.5 * (a + b);
    return {xm, f(xm)};
}

DepthResult depth_1d(const Density& d, Vec2 x, const DirectionSearchConfig& cfg) {
    Direction plus = Direction::axis1d(1);
    Direction minus = Direction::axis1d(-1);
    double zp = d.halfspace_mass(x, plus, cfg.estimator);
    double zm = d.halfspace_mass(x, minus, cfg.estimator);
    DepthResult res;
    res.depth = std::min(zp, zm);
    if (zp <= res.depth + cfg.value_tol) res.argmin_dirs.push_back(plus);
    if (zm <= res.depth + cfg.value_tol) res.argmin_dirs.push_back(minus);
    res.gap = res.argmin_dirs.size() > 1 ? std::numeric_limits<double>::infinity()
                                         : std::fabs(zp - zm);
    return res;
}

}  // namespace

DepthResult tukey_depth(const Density& d, Vec2 x, const DirectionSearchConfig& cfg) {
    cfg.validate();
    if (d.has_bounded_support() && !d.hull_contains(x, -1e-12)) {
        // On or outside the hull boundary some halfspace through x carries no
        // mass; no search needed.
        return {0.0, {}, std::numeric_limits<double>::infinity(), false};
    }
    if (d.dim() == 1) return depth_1d(d, x, cfg);

    auto z_of = [&](double angle) {
        return d.halfspace_mass(x, Direction::from_angle(angle), cfg.estimator);
    };

    const int m = cfg.coarse_count;
    const double step = kTwoPi / m;
    std::vector<double> z(m);
    for (int k = 0; k < m; ++k) z[k] = z_of(k * step);

    double zmin = z[0], zmax = z[0];
    for (double v : z) {
        zmin = std::min(zmin, v);
        zmax = std::max(zmax, v);
    }

    DepthResult res;
    if (zmax - zmin <= cfg.value_tol) {
        // Z is constant over the whole circle (centrally symmetric point):
        // the argmin is a continuum; report the cardinal representatives.
        res.plateau = true;
        res.depth = zmin;
        for (int q = 0; q < 4; ++q) res.argmin_dirs.push_back(Direction::from_angle(q * 0.5 * kPi));
        res.gap = 0.0;
        return res;
    }

    // Every coarse local minimum (ties tolerated at noise level) gets refined
    // within its bracket.
    const double noise = 1e-12;
    std::vector<Candidate> cands;
    for (int k = 0; k < m; ++k) {
        double prev = z[(k + m - 1) % m];
        double next = z[(k + 1) % m];
        if (z[k] <= prev + noise && z[k] <= next + noise) {
            double lo = (k - 1) * step;
            double hi = (k + 1) * step;
            cands.push_back(golden_min(z_of, lo, hi, cfg.refine_tol, cfg.refine_iters));
        }
    }

    // Cluster by angle; keep the best value per cluster.
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        return Direction::wrap_angle(a.angle) < Direction::wrap_angle(b.angle);
    });
    std::vector<Candidate> clusters;
    for (const Candidate& c : cands) {
        Candidate w{Direction::wrap_angle(c.angle), c.value};
        if (!clusters.empty() && angle_distance(clusters.back().angle, w.angle) <= cfg.cluster_tol) {
            if (w.value < clusters.back().value) clusters.back() = w;
        } else {
            clusters.push_back(w);
        }
    }
    if (clusters.size() > 1 &&
        angle_distance(clusters.front().angle, clusters.back().angle) <= cfg.cluster_tol) {
        if (clusters.back().value < clusters.front().value) clusters.front() = clusters.back();
        clusters.pop_back();
    }

    double best = std::numeric_limits<double>::infinity();
    for (const Candidate& c : clusters) best = std::min(best, c.value);
    res.depth = best;
    double second = std::numeric_limits<double>::infinity();
    for (const Candidate& c : clusters) {
        if (c.value <= best + cfg.value_tol) {
            res.argmin_dirs.push_back(Direction::from_angle(c.angle));
        } else {
            second = std::min(second, c.value);
        }
    }
    res.gap = std::isfinite(second) ? second - best
                                    : std::numeric_limits<double>::infinity();
    return res;
}

Vec2 depth_gradient_fd(const Density& d, Vec2 x, double step, const DirectionSearchConfig& cfg) {
    DepthResult at = tukey_depth(d, x, cfg);
    if (at.argmin_dirs.size() != 1) {
        throw NonUniqueArgmin("depth_gradient_fd: argmin at x is not a singleton");
    }
    auto t_of = [&](Vec2 p) { return tukey_depth(d, p, cfg).depth; };
    double gx = (t_of({x.x + step, x.y}) - t_of({x.x - step, x.y})) / (2.0 * step);
    double gy = (t_of({x.x, x.y + step}) - t_of({x.x, x.y - step})) / (2.0 * step);
    return {gx, gy};
}

double check_balanced_chord(const Density& d, Vec2 x, const Direction& nu) {
    const ConvexPolygon* poly = d.polygon();
    if (poly == nullptr) {
        throw NotUniformConvex("check_balanced_chord: density is not uniform on a convex polygon");
    }
    auto iv = poly->line_interval(x, perp(nu.vec()));
    if (!iv) return 0.0;
    auto [tmin, tmax] = *iv;
    double pos = std::max(0.0, tmax - std::max(tmin, 0.0));
    double neg = std::max(0.0, std::min(tmax, 0.0) - tmin);
    return std::fabs(pos - neg);
}

std::vector<Vec2> superdifferential_hull(const Density& d, Vec2 x,
                                         const DirectionSearchConfig& cfg) {
    DepthResult res = tukey_depth(d, x, cfg);
    std::vector<Vec2> gens;
    gens.reserve(res.argmin_dirs.size());
    for (const Direction& nu : res.argmin_dirs) {
        double s = d.slice_integral(x, nu, cfg.estimator);
        gens.push_back(-s * nu.vec());
    }
    return gens;
}

}  // namespace depth_hjb
