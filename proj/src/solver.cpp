#include "depth_hjb/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cmath>
#include <limits>
#include <array>
#include <queue>
#include <tuple>
#include <unordered_map>

#include "depth_hjb/parallel.hpp"

namespace depth_hjb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct GodunovResult {
    double value;
    bool used_x;
    bool used_y;
};

// Godunov update with per-axis leg lengths (legs differ from the spacing
// only next to a support-hull boundary that cuts through the cell).
GodunovResult godunov(std::optional<double> ux, std::optional<double> uy, double hx, double hy,
                      double f) {
    if (!ux && !uy) throw NoNeighbor("upwind_update: no upwind neighbor available");
    if (ux && uy) {
        double ax = 1.0 / (hx * hx), ay = 1.0 / (hy * hy);
        double a = ax + ay;
        double b = -2.0 * (*ux * ax + *uy * ay);
        double c = *ux * *ux * ax + *uy * *uy * ay - f * f;
        double disc = b * b - 4.0 * a * c;
        if (disc >= 0.0) {
            double u2 = (-b + std::sqrt(disc)) / (2.0 * a);
            if (u2 >= *ux && u2 >= *uy) return {u2, true, true};
        }
        double cx = *ux + f * hx;
        double cy = *uy + f * hy;
        if (cx <= cy) return {cx, true, false};
        return {cy, false, true};
    }
    if (ux) return {*ux + f * hx, true, false};
    return {*uy + f * hy, false, true};
}

GridField make_1d_field(std::vector<double> u, double a, double b, int n) {
    GridSpec spec;
    spec.origin = {a, 0.0};
    spec.spacing = (b - a) / (n - 1);
    spec.nx = n;
    spec.ny = 1;
    spec.validate();
    GridField field(spec);
    field.values = std::move(u);
    for (int i = 0; i < n; ++i) {
        field.states[i] = (i == 0 || i == n - 1) ? NodeState::Boundary : NodeState::Fixed;
    }
    return field;
}

GridField solve_1d_impl(const std::function<double(double)>& rho, double a, double b, int n) {
    if (n < 3) throw DomainError("solve_1d: need at least 3 nodes");
    if (!(b > a)) throw DomainError("solve_1d: requires b > a");
    const double h = (b - a) / (n - 1);
    std::vector<double> cum(n, 0.0);
    double prev = rho(a);
    for (int i = 1; i < n; ++i) {
        double cur = rho(a + i * h);
        cum[i] = cum[i - 1] + 0.5 * h * (prev + cur);
        prev = cur;
    }
    std::vector<double> u(n);
    for (int i = 0; i < n; ++i) u[i] = std::max(0.0, std::min(cum[i], 1.0 - cum[i]));
    return make_1d_field(std::move(u), a, b, n);
}

}  // namespace

void SolverConfig::validate() const {
    if (!(dir_fixed_point_tol > 0.0)) throw DomainError("SolverConfig: dir_fixed_point_tol must be > 0");
    if (dir_fixed_point_max_iters < 1) throw DomainError("SolverConfig: dir_fixed_point_max_iters must be >= 1");
    if (!(sweep_tol > 0.0)) throw DomainError("SolverConfig: sweep_tol must be > 0");
    if (max_sweep_passes < 1) throw DomainError("SolverConfig: max_sweep_passes must be >= 1");
    if (rhs_floor < 0.0) throw DomainError("SolverConfig: rhs_floor must be >= 0");
    std::array<bool, 4> seen{};
    for (int o : sweep_order) {
        if (o < 0 || o > 3 || seen[o]) throw DomainError("SolverConfig: sweep_order must permute 0..3");
        seen[o] = true;
    }
}

GridField solve_1d(const Density& rho, double a, double b, int n) {
    if (rho.dim() != 1) throw DomainError("solve_1d: density is not 1D");
    double below = 1.0 - rho.halfspace_mass({a, 0.0}, Direction::axis1d(1));
    double above = rho.halfspace_mass({b, 0.0}, Direction::axis1d(1));
    if (below + above > 1e-9) {
        throw BadSupport("solve_1d: density mass outside [a,b] exceeds 1e-9");
    }
    return solve_1d_impl([&rho](double x) { return rho.eval1d(x); }, a, b, n);
}

GridField solve_1d(const std::function<double(double)>& rho, double a, double b, int n) {
    GridField field = solve_1d_impl(rho, a, b, n);
    // For a probability density supported on [a,b] the trapezoid cumulative
    // must reach 1; the grid rule is exact for the piecewise-linear densities
    // this entry point is meant for.
    const double h = (b - a) / (n - 1);
    double total = 0.0;
    double prev = rho(a);
    for (int i = 1; i < n; ++i) {
        double cur = rho(a + i * h);
        total += 0.5 * h * (prev + cur);
        prev = cur;
    }
    if (std::fabs(total - 1.0) > 1e-9) {
        throw BadSupport("solve_1d: density mass on [a,b] differs from 1 by more than 1e-9");
    }
    return field;
}

double upwind_update(std::optional<double> ux, std::optional<double> uy, double spacing, double f) {
    if (f < 0.0) throw DomainError("upwind_update: f must be >= 0");
    return godunov(ux, uy, spacing, spacing, f).value;
}

namespace {

double min_slice_over_directions(const Density& d, Vec2 x, const SliceEstimatorConfig& est,
                                 int coarse_count) {
    double best = kInf;
    for (int k = 0; k < coarse_count; ++k) {
        double ang = kTwoPi * k / coarse_count;
        best = std::min(best, d.slice_integral(x, Direction::from_angle(ang), est));
    }
    return best;
}

}  // namespace

double rhs_at(const Density& d, Vec2 x, const std::optional<Direction>& grad_dir,
              const SolverConfig& cfg) {
    SliceEstimatorConfig est = d.resolve(cfg.slice_cfg);
    if (grad_dir) return d.slice_integral(x, *grad_dir, est);
    return min_slice_over_directions(d, x, est, cfg.boundary_oracle.coarse_count);
}

namespace {

// One 2D solve: owns the grid exclusively, shares the immutable density.
class Solver2d {
  public:
    Solver2d(const Density& d, const GridSpec& grid, const SolverConfig& cfg)
        : d_(d), cfg_(cfg), spec_(grid), est_(d.resolve(cfg.slice_cfg)) {
        spec_.validate();
        cfg_.validate();
        est_.validate();
        if (d_.dim() != 2) throw DomainError("solve_2d: density is not 2D");
    }

    SolveReport run() {
        auto t0 = std::chrono::steady_clock::now();
        SolveReport report;
        report.field = GridField(spec_);
        field_ = &report.field;
        setup_boundary();
        if (cfg_.scheme == Scheme::FastMarchingFixedPoint) {
            fast_marching(report);
        } else {
            lax_friedrichs(report);
        }
        collect_floor_violations(report);
        auto t1 = std::chrono::steady_clock::now();
        report.runtime_ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
        field_ = nullptr;
        return report;
    }

  private:
    static constexpr double kInteriorShrink = 1e-12;

    void setup_boundary() {
        GridField& f = *field_;
        if (spec_.boundary_kind == BoundaryKind::SupportHull) {
            if (!d_.has_bounded_support()) {
                throw DomainError("solve_2d: SupportHull requires a bounded support");
            }
            auto [lo, hi] = d_.support_bbox();
            Vec2 gmax = spec_.extent_max();
            if (!(spec_.origin.x < lo.x && spec_.origin.y < lo.y && gmax.x > hi.x &&
                  gmax.y > hi.y)) {
                throw DomainError("solve_2d: support hull must fit strictly inside the grid");
            }
            for (int j = 0; j < spec_.ny; ++j) {
                for (int i = 0; i < spec_.nx; ++i) {
                    if (!d_.hull_contains(spec_.node(i, j), -kInteriorShrink)) {
                        f.state(i, j) = NodeState::Boundary;
                        f.at(i, j) = 0.0;
                    }
                }
            }
        } else {
            // Dirichlet data from the direction-search depth on the box edge.
            std::vector<std::pair<int, int>> edge;
            for (int j = 0; j < spec_.ny; ++j) {
                for (int i = 0; i < spec_.nx; ++i) {
                    if (i == 0 || j == 0 || i == spec_.nx - 1 || j == spec_.ny - 1) {
                        edge.emplace_back(i, j);
                    }
                }
            }
            std::vector<double> vals(edge.size());
            parallel_for(edge.size(), [&](std::size_t k) {
                vals[k] = tukey_depth(d_, spec_.node(edge[k].first, edge[k].second),
                                      cfg_.boundary_oracle)
                              .depth;
            });
            for (std::size_t k = 0; k < edge.size(); ++k) {
                f.state(edge[k].first, edge[k].second) = NodeState::Boundary;
                f.at(edge[k].first, edge[k].second) = vals[k];
            }
        }
    }

    bool accepted(std::size_t idx) const {
        return field_->states[idx] != NodeState::Tentative;
    }

    double slice(Vec2 x, const Direction& dir) const { return d_.slice_integral(x, dir, est_); }

    double rhs_min_cached(std::size_t idx, Vec2 x) {
        auto it = rhs_min_cache_.find(idx);
        if (it != rhs_min_cache_.end()) return it->second;
        double v = min_slice_over_directions(d_, x, est_, cfg_.boundary_oracle.coarse_count);
        rhs_min_cache_.emplace(idx, v);
        return v;
    }

    struct FixedPoint {
        double value = kInf;
        double f = 0.0;
        bool converged = true;
    };

    // Neighbor value for the crease tie test: the current pass where already
    // accepted, otherwise the previous marching pass (if any).
    double tie_value(std::size_t idx) const {
        if (accepted(idx)) return field_->values[idx];
        if (prev_pass_ != nullptr) return (*prev_pass_)[idx];
        return std::numeric_limits<double>::quiet_NaN();
    }

    // Near-tie of the two opposite neighbors across an axis: the node sits on
    // a discrete extremum / kink line across that axis. Exact ties arise from
    // grid-aligned symmetry; an O(spacing^2) tolerance also catches the
    // asymmetric extrema that curvature produces.
    bool crease_tie(int i, int j, int di, int dj) const {
        if (i - di < 0 || j - dj < 0 || i + di >= spec_.nx || j + dj >= spec_.ny) return false;
        double a = tie_value(spec_.index(i - di, j - dj));
        double b = tie_value(spec_.index(i + di, j + dj));
        double tol = 10.0 * spec_.spacing * spec_.spacing;
        return std::fabs(a - b) <= tol;  // false for NaN
    }

    // Self-consistent (direction, value) pair at one node against accepted
    // neighbors. The slice integral can vary by O(1) over small angles near
    // the support boundary (grazing chords), which makes plain Picard
    // iteration on the direction cycle; instead the consistency residual
    //   r(t) = angle(upwind gradient of godunov(f(t))) - t
    // is bracketed over the upwind quadrant and bisected. r(0) >= 0 and
    // r(pi/2) <= 0 always hold, so a root exists.
    // One upwind side of a node: neighbor value, effective leg length
    // (shortened where the support-hull boundary cuts the cell), and the
    // second value along the ray when it is usable for a three-point model.
    struct Side {
        bool has = false;
        double u = 0.0;
        double leg = 0.0;
        std::optional<double> u2;
    };

    Side gather_side(int i, int j, int di, int dj) const {
        Side s;
        int ni = i + di, nj = j + dj;
        if (ni < 0 || nj < 0 || ni >= spec_.nx || nj >= spec_.ny) return s;
        std::size_t idx = spec_.index(ni, nj);
        if (!accepted(idx)) return s;
        s.has = true;
        s.u = field_->values[idx];
        s.leg = spec_.spacing;
        bool nb_fixed = field_->states[idx] == NodeState::Fixed;
        if (!nb_fixed && spec_.boundary_kind == BoundaryKind::SupportHull) {
            double dist = d_.hull_boundary_distance(
                spec_.node(i, j), {static_cast<double>(di), static_cast<double>(dj)});
            s.leg = std::clamp(dist, 1e-9 * spec_.spacing, spec_.spacing);
        }
        if (nb_fixed) {
            int mi = i + 2 * di, mj = j + 2 * dj;
            if (mi >= 0 && mj >= 0 && mi < spec_.nx && mj < spec_.ny &&
                accepted(spec_.index(mi, mj))) {
                double v = field_->values[spec_.index(mi, mj)];
                if (v <= s.u + 1e-12) s.u2 = v;  // monotone along the upwind ray
            }
        }
        return s;
    }

    // Self-consistent (direction, value) update at one node. Per upwind
    // quadrant, the consistency residual
    //   r(t) = angle(discrete gradient of the Godunov root for slice(t)) - t
    // is scanned and bisected over [0, pi/2] (r(0) >= 0 >= r(pi/2), so each
    // quadrant with two sides holds a root); plain Picard iteration on the
    // direction cycles because grazing chords make the slice steep in its
    // direction argument. All quadrants sharing an axis extremum see a
    // nonzero cross-difference, so kinks aligned with the grid axes get a
    // dedicated crease candidate with the cross component dropped: at any
    // upward kink the midpoint of the two meeting gradients lies in the
    // superdifferential, which caps the along-axis component by the slice at
    // the crease direction. Where the depth solves the equation that cap is
    // attained with equality, so the candidate never undercuts; where the
    // subsolution inequality fails (valley-type densities) it produces the
    // flattened viscosity value. The node value is the minimum over all
    // candidates.
    FixedPoint node_update(int i, int j) {
        const double h = spec_.spacing;
        const Vec2 x = spec_.node(i, j);
        const Side xm = gather_side(i, j, -1, 0);  // gradient sign +x
        const Side xp = gather_side(i, j, +1, 0);
        const Side ym = gather_side(i, j, 0, -1);
        const Side yp = gather_side(i, j, 0, +1);

        struct AxisModel {
            double c1, c0;  // G(U) = c1 U - c0
        };
        auto first_order = [](const Side& s) { return AxisModel{1.0 / s.leg, s.u / s.leg}; };
        auto second_order = [h](const Side& s) {
            return AxisModel{1.5 / h, (2.0 * s.u - 0.5 * *s.u2) / h};
        };

        // Largest root of Gx^2 + Gy^2 = f^2 with nonnegative upwind gradients.
        auto solve_two = [](const AxisModel& cx, const AxisModel& cy, double f, double floor_u)
            -> std::optional<std::array<double, 3>> {
            double a = cx.c1 * cx.c1 + cy.c1 * cy.c1;
            double b = -2.0 * (cx.c1 * cx.c0 + cy.c1 * cy.c0);
            double c = cx.c0 * cx.c0 + cy.c0 * cy.c0 - f * f;
            double disc = b * b - 4.0 * a * c;
            if (disc < 0.0) return std::nullopt;
            double u = (-b + std::sqrt(disc)) / (2.0 * a);
            double gx = cx.c1 * u - cx.c0;
            double gy = cy.c1 * u - cy.c0;
            if (gx < -1e-12 || gy < -1e-12 || u < floor_u - 1e-12) return std::nullopt;
            return std::array<double, 3>{u, std::max(0.0, gx), std::max(0.0, gy)};
        };

        FixedPoint out;
        double best_u = kInf, best_f = 0.0;

        auto scan_quadrant = [&](const Side& xs, int sx, const Side& ys, int sy) {
            AxisModel mx1 = first_order(xs), my1 = first_order(ys);
            std::optional<AxisModel> mx2, my2;
            if (xs.u2 && !std::getenv("DEPTH_HJB_DEBUG_NO2ND")) mx2 = second_order(xs);
            if (ys.u2 && !std::getenv("DEPTH_HJB_DEBUG_NO2ND")) my2 = second_order(ys);
            const double floor_u = std::max(xs.u, ys.u);

            auto eval = [&](double t) {
                Direction dir = Direction::from_vector({sx * std::cos(t), sy * std::sin(t)});
                double f = slice(x, dir);
                std::optional<std::array<double, 3>> got;
                if (mx2 && my2) got = solve_two(*mx2, *my2, f, floor_u);
                if (!got && mx2) got = solve_two(*mx2, my1, f, floor_u);
                if (!got && my2) got = solve_two(mx1, *my2, f, floor_u);
                if (!got) got = solve_two(mx1, my1, f, floor_u);
                double U, px, py;
                if (got) {
                    U = (*got)[0];
                    px = (*got)[1];
                    py = (*got)[2];
                } else {
                    double cx = xs.u + f * xs.leg;
                    double cy = ys.u + f * ys.leg;
                    if (cx <= cy) {
                        U = cx;
                        px = f;
                        py = 0.0;
                    } else {
                        U = cy;
                        px = 0.0;
                        py = f;
                    }
                }
                double phi = std::atan2(py, px);
                return std::tuple<double, double, double>(phi - t, U, f);
            };

            constexpr int kScan = 12;
            double prev_t = 0.0;
            auto [prev_r, u0, f0] = eval(0.0);
            if (std::fabs(prev_r) < 1e-12 && u0 < best_u) {
                best_u = u0;
                best_f = f0;
            }
            for (int k = 1; k <= kScan; ++k) {
                double t = 0.5 * kPi * k / kScan;
                auto [r, u, f] = eval(t);
                if (std::fabs(r) < 1e-12) {
                    if (u < best_u) {
                        best_u = u;
                        best_f = f;
                    }
                } else if (prev_r > 0.0 && r < 0.0) {
                    double lo = prev_t, hi = t;
                    double u_root = u, f_root = f;
                    double u_prev_iter = kInf;
                    bool settled = false;
                    for (int it = 0; it < cfg_.dir_fixed_point_max_iters; ++it) {
                        double mid = 0.5 * (lo + hi);
                        auto [rm, um, fm] = eval(mid);
                        u_root = um;
                        f_root = fm;
                        if (std::fabs(um - u_prev_iter) < cfg_.dir_fixed_point_tol) {
                            settled = true;
                            break;
                        }
                        u_prev_iter = um;
                        (rm > 0.0 ? lo : hi) = mid;
                    }
                    if (!settled) out.converged = false;
                    if (u_root < best_u) {
                        best_u = u_root;
                        best_f = f_root;
                    }
                }
                prev_t = t;
                prev_r = r;
            }
        };

        if (xm.has && ym.has) scan_quadrant(xm, +1, ym, +1);
        if (xm.has && yp.has) scan_quadrant(xm, +1, yp, -1);
        if (xp.has && ym.has) scan_quadrant(xp, -1, ym, +1);
        if (xp.has && yp.has) scan_quadrant(xp, -1, yp, -1);

        // One-sided axis candidates: the only option when a single side is
        // visible, and the crease value at axis-aligned kinks (unconditional:
        // the kink midpoint bound never undercuts an equality solution).
        const Side* best_x = xm.has && (!xp.has || xm.u <= xp.u) ? &xm : (xp.has ? &xp : nullptr);
        const Side* best_y = ym.has && (!yp.has || ym.u <= yp.u) ? &ym : (yp.has ? &yp : nullptr);
        bool no_two_sided = !(xm.has || xp.has) || !(ym.has || yp.has);
        bool y_tie = crease_tie(i, j, 0, 1);
        bool x_tie = crease_tie(i, j, 1, 0);

        auto one_sided = [&](const Side& s, const Direction& dir) {
            double f = slice(x, dir);
            double u = s.u + f * s.leg;  // the kink bound is first-order
            if (u < best_u) {
                best_u = u;
                best_f = f;
            }
        };
        if (std::getenv("DEPTH_HJB_DEBUG_NOCREASE")) { y_tie = false; x_tie = false; }
        if (best_x && (no_two_sided || y_tie)) {
            one_sided(*best_x, Direction::from_angle(best_x == &xm ? 0.0 : kPi));
        }
        if (best_y && (no_two_sided || x_tie)) {
            one_sided(*best_y, Direction::from_angle(best_y == &ym ? 0.5 * kPi : 1.5 * kPi));
        }

        out.value = best_u;
        out.f = best_f;
        return out;
    }

    // Single-pass marching cannot see the crease ties near the symmetry axes
    // before the cross-axis neighbors are accepted, so the march is iterated:
    // later passes test ties against the previous pass's field. Densities for
    // which the depth solves the equation converge after one re-pass (the
    // crease update reproduces the ridge value there).
    void fast_marching(SolveReport& report) {
        GridField& fld = *field_;
        const std::vector<double> boundary_values = fld.values;
        const std::vector<NodeState> boundary_states = fld.states;
        std::vector<double> prev;
        int kMaxMarchPasses = 8;
        if (const char* e = std::getenv("DEPTH_HJB_DEBUG_PASSES")) kMaxMarchPasses = std::atoi(e);
        for (int pass = 0; pass < kMaxMarchPasses; ++pass) {
            if (pass > 0) {
                prev = fld.values;
                fld.values = boundary_values;
                fld.states = boundary_states;
                prev_pass_ = &prev;
            }
            march_once(report);
            if (pass > 0) {
                double delta = 0.0;
                for (std::size_t k = 0; k < fld.values.size(); ++k) {
                    delta = std::max(delta, std::fabs(fld.values[k] - prev[k]));
                }
                report.max_update_last_pass = delta;
                if (delta < cfg_.sweep_tol) break;
            }
        }
        prev_pass_ = nullptr;
    }

    void march_once(SolveReport& report) {
        GridField& fld = *field_;
        const std::size_t n = spec_.node_count();
        node_f_.assign(n, kInf);
        std::vector<double> best(n, kInf);

        using Entry = std::pair<double, std::size_t>;
        std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;

        auto touch = [&](int i, int j) {
            std::size_t idx = spec_.index(i, j);
            if (fld.states[idx] != NodeState::Tentative) return;
            FixedPoint fp = node_update(i, j);
            if (!fp.converged) ++report.dir_fixed_point_nonconverged;
            if (fp.value < best[idx] - 1e-16) {
                best[idx] = fp.value;
                node_f_[idx] = fp.f;
                heap.emplace(fp.value, idx);
            }
        };

        for (int j = 0; j < spec_.ny; ++j) {
            for (int i = 0; i < spec_.nx; ++i) {
                if (fld.state(i, j) != NodeState::Boundary) continue;
                if (i > 0) touch(i - 1, j);
                if (i + 1 < spec_.nx) touch(i + 1, j);
                if (j > 0) touch(i, j - 1);
                if (j + 1 < spec_.ny) touch(i, j + 1);
            }
        }

        double last_fixed = -kInf;
        while (!heap.empty()) {
            auto [value, idx] = heap.top();
            heap.pop();
            if (fld.states[idx] != NodeState::Tentative || value > best[idx]) continue;
            int i = static_cast<int>(idx % spec_.nx);
            int j = static_cast<int>(idx / spec_.nx);

            // Authoritative recompute at pop time; if it moved past the next
            // queued key, requeue instead of fixing so acceptance stays ordered.
            FixedPoint fp = node_update(i, j);
            if (!fp.converged) ++report.dir_fixed_point_nonconverged;
            if (fp.value > value + 1e-14) {
                best[idx] = fp.value;
                node_f_[idx] = fp.f;
                heap.emplace(fp.value, idx);
                continue;
            }

            if (fp.value < last_fixed - 1e-10) ++report.monotonicity_violations;
            last_fixed = std::max(last_fixed, fp.value);
            fld.values[idx] = fp.value;
            fld.states[idx] = NodeState::Fixed;
            node_f_[idx] = fp.f;
            ++report.iterations;

            if (i > 0) touch(i - 1, j);
            if (i + 1 < spec_.nx) touch(i + 1, j);
            if (j > 0) touch(i, j - 1);
            if (j + 1 < spec_.ny) touch(i, j + 1);
        }
    }

    void lax_friedrichs(SolveReport& report) {
        GridField& fld = *field_;
        const std::size_t n = spec_.node_count();
        node_f_.assign(n, kInf);
        for (std::size_t idx = 0; idx < n; ++idx) {
            if (fld.states[idx] == NodeState::Tentative) fld.values[idx] = 1.0;
        }

        const double h = spec_.spacing;
        // (si, sj) orderings; i inner, j outer.
        const int dirs[4][2] = {{1, 1}, {-1, 1}, {1, -1}, {-1, -1}};
        // Near the support boundary the slice integral is steep in the
        // direction argument (grazing chords), so the raw Gauss-Seidel
        // iteration limit-cycles; relaxing the per-node rhs damps it. The
        // converged field does not depend on the factor.
        constexpr double kRhsRelax = 0.15;

        double pass_residual = kInf;
        int pass = 0;
        for (; pass < cfg_.max_sweep_passes; ++pass) {
            pass_residual = 0.0;
            for (int o : cfg_.sweep_order) {
                const int si = dirs[o][0], sj = dirs[o][1];
                ++report.iterations;
                for (int jj = 0; jj < spec_.ny; ++jj) {
                    int j = sj > 0 ? jj : spec_.ny - 1 - jj;
                    for (int ii = 0; ii < spec_.nx; ++ii) {
                        int i = si > 0 ? ii : spec_.nx - 1 - ii;
                        std::size_t idx = spec_.index(i, j);
                        if (fld.states[idx] != NodeState::Tentative) continue;
                        double ue = fld.at(i + 1, j);
                        double uw = fld.at(i - 1, j);
                        double un = fld.at(i, j + 1);
                        double us = fld.at(i, j - 1);
                        double px = (ue - uw) / (2.0 * h);
                        double py = (un - us) / (2.0 * h);
                        double np = std::hypot(px, py);
                        Vec2 x = spec_.node(i, j);
                        double f;
                        if (np > 1e-14) {
                            f = slice(x, Direction::from_vector({px, py}));
                        } else {
                            f = rhs_min_cached(idx, x);
                        }
                        if (node_f_[idx] != kInf) {
                            f = node_f_[idx] + kRhsRelax * (f - node_f_[idx]);
                        }
                        node_f_[idx] = f;
                        double unew = 0.5 * (h * (f - np) + 0.5 * (ue + uw) + 0.5 * (un + us));
                        unew = std::max(0.0, unew);
                        pass_residual = std::max(pass_residual, std::fabs(unew - fld.values[idx]));
                        fld.values[idx] = unew;
                    }
                }
            }
            if (pass_residual < cfg_.sweep_tol) break;
        }
        report.max_update_last_pass = pass_residual;
        if (pass_residual >= cfg_.sweep_tol) {
            throw NoConvergence("solve_2d: Lax-Friedrichs sweeping exhausted its pass budget",
                                pass_residual, static_cast<int>(report.iterations));
        }
        for (std::size_t idx = 0; idx < n; ++idx) {
            if (fld.states[idx] == NodeState::Tentative) fld.states[idx] = NodeState::Fixed;
        }
    }

    void collect_floor_violations(SolveReport& report) {
        const GridField& fld = *field_;
        for (std::size_t idx = 0; idx < spec_.node_count(); ++idx) {
            if (fld.states[idx] == NodeState::Boundary) continue;
            if (node_f_[idx] < cfg_.rhs_floor) report.rhs_floor_violations.push_back(idx);
        }
    }

    const Density& d_;
    SolverConfig cfg_;
    GridSpec spec_;
    SliceEstimatorConfig est_;
    GridField* field_ = nullptr;
    std::vector<double> node_f_;
    const std::vector<double>* prev_pass_ = nullptr;
    std::unordered_map<std::size_t, double> rhs_min_cache_;
};

}  // namespace

SolveReport solve_2d(const Density& d, const GridSpec& grid, const SolverConfig& cfg) {
    Solver2d solver(d, grid, cfg);
    return solver.run();
}

SolveReport affine_transform_solve(const Density& d, const AffineMap2& transform,
                                   const GridSpec& grid, const SolverConfig& cfg) {
    Density pushed = Density::affine_pushforward(d, transform);
    return solve_2d(pushed, grid, cfg);
}

double check_discrete_supersolution_bound(const GridField& u, const GridField& t_oracle) {
    if (!u.same_shape(t_oracle)) {
        throw ShapeMismatch("check_discrete_supersolution_bound: grids differ");
    }
    double worst = -kInf;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        worst = std::max(worst, u.values[i] - t_oracle.values[i]);
    }
    return worst;
}

std::vector<double> upwind_residual_1d(const std::vector<double>& u,
                                       const std::function<double(double)>& rho, double a,
                                       double spacing) {
    if (u.size() < 3) throw DomainError("upwind_residual_1d: need at least 3 nodes");
    std::vector<double> res(u.size() - 2);
    for (std::size_t i = 1; i + 1 < u.size(); ++i) {
        double g = std::max({(u[i] - u[i - 1]) / spacing, (u[i] - u[i + 1]) / spacing, 0.0});
        res[i - 1] = g - rho(a + static_cast<double>(i) * spacing);
    }
    return res;
}

}  // namespace depth_hjb
