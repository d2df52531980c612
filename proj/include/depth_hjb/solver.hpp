#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "depth_hjb/density.hpp"
#include "depth_hjb/grid.hpp"
#include "depth_hjb/oracle.hpp"

namespace depth_hjb {

enum class Scheme { FastMarchingFixedPoint, LaxFriedrichsSweeping };

struct SolverConfig {
    Scheme scheme = Scheme::FastMarchingFixedPoint;
    // Per-node direction <-> value fixed point (fast marching).
    double dir_fixed_point_tol = 1e-10;
    int dir_fixed_point_max_iters = 50;
    // Lax-Friedrichs sweeping.
    double sweep_tol = 1e-6;
    int max_sweep_passes = 5000;
    std::array<int, 4> sweep_order{0, 1, 2, 3};  // permutation of the four orderings
    // Slice-smallness diagnostic (delta_min); violations are reported, never fatal.
    double rhs_floor = 1e-12;
    SliceEstimatorConfig slice_cfg;
    // Direction search used for TruncatedBox boundary data.
    DirectionSearchConfig boundary_oracle;

    void validate() const;
};

struct SolveReport {
    GridField field;
    long iterations = 0;               // FMM: accepted nodes; LF: sweeps executed
    double max_update_last_pass = 0.0;
    std::vector<std::size_t> rhs_floor_violations;
    std::int64_t runtime_ms = 0;
    int dir_fixed_point_nonconverged = 0;  // nodes that hit the iteration cap
    int monotonicity_violations = 0;       // fast-marching acceptance-order check
};

/// Exact 1D boundary-value solve of |u_x| = rho with u(a) = u(b) = 0:
/// u = min(F, 1-F) with F the trapezoid cumulative integral on the grid.
GridField solve_1d(const Density& rho, double a, double b, int n);
GridField solve_1d(const std::function<double(double)>& rho, double a, double b, int n);

/// Godunov update from per-axis upwind values. Availability is encoded as
/// nullopt. Throws NoNeighbor when both axes are empty.
double upwind_update(std::optional<double> ux, std::optional<double> uy, double spacing, double f);

/// Right-hand side of the depth equation at x. With a gradient direction the
/// slice integral through x normal to it; without one (no usable gradient
/// estimate yet) the minimum of the slice integral over the coarse direction
/// grid, which keeps early updates below the true solution. The solver
/// records nodes where the returned value undershoots cfg.rhs_floor.
double rhs_at(const Density& d, Vec2 x, const std::optional<Direction>& grad_dir,
              const SolverConfig& cfg);

/// Viscosity solve of |grad u| = slice-integral RHS on the grid.
/// SupportHull: u = 0 on and outside the support hull. TruncatedBox: grid-edge
/// nodes carry direction-search depth values.
SolveReport solve_2d(const Density& d, const GridSpec& grid, const SolverConfig& cfg);

/// Solve for the pushed-forward density rho(L(x))|det DL| over the given
/// (already transformed) grid extent.
SolveReport affine_transform_solve(const Density& d, const AffineMap2& transform,
                                   const GridSpec& grid, const SolverConfig& cfg);

/// max over nodes of (u - t): nonpositive (up to discretization tolerance)
/// whenever t is the depth and u the viscosity solution.
double check_discrete_supersolution_bound(const GridField& u, const GridField& t_oracle);

/// Discrete supersolution residual of |u_x| = rho at interior 1D nodes:
/// max((u_i-u_{i-1})/h, (u_i-u_{i+1})/h, 0) - rho(x_i). A viscosity
/// supersolution has residual >= 0 everywhere; spurious a.e. solutions go
/// negative at downward corners.
std::vector<double> upwind_residual_1d(const std::vector<double>& u,
                                       const std::function<double(double)>& rho, double a,
                                       double spacing);

}  // namespace depth_hjb
