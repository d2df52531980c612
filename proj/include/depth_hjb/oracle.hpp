#pragma once

#include <vector>

#include "depth_hjb/density.hpp"
#include "depth_hjb/geometry.hpp"

namespace depth_hjb {

/// Coarse-to-fine search over S^1 (angles in 2D; the two signs in 1D).
struct DirectionSearchConfig {
    int coarse_count = 360;        // uniform angles on [0, 2pi)
    int refine_iters = 80;         // golden-section iteration cap per bracket
    double refine_tol = 1e-6;      // radians
    double cluster_tol = 1e-3;     // radians, for merging argmin candidates
    double value_tol = 1e-6;       // candidates within this of the minimum count as argmins
    SliceEstimatorConfig estimator;  // how Z(x,.) is evaluated

    void validate() const;
};

struct DepthResult {
    double depth = 0.0;
    std::vector<Direction> argmin_dirs;
    /// Second-best local-minimum value minus depth; +inf when the search found
    /// a single local minimum (up to clustering).
    double gap = 0.0;
    /// True when Z(x,.) was constant over the whole coarse circle (within
    /// value_tol); argmin_dirs then holds the four cardinal representatives of
    /// the full-circle argmin continuum.
    bool plateau = false;
};

/// Halfspace depth at x by direct minimization of Z(x,.) over directions:
/// coarse scan, golden-section refinement of every local minimum, clustering.
/// Points outside the support hull return depth 0 without searching.
DepthResult tukey_depth(const Density& d, Vec2 x, const DirectionSearchConfig& cfg = {});

/// Central finite difference of the depth. Requires a unique argmin at x.
Vec2 depth_gradient_fd(const Density& d, Vec2 x, double step,
                       const DirectionSearchConfig& cfg = {});

/// For a uniform convex polygon and a minimizing direction nu at x: absolute
/// difference of the chord lengths on either side of x along nu_perp. Zero in
/// exact arithmetic whenever nu minimizes Z(x,.).
double check_balanced_chord(const Density& d, Vec2 x, const Direction& nu);

/// Generators {-nu_i * slice_integral(x, nu_i)} over the argmin cluster; their
/// convex hull is the superdifferential of the depth at x.
std::vector<Vec2> superdifferential_hull(const Density& d, Vec2 x,
                                         const DirectionSearchConfig& cfg = {});

}  // namespace depth_hjb
