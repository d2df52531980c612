#pragma once

#include <functional>
#include <vector>

#include "depth_hjb/grid.hpp"
#include "depth_hjb/solver.hpp"

namespace depth_hjb {

/// Interior-node error metrics between a solved field and a reference.
struct ComparisonReport {
    double l_inf = 0.0;
    double l1_mean = 0.0;
    double signed_max = 0.0;  // max of (u - t), sign kept
    GridField residual;       // u - t on every node; metrics cover interior only
};

ComparisonReport compare_fields(const GridField& u, const GridField& t);

struct Polyline {
    std::vector<Vec2> points;
    bool closed = false;
};

struct LevelContours {
    double level = 0.0;
    std::vector<Polyline> polylines;
    bool empty = false;  // level outside [min u, max u]: warning entry, not an error
};

/// Marching squares with linear interpolation along cell edges.
std::vector<LevelContours> extract_contours(const GridField& field,
                                            const std::vector<double>& levels);

struct ConvergenceRow {
    double spacing = 0.0;
    double l_inf = 0.0;
    double ratio = 0.0;  // error(previous spacing) / error(this spacing); 0 for the first row
};

/// Reference-field provider for a given grid (direction-search oracle, closed
/// form, ...); must label boundary nodes the same way the solver does.
using ReferenceField = std::function<GridField(const GridSpec&)>;

/// Solve + compare per spacing; requires at least two spacings.
std::vector<ConvergenceRow> convergence_table(const Density& d,
                                              const std::vector<double>& spacings,
                                              const SolverConfig& cfg,
                                              const ReferenceField& reference,
                                              int margin_cells = 2);

/// Direction-search depth evaluated on every node (boundary states mirror the
/// solver's classification for the grid's boundary kind).
GridField oracle_depth_field(const Density& d, const GridSpec& spec,
                             const DirectionSearchConfig& cfg = {});

}  // namespace depth_hjb
