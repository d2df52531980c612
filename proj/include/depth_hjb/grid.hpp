#pragma once

#include <cstdint>
#include <vector>

#include "depth_hjb/errors.hpp"
#include "depth_hjb/geometry.hpp"

namespace depth_hjb {

enum class BoundaryKind { SupportHull, TruncatedBox };

enum class NodeState : std::uint8_t { Boundary, Fixed, Tentative };

/// Rectilinear grid with square cells. Node (i,j) sits at
/// origin + (i*spacing, j*spacing); 1D grids use ny = 1.
struct GridSpec {
    Vec2 origin{0.0, 0.0};
    double spacing = 0.0;
    int nx = 0;
    int ny = 1;
    BoundaryKind boundary_kind = BoundaryKind::SupportHull;

    void validate() const {
        if (!(spacing > 0.0)) throw DomainError("GridSpec: spacing must be > 0");
        if (nx < 3 || (ny != 1 && ny < 3)) throw DomainError("GridSpec: need >= 3 nodes per axis");
    }

    std::size_t node_count() const { return static_cast<std::size_t>(nx) * ny; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
    Vec2 node(int i, int j) const { return {origin.x + i * spacing, origin.y + j * spacing}; }
    Vec2 extent_max() const { return node(nx - 1, ny - 1); }

    bool operator==(const GridSpec&) const = default;

    /// Smallest lattice covering [lo,hi] with `margin_cells` extra cells on
    /// every side.
    static GridSpec cover(Vec2 lo, Vec2 hi, double spacing, int margin_cells,
                          BoundaryKind kind = BoundaryKind::SupportHull) {
        GridSpec g;
        g.spacing = spacing;
        g.boundary_kind = kind;
        g.origin = {lo.x - margin_cells * spacing, lo.y - margin_cells * spacing};
        auto cells = [&](double length) {
            return static_cast<int>(std::ceil(length / spacing - 1e-12)) + 2 * margin_cells;
        };
        g.nx = cells(hi.x - lo.x) + 1;
        g.ny = cells(hi.y - lo.y) + 1;
        g.validate();
        return g;
    }
};

/// Per-node scalar values plus solver states. Boundary nodes keep their
/// assigned values for the lifetime of a solve.
struct GridField {
    GridSpec spec;
    std::vector<double> values;
    std::vector<NodeState> states;

    GridField() = default;
    explicit GridField(const GridSpec& s, double fill = 0.0)
        : spec(s), values(s.node_count(), fill), states(s.node_count(), NodeState::Tentative) {}

    double& at(int i, int j) { return values[spec.index(i, j)]; }
    double at(int i, int j) const { return values[spec.index(i, j)]; }
    NodeState& state(int i, int j) { return states[spec.index(i, j)]; }
    NodeState state(int i, int j) const { return states[spec.index(i, j)]; }

    bool same_shape(const GridField& o) const { return spec == o.spec; }
};

}  // namespace depth_hjb
