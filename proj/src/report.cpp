#include "depth_hjb/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <unordered_map>

#include "depth_hjb/parallel.hpp"

namespace depth_hjb {

ComparisonReport compare_fields(const GridField& u, const GridField& t) {
    if (!u.same_shape(t)) throw ShapeMismatch("compare_fields: grid specs differ");
    ComparisonReport rep;
    rep.residual = GridField(u.spec);
    rep.residual.states = u.states;
    rep.signed_max = -std::numeric_limits<double>::infinity();
    double abs_sum = 0.0;
    std::size_t interior = 0;
    for (std::size_t k = 0; k < u.values.size(); ++k) {
        double r = u.values[k] - t.values[k];
        rep.residual.values[k] = r;
        if (u.states[k] == NodeState::Boundary) continue;
        ++interior;
        rep.l_inf = std::max(rep.l_inf, std::fabs(r));
        rep.signed_max = std::max(rep.signed_max, r);
        abs_sum += std::fabs(r);
    }
    if (interior == 0) throw ShapeMismatch("compare_fields: no interior nodes");
    rep.l1_mean = abs_sum / static_cast<double>(interior);
    return rep;
}

namespace {

struct PointKey {
    std::uint64_t x;
    std::uint64_t y;
    bool operator==(const PointKey&) const = default;
};

struct PointKeyHash {
    std::size_t operator()(const PointKey& k) const {
        std::uint64_t h = k.x * 0x9e3779b97f4a7c15ULL ^ (k.y + 0x7f4a7c15ULL);
        h ^= h >> 33;
        return static_cast<std::size_t>(h);
    }
};

PointKey key_of(Vec2 p) {
    // Shared cell edges interpolate from the same node pair, so matching
    // endpoints are bitwise equal; hashing the bit patterns is exact.
    PointKey k;
    std::memcpy(&k.x, &p.x, sizeof(double));
    std::memcpy(&k.y, &p.y, sizeof(double));
    return k;
}

struct Segment {
    Vec2 a, b;
    bool used = false;
};

std::vector<Polyline> stitch(std::vector<Segment>& segs) {
    std::unordered_multimap<PointKey, std::size_t, PointKeyHash> by_endpoint;
    for (std::size_t s = 0; s < segs.size(); ++s) {
        by_endpoint.emplace(key_of(segs[s].a), s);
        by_endpoint.emplace(key_of(segs[s].b), s);
    }

    auto next_unused = [&](Vec2 p, std::size_t self) -> std::size_t {
        auto [lo, hi] = by_endpoint.equal_range(key_of(p));
        for (auto it = lo; it != hi; ++it) {
            if (it->second != self && !segs[it->second].used) return it->second;
        }
        return segs.size();
    };

    std::vector<Polyline> out;
    for (std::size_t s = 0; s < segs.size(); ++s) {
        if (segs[s].used) continue;
        segs[s].used = true;
        std::vector<Vec2> chain{segs[s].a, segs[s].b};
        // Extend forward from the tail.
        for (;;) {
            std::size_t nxt = next_unused(chain.back(), s);
            if (nxt == segs.size()) break;
            segs[nxt].used = true;
            Vec2 tail = chain.back();
            chain.push_back(key_of(segs[nxt].a) == key_of(tail) ? segs[nxt].b : segs[nxt].a);
        }
        // Extend backward from the head.
        for (;;) {
            std::size_t nxt = next_unused(chain.front(), s);
            if (nxt == segs.size()) break;
            segs[nxt].used = true;
            Vec2 head = chain.front();
            chain.insert(chain.begin(),
                         key_of(segs[nxt].a) == key_of(head) ? segs[nxt].b : segs[nxt].a);
        }
        Polyline pl;
        pl.closed = chain.size() > 2 && key_of(chain.front()) == key_of(chain.back());
        if (pl.closed) chain.pop_back();
        pl.points = std::move(chain);
        out.push_back(std::move(pl));
    }
    return out;
}

}  // namespace

std::vector<LevelContours> extract_contours(const GridField& field,
                                            const std::vector<double>& levels) {
    const GridSpec& g = field.spec;
    double vmin = *std::min_element(field.values.begin(), field.values.end());
    double vmax = *std::max_element(field.values.begin(), field.values.end());

    std::vector<LevelContours> out;
    out.reserve(levels.size());
    for (double level : levels) {
        LevelContours lc;
        lc.level = level;
        if (level < vmin || level > vmax) {
            lc.empty = true;
            out.push_back(std::move(lc));
            continue;
        }

        std::vector<Segment> segs;
        for (int j = 0; j + 1 < g.ny; ++j) {
            for (int i = 0; i + 1 < g.nx; ++i) {
                double v00 = field.at(i, j);
                double v10 = field.at(i + 1, j);
                double v11 = field.at(i + 1, j + 1);
                double v01 = field.at(i, j + 1);
                int c = (v00 >= level) | ((v10 >= level) << 1) | ((v11 >= level) << 2) |
                        ((v01 >= level) << 3);
                if (c == 0 || c == 15) continue;

                Vec2 p00 = g.node(i, j);
                auto lerp = [&](Vec2 a, Vec2 b, double va, double vb) {
                    double t = (level - va) / (vb - va);
                    return a + t * (b - a);
                };
                auto emit = [&](Vec2 a, Vec2 b) {
                    // level lines through a node exactly produce zero-length
                    // segments; drop them
                    if (key_of(a) == key_of(b)) return;
                    segs.push_back({a, b});
                };
                // Edge midpoints, computed lazily per case.
                Vec2 p10 = g.node(i + 1, j);
                Vec2 p11 = g.node(i + 1, j + 1);
                Vec2 p01 = g.node(i, j + 1);
                auto bottom = [&] { return lerp(p00, p10, v00, v10); };
                auto right = [&] { return lerp(p10, p11, v10, v11); };
                auto top = [&] { return lerp(p01, p11, v01, v11); };
                auto left = [&] { return lerp(p00, p01, v00, v01); };

                switch (c) {
                    case 1: case 14: emit(bottom(), left()); break;
                    case 2: case 13: emit(bottom(), right()); break;
                    case 3: case 12: emit(left(), right()); break;
                    case 4: case 11: emit(right(), top()); break;
                    case 6: case 9: emit(bottom(), top()); break;
                    case 7: case 8: emit(left(), top()); break;
                    case 5: case 10: {
                        // Saddle: the cell-center average picks the pairing.
                        double center = 0.25 * (v00 + v10 + v11 + v01);
                        bool center_in = center >= level;
                        bool diag_in = (c == 5);  // corners 00 and 11 inside
                        if (center_in == diag_in) {
                            emit(bottom(), right());
                            emit(left(), top());
                        } else {
                            emit(bottom(), left());
                            emit(right(), top());
                        }
                        break;
                    }
                    default: break;
                }
            }
        }
        lc.polylines = stitch(segs);
        lc.empty = lc.polylines.empty();
        out.push_back(std::move(lc));
    }
    return out;
}

std::vector<ConvergenceRow> convergence_table(const Density& d,
                                              const std::vector<double>& spacings,
                                              const SolverConfig& cfg,
                                              const ReferenceField& reference,
                                              int margin_cells) {
    if (spacings.size() < 2) throw DomainError("convergence_table: need at least two spacings");
    auto [lo, hi] = d.support_bbox();
    std::vector<ConvergenceRow> rows;
    for (double spacing : spacings) {
        GridField solved;
        if (d.dim() == 1) {
            int n = static_cast<int>(std::lround((hi.x - lo.x) / spacing)) + 1;
            solved = solve_1d(d, lo.x, hi.x, n);
        } else {
            GridSpec spec = GridSpec::cover(lo, hi, spacing, margin_cells);
            solved = solve_2d(d, spec, cfg).field;
        }
        ComparisonReport cmp = compare_fields(solved, reference(solved.spec));
        ConvergenceRow row;
        row.spacing = spacing;
        row.l_inf = cmp.l_inf;
        row.ratio = rows.empty() ? 0.0 : rows.back().l_inf / cmp.l_inf;
        rows.push_back(row);
    }
    return rows;
}

GridField oracle_depth_field(const Density& d, const GridSpec& spec,
                             const DirectionSearchConfig& cfg) {
    GridField field(spec);
    const bool hull_kind = spec.boundary_kind == BoundaryKind::SupportHull;
    for (int j = 0; j < spec.ny; ++j) {
        for (int i = 0; i < spec.nx; ++i) {
            bool boundary = hull_kind
                                ? !d.hull_contains(spec.node(i, j), -1e-12)
                                : (i == 0 || j == 0 || i == spec.nx - 1 || j == spec.ny - 1);
            if (boundary) field.state(i, j) = NodeState::Boundary;
        }
    }
    parallel_for(spec.node_count(), [&](std::size_t idx) {
        int i = static_cast<int>(idx % spec.nx);
        int j = static_cast<int>(idx / spec.nx);
        if (hull_kind && field.states[idx] == NodeState::Boundary) {
            field.values[idx] = 0.0;
        } else {
            field.values[idx] = tukey_depth(d, spec.node(i, j), cfg).depth;
            if (field.states[idx] != NodeState::Boundary) field.states[idx] = NodeState::Fixed;
        }
    });
    return field;
}

}  // namespace depth_hjb
