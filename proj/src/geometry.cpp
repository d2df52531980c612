#include "depth_hjb/geometry.hpp"

#include <algorithm>
#include <limits>

namespace depth_hjb {

ConvexPolygon::ConvexPolygon(std::vector<Vec2> vertices) : verts_(std::move(vertices)) {
    if (verts_.size() < 3) throw DomainError("ConvexPolygon: need at least 3 vertices");
    const std::size_t n = verts_.size();
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 a = verts_[i];
        Vec2 b = verts_[(i + 1) % n];
        Vec2 c = verts_[(i + 2) % n];
        if (cross(b - a, c - b) <= 0.0) {
            throw DomainError("ConvexPolygon: vertices must be strictly convex and CCW");
        }
    }
    area_ = polygon_area(verts_);
    bbox_min_ = bbox_max_ = verts_[0];
    for (Vec2 v : verts_) {
        bbox_min_.x = std::min(bbox_min_.x, v.x);
        bbox_min_.y = std::min(bbox_min_.y, v.y);
        bbox_max_.x = std::max(bbox_max_.x, v.x);
        bbox_max_.y = std::max(bbox_max_.y, v.y);
    }
}

double ConvexPolygon::diameter() const {
    double best = 0.0;
    for (std::size_t i = 0; i < verts_.size(); ++i)
        for (std::size_t j = i + 1; j < verts_.size(); ++j)
            best = std::max(best, norm(verts_[i] - verts_[j]));
    return best;
}

bool ConvexPolygon::contains(Vec2 p, double tol) const {
    // tol is a distance: positive values fatten the polygon.
    const std::size_t n = verts_.size();
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 a = verts_[i];
        Vec2 b = verts_[(i + 1) % n];
        if (cross(b - a, p - a) < -tol * norm(b - a)) return false;
    }
    return true;
}

double ConvexPolygon::clipped_area(Vec2 p, Vec2 n) const {
    // Sutherland-Hodgman against a single halfplane, fixed-size buffers.
    constexpr std::size_t kMax = 64;
    std::array<Vec2, kMax> out;
    std::size_t m = 0;
    const std::size_t nv = verts_.size();
    for (std::size_t i = 0; i < nv; ++i) {
        Vec2 a = verts_[i];
        Vec2 b = verts_[(i + 1) % nv];
        double da = dot(a - p, n);
        double db = dot(b - p, n);
        bool ina = da >= 0.0;
        bool inb = db >= 0.0;
        if (ina) out[m++] = a;
        if (ina != inb) {
            double t = da / (da - db);
            out[m++] = a + t * (b - a);
        }
    }
    if (m < 3) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        Vec2 a = out[i];
        Vec2 b = out[(i + 1) % m];
        s += cross(a, b);
    }
    return 0.5 * std::fabs(s);
}

std::optional<std::pair<double, double>> ConvexPolygon::line_interval(Vec2 p, Vec2 d) const {
    // Clip the parametric line against every edge halfplane.
    double tmin = -std::numeric_limits<double>::infinity();
    double tmax = std::numeric_limits<double>::infinity();
    const std::size_t n = verts_.size();
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 a = verts_[i];
        Vec2 b = verts_[(i + 1) % n];
        Vec2 inward = perp(b - a);  // points into the polygon (CCW)
        double denom = dot(d, inward);
        double num = dot(a - p, inward);
        if (std::fabs(denom) < 1e-300) {
            if (num > 0.0) return std::nullopt;  // parallel, outside
            continue;
        }
        double t = num / denom;
        if (denom > 0.0) {
            tmin = std::max(tmin, t);
        } else {
            tmax = std::min(tmax, t);
        }
        if (tmin > tmax) return std::nullopt;
    }
    return std::make_pair(tmin, tmax);
}

double ConvexPolygon::chord_length(Vec2 p, Vec2 d) const {
    auto iv = line_interval(p, d);
    if (!iv) return 0.0;
    return std::max(0.0, (iv->second - iv->first)) * norm(d);
}

ConvexPolygon ConvexPolygon::transformed(const AffineMap2& map) const {
    std::vector<Vec2> v;
    v.reserve(verts_.size());
    for (Vec2 p : verts_) v.push_back(map.apply(p));
    if (map.det() < 0.0) std::reverse(v.begin(), v.end());
    return ConvexPolygon(std::move(v));
}

double polygon_area(const std::vector<Vec2>& pts) {
    double s = 0.0;
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        s += cross(pts[i], pts[(i + 1) % n]);
    }
    return 0.5 * s;
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t n = pts.size();
    if (n < 3) return pts;
    std::vector<Vec2> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

}  // namespace depth_hjb
