#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "depth_hjb/geometry.hpp"

namespace depth_hjb {

enum class SliceMethod { Analytic, SampleBand };

/// How the hyperplane-slice integral (and the Monte-Carlo halfspace mass) is
/// estimated. Analytic ignores sample_count / band_halfwidth.
struct SliceEstimatorConfig {
    SliceMethod method = SliceMethod::Analytic;
    std::int64_t sample_count = 12000;
    double band_halfwidth = 0.0;  // 0 means "use the density's default" (diameter/100)
    std::uint64_t rng_seed = 0;

    void validate() const;
};

struct SampleSoA {
    std::vector<double> xs;
    std::vector<double> ys;
    std::size_t size() const { return xs.size(); }
};

namespace detail {
class DensityModel;
}

/// Probability density over R^1 or R^2 exposing the three primitives the
/// depth computations need: pointwise evaluation, the halfspace mass
/// Z(x,nu) = mu({y : (y-x).nu >= 0}), and the hyperplane slice integral
/// through x with normal nu. Value type; copies share the immutable model.
class Density {
  public:
    static Density uniform1d(double a, double b);
    static Density uniform_convex_polygon(std::vector<Vec2> vertices);
    static Density gaussian2d(Vec2 mean, const std::array<std::array<double, 2>, 2>& covariance);
    static Density cauchy2d(Vec2 center, double gamma);
    static Density valley(double epsilon);
    // rho~(x) = rho(L(x)) |det DL|; every primitive is pulled back through L.
    static Density affine_pushforward(const Density& base, const AffineMap2& map);

    int dim() const;
    std::string kind_name() const;

    double eval(Vec2 x) const;
    double eval1d(double x) const;

    double halfspace_mass(Vec2 x, const Direction& nu) const;
    double halfspace_mass(Vec2 x, const Direction& nu, const SliceEstimatorConfig& cfg) const;

    double slice_integral(Vec2 x, const Direction& nu) const;
    double slice_integral(Vec2 x, const Direction& nu, const SliceEstimatorConfig& cfg) const;

    std::vector<Vec2> sample(std::size_t n, std::uint64_t seed) const;

    /// Exact depth when the kind admits one (uniform1d, gaussian2d via the
    /// Mahalanobis radius, spherical cauchy2d); nullopt otherwise.
    std::optional<double> closed_form_depth(Vec2 x) const;

    bool has_bounded_support() const;
    /// Strict test against the closed convex hull of the support. Unbounded
    /// kinds contain every finite point.
    bool hull_contains(Vec2 x, double tol = 0.0) const;
    /// Distance along the unit direction `dir` from x to the support hull
    /// boundary; +inf for unbounded kinds or when the ray misses the hull.
    double hull_boundary_distance(Vec2 x, Vec2 dir) const;

    /// Axis-aligned box containing the support hull (bounded kinds) or the
    /// scale box used for truncation defaults (unbounded kinds).
    std::pair<Vec2, Vec2> support_bbox() const;
    /// Bounded kinds: hull diameter. Unbounded kinds: a scale proxy used for
    /// the default band width.
    double domain_diameter() const;
    /// Non-null only for uniform convex polygons (and their affine images).
    const ConvexPolygon* polygon() const;

    // Resolves band_halfwidth = 0 to diameter/100.
    SliceEstimatorConfig resolve(SliceEstimatorConfig cfg) const;
    // Cached SoA sample set for (cfg.sample_count, cfg.rng_seed).
    std::shared_ptr<const SampleSoA> band_samples(const SliceEstimatorConfig& cfg) const;

  private:
    explicit Density(std::shared_ptr<const detail::DensityModel> model) : model_(std::move(model)) {}
    std::shared_ptr<const detail::DensityModel> model_;
};

/// Angular profile of the valley density rho(r,theta) = C r psi(theta):
/// 2pi-periodic, even, piecewise linear, floor exactly epsilon on arcs that
/// contain theta = +-pi/2, elevated to 1 on an east-side bump straddling
/// theta ~ pi/4..7pi/16 (mirrored below the axis) and a broad west bump
/// through theta = pi. Placed so Z(0,.) has strict local minima at +-pi/4
/// (tied, global) and a higher local minimum at pi. Valid for epsilon in
/// (0, 0.5).
double valley_psi(double theta, double epsilon);

/// Normalization C = 3 / integral(psi) making C r psi(theta) a probability
/// density on the unit disk.
double valley_normalization(double epsilon);

double normal_cdf(double z);

}  // namespace depth_hjb
