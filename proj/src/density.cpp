#include "depth_hjb/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "depth_hjb/errors.hpp"
#include "depth_hjb/kernels.hpp"
#include "depth_hjb/rng.hpp"

namespace depth_hjb {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

void SliceEstimatorConfig::validate() const {
    if (method == SliceMethod::SampleBand) {
        if (sample_count < 1) throw DomainError("SliceEstimatorConfig: sample_count must be >= 1");
        if (!(band_halfwidth > 0.0)) throw DomainError("SliceEstimatorConfig: band_halfwidth must be > 0");
    }
}

namespace {

// 8-point Gauss-Legendre on [-1,1].
constexpr double kGlNode[4] = {0.1834346424956498, 0.5255324099163290,
                               0.7966664774136267, 0.9602898564975363};
constexpr double kGlWeight[4] = {0.3626837833783620, 0.3137066458778873,
                                 0.2223810344533745, 0.1012285362903763};

template <typename F>
double gl8(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
        s += kGlWeight[i] * (f(c - hw * kGlNode[i]) + f(c + hw * kGlNode[i]));
    }
    return s * hw;
}

// Valley profile on [0, pi] in units of pi/16, as (knot, elevation) pairs of
// a piecewise-linear even 2pi-periodic function; psi = eps + (1-eps)*h.
// East floor near theta = 0, a bump whose rising ramp crosses elevation 5/6
// at exactly pi/4 (t = 4), a floor valley containing pi/2, and a west bump
// whose rising ramp crosses the same elevation at 3pi/4 (t = 12). That
// places the strict local minima of Z(0, .) at +-pi/4 (tied, global) with a
// higher local minimum at pi, keeps the slice through the origin normal to
// e1 at the floor value, and carries enough east-bump mass that the depth
// drops quickly away from the origin, which is what makes the
// depth-vs-viscosity-solution gap at the origin large.
constexpr double kValleyKnotT[] = {0.0, 2.0, 4.4, 4.9, 5.9, 11.5, 12.1, 13.5, 14.1, 16.0};
constexpr double kValleyKnotH[] = {0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0};
constexpr int kValleyKnotCount = 10;

double valley_h_unit(double t16) {
    // t16 in [0, 16]; piecewise-linear interpolation of the knot table.
    for (int k = 1; k < kValleyKnotCount; ++k) {
        if (t16 <= kValleyKnotT[k]) {
            double span = kValleyKnotT[k] - kValleyKnotT[k - 1];
            double w = span > 0.0 ? (t16 - kValleyKnotT[k - 1]) / span : 0.0;
            return kValleyKnotH[k - 1] + w * (kValleyKnotH[k] - kValleyKnotH[k - 1]);
        }
    }
    return kValleyKnotH[kValleyKnotCount - 1];
}

void check_valley_eps(double eps) {
    if (!(eps > 0.0) || !(eps < 0.5)) {
        throw DomainError("valley_psi: epsilon must lie in (0, 0.5)");
    }
}

// All psi breakpoint angles on [0, 2pi).
std::vector<double> valley_breakpoint_angles() {
    static const std::vector<double> angles = [] {
        std::vector<double> a;
        const double u = kPi / 16.0;
        for (int k = 0; k < kValleyKnotCount; ++k) {
            double t = kValleyKnotT[k] * u;
            a.push_back(t);
            if (t > 0.0 && t < kPi) a.push_back(kTwoPi - t);
        }
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
        return a;
    }();
    return angles;
}

// integral over [0, 2pi) of the elevation h (trapezoid over the knot table,
// exact for the piecewise-linear profile)
double valley_h_integral() {
    double s = 0.0;
    for (int k = 1; k < kValleyKnotCount; ++k) {
        s += 0.5 * (kValleyKnotH[k] + kValleyKnotH[k - 1]) *
             (kValleyKnotT[k] - kValleyKnotT[k - 1]);
    }
    return 2.0 * s * kPi / 16.0;  // even extension
}

}  // namespace

double valley_psi(double theta, double epsilon) {
    check_valley_eps(epsilon);
    double t = Direction::wrap_angle(theta);
    if (t > kPi) t = kTwoPi - t;  // even profile
    return epsilon + (1.0 - epsilon) * valley_h_unit(t * 16.0 / kPi);
}

double valley_normalization(double epsilon) {
    check_valley_eps(epsilon);
    const double integral = kTwoPi * epsilon + (1.0 - epsilon) * valley_h_integral();
    return 3.0 / integral;
}

namespace detail {

class DensityModel {
  public:
    virtual ~DensityModel() = default;

    virtual int dim() const = 0;
    virtual std::string kind_name() const = 0;
    virtual double eval(Vec2 x) const = 0;
    virtual double halfspace_mass_analytic(Vec2 x, const Direction& nu) const = 0;
    virtual double slice_integral_analytic(Vec2 x, const Direction& nu) const = 0;
    virtual void sample_into(std::vector<Vec2>& out, std::size_t n, std::uint64_t seed) const = 0;
    virtual bool bounded() const = 0;
    virtual bool hull_contains(Vec2 x, double tol) const = 0;
    virtual double hull_boundary_distance(Vec2, Vec2) const {
        return std::numeric_limits<double>::infinity();
    }
    virtual std::pair<Vec2, Vec2> support_bbox() const = 0;
    virtual double domain_diameter() const = 0;
    virtual const ConvexPolygon* polygon() const { return nullptr; }
    virtual std::optional<double> closed_form_depth(Vec2) const { return std::nullopt; }

    std::shared_ptr<const SampleSoA> band_samples(std::size_t n, std::uint64_t seed) const {
        std::lock_guard<std::mutex> lock(cache_mu_);
        for (const auto& entry : cache_) {
            if (entry.n == n && entry.seed == seed) return entry.samples;
        }
        std::vector<Vec2> pts;
        sample_into(pts, n, seed);
        auto soa = std::make_shared<SampleSoA>();
        soa->xs.reserve(n);
        soa->ys.reserve(n);
        for (Vec2 p : pts) {
            soa->xs.push_back(p.x);
            soa->ys.push_back(p.y);
        }
        if (cache_.size() >= 4) cache_.erase(cache_.begin());
        cache_.push_back({n, seed, soa});
        return soa;
    }

  private:
    struct CacheEntry {
        std::size_t n;
        std::uint64_t seed;
        std::shared_ptr<const SampleSoA> samples;
    };
    mutable std::mutex cache_mu_;
    mutable std::vector<CacheEntry> cache_;
};

namespace {

class Uniform1dModel final : public DensityModel {
  public:
    Uniform1dModel(double a, double b) : a_(a), b_(b) {
        if (!(b > a)) throw DomainError("uniform1d: requires b > a");
    }

    int dim() const override { return 1; }
    std::string kind_name() const override { return "uniform1d"; }

    double eval(Vec2 x) const override {
        return (x.x >= a_ && x.x <= b_) ? 1.0 / (b_ - a_) : 0.0;
    }

    double halfspace_mass_analytic(Vec2 x, const Direction& nu) const override {
        double frac = nu.x() > 0.0 ? (b_ - x.x) / (b_ - a_) : (x.x - a_) / (b_ - a_);
        return std::clamp(frac, 0.0, 1.0);
    }

    // In 1D the slice through x is the point itself.
    double slice_integral_analytic(Vec2 x, const Direction&) const override { return eval(x); }

    void sample_into(std::vector<Vec2>& out, std::size_t n, std::uint64_t seed) const override {
        Rng rng(seed);
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) out.push_back({rng.uniform(a_, b_), 0.0});
    }

    bool bounded() const override { return true; }
    bool hull_contains(Vec2 x, double tol) const override {
        return x.x >= a_ - tol && x.x <= b_ + tol;
    }
    double hull_boundary_distance(Vec2 x, Vec2 dir) const override {
        if (dir.x > 0.0) return (b_ - x.x) / dir.x;
        if (dir.x < 0.0) return (a_ - x.x) / dir.x;
        return std::numeric_limits<double>::infinity();
    }
    std::pair<Vec2, Vec2> support_bbox() const override { return {{a_, 0.0}, {b_, 0.0}}; }
    double domain_diameter() const override { return b_ - a_; }
    std::optional<double> closed_form_depth(Vec2 x) const override {
        return std::max(0.0, std::min(x.x - a_, b_ - x.x) / (b_ - a_));
    }

    double a() const { return a_; }
    double b() const { return b_; }

  private:
    double a_, b_;
};

class UniformPolygonModel final : public DensityModel {
  public:
    explicit UniformPolygonModel(std::vector<Vec2> verts) : poly_(std::move(verts)) {
        height_ = 1.0 / poly_.area();
    }

    int dim() const override { return 2; }
    std::string kind_name() const override { return "uniform_convex_polygon"; }

    double eval(Vec2 x) const override { return poly_.contains(x) ? height_ : 0.0; }

    double halfspace_mass_analytic(Vec2 x, const Direction& nu) const override {
        return poly_.clipped_area(x, nu.vec()) * height_;
    }

    double slice_integral_analytic(Vec2 x, const Direction& nu) const override {
        return poly_.chord_length(x, perp(nu.vec())) * height_;
    }

    void sample_into(std::vector<Vec2>& out, std::size_t n, std::uint64_t seed) const override {
        // Fan triangulation, triangle picked by area, then the sqrt trick.
        const auto& v = poly_.vertices();
        std::vector<double> cum;
        cum.reserve(v.size() - 2);
        double total = 0.0;
        for (std::size_t i = 1; i + 1 < v.size(); ++i) {
            total += 0.5 * std::fabs(cross(v[i] - v[0], v[i + 1] - v[0]));
            cum.push_back(total);
        }
        Rng rng(seed);
        out.reserve(n);
        for (std::size_t k = 0; k < n; ++k) {
            double target = rng.uniform() * total;
            std::size_t tri = std::lower_bound(cum.begin(), cum.end(), target) - cum.begin();
            tri = std::min(tri, cum.size() - 1);
            double su = std::sqrt(rng.uniform());
            double t = rng.uniform();
            Vec2 p = (1.0 - su) * v[0] + su * (1.0 - t) * v[tri + 1] + su * t * v[tri + 2];
            out.push_back(p);
        }
    }

    bool bounded() const override { return true; }
    bool hull_contains(Vec2 x, double tol) const override { return poly_.contains(x, tol); }
    double hull_boundary_distance(Vec2 x, Vec2 dir) const override {
        auto iv = poly_.line_interval(x, dir);
        if (!iv || iv->second < 0.0) return std::numeric_limits<double>::infinity();
        return iv->second;
    }
    std::pair<Vec2, Vec2> support_bbox() const override { return {poly_.bbox_min(), poly_.bbox_max()}; }
    double domain_diameter() const override { return poly_.diameter(); }
    const ConvexPolygon* polygon() const override { return &poly_; }

  private:
    ConvexPolygon poly_;
    double height_;
};

class Gaussian2dModel final : public DensityModel {
  public:
    Gaussian2dModel(Vec2 mean, const std::array<std::array<double, 2>, 2>& cov)
        : mean_(mean), cov_(cov) {
        if (std::fabs(cov[0][1] - cov[1][0]) > 1e-12)
            throw DomainError("gaussian2d: covariance must be symmetric");
        det_ = cov[0][0] * cov[1][1] - cov[0][1] * cov[1][0];
        if (!(cov[0][0] > 0.0) || !(det_ > 0.0))
            throw DomainError("gaussian2d: covariance must be positive definite");
        inv_[0][0] = cov[1][1] / det_;
        inv_[0][1] = -cov[0][1] / det_;
        inv_[1][0] = -cov[1][0] / det_;
        inv_[1][1] = cov[0][0] / det_;
        // Cholesky factor for sampling.
        chol_l00_ = std::sqrt(cov[0][0]);
        chol_l10_ = cov[1][0] / chol_l00_;
        chol_l11_ = std::sqrt(cov[1][1] - chol_l10_ * chol_l10_);
        sigma_max_ = std::sqrt(0.5 * (cov[0][0] + cov[1][1] +
                                      std::hypot(cov[0][0] - cov[1][1], 2.0 * cov[0][1])));
    }

    int dim() const override { return 2; }
    std::string kind_name() const override { return "gaussian2d"; }

    double eval(Vec2 x) const override {
        Vec2 d = x - mean_;
        double q = quad_form(d);
        return std::exp(-0.5 * q) / (kTwoPi * std::sqrt(det_));
    }

    double halfspace_mass_analytic(Vec2 x, const Direction& nu) const override {
        Vec2 n = nu.vec();
        double sigma = std::sqrt(n.x * (cov_[0][0] * n.x + cov_[0][1] * n.y) +
                                 n.y * (cov_[1][0] * n.x + cov_[1][1] * n.y));
        double d = dot(x - mean_, n);
        return normal_cdf(-d / sigma);
    }

    double slice_integral_analytic(Vec2 x, const Direction& nu) const override {
        // Line {x + t w}, w = nu_perp: a 1D Gaussian integral in t.
        Vec2 w = perp(nu.vec());
        Vec2 d = x - mean_;
        double a = quad_form_pair(w, w);
        double b = quad_form_pair(w, d);
        double c = quad_form_pair(d, d);
        double expo = c - b * b / a;
        return std::exp(-0.5 * expo) / std::sqrt(kTwoPi * a * det_);
    }

    void sample_into(std::vector<Vec2>& out, std::size_t n, std::uint64_t seed) const override {
        Rng rng(seed);
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            double g0 = rng.normal();
            double g1 = rng.normal();
            out.push_back({mean_.x + chol_l00_ * g0, mean_.y + chol_l10_ * g0 + chol_l11_ * g1});
        }
    }

    bool bounded() const override { return false; }
    bool hull_contains(Vec2, double) const override { return true; }
    std::pair<Vec2, Vec2> support_bbox() const override {
        double r = 5.0 * sigma_max_;
        return {{mean_.x - r, mean_.y - r}, {mean_.x + r, mean_.y + r}};
    }
    double domain_diameter() const override { return 10.0 * sigma_max_ * std::sqrt(2.0); }
    std::optional<double> closed_form_depth(Vec2 x) const override {
        // Depth of a Gaussian is the normal tail of the Mahalanobis radius.
        return normal_cdf(-std::sqrt(quad_form(x - mean_)));
    }

  private:
    double quad_form(Vec2 v) const { return quad_form_pair(v, v); }
    double quad_form_pair(Vec2 u, Vec2 v) const {
        return u.x * (inv_[0][0] * v.x + inv_[0][1] * v.y) +
               u.y * (inv_[1][0] * v.x + inv_[1][1] * v.y);
    }

    Vec2 mean_;
    std::array<std::array<double, 2>, 2> cov_;
    std::array<std::array<double, 2>, 2> inv_{};
    double det_ = 1.0;
    double chol_l00_ = 1.0, chol_l10_ = 0.0, chol_l11_ = 1.0;
    double sigma_max_ = 1.0;
};

class Cauchy2dModel final : public DensityModel {
  public:
    Cauchy2dModel(Vec2 center, double gamma) : center_(center), gamma_(gamma) {
        if (!(gamma > 0.0)) throw DomainError("cauchy2d: gamma must be > 0");
    }

    int dim() const override { return 2; }
    std::string kind_name() const override { return "cauchy2d"; }

    double eval(Vec2 x) const override {
        double r2 = norm_sq(x - center_);
        double s = gamma_ * gamma_ + r2;
        return gamma_ / (kTwoPi * s * std::sqrt(s));
    }

    // The spherical Cauchy is closed under line restriction: both the
    // halfspace mass and the line integral reduce to the 1D Cauchy law of the
    // signed distance.
    double halfspace_mass_analytic(Vec2 x, const Direction& nu) const override {
        double d = dot(x - center_, nu.vec());
        return 0.5 - std::atan(d / gamma_) / kPi;
    }

    double slice_integral_analytic(Vec2 x, const Direction& nu) const override {
        double d = dot(x - center_, nu.vec());
        return gamma_ / (kPi * (gamma_ * gamma_ + d * d));
    }

    void sample_into(std::vector<Vec2>& out, std::size_t n, std::uint64_t seed) const override {
        // Radial inverse CDF: P(R <= r) = 1 - gamma/sqrt(gamma^2 + r^2).
        Rng rng(seed);
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            double u = rng.uniform();
            double one_minus = 1.0 - u;
            double r = gamma_ * std::sqrt(std::max(0.0, 1.0 / (one_minus * one_minus) - 1.0));
            double th = rng.uniform(0.0, kTwoPi);
            out.push_back({center_.x + r * std::cos(th), center_.y + r * std::sin(th)});
        }
    }

    bool bounded() const override { return false; }
    bool hull_contains(Vec2, double) const override { return true; }
    std::pair<Vec2, Vec2> support_bbox() const override {
        double r = 5.0 * gamma_;
        return {{center_.x - r, center_.y - r}, {center_.x + r, center_.y + r}};
    }
    double domain_diameter() const override { return 10.0 * gamma_ * std::sqrt(2.0); }
    std::optional<double> closed_form_depth(Vec2 x) const override {
        return 0.5 - std::atan(norm(x - center_) / gamma_) / kPi;
    }

  private:
    Vec2 center_;
    double gamma_;
};

class ValleyModel final : public DensityModel {
  public:
    explicit ValleyModel(double eps) : eps_(eps), c_(valley_normalization(eps)) {}

    int dim() const override { return 2; }
    std::string kind_name() const override { return "valley"; }

    double eval(Vec2 x) const override {
        double r = norm(x);
        if (r > 1.0) return 0.0;
        return c_ * r * valley_psi(std::atan2(x.y, x.x), eps_);
    }

    double halfspace_mass_analytic(Vec2 x, const Direction& nu) const override {
        // Z = C * integral over theta of psi(theta) * (r2^3 - r1^3)/3 with the
        // radial range clipped to the halfspace. Panels split at the psi
        // breakpoints and the radial regime changes, GL8 inside.
        const double phi = nu.angle();
        const double c = dot(x, nu.vec());

        std::vector<double> cuts = valley_breakpoint_angles();
        cuts.push_back(Direction::wrap_angle(phi + 0.5 * kPi));
        cuts.push_back(Direction::wrap_angle(phi - 0.5 * kPi));
        if (c >= -1.0 && c <= 1.0) {
            double ac = std::acos(std::clamp(c, -1.0, 1.0));
            cuts.push_back(Direction::wrap_angle(phi + ac));
            cuts.push_back(Direction::wrap_angle(phi - ac));
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.push_back(cuts.front() + kTwoPi);

        auto integrand = [&](double theta) {
            double a = std::cos(theta - phi);
            double r1 = 0.0, r2 = 0.0;
            if (a > 1e-14) {
                double rlo = c / a;
                if (rlo >= 1.0) return 0.0;
                r1 = std::max(0.0, rlo);
                r2 = 1.0;
            } else if (a < -1e-14) {
                if (c > 0.0) return 0.0;
                double rhi = c / a;
                r2 = std::min(1.0, rhi);
                if (r2 <= 0.0) return 0.0;
            } else {
                if (c > 0.0) return 0.0;
                r2 = 1.0;
            }
            double radial = (r2 * r2 * r2 - r1 * r1 * r1) / 3.0;
            return valley_psi(theta, eps_) * radial;
        };

        double total = 0.0;
        const double max_panel = kPi / 16.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            double lo = cuts[i], hi = cuts[i + 1];
            if (hi - lo < 1e-14) continue;
            int sub = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_panel)));
            double step = (hi - lo) / sub;
            for (int s = 0; s < sub; ++s) {
                total += gl8(integrand, lo + s * step, lo + (s + 1) * step);
            }
        }
        return c_ * total;
    }

    double slice_integral_analytic(Vec2 x, const Direction& nu) const override {
        // Chord of the unit disk along {x + t w}, w = nu_perp; split at the
        // psi-breakpoint rays and the closest point to the origin.
        Vec2 w = perp(nu.vec());
        double pd = dot(x, w);
        double disc = pd * pd - (norm_sq(x) - 1.0);
        if (disc <= 0.0) return 0.0;
        double root = std::sqrt(disc);
        double t1 = -pd - root;
        double t2 = -pd + root;

        std::vector<double> cuts = {t1, t2, std::clamp(-pd, t1, t2)};
        for (double ang : valley_breakpoint_angles()) {
            Vec2 u{std::cos(ang), std::sin(ang)};
            double denom = cross(w, u);
            if (std::fabs(denom) < 1e-14) continue;
            double t = -cross(x, u) / denom;
            if (t <= t1 || t >= t2) continue;
            if (dot(x + t * w, u) <= 0.0) continue;  // crosses the antipodal ray
            cuts.push_back(t);
        }
        std::sort(cuts.begin(), cuts.end());

        auto integrand = [&](double t) {
            Vec2 p = x + t * w;
            double r = norm(p);
            if (r < 1e-300) return 0.0;
            return c_ * r * valley_psi(std::atan2(p.y, p.x), eps_);
        };

        double total = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            if (cuts[i + 1] - cuts[i] < 1e-15) continue;
            total += gl8(integrand, cuts[i], cuts[i + 1]);
        }
        return total;
    }

    void sample_into(std::vector<Vec2>& out, std::size_t n, std::uint64_t seed) const override {
        // theta from the piecewise-linear psi by inverse CDF, r = U^(1/3).
        std::vector<double> knots = valley_breakpoint_angles();
        knots.push_back(kTwoPi);
        std::vector<double> vals(knots.size());
        for (std::size_t i = 0; i < knots.size(); ++i) vals[i] = valley_psi(knots[i], eps_);
        std::vector<double> cum(knots.size(), 0.0);
        for (std::size_t i = 1; i < knots.size(); ++i) {
            double seg = 0.5 * (vals[i - 1] + vals[i]) * (knots[i] - knots[i - 1]);
            cum[i] = cum[i - 1] + seg;
        }
        const double total = cum.back();

        Rng rng(seed);
        out.reserve(n);
        for (std::size_t k = 0; k < n; ++k) {
            double target = rng.uniform() * total;
            std::size_t i = std::upper_bound(cum.begin(), cum.end(), target) - cum.begin();
            i = std::clamp<std::size_t>(i, 1, knots.size() - 1);
            double w = target - cum[i - 1];
            double len = knots[i] - knots[i - 1];
            double v0 = vals[i - 1];
            double q = (vals[i] - vals[i - 1]) / len;
            double s;
            if (std::fabs(q) < 1e-14) {
                s = w / v0;
            } else {
                s = (-v0 + std::sqrt(v0 * v0 + 2.0 * q * w)) / q;
            }
            double theta = knots[i - 1] + std::clamp(s, 0.0, len);
            double r = std::cbrt(rng.uniform());
            out.push_back({r * std::cos(theta), r * std::sin(theta)});
        }
    }

    bool bounded() const override { return true; }
    bool hull_contains(Vec2 x, double tol) const override { return norm(x) <= 1.0 + tol; }
    double hull_boundary_distance(Vec2 x, Vec2 dir) const override {
        double b = dot(x, dir);
        double disc = b * b + 1.0 - norm_sq(x);
        if (disc < 0.0) return std::numeric_limits<double>::infinity();
        return -b + std::sqrt(disc);
    }
    std::pair<Vec2, Vec2> support_bbox() const override { return {{-1.0, -1.0}, {1.0, 1.0}}; }
    double domain_diameter() const override { return 2.0; }

  private:
    double eps_;
    double c_;
};

class AffinePushforwardModel final : public DensityModel {
  public:
    AffinePushforwardModel(std::shared_ptr<const DensityModel> base, const AffineMap2& map)
        : base_(std::move(base)), map_(map), inv_(map.inverse()),
          abs_det_(std::fabs(map.det())) {
        if (base_->dim() != 2) throw DomainError("affine_pushforward: base must be 2D");
        if (const ConvexPolygon* p = base_->polygon()) {
            poly_ = std::make_unique<ConvexPolygon>(p->transformed(inv_));
        }
    }

    int dim() const override { return 2; }
    std::string kind_name() const override { return "affine(" + base_->kind_name() + ")"; }

    double eval(Vec2 x) const override { return base_->eval(map_.apply(x)) * abs_det_; }

    double halfspace_mass_analytic(Vec2 x, const Direction& nu) const override {
        Vec2 w = inv_.apply_linear_transpose(nu.vec());
        return base_->halfspace_mass_analytic(map_.apply(x), Direction::from_vector(w));
    }

    double slice_integral_analytic(Vec2 x, const Direction& nu) const override {
        Vec2 w = inv_.apply_linear_transpose(nu.vec());
        double wn = norm(w);
        return base_->slice_integral_analytic(map_.apply(x), Direction::from_vector(w)) / wn;
    }

    void sample_into(std::vector<Vec2>& out, std::size_t n, std::uint64_t seed) const override {
        base_->sample_into(out, n, seed);
        for (Vec2& p : out) p = inv_.apply(p);
    }

    bool bounded() const override { return base_->bounded(); }
    bool hull_contains(Vec2 x, double tol) const override {
        return base_->hull_contains(map_.apply(x), tol);
    }
    double hull_boundary_distance(Vec2 x, Vec2 dir) const override {
        Vec2 image_dir = map_.apply_linear(dir);
        double scale = norm(image_dir);
        if (scale == 0.0) return std::numeric_limits<double>::infinity();
        double s = base_->hull_boundary_distance(map_.apply(x), image_dir * (1.0 / scale));
        return s / scale;
    }
    std::pair<Vec2, Vec2> support_bbox() const override {
        auto [lo, hi] = base_->support_bbox();
        Vec2 corners[4] = {{lo.x, lo.y}, {hi.x, lo.y}, {hi.x, hi.y}, {lo.x, hi.y}};
        Vec2 mn = inv_.apply(corners[0]);
        Vec2 mx = mn;
        for (Vec2 c : corners) {
            Vec2 t = inv_.apply(c);
            mn.x = std::min(mn.x, t.x);
            mn.y = std::min(mn.y, t.y);
            mx.x = std::max(mx.x, t.x);
            mx.y = std::max(mx.y, t.y);
        }
        return {mn, mx};
    }
    double domain_diameter() const override {
        auto [lo, hi] = support_bbox();
        return norm(hi - lo);
    }
    const ConvexPolygon* polygon() const override { return poly_.get(); }
    std::optional<double> closed_form_depth(Vec2 x) const override {
        // Depth is affine invariant.
        return base_->closed_form_depth(map_.apply(x));
    }

  private:
    std::shared_ptr<const DensityModel> base_;
    AffineMap2 map_;
    AffineMap2 inv_;
    double abs_det_;
    std::unique_ptr<ConvexPolygon> poly_;
};

}  // namespace
}  // namespace detail

Density Density::uniform1d(double a, double b) {
    return Density(std::make_shared<detail::Uniform1dModel>(a, b));
}

Density Density::uniform_convex_polygon(std::vector<Vec2> vertices) {
    return Density(std::make_shared<detail::UniformPolygonModel>(std::move(vertices)));
}

Density Density::gaussian2d(Vec2 mean, const std::array<std::array<double, 2>, 2>& covariance) {
    return Density(std::make_shared<detail::Gaussian2dModel>(mean, covariance));
}

Density Density::cauchy2d(Vec2 center, double gamma) {
    return Density(std::make_shared<detail::Cauchy2dModel>(center, gamma));
}

Density Density::valley(double epsilon) {
    return Density(std::make_shared<detail::ValleyModel>(epsilon));
}

Density Density::affine_pushforward(const Density& base, const AffineMap2& map) {
    if (map.is_identity()) return base;
    return Density(std::make_shared<detail::AffinePushforwardModel>(base.model_, map));
}

int Density::dim() const { return model_->dim(); }
std::string Density::kind_name() const { return model_->kind_name(); }
double Density::eval(Vec2 x) const { return model_->eval(x); }

double Density::eval1d(double x) const {
    if (dim() != 1) throw DomainError("eval1d: density is not 1D");
    return model_->eval({x, 0.0});
}

double Density::halfspace_mass(Vec2 x, const Direction& nu) const {
    return model_->halfspace_mass_analytic(x, nu);
}

double Density::halfspace_mass(Vec2 x, const Direction& nu, const SliceEstimatorConfig& cfg) const {
    if (cfg.method == SliceMethod::Analytic) return model_->halfspace_mass_analytic(x, nu);
    SliceEstimatorConfig r = resolve(cfg);
    r.validate();
    auto s = band_samples(r);
    std::size_t count = kernels::count_in_halfspace(s->xs.data(), s->ys.data(), s->size(),
                                                    x.x, x.y, nu.x(), nu.y());
    return static_cast<double>(count) / static_cast<double>(s->size());
}

double Density::slice_integral(Vec2 x, const Direction& nu) const {
    return model_->slice_integral_analytic(x, nu);
}

double Density::slice_integral(Vec2 x, const Direction& nu, const SliceEstimatorConfig& cfg) const {
    if (cfg.method == SliceMethod::Analytic) return model_->slice_integral_analytic(x, nu);
    SliceEstimatorConfig r = resolve(cfg);
    r.validate();
    auto s = band_samples(r);
    std::size_t count = kernels::count_in_band(s->xs.data(), s->ys.data(), s->size(),
                                               x.x, x.y, nu.x(), nu.y(), r.band_halfwidth);
    return static_cast<double>(count) /
           (2.0 * r.band_halfwidth * static_cast<double>(s->size()));
}

std::vector<Vec2> Density::sample(std::size_t n, std::uint64_t seed) const {
    if (n < 1) throw DomainError("sample: n must be >= 1");
    std::vector<Vec2> out;
    model_->sample_into(out, n, seed);
    return out;
}

std::optional<double> Density::closed_form_depth(Vec2 x) const {
    return model_->closed_form_depth(x);
}

bool Density::has_bounded_support() const { return model_->bounded(); }
bool Density::hull_contains(Vec2 x, double tol) const { return model_->hull_contains(x, tol); }
double Density::hull_boundary_distance(Vec2 x, Vec2 dir) const {
    return model_->hull_boundary_distance(x, dir);
}
std::pair<Vec2, Vec2> Density::support_bbox() const { return model_->support_bbox(); }
double Density::domain_diameter() const { return model_->domain_diameter(); }
const ConvexPolygon* Density::polygon() const { return model_->polygon(); }

SliceEstimatorConfig Density::resolve(SliceEstimatorConfig cfg) const {
    if (cfg.method == SliceMethod::SampleBand && cfg.band_halfwidth == 0.0) {
        cfg.band_halfwidth = domain_diameter() / 100.0;
    }
    return cfg;
}

std::shared_ptr<const SampleSoA> Density::band_samples(const SliceEstimatorConfig& cfg) const {
    return model_->band_samples(static_cast<std::size_t>(cfg.sample_count), cfg.rng_seed);
}

}  // namespace depth_hjb
