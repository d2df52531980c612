#include <cmath>

#include "depth_hjb/kernels.hpp"

// Reference kernels. Compiled with -ffp-contract=off (see CMakeLists) so the
// mul/add sequence matches the vector variants operation for operation.

namespace depth_hjb::kernels {

std::size_t count_in_band_scalar(const double* xs, const double* ys, std::size_t n,
                                 double px, double py, double nx, double ny, double h) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = (xs[i] - px) * nx + (ys[i] - py) * ny;
        if (std::fabs(d) <= h) ++count;
    }
    return count;
}

std::size_t count_in_halfspace_scalar(const double* xs, const double* ys, std::size_t n,
                                      double px, double py, double nx, double ny) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = (xs[i] - px) * nx + (ys[i] - py) * ny;
        if (d >= 0.0) ++count;
    }
    return count;
}

}  // namespace depth_hjb::kernels
