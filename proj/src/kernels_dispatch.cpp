#include <cstdlib>
#include <cstring>

#include "depth_hjb/kernels.hpp"

namespace depth_hjb::kernels {

namespace {

Isa resolve_isa() {
    const char* env = std::getenv("DEPTH_HJB_SIMD");
    if (env != nullptr) {
        if (std::strcmp(env, "scalar") == 0) return Isa::Scalar;
        if (std::strcmp(env, "avx2") == 0) return avx2_supported() ? Isa::Avx2 : Isa::Scalar;
    }
    return avx2_supported() ? Isa::Avx2 : Isa::Scalar;
}

}  // namespace

Isa active_isa() {
    static const Isa isa = resolve_isa();
    return isa;
}

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

std::size_t count_in_band(const double* xs, const double* ys, std::size_t n,
                          double px, double py, double nx, double ny, double h) {
    if (active_isa() == Isa::Avx2) return count_in_band_avx2(xs, ys, n, px, py, nx, ny, h);
    return count_in_band_scalar(xs, ys, n, px, py, nx, ny, h);
}

std::size_t count_in_halfspace(const double* xs, const double* ys, std::size_t n,
                               double px, double py, double nx, double ny) {
    if (active_isa() == Isa::Avx2) return count_in_halfspace_avx2(xs, ys, n, px, py, nx, ny);
    return count_in_halfspace_scalar(xs, ys, n, px, py, nx, ny);
}

}  // namespace depth_hjb::kernels
