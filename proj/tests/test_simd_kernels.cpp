#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "depth_hjb/kernels.hpp"
#include "depth_hjb/rng.hpp"

using namespace depth_hjb;

TEST_CASE("scalar counts on hand-checked data") {
    std::vector<double> xs{0.0, 1.0, 2.0, -1.0, 0.5};
    std::vector<double> ys{0.0, 0.0, 0.0, 0.0, 0.0};
    // distances along +x from px=0: 0, 1, 2, -1, 0.5
    CHECK(kernels::count_in_band_scalar(xs.data(), ys.data(), 5, 0, 0, 1, 0, 0.75) == 2);
    CHECK(kernels::count_in_halfspace_scalar(xs.data(), ys.data(), 5, 0, 0, 1, 0) == 4);
    CHECK(kernels::count_in_halfspace_scalar(xs.data(), ys.data(), 5, 0.6, 0, 1, 0) == 2);
}

TEST_CASE("avx2 variant matches scalar exactly") {
    if (!kernels::avx2_supported()) return;
    Rng rng(1234);
    // sizes straddling the 4-lane body/tail boundary
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 63u, 64u, 97u, 10000u}) {
        std::vector<double> xs(n), ys(n);
        for (std::size_t i = 0; i < n; ++i) {
            xs[i] = rng.uniform(-3.0, 3.0);
            ys[i] = rng.uniform(-3.0, 3.0);
        }
        for (int trial = 0; trial < 8; ++trial) {
            double px = rng.uniform(-1.0, 1.0);
            double py = rng.uniform(-1.0, 1.0);
            double ang = rng.uniform(0.0, 6.28);
            double nx = std::cos(ang), ny = std::sin(ang);
            double h = rng.uniform(1e-4, 0.5);
            CHECK(kernels::count_in_band_scalar(xs.data(), ys.data(), n, px, py, nx, ny, h) ==
                  kernels::count_in_band_avx2(xs.data(), ys.data(), n, px, py, nx, ny, h));
            CHECK(kernels::count_in_halfspace_scalar(xs.data(), ys.data(), n, px, py, nx, ny) ==
                  kernels::count_in_halfspace_avx2(xs.data(), ys.data(), n, px, py, nx, ny));
        }
    }
}

TEST_CASE("dispatcher returns the same counts as the reference") {
    Rng rng(99);
    std::size_t n = 4097;
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = rng.uniform(-1.0, 1.0);
        ys[i] = rng.uniform(-1.0, 1.0);
    }
    CHECK((kernels::active_isa() == kernels::Isa::Avx2 ||
           kernels::active_isa() == kernels::Isa::Scalar));
    CHECK(kernels::count_in_band(xs.data(), ys.data(), n, 0.1, -0.2, 0.6, 0.8, 0.05) ==
          kernels::count_in_band_scalar(xs.data(), ys.data(), n, 0.1, -0.2, 0.6, 0.8, 0.05));
    CHECK(kernels::count_in_halfspace(xs.data(), ys.data(), n, 0.1, -0.2, 0.6, 0.8) ==
          kernels::count_in_halfspace_scalar(xs.data(), ys.data(), n, 0.1, -0.2, 0.6, 0.8));
}
