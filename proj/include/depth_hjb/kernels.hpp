#pragma once

#include <cstddef>

// Hot counting kernels behind the Monte-Carlo estimators. Each kernel has a
// scalar reference implementation and an AVX2 variant selected at runtime;
// both evaluate the projected distance as (x-px)*nx + (y-py)*ny with FP
// contraction disabled, so the two variants return identical counts.

namespace depth_hjb::kernels {

enum class Isa { Scalar, Avx2 };

// Selected implementation. Honors DEPTH_HJB_SIMD={scalar,avx2,auto}; an avx2
// request on hardware without AVX2 falls back to scalar.
Isa active_isa();
const char* isa_name(Isa isa);

// #{i : |nx*(xs[i]-px) + ny*(ys[i]-py)| <= h}
std::size_t count_in_band(const double* xs, const double* ys, std::size_t n,
                          double px, double py, double nx, double ny, double h);

// #{i : nx*(xs[i]-px) + ny*(ys[i]-py) >= 0}
std::size_t count_in_halfspace(const double* xs, const double* ys, std::size_t n,
                               double px, double py, double nx, double ny);

// Direct entry points, used by the equivalence tests.
std::size_t count_in_band_scalar(const double* xs, const double* ys, std::size_t n,
                                 double px, double py, double nx, double ny, double h);
std::size_t count_in_halfspace_scalar(const double* xs, const double* ys, std::size_t n,
                                      double px, double py, double nx, double ny);
bool avx2_supported();
// Preconditions: avx2_supported().
std::size_t count_in_band_avx2(const double* xs, const double* ys, std::size_t n,
                               double px, double py, double nx, double ny, double h);
std::size_t count_in_halfspace_avx2(const double* xs, const double* ys, std::size_t n,
                                    double px, double py, double nx, double ny);

}  // namespace depth_hjb::kernels
