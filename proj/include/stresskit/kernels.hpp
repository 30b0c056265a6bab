#pragma once

#include <cstddef>
#include <string>

// Data-parallel inner loops used by the feature extractor and the
// distance/margin based models. Every kernel has a scalar reference
// implementation and, on x86-64 with AVX2, a vectorized variant chosen
// once at startup.
//
// Accumulation contract: reductions (sum, sum_sq_dev, dot,
// squared_distance) accumulate into four stripes, stripe[k] taking
// elements k, k+4, k+8, ... of the first n - n%4 elements; the stripes
// combine as (s0 + s1) + (s2 + s3) and the tail elements are then added
// in index order. The scalar reference follows this order exactly, and
// no FMA contraction is permitted in either path, so scalar and AVX2
// results are bit-identical. Elementwise kernels (magnitude3) and
// min/max are exact in any order.

namespace stresskit::kernels {

enum class Backend { scalar, avx2 };

// Selected once per process: AVX2 when the CPU supports it, overridable
// with STRESSKIT_KERNELS=scalar|avx2.
Backend active_backend();
std::string backend_name();

// out[i] = sqrt(ax[i]^2 + ay[i]^2 + az[i]^2)
void magnitude3(const double* ax, const double* ay, const double* az,
                double* out, std::size_t n);

double sum(const double* x, std::size_t n);

// Sum of (x[i] - center)^2.
double sum_sq_dev(const double* x, std::size_t n, double center);

double dot(const double* a, const double* b, std::size_t n);

// Sum of (a[i] - b[i])^2.
double squared_distance(const double* a, const double* b, std::size_t n);

void minmax(const double* x, std::size_t n, double& mn, double& mx);

// Reference implementations (always compiled). Exposed so equivalence
// tests can pin the vector paths against them.
namespace scalar {
void magnitude3(const double* ax, const double* ay, const double* az,
                double* out, std::size_t n);
double sum(const double* x, std::size_t n);
double sum_sq_dev(const double* x, std::size_t n, double center);
double dot(const double* a, const double* b, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
void minmax(const double* x, std::size_t n, double& mn, double& mx);
}  // namespace scalar

#if defined(__x86_64__)
namespace avx2 {
bool supported();
void magnitude3(const double* ax, const double* ay, const double* az,
                double* out, std::size_t n);
double sum(const double* x, std::size_t n);
double sum_sq_dev(const double* x, std::size_t n, double center);
double dot(const double* a, const double* b, std::size_t n);
double squared_distance(const double* a, const double* b, std::size_t n);
void minmax(const double* x, std::size_t n, double& mn, double& mx);
}  // namespace avx2
#endif

}  // namespace stresskit::kernels
