// AVX2 variants of the kernels. Compiled with -mavx2 in its own
// translation unit; callers must check avx2::supported() (the dispatcher
// does) before entering. FP contraction is disabled for this unit so the
// striped accumulation matches the scalar reference bit for bit.

#include "stresskit/kernels.hpp"

#if defined(__x86_64__)

#include <immintrin.h>

#include <cmath>
#include <limits>

namespace stresskit::kernels::avx2 {

bool supported() {
#if defined(__GNUC__) || defined(__clang__)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

namespace {

inline double combine_stripes(__m256d acc) {
  double r[4];
  _mm256_storeu_pd(r, acc);
  return (r[0] + r[1]) + (r[2] + r[3]);
}

}  // namespace

void magnitude3(const double* ax, const double* ay, const double* az,
                double* out, std::size_t n) {
  const std::size_t main = n - (n % 4);
  for (std::size_t i = 0; i < main; i += 4) {
    const __m256d x = _mm256_loadu_pd(ax + i);
    const __m256d y = _mm256_loadu_pd(ay + i);
    const __m256d z = _mm256_loadu_pd(az + i);
    const __m256d s = _mm256_add_pd(
        _mm256_add_pd(_mm256_mul_pd(x, x), _mm256_mul_pd(y, y)),
        _mm256_mul_pd(z, z));
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(s));
  }
  for (std::size_t i = main; i < n; ++i) {
    out[i] = std::sqrt(ax[i] * ax[i] + ay[i] * ay[i] + az[i] * az[i]);
  }
}

double sum(const double* x, std::size_t n) {
  const std::size_t main = n - (n % 4);
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < main; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  }
  double total = combine_stripes(acc);
  for (std::size_t i = main; i < n; ++i) total += x[i];
  return total;
}

double sum_sq_dev(const double* x, std::size_t n, double center) {
  const std::size_t main = n - (n % 4);
  const __m256d c = _mm256_set1_pd(center);
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < main; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), c);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double total = combine_stripes(acc);
  for (std::size_t i = main; i < n; ++i) {
    const double d = x[i] - center;
    total += d * d;
  }
  return total;
}

double dot(const double* a, const double* b, std::size_t n) {
  const std::size_t main = n - (n % 4);
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < main; i += 4) {
    acc = _mm256_add_pd(
        acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  double total = combine_stripes(acc);
  for (std::size_t i = main; i < n; ++i) total += a[i] * b[i];
  return total;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
  const std::size_t main = n - (n % 4);
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < main; i += 4) {
    const __m256d d =
        _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double total = combine_stripes(acc);
  for (std::size_t i = main; i < n; ++i) {
    const double d = a[i] - b[i];
    total += d * d;
  }
  return total;
}

void minmax(const double* x, std::size_t n, double& mn, double& mx) {
  const double inf = std::numeric_limits<double>::infinity();
  const std::size_t main = n - (n % 4);
  __m256d vmin = _mm256_set1_pd(inf);
  __m256d vmax = _mm256_set1_pd(-inf);
  for (std::size_t i = 0; i < main; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    vmin = _mm256_min_pd(vmin, v);
    vmax = _mm256_max_pd(vmax, v);
  }
  double rmin[4], rmax[4];
  _mm256_storeu_pd(rmin, vmin);
  _mm256_storeu_pd(rmax, vmax);
  mn = inf;
  mx = -inf;
  for (int k = 0; k < 4; ++k) {
    if (rmin[k] < mn) mn = rmin[k];
    if (rmax[k] > mx) mx = rmax[k];
  }
  for (std::size_t i = main; i < n; ++i) {
    if (x[i] < mn) mn = x[i];
    if (x[i] > mx) mx = x[i];
  }
}

}  // namespace stresskit::kernels::avx2

#endif  // __x86_64__
