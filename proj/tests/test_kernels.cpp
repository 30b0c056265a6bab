#include <cmath>
#include <vector>

#include "doctest.h"
#include "stresskit/kernels.hpp"
#include "stresskit/rng.hpp"

using namespace stresskit;

namespace {

std::vector<double> random_values(Rng& rng, std::size_t n, double scale) {
  std::vector<double> out(n);
  for (double& v : out) v = scale * (rng.next_double() * 2.0 - 1.0);
  return out;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("hand values") {
  const double ax[] = {3.0, 1.0};
  const double ay[] = {4.0, 2.0};
  const double az[] = {12.0, 2.0};
  double out[2];
  kernels::magnitude3(ax, ay, az, out, 2);
  CHECK(out[0] == doctest::Approx(13.0).epsilon(1e-15));
  CHECK(out[1] == doctest::Approx(3.0).epsilon(1e-15));

  std::vector<double> v(100);
  for (std::size_t i = 0; i < 100; ++i) v[i] = static_cast<double>(i + 1);
  CHECK(kernels::sum(v.data(), v.size()) == 5050.0);

  double mn = 0.0, mx = 0.0;
  kernels::minmax(v.data(), v.size(), mn, mx);
  CHECK(mn == 1.0);
  CHECK(mx == 100.0);

  const double a[] = {1.0, 2.0, 3.0};
  const double b[] = {4.0, -5.0, 6.0};
  CHECK(kernels::dot(a, b, 3) == 12.0);
  CHECK(kernels::squared_distance(a, b, 3) == 9.0 + 49.0 + 9.0);
  CHECK(kernels::sum_sq_dev(a, 3, 2.0) == 2.0);
}

TEST_CASE("empty and single-element inputs") {
  const double x[] = {7.5};
  CHECK(kernels::sum(x, 0) == 0.0);
  CHECK(kernels::sum(x, 1) == 7.5);
  CHECK(kernels::sum_sq_dev(x, 0, 3.0) == 0.0);
  CHECK(kernels::squared_distance(x, x, 1) == 0.0);
  double mn = 0.0, mx = 0.0;
  kernels::minmax(x, 1, mn, mx);
  CHECK(mn == 7.5);
  CHECK(mx == 7.5);
}

TEST_CASE("scalar reference matches a naive loop within rounding") {
  Rng rng(42);
  for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 31u, 64u, 1000u}) {
    const std::vector<double> a = random_values(rng, n, 100.0);
    const std::vector<double> b = random_values(rng, n, 100.0);
    double naive_sum = 0.0, naive_dot = 0.0, naive_dist = 0.0, naive_dev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      naive_sum += a[i];
      naive_dot += a[i] * b[i];
      naive_dist += (a[i] - b[i]) * (a[i] - b[i]);
      naive_dev += (a[i] - 1.5) * (a[i] - 1.5);
    }
    CHECK(kernels::scalar::sum(a.data(), n) == doctest::Approx(naive_sum).epsilon(1e-12));
    CHECK(kernels::scalar::dot(a.data(), b.data(), n) ==
          doctest::Approx(naive_dot).epsilon(1e-12));
    CHECK(kernels::scalar::squared_distance(a.data(), b.data(), n) ==
          doctest::Approx(naive_dist).epsilon(1e-12));
    CHECK(kernels::scalar::sum_sq_dev(a.data(), n, 1.5) ==
          doctest::Approx(naive_dev).epsilon(1e-12));
  }
}

#if defined(__x86_64__)
TEST_CASE("avx2 path is bit-identical to the scalar reference") {
  if (!kernels::avx2::supported()) {
    MESSAGE("avx2 not available on this machine; skipping");
    return;
  }
  Rng rng(7);
  // Lengths straddle every tail case around the 4-lane stripe width.
  for (std::size_t n = 0; n <= 67; ++n) {
    const std::vector<double> a = random_values(rng, n, 1e6);
    const std::vector<double> b = random_values(rng, n, 1e-3);
    const std::vector<double> c = random_values(rng, n, 9.81);

    CHECK(kernels::avx2::sum(a.data(), n) == kernels::scalar::sum(a.data(), n));
    CHECK(kernels::avx2::dot(a.data(), b.data(), n) ==
          kernels::scalar::dot(a.data(), b.data(), n));
    CHECK(kernels::avx2::squared_distance(a.data(), b.data(), n) ==
          kernels::scalar::squared_distance(a.data(), b.data(), n));
    CHECK(kernels::avx2::sum_sq_dev(a.data(), n, 0.25) ==
          kernels::scalar::sum_sq_dev(a.data(), n, 0.25));

    std::vector<double> out_scalar(n), out_avx2(n);
    kernels::scalar::magnitude3(a.data(), b.data(), c.data(), out_scalar.data(), n);
    kernels::avx2::magnitude3(a.data(), b.data(), c.data(), out_avx2.data(), n);
    CHECK(out_scalar == out_avx2);

    if (n > 0) {
      double mn_s = 0, mx_s = 0, mn_v = 0, mx_v = 0;
      kernels::scalar::minmax(a.data(), n, mn_s, mx_s);
      kernels::avx2::minmax(a.data(), n, mn_v, mx_v);
      CHECK(mn_s == mn_v);
      CHECK(mx_s == mx_v);
    }
  }
}
#endif

TEST_CASE("dispatch reports a valid backend") {
  const std::string name = kernels::backend_name();
  CHECK((name == "scalar" || name == "avx2"));
  const double x[] = {1.0, 2.0, 3.0, 4.0, 5.0};
  CHECK(kernels::sum(x, 5) == kernels::scalar::sum(x, 5));
}

}  // TEST_SUITE
