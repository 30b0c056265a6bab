#include "stresskit/kernels.hpp"

#include <cmath>
#include <limits>

namespace stresskit::kernels::scalar {

void magnitude3(const double* ax, const double* ay, const double* az,
                double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::sqrt(ax[i] * ax[i] + ay[i] * ay[i] + az[i] * az[i]);
  }
}

namespace {

// Striped reduction skeleton; see the accumulation contract in kernels.hpp.
template <typename Term>
double striped_reduce(std::size_t n, Term term) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  const std::size_t main = n - (n % 4);
  for (std::size_t i = 0; i < main; i += 4) {
    s0 += term(i);
    s1 += term(i + 1);
    s2 += term(i + 2);
    s3 += term(i + 3);
  }
  double acc = (s0 + s1) + (s2 + s3);
  for (std::size_t i = main; i < n; ++i) acc += term(i);
  return acc;
}

}  // namespace

double sum(const double* x, std::size_t n) {
  return striped_reduce(n, [&](std::size_t i) { return x[i]; });
}

double sum_sq_dev(const double* x, std::size_t n, double center) {
  return striped_reduce(n, [&](std::size_t i) {
    const double d = x[i] - center;
    return d * d;
  });
}

double dot(const double* a, const double* b, std::size_t n) {
  return striped_reduce(n, [&](std::size_t i) { return a[i] * b[i]; });
}

double squared_distance(const double* a, const double* b, std::size_t n) {
  return striped_reduce(n, [&](std::size_t i) {
    const double d = a[i] - b[i];
    return d * d;
  });
}

void minmax(const double* x, std::size_t n, double& mn, double& mx) {
  mn = std::numeric_limits<double>::infinity();
  mx = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] < mn) mn = x[i];
    if (x[i] > mx) mx = x[i];
  }
}

}  // namespace stresskit::kernels::scalar
