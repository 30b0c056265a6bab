#include "stresskit/linalg.hpp"

#include <cmath>

#include "stresskit/error.hpp"

namespace stresskit {

bool cholesky_in_place(std::vector<double>& a, std::size_t d) {
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = a[i * d + j];
      for (std::size_t k = 0; k < j; ++k) sum -= a[i * d + k] * a[j * d + k];
      if (i == j) {
        if (!(sum > 0.0)) return false;
        a[i * d + i] = std::sqrt(sum);
      } else {
        a[i * d + j] = sum / a[j * d + j];
      }
    }
  }
  return true;
}

std::vector<double> solve_spd(std::vector<double> a, std::vector<double> b) {
  const std::size_t d = b.size();
  if (a.size() != d * d) throw train_error("solve_spd: matrix/vector size mismatch");

  double scale = 0.0;
  for (std::size_t i = 0; i < d; ++i) scale = std::max(scale, std::abs(a[i * d + i]));
  if (scale <= 0.0) scale = 1.0;

  std::vector<double> factor = a;
  double ridge = 0.0;
  while (!cholesky_in_place(factor, d)) {
    ridge = ridge == 0.0 ? scale * 1e-12 : ridge * 10.0;
    if (ridge > scale) throw train_error("solve_spd: matrix is not positive definite");
    factor = a;
    for (std::size_t i = 0; i < d; ++i) factor[i * d + i] += ridge;
  }

  // Forward substitution L y = b, then back substitution L^T x = y.
  std::vector<double> x = b;
  for (std::size_t i = 0; i < d; ++i) {
    double sum = x[i];
    for (std::size_t k = 0; k < i; ++k) sum -= factor[i * d + k] * x[k];
    x[i] = sum / factor[i * d + i];
  }
  for (std::size_t ii = d; ii-- > 0;) {
    double sum = x[ii];
    for (std::size_t k = ii + 1; k < d; ++k) sum -= factor[k * d + ii] * x[k];
    x[ii] = sum / factor[ii * d + ii];
  }
  return x;
}

}  // namespace stresskit
