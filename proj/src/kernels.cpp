#include "stresskit/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace stresskit::kernels {

namespace {

Backend select_backend() {
  const char* forced = std::getenv("STRESSKIT_KERNELS");
  if (forced != nullptr) {
    if (std::strcmp(forced, "scalar") == 0) return Backend::scalar;
#if defined(__x86_64__)
    if (std::strcmp(forced, "avx2") == 0 && avx2::supported()) {
      return Backend::avx2;
    }
#endif
    return Backend::scalar;
  }
#if defined(__x86_64__)
  if (avx2::supported()) return Backend::avx2;
#endif
  return Backend::scalar;
}

}  // namespace

Backend active_backend() {
  static const Backend backend = select_backend();
  return backend;
}

std::string backend_name() {
  return active_backend() == Backend::avx2 ? "avx2" : "scalar";
}

void magnitude3(const double* ax, const double* ay, const double* az,
                double* out, std::size_t n) {
#if defined(__x86_64__)
  if (active_backend() == Backend::avx2) {
    avx2::magnitude3(ax, ay, az, out, n);
    return;
  }
#endif
  scalar::magnitude3(ax, ay, az, out, n);
}

double sum(const double* x, std::size_t n) {
#if defined(__x86_64__)
  if (active_backend() == Backend::avx2) return avx2::sum(x, n);
#endif
  return scalar::sum(x, n);
}

double sum_sq_dev(const double* x, std::size_t n, double center) {
#if defined(__x86_64__)
  if (active_backend() == Backend::avx2) return avx2::sum_sq_dev(x, n, center);
#endif
  return scalar::sum_sq_dev(x, n, center);
}

double dot(const double* a, const double* b, std::size_t n) {
#if defined(__x86_64__)
  if (active_backend() == Backend::avx2) return avx2::dot(a, b, n);
#endif
  return scalar::dot(a, b, n);
}

double squared_distance(const double* a, const double* b, std::size_t n) {
#if defined(__x86_64__)
  if (active_backend() == Backend::avx2) {
    return avx2::squared_distance(a, b, n);
  }
#endif
  return scalar::squared_distance(a, b, n);
}

void minmax(const double* x, std::size_t n, double& mn, double& mx) {
#if defined(__x86_64__)
  if (active_backend() == Backend::avx2) {
    avx2::minmax(x, n, mn, mx);
    return;
  }
#endif
  scalar::minmax(x, n, mn, mx);
}

}  // namespace stresskit::kernels
