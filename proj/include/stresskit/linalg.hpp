#pragma once

#include <cstddef>
#include <vector>

namespace stresskit {

// In-place lower-triangular Cholesky factorization of a d-by-d symmetric
// matrix stored row-major. Returns false on a non-positive pivot.
bool cholesky_in_place(std::vector<double>& a, std::size_t d);

// Solves A x = b for small symmetric positive definite systems (the normal
// equations of IRLS and the pooled-covariance solve are at most 11-by-11
// here). If the factorization fails, a geometrically growing ridge is added
// to the diagonal until it succeeds; systems that stay unfactorable even
// then raise train_error.
std::vector<double> solve_spd(std::vector<double> a, std::vector<double> b);

}  // namespace stresskit
