#pragma once

namespace stresskit::stats {

// Regularized incomplete beta function I_x(a, b) for a, b > 0 and
// x in [0, 1], evaluated with the modified Lentz continued fraction to a
// relative tolerance well below 1e-10.
double regularized_incomplete_beta(double a, double b, double x);

// Two-sided tail probability of Student's t distribution with df > 0
// degrees of freedom: P(|T| >= |t|) = I_{df/(df+t^2)}(df/2, 1/2).
double student_t_two_sided_p(double t, double df);

}  // namespace stresskit::stats
