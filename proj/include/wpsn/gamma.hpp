#pragma once

namespace wpsn {

// Regularized lower incomplete gamma function P(a, x), a > 0, x >= 0.
// Series expansion for x < a + 1, Lentz continued fraction otherwise.
double gamma_p(double a, double x);

// Inverse of gamma_p in x: returns x such that P(a, x) = p, 0 <= p < 1.
// Found by bracketing bisection, so no dependence on special-function
// libraries beyond gamma_p itself.
double gamma_p_inv(double a, double p);

// Quantile q such that a chi-square variable with 2*half_dof degrees of
// freedom is below 2*q with probability p.  Equals gamma_p_inv(half_dof, p).
double chi_square_half_quantile(double half_dof, double p);

}  // namespace wpsn
