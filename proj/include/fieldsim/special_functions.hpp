#pragma once

namespace fieldsim {

/// log of the complete beta function B(a, b), a,b > 0.
double log_beta(double a, double b);

/// Regularized incomplete beta function I_x(a, b) for x in [0,1], a,b > 0.
/// Evaluated with the Lentz continued fraction, switching to the
/// complementary expansion when x > (a+1)/(a+b+2).
double regularized_incomplete_beta(double x, double a, double b);

/// Upper-tail probability P(T > t) of Student's t with df degrees of freedom.
/// Two-sided p-value is 2 * student_t_sf(|t|, df).
double student_t_sf(double t, int df);

/// Upper-tail probability P(X > f) of the F distribution with (d1, d2)
/// degrees of freedom.
double f_sf(double f, int d1, int d2);

}  // namespace fieldsim
