#pragma once

namespace sigkit {

// Inverse standard normal CDF. Rational approximation with absolute error
// well under 1e-9; exact 0.0 at q = 0.5. Throws DomainError outside (0,1).
double std_normal_quantile(double q);

double normal_cdf(double x);

// Upper tail P(Z >= x).
double normal_sf(double x);

// I_x(a, b), continued-fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);

// Upper tail P(T >= t) for Student's t with df degrees of freedom.
double student_t_sf(double t, double df);

}  // namespace sigkit
