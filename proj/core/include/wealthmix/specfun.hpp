#ifndef WEALTHMIX_SPECFUN_HPP
#define WEALTHMIX_SPECFUN_HPP

namespace wealthmix {

// Kaniadakis deformed exponential, exp_k(x) = (sqrt(1+k^2 x^2) + k x)^(1/k)
// for k in (0,1), with the exact branch exp_0(x) = exp(x). Evaluated in log
// space as exp(asinh(k x)/k); asinh is the cancellation-free form of
// log(sqrt(1+t^2)+t) for negative arguments.
double exp_kappa(double x, double kappa);

// Functional inverse of exp_kappa: (y^k - y^-k)/(2k) = sinh(k log y)/k,
// with ln_0(y) = log(y).
double ln_kappa(double y, double kappa);

// Euler gamma and log-gamma for positive arguments.
double gamma_fn(double z);
double log_gamma(double z);

// Unregularized upper incomplete gamma, Gamma(a,x) = int_x^inf t^(a-1) e^-t dt.
double upper_incomplete_gamma(double a, double x);

// Regularized Q(a,x) = Gamma(a,x)/Gamma(a); exposed because the mixture CDF
// tail is better conditioned through Q than through the unregularized form.
double regularized_gamma_q(double a, double x);

// Complete Euler beta B(a,b).
double beta_fn(double a, double b);

// Unregularized lower incomplete beta, B(z;a,b) = int_0^z t^(a-1)(1-t)^(b-1) dt.
double incomplete_beta(double z, double a, double b);

// Regularized I_z(a,b) = B(z;a,b)/B(a,b).
double regularized_incomplete_beta(double z, double a, double b);

}  // namespace wealthmix

#endif
