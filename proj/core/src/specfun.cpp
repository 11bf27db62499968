#include "wealthmix/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "wealthmix/error.hpp"

namespace wealthmix {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}

// Series for the regularized lower incomplete gamma P(a,x), valid for x < a+1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-15)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw convergence_failure("incomplete gamma series did not converge", {a, x}, 0.0, 500);
}

// Modified Lentz continued fraction for the regularized upper incomplete
// gamma Q(a,x), valid for x >= a+1.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15)
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw convergence_failure("incomplete gamma continued fraction did not converge", {a, x}, 0.0,
                              500);
}

// Continued fraction for the regularized incomplete beta (Lentz).
double beta_cf(double a, double b, double z) {
    const double tiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * z / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 800; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * z / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * z / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) return h;
    }
    throw convergence_failure("incomplete beta continued fraction did not converge", {a, b, z},
                              0.0, 800);
}

}  // namespace

double exp_kappa(double x, double kappa) {
    require(std::isfinite(x), "exp_kappa: x must be finite");
    require(kappa >= 0.0 && kappa < 1.0, "exp_kappa: kappa must lie in [0,1)");
    if (kappa == 0.0) return std::exp(x);
    return std::exp(std::asinh(kappa * x) / kappa);
}

double ln_kappa(double y, double kappa) {
    require(y > 0.0 && std::isfinite(y), "ln_kappa: y must be positive and finite");
    require(kappa >= 0.0 && kappa < 1.0, "ln_kappa: kappa must lie in [0,1)");
    const double logy = std::log(y);
    if (kappa == 0.0) return logy;
    return std::sinh(kappa * logy) / kappa;
}

double gamma_fn(double z) {
    require(z > 0.0, "gamma_fn: argument must be positive");
    return std::tgamma(z);
}

double log_gamma(double z) {
    require(z > 0.0, "log_gamma: argument must be positive");
    return std::lgamma(z);
}

double regularized_gamma_q(double a, double x) {
    require(a > 0.0, "upper_incomplete_gamma: a must be positive");
    require(x >= 0.0, "upper_incomplete_gamma: x must be nonnegative");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double upper_incomplete_gamma(double a, double x) {
    return regularized_gamma_q(a, x) * gamma_fn(a);
}

double beta_fn(double a, double b) {
    require(a > 0.0 && b > 0.0, "beta_fn: parameters must be positive");
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

double regularized_incomplete_beta(double z, double a, double b) {
    require(a > 0.0 && b > 0.0, "incomplete_beta: parameters must be positive");
    require(z >= 0.0 && z <= 1.0, "incomplete_beta: z must lie in [0,1]");
    if (z == 0.0) return 0.0;
    if (z == 1.0) return 1.0;
    const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                                  a * std::log(z) + b * std::log1p(-z));
    if (z < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, z) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - z) / b;
}

double incomplete_beta(double z, double a, double b) {
    return regularized_incomplete_beta(z, a, b) * beta_fn(a, b);
}

}  // namespace wealthmix
