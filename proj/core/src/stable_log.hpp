#ifndef WEALTHMIX_STABLE_LOG_HPP
#define WEALTHMIX_STABLE_LOG_HPP

#include <cmath>

namespace wealthmix::detail {

// log(1 + e^t) without overflow for large t or loss for very negative t.
inline double log1pexp(double t) {
    if (t > 36.0) return t + std::exp(-t);
    if (t < -36.0) return std::exp(t);
    return std::log1p(std::exp(t));
}

// log(e^g - 1) for g > 0.
inline double logexpm1(double g) {
    if (g > 36.0) return g;
    return std::log(std::expm1(g));
}

// asinh(kappa * e^x) without forming e^x when it would overflow.
inline double asinh_kappa_exp(double kappa, double x) {
    if (x > 700.0) return std::log(2.0 * kappa) + x;
    return std::asinh(kappa * std::exp(x));
}

}  // namespace wealthmix::detail

#endif
