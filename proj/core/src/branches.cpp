#include "wealthmix/branches.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>

#include "wealthmix/error.hpp"
#include "wealthmix/random.hpp"
#include "wealthmix/specfun.hpp"
#include "stable_log.hpp"

namespace wealthmix {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}

void require_positive_w(double w) {
    require(w > 0.0 && std::isfinite(w), "positive branch evaluated at w <= 0");
}

void require_unit_open(double u) {
    require(u > 0.0 && u < 1.0, "probability argument must lie in (0,1)");
}

constexpr double kTinyKappa = 1e-5;

}  // namespace

WeibullNegParams::WeibullNegParams(double s, double lambda) : s(s), lambda(lambda) {
    require(s > 0.0 && std::isfinite(s), "WeibullNegParams: s must be positive");
    require(lambda > 0.0 && std::isfinite(lambda), "WeibullNegParams: lambda must be positive");
}

SMParams::SMParams(double a, double b, double q) : a(a), b(b), q(q) {
    require(a > 0.0 && std::isfinite(a), "SMParams: a must be positive");
    require(b > 0.0 && std::isfinite(b), "SMParams: b must be positive");
    require(q > 0.0 && std::isfinite(q), "SMParams: q must be positive");
}

DagumParams::DagumParams(double a, double b, double p) : a(a), b(b), p(p) {
    require(a > 0.0 && std::isfinite(a), "DagumParams: a must be positive");
    require(b > 0.0 && std::isfinite(b), "DagumParams: b must be positive");
    require(p > 0.0 && std::isfinite(p), "DagumParams: p must be positive");
}

KappaGenParams::KappaGenParams(double alpha, double beta, double kappa)
    : alpha(alpha), beta(beta), kappa(kappa) {
    require(alpha > 0.0 && std::isfinite(alpha), "KappaGenParams: alpha must be positive");
    require(beta > 0.0 && std::isfinite(beta), "KappaGenParams: beta must be positive");
    require(kappa >= 0.0 && kappa < 1.0, "KappaGenParams: kappa must lie in [0,1)");
}

// --- log densities -----------------------------------------------------------

namespace {

double sm_log_pdf(const SMParams& pp, double w) {
    const double t = std::log(w / pp.b);
    return std::log(pp.a * pp.q) + (pp.a - 1.0) * t - std::log(pp.b) -
           (1.0 + pp.q) * detail::log1pexp(pp.a * t);
}

double dagum_log_pdf(const DagumParams& pp, double w) {
    const double t = std::log(w / pp.b);
    return std::log(pp.a * pp.p) + (pp.a * pp.p - 1.0) * t - std::log(pp.b) -
           (pp.p + 1.0) * detail::log1pexp(pp.a * t);
}

double kgen_log_pdf(const KappaGenParams& pp, double w) {
    const double t = std::log(w / pp.beta);
    const double x = pp.alpha * t;  // log y, y = (w/beta)^alpha
    const double base = std::log(pp.alpha) - std::log(pp.beta) + (pp.alpha - 1.0) * t;
    if (pp.kappa == 0.0) {
        // Weibull: exp(x) may overflow; the density is then a true zero.
        return base - std::exp(x);
    }
    const double k = pp.kappa;
    if (x > 700.0 || std::log(k) + x > 18.4) {
        // y or (ky)^2 would overflow; beyond ky ~ 1e8 the asymptotes
        // asinh(ky) -> log(2k) + x and sqrt(1+k^2y^2) -> k y are exact
        // to machine precision.
        return base - (std::log(2.0 * k) + x) / k - (std::log(k) + x);
    }
    const double y = std::exp(x);
    return base - std::asinh(k * y) / k - 0.5 * std::log1p(k * k * y * y);
}

// --- survivor functions ------------------------------------------------------

double sm_survivor(const SMParams& pp, double w) {
    const double t = std::log(w / pp.b);
    return std::exp(-pp.q * detail::log1pexp(pp.a * t));
}

double dagum_survivor(const DagumParams& pp, double w) {
    const double t = std::log(w / pp.b);
    return -std::expm1(-pp.p * detail::log1pexp(-pp.a * t));
}

double kgen_survivor(const KappaGenParams& pp, double w) {
    const double t = std::log(w / pp.beta);
    const double x = pp.alpha * t;
    if (pp.kappa == 0.0) {
        if (x > 700.0) return 0.0;
        return std::exp(-std::exp(x));
    }
    return std::exp(-detail::asinh_kappa_exp(pp.kappa, x) / pp.kappa);
}

// --- quantiles ----------------------------------------------------------------

double sm_quantile(const SMParams& pp, double u) {
    const double g = -std::log1p(-u) / pp.q;  // (1-u)^{-1/q} = e^g
    return pp.b * std::exp(detail::logexpm1(g) / pp.a);
}

double dagum_quantile(const DagumParams& pp, double u) {
    const double g = -std::log(u) / pp.p;  // u^{-1/p} = e^g
    return pp.b * std::exp(-detail::logexpm1(g) / pp.a);
}

double kgen_quantile(const KappaGenParams& pp, double u) {
    const double big_l = -std::log1p(-u);  // log(1/(1-u))
    double log_lnk;
    if (pp.kappa == 0.0) {
        log_lnk = std::log(big_l);
    } else {
        const double kl = pp.kappa * big_l;
        if (kl > 30.0)
            log_lnk = kl - std::log(2.0 * pp.kappa);
        else
            log_lnk = std::log(std::sinh(kl) / pp.kappa);
    }
    return pp.beta * std::exp(log_lnk / pp.alpha);
}

}  // namespace

double branch_log_pdf(const PositiveBranch& branch, double w) {
    require_positive_w(w);
    return std::visit(
        [w](const auto& pp) -> double {
            using T = std::decay_t<decltype(pp)>;
            if constexpr (std::is_same_v<T, SMParams>) return sm_log_pdf(pp, w);
            else if constexpr (std::is_same_v<T, DagumParams>) return dagum_log_pdf(pp, w);
            else return kgen_log_pdf(pp, w);
        },
        branch);
}

double branch_pdf(const PositiveBranch& branch, double w) {
    return std::exp(branch_log_pdf(branch, w));
}

double branch_survivor(const PositiveBranch& branch, double w) {
    require_positive_w(w);
    return std::visit(
        [w](const auto& pp) -> double {
            using T = std::decay_t<decltype(pp)>;
            if constexpr (std::is_same_v<T, SMParams>) return sm_survivor(pp, w);
            else if constexpr (std::is_same_v<T, DagumParams>) return dagum_survivor(pp, w);
            else return kgen_survivor(pp, w);
        },
        branch);
}

double branch_cdf(const PositiveBranch& branch, double w) {
    return 1.0 - branch_survivor(branch, w);
}

double branch_quantile(const PositiveBranch& branch, double u) {
    require_unit_open(u);
    return std::visit(
        [u](const auto& pp) -> double {
            using T = std::decay_t<decltype(pp)>;
            if constexpr (std::is_same_v<T, SMParams>) return sm_quantile(pp, u);
            else if constexpr (std::is_same_v<T, DagumParams>) return dagum_quantile(pp, u);
            else return kgen_quantile(pp, u);
        },
        branch);
}

double branch_tail_index(const PositiveBranch& branch) {
    return std::visit(
        [](const auto& pp) -> double {
            using T = std::decay_t<decltype(pp)>;
            if constexpr (std::is_same_v<T, SMParams>) return pp.a * pp.q;
            else if constexpr (std::is_same_v<T, DagumParams>) return pp.a * pp.p;
            else {
                if (pp.kappa == 0.0) throw no_power_tail();
                return pp.alpha / pp.kappa;
            }
        },
        branch);
}

double branch_moment(const PositiveBranch& branch, int r) {
    require(r >= 1, "branch_moment: order must be a positive integer");
    return std::visit(
        [r](const auto& pp) -> double {
            using T = std::decay_t<decltype(pp)>;
            const double rr = static_cast<double>(r);
            if constexpr (std::is_same_v<T, SMParams>) {
                if (rr >= pp.a * pp.q)
                    throw moment_divergence(r, pp.a * pp.q, "Singh-Maddala");
                return std::exp(rr * std::log(pp.b) + log_gamma(1.0 + rr / pp.a) +
                                log_gamma(pp.q - rr / pp.a) - log_gamma(pp.q));
            } else if constexpr (std::is_same_v<T, DagumParams>) {
                if (rr >= pp.a) throw moment_divergence(r, pp.a * pp.p, "Dagum");
                return std::exp(rr * std::log(pp.b) + log_gamma(pp.p + rr / pp.a) +
                                log_gamma(1.0 - rr / pp.a) - log_gamma(pp.p));
            } else {
                const double al = pp.alpha, be = pp.beta, k = pp.kappa;
                if (k == 0.0) return std::exp(rr * std::log(be) + log_gamma(1.0 + rr / al));
                if (rr >= al / k) throw moment_divergence(r, al / k, "kappa-generalized");
                if (k < kTinyKappa) {
                    // Asymptotic form, exact to O(kappa^2): the log-gamma
                    // difference collapses to r*kappa/alpha.
                    return std::exp(rr * std::log(be) + log_gamma(1.0 + rr / al) +
                                    rr * k / al - std::log1p(rr * k / al));
                }
                return std::exp(rr * std::log(be) - (rr / al) * std::log(2.0 * k) +
                                log_gamma(1.0 + rr / al) - std::log1p(rr * k / al) +
                                log_gamma(1.0 / (2.0 * k) - rr / (2.0 * al)) -
                                log_gamma(1.0 / (2.0 * k) + rr / (2.0 * al)));
            }
        },
        branch);
}

// --- negative branch ----------------------------------------------------------

namespace {

void require_negative_w(double w) {
    require(w < 0.0 && std::isfinite(w), "negative branch evaluated at w >= 0");
}

}  // namespace

double weibull_neg_log_pdf(const WeibullNegParams& pp, double w) {
    require_negative_w(w);
    const double t = std::log(-w / pp.lambda);
    return std::log(pp.s) - std::log(pp.lambda) + (pp.s - 1.0) * t - std::exp(pp.s * t);
}

double weibull_neg_pdf(const WeibullNegParams& pp, double w) {
    return std::exp(weibull_neg_log_pdf(pp, w));
}

double weibull_neg_cdf_branch(const WeibullNegParams& pp, double w) {
    require_negative_w(w);
    const double ts = pp.s * std::log(-w / pp.lambda);
    if (ts > 700.0) return 0.0;
    return std::exp(-std::exp(ts));
}

double weibull_neg_quantile(const WeibullNegParams& pp, double u) {
    require_unit_open(u);
    return -pp.lambda * std::pow(-std::log(u), 1.0 / pp.s);
}

double weibull_neg_moment(const WeibullNegParams& pp, int r) {
    require(r >= 1, "weibull_neg_moment: order must be a positive integer");
    const double rr = static_cast<double>(r);
    const double mag = std::exp(rr * std::log(pp.lambda) + log_gamma(1.0 + rr / pp.s));
    return (r % 2 == 0) ? mag : -mag;
}

// --- sampling -------------------------------------------------------------------

std::vector<double> branch_sample(const PositiveBranch& branch, std::size_t n,
                                  std::uint64_t seed) {
    require(n >= 1, "branch_sample: n must be at least 1");
    Rng rng(seed);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = branch_quantile(branch, rng.next_uniform());
    return out;
}

std::vector<double> branch_sample(const WeibullNegParams& params, std::size_t n,
                                  std::uint64_t seed) {
    require(n >= 1, "branch_sample: n must be at least 1");
    Rng rng(seed);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = weibull_neg_quantile(params, rng.next_uniform());
    return out;
}

}  // namespace wealthmix
