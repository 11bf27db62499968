#include "wealthmix/estimation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wealthmix/error.hpp"
#include "wealthmix/specfun.hpp"
#include "stable_log.hpp"

namespace wealthmix {

namespace {

// Kahan-compensated accumulator; keeps the factorization identity between the
// mixture loglik and its component sums at the 1e-9 level even for large N.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double term) {
        const double y = term - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

}  // namespace

std::pair<double, double> estimate_proportions(const WeightedSample& sample) {
    return {sample.weight_share_negative(), sample.weight_share_zero()};
}

double weighted_loglik(const MixtureParams& m, const WeightedSample& sample,
                       bool normalize_weights) {
    const auto& values = sample.values();
    const auto& weights = sample.weights();
    if (sample.count_negative() > 0 && m.theta1 <= 0.0)
        throw impossible_likelihood("negative observations present but theta1 = 0");
    if (sample.count_zero() > 0 && m.theta2 <= 0.0)
        throw impossible_likelihood("zero observations present but theta2 = 0");
    if (sample.count_positive() > 0 && m.theta3() <= 0.0)
        throw impossible_likelihood("positive observations present but theta3 = 0");
    const double scale =
        normalize_weights ? static_cast<double>(sample.size()) / sample.total_weight() : 1.0;
    KahanSum ll;
    const std::size_t z0 = sample.begin_zero();
    const std::size_t p0 = sample.begin_positive();
    if (z0 > 0) {
        const double lt1 = std::log(m.theta1);
        for (std::size_t i = 0; i < z0; ++i) {
            ll.add(weights[i] * lt1);
            ll.add(weights[i] * weibull_neg_log_pdf(m.weibull, values[i]));
        }
    }
    if (p0 > z0) {
        const double lt2 = std::log(m.theta2);
        for (std::size_t i = z0; i < p0; ++i) ll.add(weights[i] * lt2);
    }
    if (sample.size() > p0) {
        const double lt3 = std::log(m.theta3());
        for (std::size_t i = p0; i < sample.size(); ++i) {
            ll.add(weights[i] * lt3);
            ll.add(weights[i] * branch_log_pdf(m.positive, values[i]));
        }
    }
    return scale * ll.sum;
}

namespace {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

double logistic(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

// --- tiny dense linear algebra (d <= 3) ----------------------------------------

bool cholesky(int d, const Mat3& a, Mat3& l) {
    l = {};
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j <= i; ++j) {
            double sum = a[i][j];
            for (int k = 0; k < j; ++k) sum -= l[i][k] * l[j][k];
            if (i == j) {
                if (!(sum > 0.0)) return false;
                l[i][i] = std::sqrt(sum);
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    return true;
}

Vec3 chol_solve(int d, const Mat3& l, const Vec3& b) {
    Vec3 y{};
    for (int i = 0; i < d; ++i) {
        double sum = b[i];
        for (int k = 0; k < i; ++k) sum -= l[i][k] * y[k];
        y[i] = sum / l[i][i];
    }
    Vec3 x{};
    for (int i = d - 1; i >= 0; --i) {
        double sum = y[i];
        for (int k = i + 1; k < d; ++k) sum -= l[k][i] * x[k];
        x[i] = sum / l[i][i];
    }
    return x;
}

bool invert_spd(int d, const Mat3& a, Mat3& inv) {
    Mat3 l;
    if (!cholesky(d, a, l)) return false;
    inv = {};
    for (int j = 0; j < d; ++j) {
        Vec3 e{};
        e[j] = 1.0;
        const Vec3 col = chol_solve(d, l, e);
        for (int i = 0; i < d; ++i) inv[i][j] = col[i];
    }
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            const double sym = 0.5 * (inv[i][j] + inv[j][i]);
            inv[i][j] = inv[j][i] = sym;
        }
    return true;
}

double inf_norm(int d, const Vec3& v) {
    double m = 0.0;
    for (int i = 0; i < d; ++i) m = std::fmax(m, std::fabs(v[i]));
    return m;
}

// --- transformed-scale Newton maximizer with BFGS fallback ----------------------

using ValueFn = std::function<double(const Vec3&)>;
using GradFn = std::function<Vec3(const Vec3&)>;

Mat3 fd_hessian(int d, const GradFn& gradient, const Vec3& x) {
    Mat3 h{};
    for (int j = 0; j < d; ++j) {
        const double step = 1e-4 * std::fmax(1.0, std::fabs(x[j]));
        Vec3 xp = x, xm = x;
        xp[j] += step;
        xm[j] -= step;
        const Vec3 gp = gradient(xp);
        const Vec3 gm = gradient(xm);
        for (int i = 0; i < d; ++i) h[i][j] = (gp[i] - gm[i]) / (2.0 * step);
    }
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            const double sym = 0.5 * (h[i][j] + h[j][i]);
            h[i][j] = h[j][i] = sym;
        }
    return h;
}

// Solves (-H + mu I) p = g, escalating mu until the shifted matrix admits a
// Cholesky factor. Reports whether any shift was needed.
bool regularized_newton_step(int d, const Mat3& hessian, const Vec3& g, Vec3& p,
                             bool& regularized) {
    Mat3 a{};
    double max_diag = 0.0;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) a[i][j] = -hessian[i][j];
        max_diag = std::fmax(max_diag, std::fabs(a[i][i]));
    }
    Mat3 l;
    if (cholesky(d, a, l)) {
        p = chol_solve(d, l, g);
        regularized = false;
        return true;
    }
    regularized = true;
    double mu = 1e-8 * std::fmax(1.0, max_diag);
    const double mu_cap = 1e12 * std::fmax(1.0, max_diag);
    while (mu <= mu_cap) {
        Mat3 shifted = a;
        for (int i = 0; i < d; ++i) shifted[i][i] += mu;
        if (cholesky(d, shifted, l)) {
            p = chol_solve(d, l, g);
            return true;
        }
        mu *= 10.0;
    }
    return false;
}

struct MaximizeResult {
    Vec3 x;
    Mat3 hessian;
    int iterations = 0;
    bool saddle = false;
    double gradient_norm = 0.0;
};

std::vector<double> to_vector(int d, const Vec3& x) {
    return std::vector<double>(x.begin(), x.begin() + d);
}

// grad_scale is the subsample's total weight: the objective is a weighted sum,
// so the gradient tolerance is applied per unit of weight, making the stopping
// rule invariant in sample size.
MaximizeResult maximize(int d, Vec3 x, const ValueFn& value, const GradFn& gradient,
                        const FitConfig& cfg, double grad_scale, const std::string& label) {
    const double gtol = cfg.gradient_tolerance * std::fmax(1.0, grad_scale);
    bool bfgs_mode = false;
    bool restarted = false;
    int consecutive_regularized = 0;
    Mat3 binv{};
    Vec3 g = gradient(x);
    double gnorm = inf_norm(d, g);
    int iter = 0;
    auto reset_bfgs = [&] {
        binv = {};
        const double scale = 1.0 / std::fmax(1.0, gnorm);
        for (int i = 0; i < d; ++i) binv[i][i] = scale;
    };
    while (gnorm > gtol) {
        if (++iter > cfg.max_iterations)
            throw convergence_failure(label + ": no convergence in " +
                                          std::to_string(cfg.max_iterations) +
                                          " iterations (transformed-scale iterate retained)",
                                      to_vector(d, x), gnorm, cfg.max_iterations);
        Vec3 p{};
        if (!bfgs_mode) {
            const Mat3 h = fd_hessian(d, gradient, x);
            bool regularized = false;
            if (!regularized_newton_step(d, h, g, p, regularized) ||
                (regularized && ++consecutive_regularized >= 3)) {
                bfgs_mode = true;
                reset_bfgs();
            } else if (!regularized) {
                consecutive_regularized = 0;
            }
        }
        if (bfgs_mode) {
            for (int i = 0; i < d; ++i) {
                p[i] = 0.0;
                for (int j = 0; j < d; ++j) p[i] += binv[i][j] * g[j];
            }
        }
        double slope = 0.0;
        for (int i = 0; i < d; ++i) slope += g[i] * p[i];
        if (!(slope > 0.0)) {
            // Not an ascent direction; fall back to scaled steepest ascent.
            for (int i = 0; i < d; ++i) p[i] = g[i] / std::fmax(1.0, gnorm);
            slope = 0.0;
            for (int i = 0; i < d; ++i) slope += g[i] * p[i];
        }
        const double f0 = value(x);
        const double pnorm = inf_norm(d, p);
        double t = 1.0;
        Vec3 xt{};
        bool accepted = false;
        while (t * pnorm >= cfg.step_tolerance) {
            for (int i = 0; i < d; ++i) xt[i] = x[i] + t * p[i];
            const double ft = value(xt);
            if (std::isfinite(ft) && ft >= f0 + 1e-4 * t * slope) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            if (!bfgs_mode) {
                bfgs_mode = true;
                reset_bfgs();
                restarted = false;
                continue;
            }
            if (!restarted) {
                reset_bfgs();
                restarted = true;
                continue;
            }
            throw convergence_failure(
                label + ": line search stalled (transformed-scale iterate retained)",
                to_vector(d, x), gnorm, iter);
        }
        restarted = false;
        const Vec3 g_new = gradient(xt);
        if (bfgs_mode) {
            Vec3 s{}, y{};
            double sy = 0.0, ss = 0.0, yy = 0.0;
            for (int i = 0; i < d; ++i) {
                s[i] = xt[i] - x[i];
                y[i] = g[i] - g_new[i];
                sy += s[i] * y[i];
                ss += s[i] * s[i];
                yy += y[i] * y[i];
            }
            if (sy > 1e-12 * std::sqrt(ss * yy)) {
                const double rho = 1.0 / sy;
                Vec3 by{};
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j) by[i] += binv[i][j] * y[j];
                double yby = 0.0;
                for (int i = 0; i < d; ++i) yby += y[i] * by[i];
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j)
                        binv[i][j] += rho * ((1.0 + rho * yby) * s[i] * s[j] - by[i] * s[j] -
                                             s[i] * by[j]);
            }
        }
        x = xt;
        g = g_new;
        gnorm = inf_norm(d, g);
    }
    MaximizeResult result;
    result.x = x;
    result.hessian = fd_hessian(d, gradient, x);
    result.iterations = iter;
    result.gradient_norm = gnorm;
    Mat3 l;
    Mat3 neg{};
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) neg[i][j] = -result.hessian[i][j];
    result.saddle = !cholesky(d, neg, l);
    return result;
}

// Covariance on the transformed scale from the exit Hessian; a saddle exit is
// patched with the smallest shift restoring positive definiteness so the
// delta method still yields finite (if suspect) standard errors.
Mat3 covariance_from_hessian(int d, const Mat3& hessian, bool saddle) {
    Mat3 neg{};
    double max_diag = 0.0;
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) neg[i][j] = -hessian[i][j];
        max_diag = std::fmax(max_diag, std::fabs(neg[i][i]));
    }
    Mat3 cov;
    if (!saddle && invert_spd(d, neg, cov)) return cov;
    double mu = 1e-10 * std::fmax(1.0, max_diag);
    while (true) {
        Mat3 shifted = neg;
        for (int i = 0; i < d; ++i) shifted[i][i] += mu;
        if (invert_spd(d, shifted, cov)) return cov;
        mu *= 10.0;
    }
}

Matrix delta_method(int d, const Mat3& cov_transformed, const Vec3& jacobian) {
    Matrix cov(d, std::vector<double>(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            cov[i][j] = jacobian[i] * jacobian[j] * cov_transformed[i][j];
    return cov;
}

// --- subsample views, weighted quantiles, tail slope ----------------------------

struct Subsample {
    std::vector<double> log_values;  // ascending log magnitudes
    std::vector<double> weights;     // rescaled by the full sample's N/W
    double weight_total = 0.0;
};

// Normalization uses the full sample's totals so that component logliks add up
// to the mixture loglik and weight invariance holds componentwise.
Subsample negative_magnitudes(const WeightedSample& sample, bool normalize) {
    const double scale =
        normalize ? static_cast<double>(sample.size()) / sample.total_weight() : 1.0;
    Subsample sub;
    const std::size_t z0 = sample.begin_zero();
    sub.log_values.resize(z0);
    sub.weights.resize(z0);
    for (std::size_t i = 0; i < z0; ++i) {
        // Negatives sort ascending in value, hence descending in magnitude.
        const std::size_t j = z0 - 1 - i;
        sub.log_values[i] = std::log(-sample.values()[j]);
        sub.weights[i] = scale * sample.weights()[j];
        sub.weight_total += sub.weights[i];
    }
    return sub;
}

Subsample positive_values(const WeightedSample& sample, bool normalize) {
    const double scale =
        normalize ? static_cast<double>(sample.size()) / sample.total_weight() : 1.0;
    Subsample sub;
    const std::size_t p0 = sample.begin_positive();
    const std::size_t n = sample.size();
    sub.log_values.resize(n - p0);
    sub.weights.resize(n - p0);
    for (std::size_t i = p0; i < n; ++i) {
        sub.log_values[i - p0] = std::log(sample.values()[i]);
        sub.weights[i - p0] = scale * sample.weights()[i];
        sub.weight_total += sub.weights[i - p0];
    }
    return sub;
}

// Lower-interpolation weighted quantile of the log values.
double weighted_log_quantile(const Subsample& sub, double u) {
    const double target = u * sub.weight_total;
    double cum = 0.0;
    for (std::size_t i = 0; i < sub.log_values.size(); ++i) {
        cum += sub.weights[i];
        if (cum >= target) return sub.log_values[i];
    }
    return sub.log_values.back();
}

// Least-squares slope of log survivor share against log value over the top
// decile by weight (at least 8 points); the negated slope estimates the
// Pareto tail index.
double tail_index_estimate(const Subsample& sub) {
    const std::size_t n = sub.log_values.size();
    std::vector<double> xs, ys;
    double above = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        const double mid = (above + 0.5 * sub.weights[i]) / sub.weight_total;
        above += sub.weights[i];
        xs.push_back(sub.log_values[i]);
        ys.push_back(std::log(mid));
        if (above > 0.10 * sub.weight_total && xs.size() >= 8) break;
    }
    if (xs.size() < 3) return 1.5;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) return 1.5;
    return std::clamp(-sxy / sxx, 0.3, 6.0);
}

// --- component objectives (transformed coordinates) -----------------------------

// Weibull magnitudes; coordinates (log s, log lambda).
double weibull_value(const Subsample& sub, const Vec3& x) {
    const double s = std::exp(x[0]);
    KahanSum ll;
    for (std::size_t i = 0; i < sub.log_values.size(); ++i) {
        const double z = sub.log_values[i] - x[1];
        ll.add(sub.weights[i] * (x[0] - x[1] + (s - 1.0) * z - std::exp(s * z)));
    }
    return ll.sum;
}

Vec3 weibull_gradient(const Subsample& sub, const Vec3& x) {
    const double s = std::exp(x[0]);
    double gs = 0.0, gl = 0.0;
    for (std::size_t i = 0; i < sub.log_values.size(); ++i) {
        const double z = sub.log_values[i] - x[1];
        const double e = std::exp(s * z);
        gs += sub.weights[i] * (1.0 + s * z * (1.0 - e));
        gl += sub.weights[i] * s * (e - 1.0);
    }
    return {gs, gl, 0.0};
}

// Singh-Maddala; coordinates (log a, log b, log q).
double sm_value(const Subsample& sub, const Vec3& x) {
    const double a = std::exp(x[0]);
    const double q = std::exp(x[2]);
    KahanSum ll;
    for (std::size_t i = 0; i < sub.log_values.size(); ++i) {
        const double t = sub.log_values[i] - x[1];
        ll.add(sub.weights[i] *
               (x[0] + x[2] + a * t - sub.log_values[i] - (1.0 + q) * detail::log1pexp(a * t)));
    }
    return ll.sum;
}

Vec3 sm_gradient(const Subsample& sub, const Vec3& x) {
    const double a = std::exp(x[0]);
    const double q = std::exp(x[2]);
    double ga = 0.0, gb = 0.0, gq = 0.0;
    for (std::size_t i = 0; i < sub.log_values.size(); ++i) {
        const double t = sub.log_values[i] - x[1];
        const double sig = logistic(a * t);
        ga += sub.weights[i] * (1.0 + a * t * (1.0 - (1.0 + q) * sig));
        gb += sub.weights[i] * a * ((1.0 + q) * sig - 1.0);
        gq += sub.weights[i] * (1.0 - q * detail::log1pexp(a * t));
    }
    return {ga, gb, gq};
}

// Dagum; coordinates (log a, log b, log p).
double dagum_value(const Subsample& sub, const Vec3& x) {
    const double a = std::exp(x[0]);
    const double p = std::exp(x[2]);
    KahanSum ll;
    for (std::size_t i = 0; i < sub.log_values.size(); ++i) {
        const double t = sub.log_values[i] - x[1];
        ll.add(sub.weights[i] * (x[0] + x[2] + a * p * t - sub.log_values[i] -
                                 (p + 1.0) * detail::log1pexp(a * t)));
    }
    return ll.sum;
}

Vec3 dagum_gradient(const Subsample& sub, const Vec3& x) {
    const double a = std::exp(x[0]);
    const double p = std::exp(x[2]);
    double ga = 0.0, gb = 0.0, gp = 0.0;
    for (std::size_t i = 0; i < sub.log_values.size(); ++i) {
        const double t = sub.log_values[i] - x[1];
        const double sig = logistic(a * t);
        ga += sub.weights[i] * (1.0 + a * t * (p - (p + 1.0) * sig));
        gb += sub.weights[i] * a * ((p + 1.0) * sig - p);
        gp += sub.weights[i] * (1.0 + p * (a * t - detail::log1pexp(a * t)));
    }
    return {ga, gb, gp};
}

// kappa-generalized; coordinates (log alpha, log beta, logit kappa). Beyond
// kappa*y ~ 1e8 the exact expressions are replaced by their Pareto-tail
// asymptotes, which are identical to machine precision there and avoid
// overflow of y and (kappa*y)^2.
double kappa_from_logit(double x) {
    return std::clamp(logistic(x), 1e-300, 1.0 - 1e-12);
}

double kgen_value(const Subsample& sub, const Vec3& x) {
    const double alpha = std::exp(x[0]);
    const double k = kappa_from_logit(x[2]);
    const double log_k = std::log(k);
    const double log_2k = log_k + std::log(2.0);
    const double u_asym = std::fmin(700.0, 18.4 - log_k);
    KahanSum ll;
    for (std::size_t i = 0; i < sub.log_values.size(); ++i) {
        const double t = sub.log_values[i] - x[1];
        const double u = alpha * t;
        const double base = x[0] - x[1] + (alpha - 1.0) * t;
        if (u > u_asym) {
            ll.add(sub.weights[i] * (base - (log_2k + u) / k - (log_k + u)));
        } else {
            const double ky = k * std::exp(u);
            ll.add(sub.weights[i] * (base - std::asinh(ky) / k - 0.5 * std::log1p(ky * ky)));
        }
    }
    return ll.sum;
}

Vec3 kgen_gradient(const Subsample& sub, const Vec3& x) {
    const double alpha = std::exp(x[0]);
    const double k = kappa_from_logit(x[2]);
    const double dk_dx = k * (1.0 - k);
    const double log_k = std::log(k);
    const double log_2k = log_k + std::log(2.0);
    const double u_asym = std::fmin(700.0, 18.4 - log_k);
    double ga = 0.0, gb = 0.0, gk = 0.0;
    for (std::size_t i = 0; i < sub.log_values.size(); ++i) {
        const double t = sub.log_values[i] - x[1];
        const double u = alpha * t;
        if (u > u_asym) {
            ga += sub.weights[i] * (1.0 - alpha * t / k);
            gb += sub.weights[i] * (alpha / k);
            gk += sub.weights[i] * dk_dx * ((log_2k + u - 1.0) / (k * k) - 1.0 / k);
            continue;
        }
        const double y = std::exp(u);
        const double ky = k * y;
        const double r2 = 1.0 + ky * ky;
        const double r = std::sqrt(r2);
        const double c = 1.0 - y / r - ky * ky / r2;
        ga += sub.weights[i] * (1.0 + alpha * t * c);
        gb += sub.weights[i] * (-alpha * c);
        const double dkk = (ky < 1e-4) ? k * y * y * (y / 3.0 - 1.0)
                                       : std::asinh(ky) / (k * k) - y / (k * r) - k * y * y / r2;
        gk += sub.weights[i] * dk_dx * dkk;
    }
    return {ga, gb, gk};
}

// --- initialization --------------------------------------------------------------

Vec3 weibull_init(const Subsample& sub, const FitConfig& cfg) {
    if (cfg.init_strategy == InitStrategy::UserSupplied) {
        if (!cfg.weibull_init)
            throw std::domain_error("user-supplied init selected but weibull_init is empty");
        return {std::log(cfg.weibull_init->s), std::log(cfg.weibull_init->lambda), 0.0};
    }
    const double log_median = weighted_log_quantile(sub, 0.5);
    if (cfg.init_strategy == InitStrategy::FixedDefault) return {0.0, log_median, 0.0};
    const double lo = weighted_log_quantile(sub, 0.25);
    const double hi = weighted_log_quantile(sub, 0.75);
    double s0 = 1.0;
    if (hi > lo) {
        // Weibull magnitudes satisfy log(-log(1-u)) = s (log v_u - log lambda).
        const double spread = std::log(-std::log(0.25)) - std::log(-std::log(0.75));
        s0 = std::clamp(spread / (hi - lo), 0.1, 20.0);
    }
    const double log_lambda0 = log_median - std::log(std::log(2.0)) / s0;
    return {std::log(s0), log_lambda0, 0.0};
}

Vec3 positive_init(const Subsample& sub, Family family, const FitConfig& cfg) {
    if (cfg.init_strategy == InitStrategy::UserSupplied) {
        if (!cfg.positive_init)
            throw std::domain_error("user-supplied init selected but positive_init is empty");
        if (family_of(*cfg.positive_init) != family)
            throw std::domain_error("positive_init family does not match requested family");
        return std::visit(
            [](const auto& pp) -> Vec3 {
                using T = std::decay_t<decltype(pp)>;
                if constexpr (std::is_same_v<T, SMParams>)
                    return {std::log(pp.a), std::log(pp.b), std::log(pp.q)};
                else if constexpr (std::is_same_v<T, DagumParams>)
                    return {std::log(pp.a), std::log(pp.b), std::log(pp.p)};
                else
                    return {std::log(pp.alpha), std::log(pp.beta),
                            std::log(pp.kappa / (1.0 - pp.kappa))};
            },
            *cfg.positive_init);
    }
    const double log_median = weighted_log_quantile(sub, 0.5);
    const bool matching = cfg.init_strategy == InitStrategy::MomentMatching;
    const double gamma = matching ? tail_index_estimate(sub) : 1.5;
    switch (family) {
        case Family::SinghMaddala: {
            const double a0 = matching ? 0.8 : 1.0;
            const double q0 = matching ? std::fmax(1.2, gamma / a0) : 1.5;
            // Median inversion: (med/b)^a = 2^{1/q} - 1.
            const double log_b0 =
                log_median - std::log(std::expm1(std::log(2.0) / q0)) / a0;
            return {std::log(a0), log_b0, std::log(q0)};
        }
        case Family::Dagum: {
            const double p0 = 0.5;
            const double a0 = matching ? std::clamp(gamma / p0, 0.5, 8.0) : 1.0;
            // Median inversion: (med/b)^{-a} = 2^{1/p} - 1.
            const double log_b0 =
                log_median + std::log(std::expm1(std::log(2.0) / p0)) / a0;
            return {std::log(a0), log_b0, std::log(p0)};
        }
        case Family::KappaGen: {
            const double k0 = 0.25;
            const double a0 = matching ? std::clamp(gamma * k0, 0.2, 5.0) : 1.0;
            // Median inversion: (med/beta)^alpha = ln_k(2).
            const double log_b0 = log_median - std::log(ln_kappa(2.0, k0)) / a0;
            return {std::log(a0), log_b0, std::log(k0 / (1.0 - k0))};
        }
    }
    throw std::logic_error("positive_init: unhandled family");
}

void validate_config(const FitConfig& cfg) {
    if (cfg.max_iterations < 1) throw std::domain_error("max_iterations must be at least 1");
    if (!(cfg.gradient_tolerance > 0.0))
        throw std::domain_error("gradient_tolerance must be positive");
    if (!(cfg.step_tolerance > 0.0)) throw std::domain_error("step_tolerance must be positive");
}

}  // namespace

WeibullNegFit fit_weibull_negative(const WeightedSample& sample, const FitConfig& cfg) {
    validate_config(cfg);
    if (sample.count_negative() < 10)
        throw insufficient_data("fit_weibull_negative: need at least 10 strictly negative "
                                "observations, have " +
                                std::to_string(sample.count_negative()));
    const Subsample sub = negative_magnitudes(sample, cfg.normalize_weights);
    const Vec3 x0 = weibull_init(sub, cfg);
    auto value = [&sub](const Vec3& x) { return weibull_value(sub, x); };
    auto gradient = [&sub](const Vec3& x) { return weibull_gradient(sub, x); };
    const MaximizeResult opt = maximize(2, x0, value, gradient, cfg, sub.weight_total, "Weibull negative branch");
    const double s = std::exp(opt.x[0]);
    const double lambda = std::exp(opt.x[1]);
    const Mat3 cov_t = covariance_from_hessian(2, opt.hessian, opt.saddle);
    WeibullNegFit fit{WeibullNegParams(s, lambda), delta_method(2, cov_t, {s, lambda, 0.0}),
                      value(opt.x), opt.iterations, opt.saddle};
    return fit;
}

PositiveBranchFit fit_positive_branch(const WeightedSample& sample, Family family,
                                      const FitConfig& cfg) {
    validate_config(cfg);
    if (sample.count_positive() < 30)
        throw insufficient_data("fit_positive_branch: need at least 30 strictly positive "
                                "observations, have " +
                                std::to_string(sample.count_positive()));
    const Subsample sub = positive_values(sample, cfg.normalize_weights);
    const Vec3 x0 = positive_init(sub, family, cfg);
    ValueFn value;
    GradFn gradient;
    std::string label;
    switch (family) {
        case Family::SinghMaddala:
            value = [&sub](const Vec3& x) { return sm_value(sub, x); };
            gradient = [&sub](const Vec3& x) { return sm_gradient(sub, x); };
            label = "Singh-Maddala branch";
            break;
        case Family::Dagum:
            value = [&sub](const Vec3& x) { return dagum_value(sub, x); };
            gradient = [&sub](const Vec3& x) { return dagum_gradient(sub, x); };
            label = "Dagum branch";
            break;
        case Family::KappaGen:
            value = [&sub](const Vec3& x) { return kgen_value(sub, x); };
            gradient = [&sub](const Vec3& x) { return kgen_gradient(sub, x); };
            label = "kappa-generalized branch";
            break;
    }
    const MaximizeResult opt = maximize(3, x0, value, gradient, cfg, sub.weight_total, label);
    const Mat3 cov_t = covariance_from_hessian(3, opt.hessian, opt.saddle);
    PositiveBranch params = [&]() -> PositiveBranch {
        switch (family) {
            case Family::SinghMaddala:
                return SMParams(std::exp(opt.x[0]), std::exp(opt.x[1]), std::exp(opt.x[2]));
            case Family::Dagum:
                return DagumParams(std::exp(opt.x[0]), std::exp(opt.x[1]), std::exp(opt.x[2]));
            case Family::KappaGen:
                return KappaGenParams(std::exp(opt.x[0]), std::exp(opt.x[1]),
                                      kappa_from_logit(opt.x[2]));
        }
        throw std::logic_error("fit_positive_branch: unhandled family");
    }();
    Vec3 jac{std::exp(opt.x[0]), std::exp(opt.x[1]), 0.0};
    if (family == Family::KappaGen) {
        const double k = kappa_from_logit(opt.x[2]);
        jac[2] = k * (1.0 - k);
    } else {
        jac[2] = std::exp(opt.x[2]);
    }
    PositiveBranchFit fit{std::move(params), delta_method(3, cov_t, jac), value(opt.x),
                          opt.iterations, opt.saddle};
    return fit;
}

FitResult fit_mixture(const WeightedSample& sample, Family family, const FitConfig& cfg) {
    validate_config(cfg);
    const auto [theta1, theta2] = estimate_proportions(sample);
    const bool weibull_included = sample.count_negative() > 0;
    WeibullNegParams weibull(1.0, 1.0);
    Matrix weibull_cov;
    int iterations = 0;
    bool saddle = false;
    if (weibull_included) {
        WeibullNegFit wfit = fit_weibull_negative(sample, cfg);
        weibull = wfit.params;
        weibull_cov = std::move(wfit.covariance);
        iterations += wfit.iterations;
        saddle = saddle || wfit.saddle_warning;
    }
    PositiveBranchFit pfit = fit_positive_branch(sample, family, cfg);
    iterations += pfit.iterations;
    saddle = saddle || pfit.saddle_warning;

    FitResult result{MixtureParams(theta1, theta2, weibull, pfit.params),
                     {},
                     {},
                     {},
                     0.0,
                     weibull_included ? 7 : 5,
                     true,
                     iterations,
                     weibull_included,
                     saddle};
    result.loglik = weighted_loglik(result.params, sample, cfg.normalize_weights);

    result.param_names = {"theta1", "theta2"};
    if (weibull_included) {
        result.param_names.push_back("s");
        result.param_names.push_back("lambda");
    }
    switch (family) {
        case Family::SinghMaddala:
            result.param_names.insert(result.param_names.end(), {"a", "b", "q"});
            break;
        case Family::Dagum:
            result.param_names.insert(result.param_names.end(), {"a", "b", "p"});
            break;
        case Family::KappaGen:
            result.param_names.insert(result.param_names.end(), {"alpha", "beta", "kappa"});
            break;
    }

    const int dim = result.n_params;
    result.covariance.assign(dim, std::vector<double>(dim, 0.0));
    const double n_eff = sample.effective_size();
    result.covariance[0][0] = theta1 * (1.0 - theta1) / n_eff;
    result.covariance[1][1] = theta2 * (1.0 - theta2) / n_eff;
    result.covariance[0][1] = result.covariance[1][0] = -theta1 * theta2 / n_eff;
    int offset = 2;
    if (weibull_included) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                result.covariance[offset + i][offset + j] = weibull_cov[i][j];
        offset += 2;
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            result.covariance[offset + i][offset + j] = pfit.covariance[i][j];

    result.std_errors.resize(dim);
    for (int i = 0; i < dim; ++i)
        result.std_errors[i] = std::sqrt(std::fmax(result.covariance[i][i], 0.0));
    return result;
}

}  // namespace wealthmix
