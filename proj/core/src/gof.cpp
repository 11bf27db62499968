#include "wealthmix/gof.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "wealthmix/branches.hpp"
#include "wealthmix/error.hpp"
#include "wealthmix/random.hpp"

namespace wealthmix {

namespace {

constexpr double kFavoredLevel = 0.05;

double point_log_lik(const MixtureParams& m, double w) {
    if (w < 0.0) {
        if (m.theta1 <= 0.0)
            throw impossible_likelihood(
                "vuong_test: negative observation has zero mass under a model with theta1 = 0");
        return std::log(m.theta1) + weibull_neg_log_pdf(m.weibull, w);
    }
    if (w == 0.0) {
        if (m.theta2 <= 0.0)
            throw impossible_likelihood(
                "vuong_test: observation at zero has zero mass under a model with theta2 = 0");
        return std::log(m.theta2);
    }
    if (m.theta3() <= 0.0)
        throw impossible_likelihood(
            "vuong_test: positive observation has zero mass under a model with theta3 = 0");
    return std::log(m.theta3()) + branch_log_pdf(m.positive, w);
}

// Integral of (c - t)^2 / (t (1 - t)) over [t1, t2], for one interval on
// which the empirical step function equals c. The c = 0 and c = 1 guards
// drop the log terms whose coefficients vanish, which would otherwise
// evaluate 0 * inf at the support boundaries.
double ad_piece(double t1, double t2, double c) {
    if (!(t2 > t1)) return 0.0;
    double piece = -(t2 - t1);
    if (c > 0.0) piece += c * c * std::log(t2 / t1);
    if (c < 1.0) piece -= (1.0 - c) * (1.0 - c) * std::log((1.0 - t2) / (1.0 - t1));
    return piece;
}

}  // namespace

InformationCriteria information_criteria(double loglik, int n_params, std::size_t n_obs) {
    if (n_obs == 0) throw std::invalid_argument("information_criteria: empty sample");
    const double deviance = -2.0 * loglik;
    return {deviance + 2.0 * n_params,
            deviance + std::log(static_cast<double>(n_obs)) * n_params};
}

VuongResult vuong_test(const WeightedSample& sample, const MixtureParams& model_a,
                       const MixtureParams& model_b) {
    const std::size_t n = sample.size();
    if (n == 0) throw std::invalid_argument("vuong_test: empty sample");
    const auto& values = sample.values();
    const auto& weights = sample.weights();

    std::vector<double> ratio(n);
    for (std::size_t i = 0; i < n; ++i)
        ratio[i] = point_log_lik(model_a, values[i]) - point_log_lik(model_b, values[i]);

    const double w_total = sample.total_weight();
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += weights[i] * ratio[i];
    mean /= w_total;
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = ratio[i] - mean;
        var += weights[i] * d * d;
    }
    var /= w_total;

    if (var == 0.0) {
        if (mean == 0.0) return {0.0, 1.0, VuongFavored::Indistinguishable};
        throw degenerate_comparison(
            "vuong_test: pointwise log-likelihood ratios are constant and nonzero");
    }

    const double statistic = std::sqrt(static_cast<double>(n)) * mean / std::sqrt(var);
    const double pvalue = std::erfc(std::fabs(statistic) / std::sqrt(2.0));
    VuongFavored favored = VuongFavored::Indistinguishable;
    if (pvalue < kFavoredLevel)
        favored = statistic > 0.0 ? VuongFavored::ModelA : VuongFavored::ModelB;
    return {statistic, pvalue, favored};
}

double rmse_cdf(const WeightedSample& sample, const MixtureParams& m) {
    const std::size_t n = sample.size();
    if (n == 0) throw std::invalid_argument("rmse_cdf: empty sample");
    const auto& values = sample.values();
    const auto& weights = sample.weights();
    const double w_total = sample.total_weight();

    double sum_sq = 0.0;
    double cum = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        double group = 0.0;
        while (j < n && values[j] == values[i]) group += weights[j++];
        cum += group;
        const double gap = mixture_cdf(m, values[i]) - cum / w_total;
        sum_sq += static_cast<double>(j - i) * gap * gap;
        i = j;
    }
    return std::sqrt(sum_sq / static_cast<double>(n));
}

double anderson_darling(const WeightedSample& sample, const MixtureParams& m) {
    const std::size_t n = sample.size();
    if (n == 0) throw std::invalid_argument("anderson_darling: empty sample");
    const auto& values = sample.values();
    const auto& weights = sample.weights();
    const double w_total = sample.total_weight();

    // Breakpoints in t = F* at which the empirical step function changes. An
    // observation at zero steps at the left edge theta1 of the atom's jump,
    // so the atom's interval [theta1, rho] carries the post-step level, which
    // is what F* composed with the quantile function produces there.
    std::vector<double> tau;
    std::vector<double> level;
    tau.reserve(n);
    level.reserve(n);
    double cum = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        double group = 0.0;
        while (j < n && values[j] == values[i]) group += weights[j++];
        cum += group;
        const double f = mixture_cdf(m, values[i]);
        if (f <= 0.0 || f >= 1.0) throw cdf_boundary_error(values[i], f);
        tau.push_back(values[i] == 0.0 ? m.theta1 : f);
        level.push_back(cum / w_total);
        i = j;
    }
    level.back() = 1.0;

    double total = 0.0;
    double t_prev = 0.0;
    double c = 0.0;
    for (std::size_t k = 0; k < tau.size(); ++k) {
        total += ad_piece(t_prev, tau[k], c);
        t_prev = std::max(t_prev, tau[k]);
        c = level[k];
    }
    total += ad_piece(t_prev, 1.0, c);
    return static_cast<double>(n) * total;
}

BootstrapPvalue bootstrap_pvalue(const WeightedSample& sample, Family family, int replications,
                                 std::uint64_t seed, GofStatistic statistic,
                                 const FitConfig& cfg) {
    if (replications < 1)
        throw std::invalid_argument("bootstrap_pvalue: need at least one replication");
    double (*score)(const WeightedSample&, const MixtureParams&) = nullptr;
    switch (statistic) {
        case GofStatistic::AndersonDarling: score = &anderson_darling; break;
    }

    const FitResult observed_fit = fit_mixture(sample, family, cfg);
    const double observed = score(sample, observed_fit.params);

    const auto& values = sample.values();
    const auto& weights = sample.weights();
    const std::size_t n = sample.size();
    const Rng base(seed);

    std::vector<double> stats(static_cast<std::size_t>(replications), 0.0);
    std::vector<unsigned char> ok(static_cast<std::size_t>(replications), 0);
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int r = next.fetch_add(1); r < replications; r = next.fetch_add(1)) {
            Rng rng = base.stream(static_cast<std::uint64_t>(r));
            std::vector<double> v(n), w(n);
            for (std::size_t i = 0; i < n; ++i) {
                const std::uint64_t j = rng.next_index(n);
                v[i] = values[j];
                w[i] = weights[j];
            }
            try {
                const WeightedSample replicate(std::move(v), std::move(w));
                const FitResult fit = fit_mixture(replicate, family, cfg);
                stats[static_cast<std::size_t>(r)] = score(replicate, fit.params);
                ok[static_cast<std::size_t>(r)] = 1;
            } catch (const std::exception&) {
            }
        }
    };

    unsigned n_threads = std::thread::hardware_concurrency();
    if (n_threads == 0) n_threads = 1;
    n_threads = std::min(n_threads, static_cast<unsigned>(replications));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    int successes = 0;
    int exceed = 0;
    for (int r = 0; r < replications; ++r) {
        if (!ok[static_cast<std::size_t>(r)]) continue;
        ++successes;
        if (stats[static_cast<std::size_t>(r)] > observed) ++exceed;
    }
    const int failures = replications - successes;
    if (5 * failures > replications) throw unreliable_pvalue(failures, replications);
    return {static_cast<double>(exceed) / static_cast<double>(successes), successes, failures};
}

GofReport evaluate_gof(const WeightedSample& sample, const FitResult& fit, int replications,
                       std::uint64_t seed, const FitConfig& cfg) {
    const InformationCriteria ic = information_criteria(fit.loglik, fit.n_params, sample.size());
    GofReport report{ic.aic,
                     ic.bic,
                     rmse_cdf(sample, fit.params),
                     anderson_darling(sample, fit.params),
                     std::numeric_limits<double>::quiet_NaN(),
                     0};
    if (replications > 0) {
        const BootstrapPvalue boot = bootstrap_pvalue(sample, fit.params.family(), replications,
                                                      seed, GofStatistic::AndersonDarling, cfg);
        report.ad_pvalue = boot.value;
        report.bootstrap_replications = boot.replications;
    }
    return report;
}

}  // namespace wealthmix
