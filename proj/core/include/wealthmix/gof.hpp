#ifndef WEALTHMIX_GOF_HPP
#define WEALTHMIX_GOF_HPP

#include <cstddef>
#include <cstdint>

#include "wealthmix/estimation.hpp"
#include "wealthmix/mixture.hpp"
#include "wealthmix/sample.hpp"

namespace wealthmix {

struct InformationCriteria {
    double aic;
    double bic;
};

InformationCriteria information_criteria(double loglik, int n_params, std::size_t n_obs);

enum class VuongFavored { ModelA, ModelB, Indistinguishable };

struct VuongResult {
    double statistic;
    double pvalue;
    VuongFavored favored;
};

// Two-sided Vuong test of non-nested models on the same sample. Positive
// statistics favor model A; `favored` is decided at the 5% level. Atom
// observations contribute log(theta2_A) - log(theta2_B) to the pointwise
// log-likelihood ratio.
VuongResult vuong_test(const WeightedSample& sample, const MixtureParams& model_a,
                       const MixtureParams& model_b);

// Root mean squared gap between the model CDF and the weighted empirical CDF,
// both evaluated at every observation.
double rmse_cdf(const WeightedSample& sample, const MixtureParams& m);

// Weighted Anderson-Darling statistic
//   A^2 = N * integral (Fhat - F*)^2 / (F* (1 - F*)) dF*,
// evaluated exactly as a closed-form sum over the intervals of t = F* on
// which the empirical step function is constant. The model's atom occupies
// the interval [theta1, rho] in t, where the quantile function sits at zero.
double anderson_darling(const WeightedSample& sample, const MixtureParams& m);

enum class GofStatistic { AndersonDarling };

struct BootstrapPvalue {
    double value;
    int replications;
    int failures;
};

// Nonparametric bootstrap p-value: resample (value, weight) pairs with
// replacement, refit the family to each replicate, score each replicate
// against its own fit, and report the fraction of replicate statistics that
// exceed the observed one. Replicate r draws from stream (seed, r), so the
// result does not depend on evaluation order; replicates run in parallel.
// Failed replicate fits are excluded; more than 20% failures raises
// unreliable_pvalue.
BootstrapPvalue bootstrap_pvalue(const WeightedSample& sample, Family family, int replications,
                                 std::uint64_t seed,
                                 GofStatistic statistic = GofStatistic::AndersonDarling,
                                 const FitConfig& cfg = {});

struct GofReport {
    double aic;
    double bic;
    double rmse;
    double ad_statistic;
    double ad_pvalue;
    int bootstrap_replications;
};

// Full battery for one fitted model. replications = 0 skips the bootstrap and
// reports ad_pvalue as NaN.
GofReport evaluate_gof(const WeightedSample& sample, const FitResult& fit, int replications,
                       std::uint64_t seed, const FitConfig& cfg = {});

}  // namespace wealthmix

#endif
