#ifndef WEALTHMIX_ESTIMATION_HPP
#define WEALTHMIX_ESTIMATION_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wealthmix/mixture.hpp"
#include "wealthmix/sample.hpp"

namespace wealthmix {

using Matrix = std::vector<std::vector<double>>;

enum class InitStrategy { MomentMatching, FixedDefault, UserSupplied };

struct FitConfig {
    int max_iterations = 200;
    // Applied per unit of total weight (the objective is a weighted sum), so
    // the stopping rule does not tighten with sample size.
    double gradient_tolerance = 1e-6;
    // Transformed-scale step below which the line search gives up.
    double step_tolerance = 1e-10;
    InitStrategy init_strategy = InitStrategy::MomentMatching;
    // Weights are rescaled so they sum to N before likelihood evaluation,
    // which puts logLik and standard errors on the scale of an unweighted
    // sample of the same size. Raw weights are available behind this flag.
    bool normalize_weights = true;
    std::optional<WeibullNegParams> weibull_init;
    std::optional<PositiveBranch> positive_init;
};

struct WeibullNegFit {
    WeibullNegParams params;
    Matrix covariance;
    double loglik;
    int iterations;
    bool saddle_warning;
};

struct PositiveBranchFit {
    PositiveBranch params;
    Matrix covariance;
    double loglik;
    int iterations;
    bool saddle_warning;
};

struct FitResult {
    MixtureParams params;
    std::vector<std::string> param_names;
    std::vector<double> std_errors;
    Matrix covariance;
    double loglik;
    int n_params;
    bool converged;
    int iterations;
    // False when the sample has no negatives: theta1 is then zero, the
    // Weibull block is absent, and n_params drops from 7 to 5.
    bool weibull_included;
    bool saddle_warning;
};

// Weight shares of the negative and zero regions, the exact MLEs of the
// mixture proportions.
std::pair<double, double> estimate_proportions(const WeightedSample& sample);

// Full weighted log-likelihood including the multinomial component-membership
// terms (a convention choice, flagged in fit reports).
double weighted_loglik(const MixtureParams& m, const WeightedSample& sample,
                       bool normalize_weights = true);

// Component MLEs. Each selects its support region from the full sample,
// maximizes the weighted component log-likelihood by a regularized Newton
// search on log-scale parameters (logit for kappa), and reports natural-scale
// covariance via the delta method from the negative inverse Hessian.
WeibullNegFit fit_weibull_negative(const WeightedSample& sample, const FitConfig& cfg = {});
PositiveBranchFit fit_positive_branch(const WeightedSample& sample, Family family,
                                      const FitConfig& cfg = {});

// Joint fit. The likelihood factorizes exactly over the disjoint supports, so
// this composes the proportion estimates with the two component fits and
// assembles a block-diagonal covariance (multinomial block for the thetas).
FitResult fit_mixture(const WeightedSample& sample, Family family, const FitConfig& cfg = {});

}  // namespace wealthmix

#endif
