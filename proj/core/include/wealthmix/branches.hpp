#ifndef WEALTHMIX_BRANCHES_HPP
#define WEALTHMIX_BRANCHES_HPP

#include <cstdint>
#include <variant>
#include <vector>

namespace wealthmix {

// Weibull law for the magnitude of negative net wealth. The component CDF on
// (-inf, 0) is F1(w) = exp[-(|w|/lambda)^s], increasing toward 1 at 0-.
struct WeibullNegParams {
    WeibullNegParams(double s, double lambda);
    double s;
    double lambda;
};

struct SMParams {
    SMParams(double a, double b, double q);
    double a;
    double b;
    double q;
};

struct DagumParams {
    DagumParams(double a, double b, double p);
    double a;
    double b;
    double p;
};

struct KappaGenParams {
    KappaGenParams(double alpha, double beta, double kappa);
    double alpha;
    double beta;
    double kappa;
};

using PositiveBranch = std::variant<SMParams, DagumParams, KappaGenParams>;

// --- positive branch, w > 0 ---

double branch_pdf(const PositiveBranch& branch, double w);
double branch_log_pdf(const PositiveBranch& branch, double w);
double branch_cdf(const PositiveBranch& branch, double w);
// Survivor 1 - F(w), computed directly; well conditioned deep in the tail.
double branch_survivor(const PositiveBranch& branch, double w);
double branch_quantile(const PositiveBranch& branch, double u);

// E(W^r); throws moment_divergence when r is at or beyond the tail index.
double branch_moment(const PositiveBranch& branch, int r);

// Paretian upper tail index: aq (SM), ap (Dagum), alpha/kappa (kappa-gen).
// Throws no_power_tail for kappa = 0.
double branch_tail_index(const PositiveBranch& branch);

// --- negative branch, w < 0 ---

double weibull_neg_pdf(const WeibullNegParams& params, double w);
double weibull_neg_log_pdf(const WeibullNegParams& params, double w);
// Unweighted component CDF branch exp[-(|w|/lambda)^s] for w < 0.
double weibull_neg_cdf_branch(const WeibullNegParams& params, double w);
// Inverse of the CDF branch: the (negative) value at component probability u.
double weibull_neg_quantile(const WeibullNegParams& params, double u);
// E(W^r) = (-1)^r lambda^r Gamma(1 + r/s).
double weibull_neg_moment(const WeibullNegParams& params, int r);

// --- sampling (inverse transform; deterministic per seed) ---

std::vector<double> branch_sample(const PositiveBranch& branch, std::size_t n,
                                  std::uint64_t seed);
std::vector<double> branch_sample(const WeibullNegParams& params, std::size_t n,
                                  std::uint64_t seed);

}  // namespace wealthmix

#endif
