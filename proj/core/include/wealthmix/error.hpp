#ifndef WEALTHMIX_ERROR_HPP
#define WEALTHMIX_ERROR_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace wealthmix {

// Requested moment does not exist for the given shape parameters. Carries the
// Pareto tail index so callers can report how close the request was to the
// divergence boundary.
class moment_divergence : public std::domain_error {
public:
    moment_divergence(int order, double tail_index, const std::string& family)
        : std::domain_error("moment of order " + std::to_string(order) + " diverges for " +
                            family + " (Pareto tail index " + std::to_string(tail_index) +
                            ", requires order < tail index)"),
          order(order),
          tail_index(tail_index) {}
    int order;
    double tail_index;
};

// kappa = 0 has an exponential upper tail; there is no power-law index to report.
class no_power_tail : public std::domain_error {
public:
    no_power_tail() : std::domain_error("kappa = 0: upper tail is exponential, no Pareto index") {}
};

// Lorenz and Gini are undefined when the model mean is not strictly positive.
class mean_sign_error : public std::domain_error {
public:
    explicit mean_sign_error(double mean)
        : std::domain_error("Lorenz/Gini undefined: model mean is " + std::to_string(mean) +
                            " (must be positive)"),
          mean(mean) {}
    double mean;
};

// An optimizer stopped without meeting its convergence tolerances. The last
// iterate and gradient norm are kept for post-mortem diagnostics.
class convergence_failure : public std::runtime_error {
public:
    convergence_failure(const std::string& what, std::vector<double> last_iterate,
                        double gradient_norm, int iterations)
        : std::runtime_error(what),
          last_iterate(std::move(last_iterate)),
          gradient_norm(gradient_norm),
          iterations(iterations) {}
    std::vector<double> last_iterate;
    double gradient_norm;
    int iterations;
};

// Too few observations in a component to estimate its parameters.
class insufficient_data : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A datum has zero density under the supplied parameters (for example a
// negative observation when theta1 = 0), so the log-likelihood is -inf.
class impossible_likelihood : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A statistic that standardizes by the sample variance met a constant sample.
class zero_variance : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Index-number rebasing: the requested base x is absent from the series, or
// its y value is zero.
class base_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Vuong comparison where the pointwise log-likelihood ratios have zero
// variance but a nonzero mean, so the statistic has no finite normalization.
class degenerate_comparison : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An observation sits where the model CDF is exactly 0 or 1; the
// Anderson-Darling integrand is singular there.
class cdf_boundary_error : public std::domain_error {
public:
    cdf_boundary_error(double value, double cdf)
        : std::domain_error("Anderson-Darling undefined: observation " + std::to_string(value) +
                            " has model CDF " + std::to_string(cdf)),
          value(value),
          cdf(cdf) {}
    double value;
    double cdf;
};

// More than the tolerated share of bootstrap replicates failed to refit.
class unreliable_pvalue : public std::runtime_error {
public:
    unreliable_pvalue(int failed, int total)
        : std::runtime_error("bootstrap p-value unreliable: " + std::to_string(failed) + " of " +
                             std::to_string(total) + " replicate fits failed"),
          failed(failed),
          total(total) {}
    int failed;
    int total;
};

// Input file cannot be parsed at all (missing header, unknown columns, ...).
// Per-row problems are reported as rejects, not exceptions.
class ingest_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A record's period has no entry in the deflator table.
class unmatched_period : public std::runtime_error {
public:
    unmatched_period(const std::string& period, const std::vector<std::string>& known)
        : std::runtime_error(build_message(period, known)), period(period) {}
    std::string period;

private:
    static std::string build_message(const std::string& period,
                                     const std::vector<std::string>& known) {
        std::string msg = "period '" + period + "' missing from deflator table; known periods:";
        for (const auto& k : known) msg += " " + k;
        return msg;
    }
};

}  // namespace wealthmix

#endif
