#ifndef WEALTHMIX_DIAGNOSTICS_HPP
#define WEALTHMIX_DIAGNOSTICS_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "wealthmix/sample.hpp"

namespace wealthmix {

struct SummaryStats {
    std::size_t n_obs;
    double mean;
    double median;
    double skewness;
    double kurtosis;
    double gini;
    double share_negative;
    double share_zero;
    double share_positive;
};

struct SeriesPoint {
    double x;
    double y;
};

// A named series of (x, y) points with strictly increasing x, the carrier for
// everything the CLI emits for plotting.
struct SeriesTable {
    std::string label;
    std::vector<SeriesPoint> points;
};

double weighted_mean(const WeightedSample& sample);

// Lower interpolation: the smallest value whose cumulative weight reaches
// half the total.
double weighted_median(const WeightedSample& sample);

// Weighted mean, median, third/fourth standardized central moments (kurtosis
// non-excess), empirical Gini, and the three sign shares.
SummaryStats summary_stats(const WeightedSample& sample);

// Empirical Lorenz ordinate: cumulative wealth share of the poorest u of the
// population, with the boundary observation spread linearly across its weight
// band. May dip negative when the sample contains debts.
double empirical_lorenz_at(const WeightedSample& sample, double u);

SeriesTable empirical_lorenz(const WeightedSample& sample, std::vector<double> grid);

// Covariance form G = 2 cov(w, Fhat_mid) / mean with midpoint ranks, tied
// observations sharing one rank. May exceed 1 when wealth can be negative.
double empirical_gini(const WeightedSample& sample);

// Alternative convention matching the model Gini's treatment of negatives:
// 1 - 2 * integral of the Lorenz curve, divided by 1 - rho_hat * Lhat(theta1_hat).
double empirical_gini_normalized(const WeightedSample& sample);

// Share of total (signed) wealth held by the richest `fraction` of the
// population.
double top_share(const WeightedSample& sample, double fraction);

// Weighted mean excess over each distinct positive value, thresholds above
// the (1 - trim_top) weight quantile of the positives dropped to keep the
// extreme-value noise out of the series.
SeriesTable mean_excess_series(const WeightedSample& sample, double trim_top = 0.01);

// (log value, log survivor fraction) over the distinct positive values, the
// survivor fraction inclusive of the value itself.
SeriesTable zipf_series(const WeightedSample& sample);

// Rescale y so the point at base_x maps to 100.
SeriesTable index_numbers(const SeriesTable& series, double base_x);

// Two-column tab-delimited text with a '#' header comment naming the series.
void write_series(std::ostream& os, const SeriesTable& series);

}  // namespace wealthmix

#endif
