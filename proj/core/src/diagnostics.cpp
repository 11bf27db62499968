#include "wealthmix/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "wealthmix/error.hpp"

namespace wealthmix {

namespace {

void require_nonempty(const WeightedSample& sample, const char* who) {
    if (sample.size() == 0) throw std::invalid_argument(std::string(who) + ": empty sample");
}

double positive_mean_or_throw(const WeightedSample& sample) {
    const double mean = weighted_mean(sample);
    if (!(mean > 0.0)) throw mean_sign_error(mean);
    return mean;
}

}  // namespace

double weighted_mean(const WeightedSample& sample) {
    require_nonempty(sample, "weighted_mean");
    const auto& values = sample.values();
    const auto& weights = sample.weights();
    double sum = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) sum += weights[i] * values[i];
    return sum / sample.total_weight();
}

double weighted_median(const WeightedSample& sample) {
    require_nonempty(sample, "weighted_median");
    const auto& values = sample.values();
    const auto& weights = sample.weights();
    const double half = 0.5 * sample.total_weight();
    double cum = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        cum += weights[i];
        if (cum >= half) return values[i];
    }
    return values.back();
}

SummaryStats summary_stats(const WeightedSample& sample) {
    require_nonempty(sample, "summary_stats");
    const auto& values = sample.values();
    const auto& weights = sample.weights();
    const double w_total = sample.total_weight();
    const double mean = weighted_mean(sample);

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double d = values[i] - mean;
        const double wd2 = weights[i] * d * d;
        m2 += wd2;
        m3 += wd2 * d;
        m4 += wd2 * d * d;
    }
    m2 /= w_total;
    m3 /= w_total;
    m4 /= w_total;
    if (m2 <= 0.0) throw zero_variance("summary_stats: sample is constant");

    return {sample.size(),
            mean,
            weighted_median(sample),
            m3 / (m2 * std::sqrt(m2)),
            m4 / (m2 * m2),
            empirical_gini(sample),
            sample.weight_share_negative(),
            sample.weight_share_zero(),
            sample.weight_share_positive()};
}

double empirical_lorenz_at(const WeightedSample& sample, double u) {
    if (u < 0.0 || u > 1.0)
        throw std::invalid_argument("empirical_lorenz_at: u must lie in [0,1]");
    positive_mean_or_throw(sample);
    if (u == 0.0) return 0.0;
    if (u == 1.0) return 1.0;
    const auto& values = sample.values();
    const auto& weights = sample.weights();
    const double w_total = sample.total_weight();

    double wealth_total = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) wealth_total += weights[i] * values[i];

    double cum_share = 0.0;
    double cum_wealth = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double share = weights[i] / w_total;
        if (cum_share + share >= u) {
            return (cum_wealth + (u - cum_share) * w_total * values[i]) / wealth_total;
        }
        cum_share += share;
        cum_wealth += weights[i] * values[i];
    }
    return 1.0;
}

SeriesTable empirical_lorenz(const WeightedSample& sample, std::vector<double> grid) {
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    SeriesTable table{"lorenz", {}};
    table.points.reserve(grid.size());
    for (const double u : grid) table.points.push_back({u, empirical_lorenz_at(sample, u)});
    return table;
}

double empirical_gini(const WeightedSample& sample) {
    const double mean = positive_mean_or_throw(sample);
    const auto& values = sample.values();
    const auto& weights = sample.weights();
    const double w_total = sample.total_weight();

    double cum = 0.0;
    double swf = 0.0;
    double sf = 0.0;
    std::size_t i = 0;
    while (i < sample.size()) {
        std::size_t j = i;
        double group = 0.0;
        while (j < sample.size() && values[j] == values[i]) group += weights[j++];
        const double share = group / w_total;
        const double rank = cum + 0.5 * share;
        swf += share * values[i] * rank;
        sf += share * rank;
        cum += share;
        i = j;
    }
    return 2.0 * (swf - mean * sf) / mean;
}

double empirical_gini_normalized(const WeightedSample& sample) {
    const double mean = positive_mean_or_throw(sample);
    const auto& values = sample.values();
    const auto& weights = sample.weights();
    const double w_total = sample.total_weight();
    const double wealth_total = mean * w_total;

    double area = 0.0;
    double cum_wealth = 0.0;
    double negative_wealth = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double prev = cum_wealth;
        cum_wealth += weights[i] * values[i];
        area += (weights[i] / w_total) * 0.5 * (prev + cum_wealth) / wealth_total;
        if (values[i] < 0.0) negative_wealth += weights[i] * values[i];
    }
    const double rho_hat = sample.weight_share_negative() + sample.weight_share_zero();
    const double lorenz_floor = negative_wealth / wealth_total;
    return (1.0 - 2.0 * area) / (1.0 - rho_hat * lorenz_floor);
}

double top_share(const WeightedSample& sample, double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw std::invalid_argument("top_share: fraction must lie in (0,1)");
    return 1.0 - empirical_lorenz_at(sample, 1.0 - fraction);
}

SeriesTable mean_excess_series(const WeightedSample& sample, double trim_top) {
    if (trim_top < 0.0 || trim_top >= 1.0)
        throw std::invalid_argument("mean_excess_series: trim_top must lie in [0,1)");
    if (sample.count_positive() < 2)
        throw insufficient_data("mean_excess_series: need at least 2 positive observations");
    const auto& values = sample.values();
    const auto& weights = sample.weights();
    const std::size_t begin = sample.begin_positive();
    const std::size_t n = sample.size();

    std::vector<double> v;
    std::vector<double> group_w;
    std::size_t i = begin;
    double positive_weight = 0.0;
    while (i < n) {
        std::size_t j = i;
        double group = 0.0;
        while (j < n && values[j] == values[i]) group += weights[j++];
        v.push_back(values[i]);
        group_w.push_back(group);
        positive_weight += group;
        i = j;
    }

    const std::size_t groups = v.size();
    std::vector<double> above_w(groups, 0.0);
    std::vector<double> above_wx(groups, 0.0);
    for (std::size_t k = groups; k-- > 1;) {
        above_w[k - 1] = above_w[k] + group_w[k];
        above_wx[k - 1] = above_wx[k] + group_w[k] * v[k];
    }

    SeriesTable table{"mean_excess", {}};
    double cum = 0.0;
    for (std::size_t k = 0; k + 1 < groups; ++k) {
        cum += group_w[k];
        if (cum / positive_weight > 1.0 - trim_top) break;
        table.points.push_back({v[k], above_wx[k] / above_w[k] - v[k]});
    }
    return table;
}

SeriesTable zipf_series(const WeightedSample& sample) {
    if (sample.count_positive() < 2)
        throw insufficient_data("zipf_series: need at least 2 positive observations");
    const auto& values = sample.values();
    const auto& weights = sample.weights();
    const std::size_t begin = sample.begin_positive();
    const std::size_t n = sample.size();

    double positive_weight = 0.0;
    for (std::size_t i = begin; i < n; ++i) positive_weight += weights[i];

    SeriesTable table{"zipf", {}};
    double below = 0.0;
    std::size_t i = begin;
    while (i < n) {
        std::size_t j = i;
        double group = 0.0;
        while (j < n && values[j] == values[i]) group += weights[j++];
        const double survivor = (positive_weight - below) / positive_weight;
        table.points.push_back({std::log(values[i]), std::log(survivor)});
        below += group;
        i = j;
    }
    return table;
}

SeriesTable index_numbers(const SeriesTable& series, double base_x) {
    char base_text[32];
    std::snprintf(base_text, sizeof base_text, "%.12g", base_x);
    double base_y = 0.0;
    bool found = false;
    for (const auto& p : series.points) {
        if (p.x == base_x) {
            base_y = p.y;
            found = true;
            break;
        }
    }
    if (!found)
        throw base_error("index_numbers: base x = " + std::string(base_text) +
                         " not present in series '" + series.label + "'");
    if (base_y == 0.0)
        throw base_error("index_numbers: base value is zero in series '" + series.label + "'");
    SeriesTable indexed{series.label + " (index, base " + std::string(base_text) + " = 100)", {}};
    indexed.points.reserve(series.points.size());
    for (const auto& p : series.points) indexed.points.push_back({p.x, 100.0 * p.y / base_y});
    return indexed;
}

void write_series(std::ostream& os, const SeriesTable& series) {
    os << "# " << series.label << "\n";
    char line[80];
    for (const auto& p : series.points) {
        std::snprintf(line, sizeof(line), "%.12g\t%.12g\n", p.x, p.y);
        os << line;
    }
}

}  // namespace wealthmix
