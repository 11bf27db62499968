#include "wealthmix/sample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace wealthmix {

WeightedSample::WeightedSample(std::vector<double> values, std::vector<double> weights)
    : values_(std::move(values)), weights_(std::move(weights)) {
    if (values_.empty()) throw std::invalid_argument("WeightedSample: no observations");
    if (values_.size() != weights_.size())
        throw std::invalid_argument("WeightedSample: values and weights differ in length");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]))
            throw std::invalid_argument("WeightedSample: non-finite value");
        if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i]))
            throw std::invalid_argument("WeightedSample: weights must be positive and finite");
    }

    std::vector<std::size_t> order(values_.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [this](std::size_t i, std::size_t j) { return values_[i] < values_[j]; });
    std::vector<double> v(values_.size()), w(values_.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        v[i] = values_[order[i]];
        w[i] = weights_[order[i]];
    }
    values_ = std::move(v);
    weights_ = std::move(w);

    double sum_w = 0.0, sum_w2 = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        sum_w += weights_[i];
        sum_w2 += weights_[i] * weights_[i];
        if (values_[i] < 0.0) {
            ++count_negative_;
            weight_negative_ += weights_[i];
        } else if (values_[i] == 0.0) {
            ++count_zero_;
            weight_zero_ += weights_[i];
        }
    }
    total_weight_ = sum_w;
    effective_size_ = sum_w * sum_w / sum_w2;
}

WeightedSample WeightedSample::with_unit_weights(std::vector<double> values) {
    std::vector<double> w(values.size(), 1.0);
    return WeightedSample(std::move(values), std::move(w));
}

}  // namespace wealthmix
