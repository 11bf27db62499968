#ifndef WEALTHMIX_SAMPLE_HPP
#define WEALTHMIX_SAMPLE_HPP

#include <cstddef>
#include <vector>

namespace wealthmix {

// A survey sample: net wealth values with strictly positive sampling weights.
// Values are sorted ascending on construction (weights carried along), which
// every empirical statistic downstream relies on.
class WeightedSample {
public:
    WeightedSample(std::vector<double> values, std::vector<double> weights);

    static WeightedSample with_unit_weights(std::vector<double> values);

    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& weights() const { return weights_; }
    bool sorted_ascending() const { return true; }

    double total_weight() const { return total_weight_; }

    // (sum pi)^2 / sum pi^2, the effective sample size under weighting.
    double effective_size() const { return effective_size_; }

    std::size_t count_negative() const { return count_negative_; }
    std::size_t count_zero() const { return count_zero_; }
    std::size_t count_positive() const { return size() - count_negative_ - count_zero_; }

    // Weight shares of the three support regions; these are the natural
    // estimates of theta1 and theta2.
    double weight_share_negative() const { return weight_negative_ / total_weight_; }
    double weight_share_zero() const { return weight_zero_ / total_weight_; }
    double weight_share_positive() const {
        return 1.0 - weight_share_negative() - weight_share_zero();
    }

    // Index of the first zero (== count_negative()) and first positive value.
    std::size_t begin_zero() const { return count_negative_; }
    std::size_t begin_positive() const { return count_negative_ + count_zero_; }

private:
    std::vector<double> values_;
    std::vector<double> weights_;
    double total_weight_ = 0.0;
    double effective_size_ = 0.0;
    double weight_negative_ = 0.0;
    double weight_zero_ = 0.0;
    std::size_t count_negative_ = 0;
    std::size_t count_zero_ = 0;
};

}  // namespace wealthmix

#endif
