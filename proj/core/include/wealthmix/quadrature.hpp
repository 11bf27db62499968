#ifndef WEALTHMIX_QUADRATURE_HPP
#define WEALTHMIX_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "wealthmix/error.hpp"

namespace wealthmix {

struct QuadratureResult {
    double value;
    double error_estimate;
    int intervals;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes and weights on [-1,1] (QUADPACK dqk15 constants).
// Nodes are the positive half; the rule is symmetric.
inline constexpr double gk_nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double gk_wk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double gk_wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
inline void gk15(const F& f, double lo, double hi, double& value, double& error) {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (lo + hi);
    double result_k = 0.0;
    double result_g = 0.0;
    for (int j = 0; j < 8; ++j) {
        const double offset = half * gk_nodes[j];
        const double f1 = f(mid - offset);
        const double f2 = f(mid + offset);
        const double fsum = (j == 7) ? f1 : f1 + f2;
        result_k += gk_wk[j] * fsum;
        if (j % 2 == 1) result_g += gk_wg[j / 2] * fsum;
    }
    value = result_k * half;
    error = std::abs((result_k - result_g) * half);
}

}  // namespace detail

// Adaptive Gauss-Kronrod 7-15 on a finite interval. Bisects the interval with
// the largest local error estimate until abs_tol or rel_tol is met.
template <class F>
QuadratureResult integrate(const F& f, double lo, double hi, double abs_tol = 1e-10,
                           double rel_tol = 1e-10, int max_intervals = 4000) {
    struct Segment {
        double lo, hi, value, error;
    };
    if (!(lo < hi)) return {0.0, 0.0, 0};

    // Fixed-capacity pool ordered lazily: scan for the worst segment each
    // round. Interval counts stay in the hundreds, so the O(n^2) scan is
    // cheaper than maintaining a heap with removals.
    std::vector<Segment> segs;
    segs.reserve(64);
    Segment first{lo, hi, 0.0, 0.0};
    detail::gk15(f, lo, hi, first.value, first.error);
    segs.push_back(first);

    double total = first.value;
    double total_err = first.error;
    while (static_cast<int>(segs.size()) < max_intervals) {
        if (total_err <= abs_tol || total_err <= rel_tol * std::abs(total)) break;
        std::size_t worst = 0;
        for (std::size_t i = 1; i < segs.size(); ++i)
            if (segs[i].error > segs[worst].error) worst = i;
        Segment seg = segs[worst];
        const double mid = 0.5 * (seg.lo + seg.hi);
        if (mid <= seg.lo || mid >= seg.hi) break;  // interval at floating-point resolution
        Segment left{seg.lo, mid, 0.0, 0.0};
        Segment right{mid, seg.hi, 0.0, 0.0};
        detail::gk15(f, left.lo, left.hi, left.value, left.error);
        detail::gk15(f, right.lo, right.hi, right.value, right.error);
        total += left.value + right.value - seg.value;
        total_err += left.error + right.error - seg.error;
        segs[worst] = left;
        segs.push_back(right);
    }
    if (total_err > abs_tol && total_err > rel_tol * std::abs(total) &&
        static_cast<int>(segs.size()) >= max_intervals) {
        throw convergence_failure("quadrature did not reach tolerance in " +
                                      std::to_string(max_intervals) + " intervals",
                                  {total}, total_err, max_intervals);
    }
    return {total, total_err, static_cast<int>(segs.size())};
}

}  // namespace wealthmix

#endif
