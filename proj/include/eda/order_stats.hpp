// Closed-form order statistics of the sample median.
//
// The agreement protocol updates every peer with the median of the order
// estimates it received, so the position of a peer's new estimate inside the
// previous round's distribution follows the classical order-statistic laws
// implemented here: the binomial percentile-bracketing probability, its
// normal approximation N(Mp, Mp(1-p)), the percentile law of the median
// N(0.5, 0.25/M), and the difference law N(0, 0.25/M_i + 0.25/M_j) for two
// peers.  All operations are pure; the simulation harness and the test
// suite use them as the analytic reference.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace eda {

// Inputs of the binomial percentile bracket.  `m` is the sample size, `p`
// the percentile fraction (not a sampling ratio), `k` the order index.
struct OrderStatParams {
    std::int64_t m = 1;
    double p = 0.5;
    std::int64_t k = 0;

    void validate() const {
        if (m < 1) {
            throw std::invalid_argument("m: sample size must be >= 1, got " + std::to_string(m));
        }
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument("p: percentile fraction must lie in [0, 1], got " +
                                        std::to_string(p));
        }
        if (k < 0 || k > m) {
            throw std::invalid_argument("k: order index must lie in [0, m], got " +
                                        std::to_string(k));
        }
    }
};

struct NormalLaw {
    double mean = 0.0;
    double variance = 0.0;

    double stddev() const { return std::sqrt(variance); }

    // CDF; degenerates to a step function when the variance is zero.
    double cdf(double x) const {
        if (variance == 0.0) { return x < mean ? 0.0 : 1.0; }
        const double z = (x - mean) / stddev();
        return 0.5 * std::erfc(-z / std::numbers::sqrt2);
    }
};

namespace detail {
// Probabilities switch to log space above this sample size; below it the
// direct product is both exact-range safe and slightly more accurate.
inline constexpr std::int64_t kLogSpaceThreshold = 50;
}  // namespace detail

// Pr(x_k <= P_100p <= x_{k+1}) = C(M,k) p^k (1-p)^(M-k).
// Stable for m up to 1e6: small m uses the iterative binomial product,
// large m evaluates the log-gamma form and exponentiates once.
inline double binomial_order_prob(const OrderStatParams& params) {
    params.validate();
    const std::int64_t m = params.m;
    const std::int64_t k = params.k;
    const double p = params.p;

    if (p == 0.0) { return k == 0 ? 1.0 : 0.0; }
    if (p == 1.0) { return k == m ? 1.0 : 0.0; }

    if (m <= detail::kLogSpaceThreshold) {
        const std::int64_t j = std::min(k, m - k);
        double coeff = 1.0;
        for (std::int64_t i = 1; i <= j; ++i) {
            coeff = coeff * static_cast<double>(m - j + i) / static_cast<double>(i);
        }
        return coeff * std::pow(p, static_cast<double>(k)) *
               std::pow(1.0 - p, static_cast<double>(m - k));
    }

    const double log_coeff = std::lgamma(static_cast<double>(m + 1)) -
                             std::lgamma(static_cast<double>(k + 1)) -
                             std::lgamma(static_cast<double>(m - k + 1));
    const double log_prob = log_coeff + static_cast<double>(k) * std::log(p) +
                            static_cast<double>(m - k) * std::log1p(-p);
    return std::exp(log_prob);
}

// Normal approximation of the percentile bracket: N(Mp, Mp(1-p)).
inline NormalLaw normal_approx(const OrderStatParams& params) {
    params.validate();
    const double m = static_cast<double>(params.m);
    return NormalLaw{m * params.p, m * params.p * (1.0 - params.p)};
}

// The approximation is considered usable when Mp(1-p) > 9 (strict).
inline bool approx_is_valid(const OrderStatParams& params) {
    params.validate();
    return static_cast<double>(params.m) * params.p * (1.0 - params.p) > 9.0;
}

// Percentile-space law of the sample median: N(0.5, 0.25/M), valid for M > 2.
inline NormalLaw median_percentile_law(std::int64_t m) {
    if (m <= 2) {
        throw std::invalid_argument("m: median percentile law requires m > 2, got " +
                                    std::to_string(m));
    }
    return NormalLaw{0.5, 0.25 / static_cast<double>(m)};
}

// Difference of two peers' median percentiles: N(0, 0.25/M_i + 0.25/M_j);
// reduces to N(0, 0.5/M) when both sample sizes are equal.
inline NormalLaw peer_difference_law(std::int64_t m_i, std::int64_t m_j) {
    if (m_i <= 2) {
        throw std::invalid_argument("m_i: peer difference law requires m > 2, got " +
                                    std::to_string(m_i));
    }
    if (m_j <= 2) {
        throw std::invalid_argument("m_j: peer difference law requires m > 2, got " +
                                    std::to_string(m_j));
    }
    return NormalLaw{0.0, 0.25 / static_cast<double>(m_i) + 0.25 / static_cast<double>(m_j)};
}

// Value-space std of the median of M draws from a normal population with
// std `sigma`: sigma * sqrt(pi / (2M)).  Bridges the percentile-space law
// to the measured spread of simulated estimates.
inline double value_space_median_std(double sigma, std::int64_t m) {
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("sigma: population std must be > 0, got " +
                                    std::to_string(sigma));
    }
    if (m <= 2) {
        throw std::invalid_argument("m: value-space median std requires m > 2, got " +
                                    std::to_string(m));
    }
    return sigma * std::sqrt(std::numbers::pi / (2.0 * static_cast<double>(m)));
}

}  // namespace eda
