#ifndef WGTEST_THEORY_HPP
#define WGTEST_THEORY_HPP

/**
 * @file theory.hpp
 *
 * @brief Closed-form diagnostics for the proposed statistic.
 *
 * All per-pair quantities are packed upper triangles (see graph_core.hpp). Sums run
 * over unordered pairs i < j.
 */

#include "wgtest/error.hpp"
#include "wgtest/graph_core.hpp"
#include "wgtest/model_gen.hpp"
#include "wgtest/two_sample_test.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace wgtest {

struct ModelMoments {
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<double> mu1;
    std::vector<double> mu2;
    std::vector<double> sigma2_1;
    std::vector<double> sigma2_2;
    /// E(A_G - A_H)^4 under the null, both graphs drawn from the first model.
    std::vector<double> eta;

    void validate() const {
        const auto pairs = pair_count(n);
        for (const auto* v : {&mu1, &mu2, &sigma2_1, &sigma2_2, &eta}) {
            if (v->size() != pairs) {
                throw Error(ErrorCode::DimensionMismatch, "moment arrays must hold C(n, 2) entries");
            }
        }
        for (std::size_t p = 0; p < pairs; ++p) {
            if (sigma2_1[p] < 0 || sigma2_2[p] < 0 || eta[p] < 0) {
                throw Error(ErrorCode::InvalidArgument, "variances and fourth moments must be non-negative");
            }
        }
    }
};

/// Null moments (unshifted) and alternative moments (shifted by epsilon) of a two-block model.
inline ModelMoments moments_from_model(const TwoBlockModel& model, std::size_t m) {
    const MeanMatrix null_means = model_mean_matrix(model, false);
    const MeanMatrix alt_means = model_mean_matrix(model, true);
    ModelMoments out;
    out.n = model.n;
    out.m = m;
    out.mu1 = null_means.mu;
    out.sigma2_1 = null_means.sigma2;
    out.mu2 = alt_means.mu;
    out.sigma2_2 = alt_means.sigma2;
    // For i.i.d. X, Y: E(X - Y)^4 = 2 mu_4 + 6 sigma^4.
    out.eta = per_pair(model, false, [](const EdgeLaw& l) {
        const double v = l.moments().variance;
        return 2.0 * l.central_fourth_moment() + 6.0 * v * v;
    });
    return out;
}

namespace detail {

inline double sum_pow(std::span<const double> v, int power) {
    double s = 0;
    for (double x : v) {
        s += std::pow(x, power);
    }
    return s;
}

}  // namespace detail

/// sigma_n^2 = sum m^2 sigma_ij^4, the null variance of sum T_ij.
inline double null_variance(const ModelMoments& mm) {
    mm.validate();
    const double m = static_cast<double>(mm.m);
    return m * m * detail::sum_pow(mm.sigma2_1, 2);
}

struct ConditionRatios {
    double nodes_over_sigma4 = 0;     ///< n / sum sigma^4
    double sigma8_over_sigma4sq = 0;  ///< sum sigma^8 / (sum sigma^4)^2
    double sigma4eta = 0;             ///< sum sigma^4 eta / (m (sum sigma^4)^2)
    double eta_sq = 0;                ///< sum eta^2 / (m^2 (sum sigma^4)^2)

    /// Advisory only: the conditions are asymptotic and have no finite-sample cutoff.
    bool all_below(double bound) const {
        return nodes_over_sigma4 < bound && sigma8_over_sigma4sq < bound && sigma4eta < bound && eta_sq < bound;
    }
};

inline ConditionRatios condition_ratios(const ModelMoments& mm) {
    mm.validate();
    const double s4 = detail::sum_pow(mm.sigma2_1, 2);
    if (!(s4 > 0)) {
        throw Error(ErrorCode::DegenerateModel, "sum of sigma^4 is zero");
    }
    const double m = static_cast<double>(mm.m);
    double s4eta = 0;
    double eta2 = 0;
    for (std::size_t p = 0; p < mm.eta.size(); ++p) {
        s4eta += mm.sigma2_1[p] * mm.sigma2_1[p] * mm.eta[p];
        eta2 += mm.eta[p] * mm.eta[p];
    }
    return {static_cast<double>(mm.n) / s4, detail::sum_pow(mm.sigma2_1, 4) / (s4 * s4), s4eta / (m * s4 * s4),
            eta2 / (m * m * s4 * s4)};
}

struct BernoulliDiagnostic {
    std::size_t n = 0;
    double frobenius_sq = 0;  ///< ||mu||_F^2 = 2 sum_{i<j} mu_ij^2
    double ratio = 0;         ///< n / ||mu||_F^2, infinite when mu = 0
    bool degenerate = false;
    std::vector<std::pair<std::size_t, std::size_t>> violations;  ///< pairs with mu_ij > 1 - delta

    bool satisfied() const { return violations.empty() && !degenerate; }
};

/// Binary-graph form of the null conditions: n small relative to ||mu||_F^2, mu bounded away from 1.
inline BernoulliDiagnostic bernoulli_condition(std::span<const double> mu, std::size_t n, double delta) {
    if (mu.size() != pair_count(n)) {
        throw Error(ErrorCode::DimensionMismatch, "mean array must hold C(n, 2) entries");
    }
    if (!(delta > 0 && delta < 1)) {
        throw Error(ErrorCode::InvalidArgument, "delta must lie in (0, 1)");
    }
    BernoulliDiagnostic d;
    d.n = n;
    for (std::size_t i = 0, p = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j, ++p) {
            d.frobenius_sq += 2.0 * mu[p] * mu[p];
            if (mu[p] > 1.0 - delta) {
                d.violations.emplace_back(i, j);
            }
        }
    }
    d.degenerate = !(d.frobenius_sq > 0);
    d.ratio = d.degenerate ? std::numeric_limits<double>::infinity() : static_cast<double>(n) / d.frobenius_sq;
    return d;
}

namespace detail {

inline double sum_v_squared(std::span<const double> mu1, std::span<const double> mu2, std::span<const double> s1,
                            std::span<const double> s2) {
    if (mu2.size() != mu1.size() || s1.size() != mu1.size() || s2.size() != mu1.size()) {
        throw Error(ErrorCode::DimensionMismatch, "mean and variance arrays differ in length");
    }
    double sv2 = 0;
    for (std::size_t p = 0; p < mu1.size(); ++p) {
        const double delta = mu1[p] - mu2[p];
        const double v = s1[p] + s2[p] + delta * delta;
        sv2 += v * v;
    }
    return sv2;
}

}  // namespace detail

/**
 * Power parameter lambda_n = m sum (mu1 - mu2)^2 / (2 sqrt(sum V^2)),
 * V = sigma1^2 + sigma2^2 + (mu1 - mu2)^2. The statistic behaves like lambda_n + O_P(1).
 */
inline double lambda_n(std::span<const double> mu1, std::span<const double> mu2, std::span<const double> sigma1sq,
                       std::span<const double> sigma2sq, std::size_t m) {
    const double sv2 = detail::sum_v_squared(mu1, mu2, sigma1sq, sigma2sq);
    if (!(sv2 > 0)) {
        throw Error(ErrorCode::DegenerateModel, "sum of V^2 is zero");
    }
    double sd2 = 0;
    for (std::size_t p = 0; p < mu1.size(); ++p) {
        sd2 += (mu1[p] - mu2[p]) * (mu1[p] - mu2[p]);
    }
    return static_cast<double>(m) * sd2 / (2.0 * std::sqrt(sv2));
}

inline double lambda_n(const ModelMoments& mm) { return lambda_n(mm.mu1, mm.mu2, mm.sigma2_1, mm.sigma2_2, mm.m); }

/// The side conditions of the power result, in the two forms that appear: n/(m sum V^2) and nm/(m^4 sum V^2).
struct AlternativeConditions {
    double statement_form = 0;
    double proof_form = 0;
};

inline AlternativeConditions alternative_conditions(const ModelMoments& mm) {
    const double sv2 = detail::sum_v_squared(mm.mu1, mm.mu2, mm.sigma2_1, mm.sigma2_2);
    if (!(sv2 > 0)) {
        throw Error(ErrorCode::DegenerateModel, "sum of V^2 is zero");
    }
    const double n = static_cast<double>(mm.n);
    const double m = static_cast<double>(mm.m);
    return {n / (m * sv2), n * m / (m * m * m * m * sv2)};
}

enum class SparseScenario {
    RatioShift,  ///< mu1 = tau a_n, mu2 = a_n
    PlusMinus,   ///< mu1 = a_n + b_n, mu2 = a_n - b_n
};

/**
 * Leading-order lambda_n for sparse homogeneous Bernoulli alternatives.
 * RatioShift: m n a_n (tau - 1)^2 / (4 (tau + 1)). PlusMinus: (m n / 2) b_n^2 / a_n.
 */
inline double lambda_sparse_bernoulli(double a_n, double tau_or_b_n, std::size_t n, std::size_t m,
                                      SparseScenario scenario) {
    if (!(a_n > 0 && a_n < 1)) {
        throw Error(ErrorCode::InvalidScenarioParams, "a_n must lie in (0, 1)");
    }
    const double mn = static_cast<double>(m) * static_cast<double>(n);
    if (scenario == SparseScenario::RatioShift) {
        const double tau = tau_or_b_n;
        if (!(tau > 0) || !(tau * a_n <= 1)) {
            throw Error(ErrorCode::InvalidScenarioParams, "need tau > 0 and tau * a_n <= 1");
        }
        return mn * a_n * (tau - 1) * (tau - 1) / (4.0 * (tau + 1));
    }
    const double b_n = tau_or_b_n;
    // b_n > a_n (negative mu2) is allowed: the leading-order form is a scaling statement.
    if (!(b_n >= 0 && a_n + b_n <= 1)) {
        throw Error(ErrorCode::InvalidScenarioParams, "need b_n >= 0 and a_n + b_n <= 1");
    }
    return mn / 2.0 * b_n * b_n / a_n;
}

/// tau_n^2 / sigma_n^2 = sum mu^2 / sum sigma^4; far from 1 means the baseline statistic is miscalibrated.
inline double tfro_consistency_ratio(const ModelMoments& mm) {
    mm.validate();
    const double s4 = detail::sum_pow(mm.sigma2_1, 2);
    if (!(s4 > 0)) {
        throw Error(ErrorCode::DegenerateModel, "sum of sigma^4 is zero");
    }
    return detail::sum_pow(mm.mu1, 2) / s4;
}

/**
 * Exact E T_ij^4 under the null. Each half sum S of h = m/2 i.i.d. symmetric differences has
 * E S^4 = h eta + 3 h (h - 1) (2 sigma^2)^2, and T_ij is the product of two independent half sums.
 */
inline double exact_fourth_moment(double sigma2, double eta, std::size_t m) {
    check_sample_size(m);
    const double h = static_cast<double>(m / 2);
    const double d2 = 2.0 * sigma2;
    const double half = h * eta + 3.0 * h * (h - 1.0) * d2 * d2;
    return half * half;
}

}  // namespace wgtest

#endif
