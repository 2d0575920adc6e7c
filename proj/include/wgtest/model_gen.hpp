#ifndef WGTEST_MODEL_GEN_HPP
#define WGTEST_MODEL_GEN_HPP

/**
 * @file model_gen.hpp
 *
 * @brief Two-block Beta and Bernoulli graph models and their samplers.
 *
 * Nodes [0, n/2) form the first block and [n/2, n) the second. Pairs inside a block
 * draw weights from the `within` law and pairs across blocks from the `between` law.
 * The alternative model adds `epsilon` to every parameter: Beta(a+e, b+e) or Bern(p+e).
 */

#include "wgtest/error.hpp"
#include "wgtest/graph_core.hpp"
#include "wgtest/random.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace wgtest {

enum class Family { Beta, Bernoulli };

inline std::string family_name(Family f) { return f == Family::Beta ? "beta" : "bernoulli"; }

struct Moments {
    double mean = 0;
    double variance = 0;
};

/// Mean a/(a+b) and variance ab/((a+b)^2 (a+b+1)) of Beta(a, b).
inline Moments beta_moments(double alpha, double beta) {
    if (!(alpha > 0) || !(beta > 0) || !std::isfinite(alpha) || !std::isfinite(beta)) {
        throw Error(ErrorCode::NonPositiveParameter,
                    "Beta parameters must be positive and finite, got (" + std::to_string(alpha) + ", " +
                        std::to_string(beta) + ")");
    }
    const double s = alpha + beta;
    return {alpha / s, alpha * beta / (s * s * (s + 1.0))};
}

/// Distribution of one edge weight: Beta(a, b), or Bern(a) with b unused.
struct EdgeLaw {
    Family family = Family::Beta;
    double a = 1;
    double b = 1;

    static EdgeLaw beta(double alpha, double beta) { return {Family::Beta, alpha, beta}; }
    static EdgeLaw bernoulli(double p) { return {Family::Bernoulli, p, 0.0}; }

    EdgeLaw shifted(double epsilon) const {
        return family == Family::Beta ? beta(a + epsilon, b + epsilon) : bernoulli(a + epsilon);
    }

    void validate() const {
        if (family == Family::Beta) {
            beta_moments(a, b);
        } else if (!(a >= 0 && a <= 1)) {
            throw Error(ErrorCode::InvalidProbability, "Bernoulli probability " + std::to_string(a) + " outside [0, 1]");
        }
    }

    Moments moments() const {
        if (family == Family::Beta) {
            return beta_moments(a, b);
        }
        validate();
        return {a, a * (1.0 - a)};
    }

    /// E(X - EX)^4.
    double central_fourth_moment() const {
        if (family == Family::Bernoulli) {
            validate();
            return a * (1 - a) * (1 - 3 * a + 3 * a * a);
        }
        const auto [mean, var] = beta_moments(a, b);
        (void)mean;
        const double s = a + b;
        const double excess = 6.0 * ((a - b) * (a - b) * (s + 1) - a * b * (s + 2)) / (a * b * (s + 2) * (s + 3));
        return (excess + 3.0) * var * var;
    }
};

struct TwoBlockModel {
    std::size_t n = 0;
    EdgeLaw within;
    EdgeLaw between;
    double epsilon = 0;

    Family family() const { return within.family; }

    EdgeLaw law(bool between_blocks, bool shifted) const {
        const EdgeLaw& base = between_blocks ? between : within;
        return shifted ? base.shifted(epsilon) : base;
    }

    void validate() const {
        if (n < 2) {
            throw Error(ErrorCode::InvalidArgument, "model needs n >= 2");
        }
        if (n % 2 != 0) {
            throw Error(ErrorCode::OddN, "two-block designs need an even node count, got " + std::to_string(n));
        }
        if (within.family != between.family) {
            throw Error(ErrorCode::InvalidArgument, "within and between laws must share a family");
        }
        if (!(epsilon >= 0) || !std::isfinite(epsilon)) {
            throw Error(ErrorCode::InvalidArgument, "epsilon must be finite and non-negative");
        }
        for (bool bt : {false, true}) {
            for (bool sh : {false, true}) {
                law(bt, sh).validate();
            }
        }
    }
};

enum class Block { Within, Between };

/// Block of pair (i, j) with 0-based nodes, i < j: Between iff i < n/2 <= j.
inline Block block_of_pair(std::size_t i, std::size_t j, std::size_t n) {
    if (n % 2 != 0) {
        throw Error(ErrorCode::OddN, "two-block designs need an even node count, got " + std::to_string(n));
    }
    if (!(i < j && j < n)) {
        throw Error(ErrorCode::InvalidArgument, "pair must satisfy i < j < n");
    }
    return (i < n / 2 && j >= n / 2) ? Block::Between : Block::Within;
}

/// Per-pair means and variances, packed like `AdjacencyMatrix::upper()`.
struct MeanMatrix {
    std::size_t n = 0;
    std::vector<double> mu;
    std::vector<double> sigma2;

    double mean(std::size_t i, std::size_t j) const { return i < j ? mu[pair_index(i, j, n)] : mu[pair_index(j, i, n)]; }
    double variance(std::size_t i, std::size_t j) const {
        return i < j ? sigma2[pair_index(i, j, n)] : sigma2[pair_index(j, i, n)];
    }

    void validate() const {
        if (n < 2 || mu.size() != pair_count(n) || sigma2.size() != pair_count(n)) {
            throw Error(ErrorCode::DimensionMismatch, "mean matrix storage does not match n");
        }
        for (std::size_t p = 0; p < mu.size(); ++p) {
            if (!std::isfinite(mu[p]) || !std::isfinite(sigma2[p]) || sigma2[p] < 0) {
                throw Error(ErrorCode::InvalidArgument, "mean matrix entries must be finite with variance >= 0");
            }
        }
    }
};

/// Fills one packed per-pair array from a function of the pair's law.
template <typename Fn>
std::vector<double> per_pair(const TwoBlockModel& model, bool shifted, Fn&& fn) {
    const double within_value = fn(model.law(false, shifted));
    const double between_value = fn(model.law(true, shifted));
    std::vector<double> out;
    out.reserve(pair_count(model.n));
    const std::size_t half = model.n / 2;
    for (std::size_t i = 0; i < model.n; ++i) {
        for (std::size_t j = i + 1; j < model.n; ++j) {
            out.push_back(i < half && j >= half ? between_value : within_value);
        }
    }
    return out;
}

inline MeanMatrix model_mean_matrix(const TwoBlockModel& model, bool shifted) {
    model.validate();
    return {model.n, per_pair(model, shifted, [](const EdgeLaw& l) { return l.moments().mean; }),
            per_pair(model, shifted, [](const EdgeLaw& l) { return l.moments().variance; })};
}

/// One graph from the model (or its shifted alternative); pairs are drawn in packed order.
inline AdjacencyMatrix sample_graph(const TwoBlockModel& model, bool shifted, RandomStream& rng) {
    model.validate();
    const std::size_t n = model.n;
    const std::size_t half = n / 2;
    std::vector<double> upper(pair_count(n));
    const EdgeLaw in = model.law(false, shifted);
    const EdgeLaw out = model.law(true, shifted);
    std::size_t p = 0;
    if (model.family() == Family::Beta) {
        const BetaSampler draw_in(in.a, in.b);
        const BetaSampler draw_out(out.a, out.b);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j, ++p) {
                upper[p] = (i < half && j >= half) ? draw_out(rng) : draw_in(rng);
            }
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j, ++p) {
                upper[p] = rng.bernoulli((i < half && j >= half) ? out.a : in.a) ? 1.0 : 0.0;
            }
        }
    }
    return AdjacencyMatrix::from_upper(n, std::move(upper));
}

/**
 * One graph from an arbitrary inhomogeneous model.
 * Bernoulli pairs use the mean as success probability; Beta pairs are matched by
 * moments, alpha = mu * k and beta = (1 - mu) * k with k = mu (1 - mu) / sigma2 - 1.
 */
inline AdjacencyMatrix sample_graph(const MeanMatrix& means, Family family, RandomStream& rng) {
    means.validate();
    std::vector<double> upper(pair_count(means.n));
    for (std::size_t p = 0; p < upper.size(); ++p) {
        const double mu = means.mu[p];
        if (family == Family::Bernoulli) {
            EdgeLaw::bernoulli(mu).validate();
            upper[p] = rng.bernoulli(mu) ? 1.0 : 0.0;
        } else {
            const double k = mu * (1 - mu) / means.sigma2[p] - 1.0;
            if (!(mu > 0 && mu < 1 && k > 0)) {
                throw Error(ErrorCode::NonPositiveParameter, "no Beta law has mean " + std::to_string(mu) +
                                                                 " and variance " + std::to_string(means.sigma2[p]));
            }
            upper[p] = BetaSampler(mu * k, (1 - mu) * k)(rng);
        }
    }
    return AdjacencyMatrix::from_upper(means.n, std::move(upper));
}

/// m i.i.d. graphs; graph k is drawn from stream `key.child(k)`.
inline GraphSample sample_population(const TwoBlockModel& model, bool shifted, std::size_t m, StreamKey key) {
    if (m < 1) {
        throw Error(ErrorCode::TooFewSamples, "population sample needs m >= 1");
    }
    std::vector<AdjacencyMatrix> graphs;
    graphs.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
        RandomStream rng(key.child(k));
        graphs.push_back(sample_graph(model, shifted, rng));
    }
    return GraphSample(std::move(graphs));
}

}  // namespace wgtest

#endif
