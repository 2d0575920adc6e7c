#ifndef WGTEST_RANDOM_HPP
#define WGTEST_RANDOM_HPP

/**
 * @file random.hpp
 *
 * @brief Reproducible random streams.
 *
 * The engine is `std::mt19937_64`, whose output sequence is fixed by the standard.
 * The standard distributions are not, so every variate used by the library is
 * generated here from raw engine output. A `StreamKey` names a stream by a path of
 * integers (master seed, replicate, sample, graph, ...), which lets any replicate be
 * regenerated independently of the order or thread it runs on.
 */

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace wgtest {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

class StreamKey {
public:
    constexpr StreamKey() = default;
    constexpr explicit StreamKey(std::uint64_t seed) : value_(splitmix64(seed)) {}

    /// Key of the i-th child stream.
    constexpr StreamKey child(std::uint64_t i) const {
        StreamKey k;
        k.value_ = splitmix64(value_ ^ splitmix64(i + 0x632BE59BD9B4E019ULL));
        return k;
    }

    template <typename... Rest>
    constexpr StreamKey child(std::uint64_t i, Rest... rest) const {
        return child(i).child(static_cast<std::uint64_t>(rest)...);
    }

    constexpr std::uint64_t value() const { return value_; }

private:
    std::uint64_t value_ = splitmix64(0);
};

class RandomStream {
public:
    explicit RandomStream(StreamKey key) : engine_(key.value()) {}

    std::uint64_t bits() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1).
    double uniform_open() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

    /// Uniform integer in [0, bound), unbiased (Lemire's multiply-and-reject).
    std::uint64_t index(std::uint64_t bound) {
        unsigned __int128 prod = static_cast<unsigned __int128>(engine_()) * bound;
        auto low = static_cast<std::uint64_t>(prod);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                prod = static_cast<unsigned __int128>(engine_()) * bound;
                low = static_cast<std::uint64_t>(prod);
            }
        }
        return static_cast<std::uint64_t>(prod >> 64);
    }

    /// Standard normal by the polar method; the second deviate is kept for the next call.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    bool bernoulli(double p) { return uniform() < p; }

    /// Fisher-Yates shuffle driven by `index`.
    template <typename T>
    void shuffle(std::span<T> values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(index(i));
            std::swap(values[i - 1], values[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0;
    bool has_spare_ = false;
};

/// Gamma(shape, 1) by Marsaglia and Tsang, with the u^(1/shape) boost for shape < 1.
class GammaSampler {
public:
    GammaSampler() = default;
    explicit GammaSampler(double shape) : boost_exponent_(shape < 1 ? 1.0 / shape : 0.0) {
        const double a = shape < 1 ? shape + 1 : shape;
        d_ = a - 1.0 / 3.0;
        c_ = 1.0 / std::sqrt(9.0 * d_);
    }

    double operator()(RandomStream& rng) const {
        double value;
        while (true) {
            const double x = rng.normal();
            double v = 1.0 + c_ * x;
            if (v <= 0) {
                continue;
            }
            v = v * v * v;
            const double u = rng.uniform_open();
            const double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2 || std::log(u) < 0.5 * x2 + d_ * (1.0 - v + std::log(v))) {
                value = d_ * v;
                break;
            }
        }
        if (boost_exponent_ > 0) {
            value *= std::pow(rng.uniform_open(), boost_exponent_);
        }
        return value;
    }

private:
    double d_ = 0;
    double c_ = 0;
    double boost_exponent_ = 0;
};

/// Beta(alpha, beta) as X / (X + Y) with independent gammas.
class BetaSampler {
public:
    BetaSampler() = default;
    BetaSampler(double alpha, double beta) : x_(alpha), y_(beta) {}

    double operator()(RandomStream& rng) const {
        const double x = x_(rng);
        const double y = y_(rng);
        return x / (x + y);
    }

private:
    GammaSampler x_;
    GammaSampler y_;
};

}  // namespace wgtest

#endif
