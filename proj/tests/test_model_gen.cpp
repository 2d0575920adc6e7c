#include "wgtest/model_gen.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace wgtest;

namespace {

TwoBlockModel beta_design(std::size_t n, double eps = 0) {
    return {n, EdgeLaw::beta(2, 3), EdgeLaw::beta(1, 3), eps};
}

TwoBlockModel bern_design(std::size_t n, double within, double between, double eps = 0) {
    return {n, EdgeLaw::bernoulli(within), EdgeLaw::bernoulli(between), eps};
}

}  // namespace

TEST(BlockOfPair, TwoBlockRule) {
    // 0-based nodes: (1,2), (5,6), (6,10) in 1-based numbering.
    EXPECT_EQ(block_of_pair(0, 1, 10), Block::Within);
    EXPECT_EQ(block_of_pair(4, 5, 10), Block::Between);
    EXPECT_EQ(block_of_pair(5, 9, 10), Block::Within);
    EXPECT_THROW(block_of_pair(0, 1, 9), Error);
    try {
        block_of_pair(0, 1, 9);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::OddN);
    }
}

TEST(BetaMoments, ClosedForm) {
    auto m = beta_moments(2, 3);
    EXPECT_DOUBLE_EQ(m.mean, 0.4);
    EXPECT_DOUBLE_EQ(m.variance, 0.04);
    m = beta_moments(1, 1);
    EXPECT_DOUBLE_EQ(m.mean, 0.5);
    EXPECT_DOUBLE_EQ(m.variance, 1.0 / 12.0);
    m = beta_moments(9, 3);
    EXPECT_DOUBLE_EQ(m.mean, 0.75);
    EXPECT_DOUBLE_EQ(m.variance, 27.0 / (144.0 * 13.0));
    EXPECT_THROW(beta_moments(0, 1), Error);
    EXPECT_THROW(beta_moments(1, -2), Error);
}

class BetaMonteCarlo : public ::testing::TestWithParam<std::pair<double, double>> {};

TEST_P(BetaMonteCarlo, SamplerMatchesMoments) {
    const auto [a, b] = GetParam();
    const BetaSampler draw(a, b);
    RandomStream rng(StreamKey(123));
    const int draws = 1000000;
    double s1 = 0, s2 = 0, s4 = 0;
    const auto [mean, var] = beta_moments(a, b);
    for (int i = 0; i < draws; ++i) {
        const double x = draw(rng);
        ASSERT_GT(x, 0.0);
        ASSERT_LT(x, 1.0);
        s1 += x;
        s2 += (x - mean) * (x - mean);
        s4 += std::pow(x - mean, 4);
    }
    const double mu4 = EdgeLaw::beta(a, b).central_fourth_moment();
    EXPECT_NEAR(s1 / draws, mean, 4 * std::sqrt(var / draws));
    EXPECT_NEAR(s2 / draws, var, 4 * std::sqrt((mu4 - var * var) / draws));
    EXPECT_NEAR(s4 / draws, mu4, 0.02 * mu4);
}

INSTANTIATE_TEST_SUITE_P(Designs, BetaMonteCarlo,
                         ::testing::Values(std::pair{2.0, 3.0}, std::pair{9.0, 3.0}, std::pair{1.0, 3.0},
                                           std::pair{0.5, 0.7}));

TEST(CentralFourthMoment, ReferenceKurtosis) {
    // (excess kurtosis + 3) * variance^2 with scipy.stats.beta kurtosis values.
    EXPECT_NEAR(EdgeLaw::beta(2, 3).central_fourth_moment(), 2.357142857142857 * 0.0016, 1e-15);
    EXPECT_NEAR(EdgeLaw::beta(9, 3).central_fourth_moment(),
                3.0952380952380953 * std::pow(0.014423076923076924, 2), 1e-15);
    EXPECT_NEAR(EdgeLaw::bernoulli(0.5).central_fourth_moment(), 0.0625, 1e-15);
}

TEST(ModelMeanMatrix, BernoulliTableDesign) {
    const auto mm = model_mean_matrix(bern_design(4, 0.5, 0.4), false);
    // Within pairs are (0,1) and (2,3).
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = i + 1; j < 4; ++j) {
            const bool within = (i == 0 && j == 1) || (i == 2 && j == 3);
            EXPECT_DOUBLE_EQ(mm.mean(i, j), within ? 0.5 : 0.4);
            EXPECT_DOUBLE_EQ(mm.variance(j, i), within ? 0.25 : 0.24);
        }
    }
}

TEST(ModelMeanMatrix, BetaAndDegenerate) {
    const auto beta = model_mean_matrix(beta_design(6), false);
    EXPECT_DOUBLE_EQ(beta.mean(0, 1), 0.4);
    EXPECT_DOUBLE_EQ(beta.mean(0, 5), 0.25);
    const auto shifted = model_mean_matrix(beta_design(6, 0.5), true);
    EXPECT_DOUBLE_EQ(shifted.mean(0, 1), 2.5 / 6.0);

    const auto ones = model_mean_matrix(bern_design(4, 1, 1), false);
    for (double v : ones.sigma2) {
        EXPECT_EQ(v, 0.0);
    }
}

TEST(TwoBlockModel, Validation) {
    EXPECT_THROW(beta_design(5).validate(), Error);
    EXPECT_THROW(bern_design(4, 0.98, 0.5, 0.05).validate(), Error);
    TwoBlockModel mixed{4, EdgeLaw::beta(2, 3), EdgeLaw::bernoulli(0.3), 0};
    EXPECT_THROW(mixed.validate(), Error);
}

TEST(BetaShift, MeanIncreasesInEpsilonWhenAlphaBelowBeta) {
    double prev = beta_moments(2, 3).mean;
    for (double eps = 0.05; eps <= 5.0; eps += 0.05) {
        const double cur = beta_moments(2 + eps, 3 + eps).mean;
        EXPECT_DOUBLE_EQ(cur, (2 + eps) / (5 + 2 * eps));
        EXPECT_GT(cur, prev);
        prev = cur;
    }
}

TEST(SampleGraph, DegenerateBernoulli) {
    RandomStream rng(StreamKey(1));
    const auto zero = sample_graph(bern_design(6, 0, 0), false, rng);
    for (double w : zero.upper()) {
        EXPECT_EQ(w, 0.0);
    }
    const auto full = sample_graph(bern_design(6, 1, 1), false, rng);
    for (double w : full.upper()) {
        EXPECT_EQ(w, 1.0);
    }
}

TEST(SampleGraph, BetaWithinMeanMatchesMoments) {
    const auto model = beta_design(100);
    const auto sample = sample_population(model, false, 200, StreamKey(8));
    double sum = 0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < sample.m(); ++k) {
        for (std::size_t i = 0; i < 100; ++i) {
            for (std::size_t j = i + 1; j < 100; ++j) {
                const double w = sample[k](i, j);
                ASSERT_GT(w, 0.0);
                ASSERT_LT(w, 1.0);
                if (block_of_pair(i, j, 100) == Block::Within) {
                    sum += w;
                    ++count;
                }
            }
        }
    }
    const double se = std::sqrt(0.04 / static_cast<double>(count));
    EXPECT_NEAR(sum / static_cast<double>(count), 0.4, 3 * se);
}

TEST(SamplePopulation, SizesAndDeterminism) {
    const auto one = sample_population(beta_design(10), false, 1, StreamKey(4));
    EXPECT_EQ(one.m(), 1u);
    const auto a = sample_population(beta_design(10), true, 4, StreamKey(4));
    const auto b = sample_population(beta_design(10), true, 4, StreamKey(4));
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_EQ(a[k], b[k]);
    }
    EXPECT_FALSE(a[0] == a[1]);
    EXPECT_THROW(sample_population(beta_design(10), false, 0, StreamKey(4)), Error);
}

TEST(SamplePopulation, SparseBernoulliDensity) {
    const auto model = bern_design(50, 0.05, 0.01);
    const auto means = model_mean_matrix(model, false);
    double expected = 0, var = 0;
    for (std::size_t p = 0; p < means.mu.size(); ++p) {
        expected += means.mu[p];
        var += means.sigma2[p];
    }
    const auto sample = sample_population(model, false, 14, StreamKey(21));
    double total = 0;
    for (std::size_t k = 0; k < sample.m(); ++k) {
        for (double w : sample[k].upper()) {
            total += w;
        }
    }
    const double per_graph = total / 14.0;
    EXPECT_NEAR(per_graph, expected, 3 * std::sqrt(var / 14.0));
}

TEST(SampleGraph, GeneralMeanMatrixPath) {
    MeanMatrix means{4, {0.2, 0.4, 0.6, 0.3, 0.5, 0.7}, {0.01, 0.02, 0.03, 0.01, 0.02, 0.03}};
    RandomStream rng(StreamKey(3));
    const auto g = sample_graph(means, Family::Beta, rng);
    for (double w : g.upper()) {
        EXPECT_GT(w, 0.0);
        EXPECT_LT(w, 1.0);
    }
    const auto b = sample_graph(means, Family::Bernoulli, rng);
    for (double w : b.upper()) {
        EXPECT_TRUE(w == 0.0 || w == 1.0);
    }
    MeanMatrix impossible{2, {0.5}, {0.5}};
    EXPECT_THROW(sample_graph(impossible, Family::Beta, rng), Error);
}
