#include "wgtest/graph_core.hpp"
#include "wgtest/random.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace wgtest;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an Error";
    return ErrorCode::InvalidArgument;
}

AdjacencyMatrix random_weighted(std::size_t n, RandomStream& rng) {
    std::vector<double> upper(pair_count(n));
    for (auto& w : upper) {
        w = 2.0 * rng.uniform() - 1.0;
    }
    return AdjacencyMatrix::from_upper(n, std::move(upper));
}

}  // namespace

TEST(PairIndex, PackedOrderIsRowMajorUpperTriangle) {
    std::size_t p = 0;
    for (std::size_t i = 0; i < 7; ++i) {
        for (std::size_t j = i + 1; j < 7; ++j, ++p) {
            EXPECT_EQ(pair_index(i, j, 7), p);
        }
    }
    EXPECT_EQ(p, pair_count(7));
}

TEST(ValidateAdjacency, ZeroMatrix) {
    const auto g = validate_adjacency({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}, 1e-9);
    EXPECT_EQ(g.n(), 3u);
    for (double w : g.upper()) {
        EXPECT_EQ(w, 0.0);
    }
}

TEST(ValidateAdjacency, SymmetricInputUnchanged) {
    const auto g = validate_adjacency({{0, 1}, {1, 0}}, 1e-9);
    EXPECT_EQ(g(0, 1), 1.0);
    EXPECT_EQ(g(1, 0), 1.0);
    EXPECT_EQ(g(0, 0), 0.0);
}

TEST(ValidateAdjacency, AsymmetryBeyondTolerance) {
    try {
        validate_adjacency({{0, 1}, {0.5, 0}}, 1e-9);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::AsymmetryBeyondTolerance);
        EXPECT_NE(std::string(e.what()).find("(0,1)"), std::string::npos);
    }
}

TEST(ValidateAdjacency, RepairsSmallAsymmetryAndDiagonal) {
    const auto g = validate_adjacency({{7, 0.5 + 1e-10}, {0.5 - 1e-10, 3}}, 1e-9);
    EXPECT_DOUBLE_EQ(g(0, 1), 0.5);
    EXPECT_EQ(g(0, 0), 0.0);
    EXPECT_EQ(g(1, 1), 0.0);
}

TEST(ValidateAdjacency, Errors) {
    EXPECT_EQ(code_of([] { validate_adjacency({{0, 1, 2}, {1, 0, 3}}, 1e-9); }), ErrorCode::NonSquare);
    EXPECT_EQ(code_of([] { validate_adjacency({{0}}, 1e-9); }), ErrorCode::NonSquare);
    EXPECT_EQ(code_of([] { validate_adjacency({{0, NAN}, {NAN, 0}}, 1e-9); }), ErrorCode::NonFiniteEntry);
}

TEST(ThresholdBinarize, StrictAbsoluteThreshold) {
    const auto g = AdjacencyMatrix::from_upper(3, {0.35, -0.35, 0.3});
    const auto b = threshold_binarize(g, 0.3);
    EXPECT_EQ(b(0, 1), 1.0);
    EXPECT_EQ(b(0, 2), 1.0);
    EXPECT_EQ(b(1, 2), 0.0);
}

TEST(ThresholdBinarize, PropertiesOverRandomGraphs) {
    RandomStream rng(StreamKey(11));
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = random_weighted(2 + rng.index(12), rng);
        const double t1 = rng.uniform();
        const double t2 = t1 + rng.uniform();
        const auto b1 = threshold_binarize(g, t1);
        const auto b2 = threshold_binarize(g, t2);
        for (std::size_t i = 0; i < g.n(); ++i) {
            EXPECT_EQ(b1(i, i), 0.0);
            for (std::size_t j = 0; j < g.n(); ++j) {
                EXPECT_TRUE(b1(i, j) == 0.0 || b1(i, j) == 1.0);
                EXPECT_EQ(b1(i, j), b1(j, i));
                EXPECT_GE(b1(i, j), b2(i, j));
            }
        }
    }
}

TEST(FiveNumberSummary, Examples) {
    const std::vector<double> five{1, 2, 3, 4, 5};
    auto s = five_number_summary(five);
    EXPECT_EQ(s.min, 1);
    EXPECT_EQ(s.q1, 2);
    EXPECT_EQ(s.median, 3);
    EXPECT_EQ(s.q3, 4);
    EXPECT_EQ(s.max, 5);

    const std::vector<double> one{5};
    s = five_number_summary(one);
    EXPECT_EQ(s.min, 5);
    EXPECT_EQ(s.q1, 5);
    EXPECT_EQ(s.max, 5);

    // Reference values from numpy.percentile (linear interpolation).
    const std::vector<double> four{1, 2, 3, 4};
    s = five_number_summary(four);
    EXPECT_DOUBLE_EQ(s.q1, 1.75);
    EXPECT_DOUBLE_EQ(s.median, 2.5);
    EXPECT_DOUBLE_EQ(s.q3, 3.25);

    const std::vector<double> seven{3.1, -2.0, 7.5, 0.25, 4.0, 9.75, -1.5};
    s = five_number_summary(seven);
    EXPECT_DOUBLE_EQ(s.min, -2.0);
    EXPECT_DOUBLE_EQ(s.q1, -0.625);
    EXPECT_DOUBLE_EQ(s.median, 3.1);
    EXPECT_DOUBLE_EQ(s.q3, 5.75);
    EXPECT_DOUBLE_EQ(s.max, 9.75);
}

TEST(FiveNumberSummary, EmptyInput) {
    EXPECT_EQ(code_of([] { five_number_summary(std::vector<double>{}); }), ErrorCode::EmptyInput);
}

TEST(FiveNumberSummary, PermutationInvariantAndOrdered) {
    RandomStream rng(StreamKey(5));
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> v(1 + rng.index(30));
        for (auto& x : v) {
            x = rng.normal();
        }
        const auto a = five_number_summary(v);
        rng.shuffle(std::span<double>(v));
        const auto b = five_number_summary(v);
        EXPECT_EQ(a.min, b.min);
        EXPECT_EQ(a.q1, b.q1);
        EXPECT_EQ(a.median, b.median);
        EXPECT_EQ(a.q3, b.q3);
        EXPECT_EQ(a.max, b.max);
        EXPECT_LE(a.min, a.q1);
        EXPECT_LE(a.q1, a.median);
        EXPECT_LE(a.median, a.q3);
        EXPECT_LE(a.q3, a.max);
    }
}

TEST(AdjacencyCsv, ParsesAndRoundTrips) {
    std::istringstream in("0, 0.25,-1\r\n0.25,0,3e-2\n-1,0.03,0\n\n");
    const auto g = parse_adjacency_csv(in, 1e-9);
    EXPECT_EQ(g.n(), 3u);
    EXPECT_EQ(g(0, 2), -1.0);
    EXPECT_EQ(g(1, 2), 0.03);

    RandomStream rng(StreamKey(2));
    const auto h = random_weighted(9, rng);
    std::stringstream buf;
    write_adjacency_csv(buf, h);
    EXPECT_EQ(parse_adjacency_csv(buf, 0.0), h);
}

TEST(AdjacencyCsv, RejectsRaggedAndGarbage) {
    std::istringstream ragged("0,1\n1,0,2\n");
    EXPECT_EQ(code_of([&] { parse_adjacency_csv(ragged, 1e-9); }), ErrorCode::NonSquare);
    std::istringstream garbage("0,x\n1,0\n");
    EXPECT_EQ(code_of([&] { parse_adjacency_csv(garbage, 1e-9); }), ErrorCode::IoError);
    EXPECT_EQ(code_of([] { read_adjacency_csv("/nonexistent/file.csv", 1e-9); }), ErrorCode::IoError);
}

TEST(GraphSample, SharedMembersAndDimensionCheck) {
    GraphSample s(std::vector<AdjacencyMatrix>{AdjacencyMatrix::zeros(4), AdjacencyMatrix::zeros(4)});
    EXPECT_EQ(s.m(), 2u);
    EXPECT_EQ(s.n(), 4u);
    const std::vector<std::size_t> pick{1, 1};
    const auto t = s.select(pick);
    EXPECT_EQ(t.handle(0).get(), s.handle(1).get());
    EXPECT_EQ(code_of([&] { s.push_back(std::make_shared<const AdjacencyMatrix>(AdjacencyMatrix::zeros(5))); }),
              ErrorCode::DimensionMismatch);
}
