#include "wgtest/sim_harness.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace wgtest;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.design = {0, EdgeLaw::beta(2, 3), EdgeLaw::beta(1, 3), 0};
    c.n_grid = {10, 20};
    c.m_grid = {2, 4};
    c.epsilon_grid = {0, 0.7};
    c.replications = 40;
    c.master_seed = 99;
    return c;
}

std::string render(const SimulationReport& r) {
    std::ostringstream out;
    write_report(out, r);
    return out.str();
}

}  // namespace

TEST(RunExperiment, SingleCellSingleReplicate) {
    auto c = small_config();
    c.n_grid = {10};
    c.m_grid = {2};
    c.epsilon_grid = {0};
    c.replications = 1;
    c.methods = {Method::Tn};
    const auto report = run_experiment(c);
    ASSERT_EQ(report.rows.size(), 1u);
    const auto& row = report.rows[0];
    EXPECT_EQ(row.replications, 1u);
    EXPECT_EQ(row.reject_count + row.fail_count + row.na_count, 1u);
    ASSERT_TRUE(row.lambda);
    EXPECT_EQ(*row.lambda, 0.0);
}

TEST(RunExperiment, OrderAndTallies) {
    const auto c = small_config();
    const auto report = run_experiment(c);
    ASSERT_EQ(report.rows.size(), 2u * 2u * 2u * 2u);
    EXPECT_EQ(report.rows[0].n, 10u);
    EXPECT_EQ(report.rows[0].method, Method::Tn);
    EXPECT_EQ(report.rows[1].method, Method::Tfro);
    EXPECT_EQ(report.rows[2].epsilon, 0.7);
    EXPECT_EQ(report.rows[4].m, 4u);
    EXPECT_EQ(report.rows[8].n, 20u);
    for (const auto& row : report.rows) {
        EXPECT_EQ(row.reject_count + row.fail_count + row.na_count, row.replications);
        if (row.rejection_rate) {
            EXPECT_GE(*row.rejection_rate, 0.0);
            EXPECT_LE(*row.rejection_rate, 1.0);
        }
    }
}

TEST(RunExperiment, DeterministicAcrossThreadCounts) {
    const auto c = small_config();
    const auto one = render(run_experiment(c, 1));
    EXPECT_EQ(one, render(run_experiment(c, 1)));
    EXPECT_EQ(one, render(run_experiment(c, 3)));
    EXPECT_EQ(one, render(run_experiment(c, 8)));
    auto other = c;
    other.master_seed = 100;
    EXPECT_NE(one, render(run_experiment(other, 1)));
}

TEST(RunExperiment, CellStreamsIndependentOfGrid) {
    auto c = small_config();
    const auto full = run_experiment(c);
    c.n_grid = {20};
    c.m_grid = {4};
    c.epsilon_grid = {0.7};
    const auto single = run_experiment(c);
    ASSERT_EQ(single.rows.size(), 2u);
    const auto& match = full.rows[full.rows.size() - 2];
    EXPECT_EQ(single.rows[0].reject_count, match.reject_count);
    EXPECT_EQ(single.rows[0].na_count, match.na_count);
}

TEST(RunCell, AllNaCellHasNoRate) {
    const TwoBlockModel design{0, EdgeLaw::bernoulli(0), EdgeLaw::bernoulli(0), 0};
    const auto row = run_cell(design, {6, 2, 0}, 10, 0.05, Method::Tn, 1);
    EXPECT_EQ(row.na_count, 10u);
    EXPECT_FALSE(row.rejection_rate);
    EXPECT_FALSE(row.lambda);  // every V_ij is zero
}

TEST(RunCell, ErrorsCarryCellContext) {
    const TwoBlockModel design{0, EdgeLaw::beta(2, 3), EdgeLaw::beta(1, 3), 0};
    try {
        run_cell(design, {9, 2, 0}, 5, 0.05, Method::Tn, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::OddN);
    }
}

TEST(Report, EmptyIsHeaderOnly) {
    EXPECT_EQ(render(SimulationReport{}), std::string(report_header) + "\n");
}

TEST(Report, RoundTripAtPrintedPrecision) {
    auto c = small_config();
    c.epsilon_grid = {0, 0.3};
    const auto report = run_experiment(c);
    const auto text = render(report);
    std::istringstream in(text);
    const auto parsed = parse_report(in);
    ASSERT_EQ(parsed.rows.size(), report.rows.size());
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto& a = report.rows[i];
        const auto& b = parsed.rows[i];
        EXPECT_EQ(a.n, b.n);
        EXPECT_EQ(a.m, b.m);
        EXPECT_EQ(a.epsilon, b.epsilon);
        EXPECT_EQ(a.method, b.method);
        EXPECT_EQ(a.reject_count, b.reject_count);
        EXPECT_EQ(a.na_count, b.na_count);
        EXPECT_EQ(a.fail_count, b.fail_count);
        ASSERT_EQ(a.rejection_rate.has_value(), b.rejection_rate.has_value());
        if (a.rejection_rate) {
            EXPECT_NEAR(*a.rejection_rate, *b.rejection_rate, 5e-5);
        }
        ASSERT_EQ(a.lambda.has_value(), b.lambda.has_value());
        if (a.lambda) {
            EXPECT_EQ(*a.lambda, *b.lambda);
        }
    }
    std::ostringstream again;
    write_report(again, parsed);
    EXPECT_EQ(again.str(), text);
}

TEST(Report, EmitFailsOnUnwritablePath) {
    try {
        emit_report(SimulationReport{}, "/nonexistent/dir/out.csv");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::IoError);
    }
}

TEST(ExperimentConfig, Validation) {
    auto c = small_config();
    c.m_grid = {3};
    EXPECT_THROW(c.validate(), Error);
    c = small_config();
    c.alpha = 0;
    EXPECT_THROW(c.validate(), Error);
    c = small_config();
    c.n_grid.clear();
    EXPECT_THROW(c.validate(), Error);
    c = small_config();
    c.replications = 0;
    EXPECT_THROW(c.validate(), Error);
}

TEST(PowerMonotonicity, RateNonDecreasingInEpsilon) {
    ExperimentConfig c;
    c.design = {0, EdgeLaw::beta(2, 3), EdgeLaw::beta(1, 3), 0};
    c.n_grid = {30};
    c.m_grid = {4};
    c.epsilon_grid = {0, 0.3, 0.5, 0.7};
    c.replications = 300;
    c.methods = {Method::Tn};
    c.master_seed = 5;
    const auto report = run_experiment(c);
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        EXPECT_GE(*report.rows[i].rejection_rate, *report.rows[i - 1].rejection_rate - 0.05);
        EXPECT_GT(*report.rows[i].lambda, *report.rows[i - 1].lambda);
    }
}
