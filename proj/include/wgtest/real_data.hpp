#ifndef WGTEST_REAL_DATA_HPP
#define WGTEST_REAL_DATA_HPP

/**
 * @file real_data.hpp
 *
 * @brief Testing two observed groups of subject networks.
 *
 * Groups rarely have equal sizes, while the statistic pairs G_k with H_k. Each
 * repetition therefore equalizes the groups (oversampling the smaller one or
 * subsampling the larger one), draws a fresh random split, and evaluates the
 * statistics. Repetitions are summarized by five-number summaries.
 */

#include "wgtest/error.hpp"
#include "wgtest/graph_core.hpp"
#include "wgtest/parallel.hpp"
#include "wgtest/random.hpp"
#include "wgtest/two_sample_test.hpp"

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace wgtest {

struct GroupDataset {
    std::string label;
    GraphSample sample;
    std::vector<std::string> source_paths;
};

/// Every *.csv file of a directory, in lexicographic file-name order.
inline GroupDataset load_group(const std::string& dir, double tolerance = 1e-8) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        throw Error(ErrorCode::IoError, "not a directory: " + dir);
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") {
            files.push_back(entry.path());
        }
    }
    if (ec) {
        throw Error(ErrorCode::IoError, "cannot list " + dir + ": " + ec.message());
    }
    if (files.empty()) {
        throw Error(ErrorCode::EmptyInput, "no .csv files in " + dir);
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });

    GroupDataset group;
    group.label = fs::path(dir).filename().string();
    for (const auto& path : files) {
        AdjacencyMatrix g = read_adjacency_csv(path.string(), tolerance);
        if (!group.sample.empty() && g.n() != group.sample.n()) {
            throw Error(ErrorCode::MixedDimensions, path.string() + " is " + std::to_string(g.n()) + "x" +
                                                        std::to_string(g.n()) + " but " +
                                                        group.source_paths.front() + " is " +
                                                        std::to_string(group.sample.n()) + "x" +
                                                        std::to_string(group.sample.n()));
        }
        group.sample.push_back(std::make_shared<const AdjacencyMatrix>(std::move(g)));
        group.source_paths.push_back(path.string());
    }
    return group;
}

enum class Strategy { OversampleSmaller, SubsampleLarger, SplitOnly };

inline std::string strategy_name(Strategy s) {
    switch (s) {
        case Strategy::OversampleSmaller: return "oversample";
        case Strategy::SubsampleLarger: return "subsample";
        case Strategy::SplitOnly: return "split-only";
    }
    return "";
}

inline Strategy parse_strategy(const std::string& s) {
    if (s == "oversample") {
        return Strategy::OversampleSmaller;
    }
    if (s == "subsample") {
        return Strategy::SubsampleLarger;
    }
    if (s == "split-only") {
        return Strategy::SplitOnly;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown strategy '" + s + "' (oversample, subsample, split-only)");
}

struct ResamplingPlan {
    Strategy strategy = Strategy::SplitOnly;
    std::size_t repetitions = 100;
    std::uint64_t seed = 0;
    /// Discard the last member of each equalized sample when the common size is odd.
    bool drop_last = false;
};

namespace detail {

/// `count` distinct positions out of [0, size), by a partial Fisher-Yates shuffle.
inline std::vector<std::size_t> draw_without_replacement(std::size_t size, std::size_t count, RandomStream& rng) {
    std::vector<std::size_t> pool(size);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < count; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.index(size - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    return pool;
}

}  // namespace detail

/**
 * Bring both groups to a common size.
 *
 * Oversampling appends (m_large - m_small) members of the smaller group, drawn without
 * replacement when the deficit fits in the group and with replacement otherwise.
 * Subsampling keeps m_small distinct members of the larger group, in input order.
 */
inline std::pair<GraphSample, GraphSample> equalize(const GraphSample& a, const GraphSample& b,
                                                    const ResamplingPlan& plan, RandomStream& rng) {
    if (a.empty() || b.empty()) {
        throw Error(ErrorCode::EmptyInput, "cannot equalize an empty group");
    }
    if (a.n() != b.n()) {
        throw Error(ErrorCode::DimensionMismatch, "groups have different node counts");
    }
    std::pair<GraphSample, GraphSample> out{a, b};
    const bool a_smaller = a.m() < b.m();
    const GraphSample& small = a_smaller ? a : b;
    const GraphSample& large = a_smaller ? b : a;
    GraphSample& small_out = a_smaller ? out.first : out.second;
    GraphSample& large_out = a_smaller ? out.second : out.first;

    switch (plan.strategy) {
        case Strategy::SplitOnly:
            if (a.m() != b.m()) {
                throw Error(ErrorCode::UnequalWithSplitOnly, "groups of sizes " + std::to_string(a.m()) + " and " +
                                                                 std::to_string(b.m()) + " need resampling");
            }
            break;
        case Strategy::OversampleSmaller: {
            const std::size_t deficit = large.m() - small.m();
            if (deficit <= small.m()) {
                for (auto k : detail::draw_without_replacement(small.m(), deficit, rng)) {
                    small_out.push_back(small.handle(k));
                }
            } else {
                for (std::size_t i = 0; i < deficit; ++i) {
                    small_out.push_back(small.handle(static_cast<std::size_t>(rng.index(small.m()))));
                }
            }
            break;
        }
        case Strategy::SubsampleLarger: {
            auto keep = detail::draw_without_replacement(large.m(), small.m(), rng);
            std::sort(keep.begin(), keep.end());
            large_out = large.select(keep);
            break;
        }
    }

    if (plan.drop_last && out.first.m() % 2 == 1) {
        std::vector<std::size_t> head(out.first.m() - 1);
        std::iota(head.begin(), head.end(), std::size_t{0});
        out.first = out.first.select(head);
        out.second = out.second.select(head);
    }
    return out;
}

struct MethodSummary {
    Method method = Method::Tn;
    std::vector<TestResult> results;  ///< one per repetition, decided at the requested alpha
    std::optional<FiveNumberSummary> summary;  ///< over non-NA statistics; empty when all are NA
    std::size_t na_count = 0;
};

/// Per-method outcomes of every repetition, in the order of `methods`. Never throws AllNA.
inline std::vector<MethodSummary> run_repetitions(const GraphSample& a, const GraphSample& b,
                                                  const ResamplingPlan& plan, std::span<const Method> methods,
                                                  double alpha, std::size_t threads = 1) {
    if (plan.repetitions < 1) {
        throw Error(ErrorCode::InvalidArgument, "repetitions must be >= 1");
    }
    const double critical = critical_value(alpha);
    bool need_tfro = false;
    for (auto method : methods) {
        need_tfro = need_tfro || method == Method::Tfro;
    }
    std::vector<StatisticParts> parts(plan.repetitions);
    parallel_for(plan.repetitions, threads, [&](std::size_t r) {
        const StreamKey key = StreamKey(plan.seed).child(r);
        RandomStream equalize_rng(key.child(0));
        const auto [g, h] = equalize(a, b, plan, equalize_rng);
        RandomStream split_rng(key.child(1));
        const Partition part = random_partition(g.m(), split_rng);
        parts[r] = statistic_parts(g, h, part, need_tfro);
    });

    std::vector<MethodSummary> out;
    for (auto method : methods) {
        MethodSummary ms;
        ms.method = method;
        std::vector<double> values;
        for (const auto& p : parts) {
            ms.results.push_back(decide_with_critical(result_from_parts(method, p), alpha, critical));
            if (ms.results.back().is_na()) {
                ++ms.na_count;
            } else {
                values.push_back(*ms.results.back().statistic);
            }
        }
        if (!values.empty()) {
            ms.summary = five_number_summary(values);
        }
        out.push_back(std::move(ms));
    }
    return out;
}

/// Single-method repetitions; throws AllNA when no repetition yields a statistic.
inline MethodSummary repeated_tests(const GraphSample& a, const GraphSample& b, const ResamplingPlan& plan,
                                    Method method, double alpha, std::size_t threads = 1) {
    const Method methods[] = {method};
    auto out = run_repetitions(a, b, plan, methods, alpha, threads);
    if (!out.front().summary) {
        throw Error(ErrorCode::AllNA, "all " + std::to_string(plan.repetitions) + " repetitions of " +
                                          method_name(method) + " have a vanishing denominator");
    }
    return std::move(out.front());
}

struct SweepRow {
    double tau = 0;
    std::vector<MethodSummary> methods;
};

/// Binarize both groups at each threshold and rerun the repetitions with the same streams.
inline std::vector<SweepRow> threshold_sweep(const GraphSample& a, const GraphSample& b, std::span<const double> taus,
                                             const ResamplingPlan& plan, std::span<const Method> methods,
                                             double alpha, std::size_t threads = 1) {
    auto binarize_all = [](const GraphSample& s, double tau) {
        GraphSample out;
        for (std::size_t k = 0; k < s.m(); ++k) {
            out.push_back(std::make_shared<const AdjacencyMatrix>(threshold_binarize(s[k], tau)));
        }
        return out;
    };
    std::vector<SweepRow> rows;
    for (double tau : taus) {
        rows.push_back({tau, run_repetitions(binarize_all(a, tau), binarize_all(b, tau), plan, methods, alpha,
                                             threads)});
    }
    return rows;
}

inline constexpr const char* summary_header = "strategy,tau,method,min,q1,median,q3,max,na_count";

inline void write_summary_row(std::ostream& out, Strategy strategy, std::optional<double> tau,
                              const MethodSummary& ms) {
    out << strategy_name(strategy) << ',' << (tau ? detail::format_double(*tau) : std::string()) << ','
        << method_name(ms.method);
    if (ms.summary) {
        const auto& s = *ms.summary;
        for (double v : {s.min, s.q1, s.median, s.q3, s.max}) {
            out << ',' << detail::format_double(v);
        }
    } else {
        out << ",NA,NA,NA,NA,NA";
    }
    out << ',' << ms.na_count << '\n';
}

}  // namespace wgtest

#endif
