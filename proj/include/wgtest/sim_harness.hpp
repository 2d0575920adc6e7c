#ifndef WGTEST_SIM_HARNESS_HPP
#define WGTEST_SIM_HARNESS_HPP

/**
 * @file sim_harness.hpp
 *
 * @brief Replicated size/power experiments over (n, m, epsilon) grids.
 *
 * Replicate r of a cell draws G_1..G_m from the design and H_1..H_m from the design
 * shifted by the cell's epsilon (epsilon = 0 is the null), draws one random partition,
 * and evaluates every requested statistic on the same data. Each replicate owns the
 * stream StreamKey(master_seed).child(cell_key, r), so tallies do not depend on how
 * replicates are scheduled across threads.
 */

#include "wgtest/error.hpp"
#include "wgtest/model_gen.hpp"
#include "wgtest/parallel.hpp"
#include "wgtest/random.hpp"
#include "wgtest/theory.hpp"
#include "wgtest/two_sample_test.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace wgtest {

struct ExperimentConfig {
    TwoBlockModel design;  ///< n and epsilon are taken from the grids
    std::vector<std::size_t> n_grid;
    std::vector<std::size_t> m_grid;
    std::vector<double> epsilon_grid;
    std::size_t replications = 1000;
    double alpha = 0.05;
    std::uint64_t master_seed = 0;
    std::vector<Method> methods{Method::Tn, Method::Tfro};

    void validate() const {
        if (n_grid.empty() || m_grid.empty() || epsilon_grid.empty() || methods.empty()) {
            throw Error(ErrorCode::ConfigError, "grids and method list must be non-empty");
        }
        if (replications < 1) {
            throw Error(ErrorCode::ConfigError, "replications must be >= 1");
        }
        critical_value(alpha);
        for (auto m : m_grid) {
            check_sample_size(m);
        }
        for (auto n : n_grid) {
            for (auto eps : epsilon_grid) {
                cell_model(n, eps).validate();
            }
        }
    }

    TwoBlockModel cell_model(std::size_t n, double epsilon) const {
        TwoBlockModel model = design;
        model.n = n;
        model.epsilon = epsilon;
        return model;
    }
};

struct CellSpec {
    std::size_t n = 0;
    std::size_t m = 0;
    double epsilon = 0;

    /// Stream key component; depends only on the cell, not its position in a grid.
    std::uint64_t key() const {
        return splitmix64(splitmix64(n) ^ splitmix64(m + 0x5bd1e995ULL) ^ std::bit_cast<std::uint64_t>(epsilon));
    }
};

struct CellResult {
    std::size_t n = 0;
    std::size_t m = 0;
    double epsilon = 0;
    Method method = Method::Tn;
    std::size_t reject_count = 0;
    std::size_t fail_count = 0;
    std::size_t na_count = 0;
    std::size_t replications = 0;
    std::optional<double> rejection_rate;  ///< rejections / (replications - NA); empty if all NA
    std::optional<double> lambda;          ///< theoretical power parameter of the cell
};

struct SimulationReport {
    std::uint64_t master_seed = 0;
    std::vector<CellResult> rows;
};

/// Unthresholded results of one replicate, one per requested method.
inline std::vector<TestResult> run_replicate(const TwoBlockModel& model, std::size_t m,
                                             std::span<const Method> methods, StreamKey key) {
    const GraphSample g = sample_population(model, false, m, key.child(0));
    const GraphSample h = sample_population(model, true, m, key.child(1));
    RandomStream split_rng(key.child(2));
    const Partition part = random_partition(m, split_rng);
    bool need_tfro = false;
    for (auto method : methods) {
        need_tfro = need_tfro || method == Method::Tfro;
    }
    const StatisticParts parts = statistic_parts(g, h, part, need_tfro);
    std::vector<TestResult> out;
    out.reserve(methods.size());
    for (auto method : methods) {
        out.push_back(result_from_parts(method, parts));
    }
    return out;
}

inline StreamKey replicate_key(std::uint64_t master_seed, const CellSpec& cell, std::size_t replicate) {
    return StreamKey(master_seed).child(cell.key(), replicate);
}

/// All replicate results of a cell, indexed [replicate][method].
inline std::vector<std::vector<TestResult>> simulate_cell(const TwoBlockModel& design, const CellSpec& cell,
                                                          std::size_t replications, std::span<const Method> methods,
                                                          std::uint64_t master_seed, std::size_t threads) {
    TwoBlockModel model = design;
    model.n = cell.n;
    model.epsilon = cell.epsilon;
    model.validate();
    check_sample_size(cell.m);
    std::vector<std::vector<TestResult>> results(replications);
    try {
        parallel_for(replications, threads, [&](std::size_t r) {
            results[r] = run_replicate(model, cell.m, methods, replicate_key(master_seed, cell, r));
        });
    } catch (const Error& e) {
        std::ostringstream ctx;
        ctx << "cell n=" << cell.n << " m=" << cell.m << " epsilon=" << cell.epsilon << ": " << e.what();
        throw Error(e.code(), ctx.str());
    }
    return results;
}

inline std::optional<double> cell_lambda(const TwoBlockModel& design, const CellSpec& cell) {
    TwoBlockModel model = design;
    model.n = cell.n;
    model.epsilon = cell.epsilon;
    try {
        return lambda_n(moments_from_model(model, cell.m));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::DegenerateModel) {
            return std::nullopt;
        }
        throw;
    }
}

/// One CellResult per method, in the order given.
inline std::vector<CellResult> run_cell(const TwoBlockModel& design, const CellSpec& cell, std::size_t replications,
                                        double alpha, std::span<const Method> methods, std::uint64_t master_seed,
                                        std::size_t threads = 1) {
    const double critical = critical_value(alpha);
    const auto results = simulate_cell(design, cell, replications, methods, master_seed, threads);
    const auto lambda = cell_lambda(design, cell);
    std::vector<CellResult> out;
    for (std::size_t k = 0; k < methods.size(); ++k) {
        CellResult row;
        row.n = cell.n;
        row.m = cell.m;
        row.epsilon = cell.epsilon;
        row.method = methods[k];
        row.replications = replications;
        row.lambda = lambda;
        for (const auto& rep : results) {
            const TestResult decided = decide_with_critical(rep[k], alpha, critical);
            if (decided.is_na()) {
                ++row.na_count;
            } else if (*decided.reject) {
                ++row.reject_count;
            } else {
                ++row.fail_count;
            }
        }
        if (row.na_count < replications) {
            row.rejection_rate =
                static_cast<double>(row.reject_count) / static_cast<double>(replications - row.na_count);
        }
        out.push_back(row);
    }
    return out;
}

inline CellResult run_cell(const TwoBlockModel& design, const CellSpec& cell, std::size_t replications, double alpha,
                           Method method, std::uint64_t master_seed, std::size_t threads = 1) {
    const Method methods[] = {method};
    return run_cell(design, cell, replications, alpha, methods, master_seed, threads).front();
}

/// Cells in n-major, then m, then epsilon order; within a cell, rows follow `config.methods`.
inline SimulationReport run_experiment(const ExperimentConfig& config, std::size_t threads = 1) {
    config.validate();
    SimulationReport report;
    report.master_seed = config.master_seed;
    for (auto n : config.n_grid) {
        for (auto m : config.m_grid) {
            for (auto eps : config.epsilon_grid) {
                auto rows = run_cell(config.design, {n, m, eps}, config.replications, config.alpha, config.methods,
                                     config.master_seed, threads);
                report.rows.insert(report.rows.end(), rows.begin(), rows.end());
            }
        }
    }
    return report;
}

inline constexpr const char* report_header = "n,m,epsilon,method,rejections,na,replications,rate,lambda";

inline void write_report(std::ostream& out, const SimulationReport& report) {
    out << report_header << '\n';
    for (const auto& row : report.rows) {
        char rate[32] = "NA";
        if (row.rejection_rate) {
            std::snprintf(rate, sizeof(rate), "%.4f", *row.rejection_rate);
        }
        out << row.n << ',' << row.m << ',' << detail::format_double(row.epsilon) << ',' << method_name(row.method)
            << ',' << row.reject_count << ',' << row.na_count << ',' << row.replications << ',' << rate << ','
            << (row.lambda ? detail::format_double(*row.lambda) : std::string("NA")) << '\n';
    }
}

inline void emit_report(const SimulationReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot write " + path);
    }
    write_report(out, report);
    if (!out) {
        throw Error(ErrorCode::IoError, "write failed for " + path);
    }
}

/// Reads a report written by `write_report`. fail_count is reconstructed from the other tallies.
inline SimulationReport parse_report(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != report_header) {
        throw Error(ErrorCode::IoError, "missing or unexpected report header");
    }
    SimulationReport report;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) {
            fields.push_back(f);
        }
        if (fields.size() != 9) {
            throw Error(ErrorCode::IoError, "report row has " + std::to_string(fields.size()) + " fields: " + line);
        }
        auto as_size = [&](const std::string& s) { return static_cast<std::size_t>(detail::parse_double(s, line)); };
        CellResult row;
        row.n = as_size(fields[0]);
        row.m = as_size(fields[1]);
        row.epsilon = detail::parse_double(fields[2], line);
        row.method = parse_method(fields[3]);
        row.reject_count = as_size(fields[4]);
        row.na_count = as_size(fields[5]);
        row.replications = as_size(fields[6]);
        row.fail_count = row.replications - row.reject_count - row.na_count;
        if (fields[7] != "NA") {
            row.rejection_rate = detail::parse_double(fields[7], line);
        }
        if (fields[8] != "NA") {
            row.lambda = detail::parse_double(fields[8], line);
        }
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace wgtest

#endif
