#ifndef WGTEST_GRAPH_CORE_HPP
#define WGTEST_GRAPH_CORE_HPP

/**
 * @file graph_core.hpp
 *
 * @brief Weighted adjacency matrices, graph samples and small shared utilities.
 *
 * An `AdjacencyMatrix` is an undirected weighted graph without self-loops.
 * Only the strict upper triangle is stored, packed row by row:
 * (0,1), (0,2), ..., (0,n-1), (1,2), ..., (n-2,n-1).
 * Every statistic in this library is a sum over unordered pairs, so the packed
 * layout is also the layout the hot loops iterate over.
 */

#include "wgtest/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace wgtest {

/// Number of unordered pairs among n nodes.
inline constexpr std::size_t pair_count(std::size_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

/// Packed index of pair (i, j), i < j.
inline constexpr std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n) {
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

class AdjacencyMatrix {
public:
    /// All-zero graph on n nodes.
    static AdjacencyMatrix zeros(std::size_t n) {
        check_node_count(n);
        return AdjacencyMatrix(n, std::vector<double>(pair_count(n), 0.0));
    }

    /**
     * Build from packed upper-triangle weights.
     * Symmetry and the zero diagonal hold by construction; only finiteness is checked.
     */
    static AdjacencyMatrix from_upper(std::size_t n, std::vector<double> upper) {
        check_node_count(n);
        if (upper.size() != pair_count(n)) {
            throw Error(ErrorCode::DimensionMismatch,
                        "expected " + std::to_string(pair_count(n)) + " upper-triangle weights, got " +
                            std::to_string(upper.size()));
        }
        for (std::size_t i = 0, p = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j, ++p) {
                if (!std::isfinite(upper[p])) {
                    throw Error(ErrorCode::NonFiniteEntry,
                                "entry (" + std::to_string(i) + "," + std::to_string(j) + ") is not finite");
                }
            }
        }
        return AdjacencyMatrix(n, std::move(upper));
    }

    std::size_t n() const noexcept { return n_; }

    double operator()(std::size_t i, std::size_t j) const noexcept {
        if (i == j) {
            return 0.0;
        }
        if (i > j) {
            std::swap(i, j);
        }
        return upper_[pair_index(i, j, n_)];
    }

    std::span<const double> upper() const noexcept { return upper_; }

    /// Dense row-major copy, diagonal included.
    std::vector<double> dense() const {
        std::vector<double> out(n_ * n_, 0.0);
        for (std::size_t i = 0, p = 0; i < n_; ++i) {
            for (std::size_t j = i + 1; j < n_; ++j, ++p) {
                out[i * n_ + j] = upper_[p];
                out[j * n_ + i] = upper_[p];
            }
        }
        return out;
    }

    friend bool operator==(const AdjacencyMatrix&, const AdjacencyMatrix&) = default;

private:
    AdjacencyMatrix(std::size_t n, std::vector<double> upper) : n_(n), upper_(std::move(upper)) {}

    static void check_node_count(std::size_t n) {
        if (n < 2) {
            throw Error(ErrorCode::InvalidArgument, "a graph needs at least 2 nodes, got " + std::to_string(n));
        }
    }

    std::size_t n_ = 0;
    std::vector<double> upper_;
};

/**
 * Ordered list of graphs over a common node set.
 * Members are shared immutable matrices, so copying or resampling a sample never copies weights.
 */
class GraphSample {
public:
    GraphSample() = default;

    explicit GraphSample(std::vector<AdjacencyMatrix> graphs) {
        graphs_.reserve(graphs.size());
        for (auto& g : graphs) {
            push_back(std::make_shared<const AdjacencyMatrix>(std::move(g)));
        }
    }

    explicit GraphSample(std::vector<std::shared_ptr<const AdjacencyMatrix>> graphs) {
        graphs_.reserve(graphs.size());
        for (auto& g : graphs) {
            push_back(std::move(g));
        }
    }

    void push_back(std::shared_ptr<const AdjacencyMatrix> g) {
        if (!g) {
            throw Error(ErrorCode::InvalidArgument, "null graph in sample");
        }
        if (!graphs_.empty() && g->n() != n()) {
            throw Error(ErrorCode::DimensionMismatch,
                        "graph " + std::to_string(graphs_.size()) + " has " + std::to_string(g->n()) +
                            " nodes, sample has " + std::to_string(n()));
        }
        graphs_.push_back(std::move(g));
    }

    std::size_t m() const noexcept { return graphs_.size(); }
    std::size_t n() const noexcept { return graphs_.empty() ? 0 : graphs_.front()->n(); }
    bool empty() const noexcept { return graphs_.empty(); }

    const AdjacencyMatrix& operator[](std::size_t k) const { return *graphs_[k]; }
    const std::shared_ptr<const AdjacencyMatrix>& handle(std::size_t k) const { return graphs_[k]; }

    /// Sample made of the members at the given positions, in that order.
    GraphSample select(std::span<const std::size_t> positions) const {
        GraphSample out;
        out.graphs_.reserve(positions.size());
        for (auto k : positions) {
            out.graphs_.push_back(graphs_.at(k));
        }
        return out;
    }

private:
    std::vector<std::shared_ptr<const AdjacencyMatrix>> graphs_;
};

struct FiveNumberSummary {
    double min = 0;
    double q1 = 0;
    double median = 0;
    double q3 = 0;
    double max = 0;
};

/**
 * Check and repair a raw square matrix given in row-major order.
 *
 * The diagonal is dropped (forced to zero). Off-diagonal pairs that differ by at most
 * `tolerance` are replaced by their average; larger differences are rejected.
 */
inline AdjacencyMatrix validate_adjacency(std::span<const double> raw, std::size_t n, double tolerance) {
    if (n < 2 || raw.size() != n * n) {
        throw Error(ErrorCode::NonSquare, "expected a square matrix with n >= 2, got " + std::to_string(raw.size()) +
                                              " entries for n = " + std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(raw[i * n + j])) {
                throw Error(ErrorCode::NonFiniteEntry,
                            "entry (" + std::to_string(i) + "," + std::to_string(j) + ") is not finite");
            }
        }
    }
    std::vector<double> upper;
    upper.reserve(pair_count(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double a = raw[i * n + j];
            const double b = raw[j * n + i];
            if (std::abs(a - b) > tolerance) {
                throw Error(ErrorCode::AsymmetryBeyondTolerance,
                            "entries (" + std::to_string(i) + "," + std::to_string(j) + ") and (" + std::to_string(j) +
                                "," + std::to_string(i) + ") differ by " + std::to_string(std::abs(a - b)));
            }
            upper.push_back(a == b ? a : 0.5 * (a + b));
        }
    }
    return AdjacencyMatrix::from_upper(n, std::move(upper));
}

inline AdjacencyMatrix validate_adjacency(const std::vector<std::vector<double>>& raw, double tolerance) {
    const std::size_t n = raw.size();
    std::vector<double> flat;
    flat.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (raw[i].size() != n) {
            throw Error(ErrorCode::NonSquare, "row " + std::to_string(i) + " has " + std::to_string(raw[i].size()) +
                                                  " entries, expected " + std::to_string(n));
        }
        flat.insert(flat.end(), raw[i].begin(), raw[i].end());
    }
    return validate_adjacency(flat, n, tolerance);
}

/// Binary graph with an edge wherever |weight| > tau. Ties at tau map to 0.
inline AdjacencyMatrix threshold_binarize(const AdjacencyMatrix& g, double tau) {
    if (!(tau >= 0)) {
        throw Error(ErrorCode::InvalidArgument, "threshold must be non-negative");
    }
    std::vector<double> upper(g.upper().begin(), g.upper().end());
    for (auto& w : upper) {
        w = std::abs(w) > tau ? 1.0 : 0.0;
    }
    return AdjacencyMatrix::from_upper(g.n(), std::move(upper));
}

/**
 * Min, quartiles and max. Quartiles interpolate linearly between order statistics
 * at position (len - 1) * p, so even-length medians fall on the midpoint.
 */
inline FiveNumberSummary five_number_summary(std::span<const double> values) {
    if (values.empty()) {
        throw Error(ErrorCode::EmptyInput, "five-number summary of an empty list");
    }
    std::vector<double> sorted(values.begin(), values.end());
    for (double v : sorted) {
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::NonFiniteEntry, "five-number summary input is not finite");
        }
    }
    std::sort(sorted.begin(), sorted.end());
    auto quantile = [&](double p) {
        const double h = static_cast<double>(sorted.size() - 1) * p;
        const auto lo = static_cast<std::size_t>(std::floor(h));
        const auto hi = std::min(lo + 1, sorted.size() - 1);
        return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
    };
    return {sorted.front(), quantile(0.25), quantile(0.5), quantile(0.75), sorted.back()};
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

inline double parse_double(std::string_view token, const std::string& context) {
    token = trim(token);
    if (!token.empty() && token.front() == '+') {
        token.remove_prefix(1);
    }
    double value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw Error(ErrorCode::IoError, context + ": cannot parse '" + std::string(token) + "' as a number");
    }
    return value;
}

inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace detail

/// Parse n lines of n comma-separated numbers, no header.
inline AdjacencyMatrix parse_adjacency_csv(std::istream& in, double tolerance, const std::string& source = "<stream>") {
    std::vector<double> flat;
    std::size_t n = 0;
    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        auto view = detail::trim(line);
        if (view.empty()) {
            continue;
        }
        std::size_t cols = 0;
        while (true) {
            const auto comma = view.find(',');
            flat.push_back(detail::parse_double(view.substr(0, comma),
                                                source + " line " + std::to_string(rows + 1)));
            ++cols;
            if (comma == std::string_view::npos) {
                break;
            }
            view.remove_prefix(comma + 1);
        }
        if (rows == 0) {
            n = cols;
        } else if (cols != n) {
            throw Error(ErrorCode::NonSquare, source + ": line " + std::to_string(rows + 1) + " has " +
                                                  std::to_string(cols) + " values, expected " + std::to_string(n));
        }
        ++rows;
    }
    if (rows != n) {
        throw Error(ErrorCode::NonSquare,
                    source + ": " + std::to_string(rows) + " rows of " + std::to_string(n) + " values");
    }
    try {
        return validate_adjacency(flat, n, tolerance);
    } catch (const Error& e) {
        throw Error(e.code(), source + ": " + e.what());
    }
}

inline AdjacencyMatrix read_adjacency_csv(const std::string& path, double tolerance) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open " + path);
    }
    return parse_adjacency_csv(in, tolerance, path);
}

/// Writes the full symmetric matrix with shortest round-trip decimal formatting.
inline void write_adjacency_csv(std::ostream& out, const AdjacencyMatrix& g) {
    const auto n = g.n();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j) {
                out << ',';
            }
            out << detail::format_double(g(i, j));
        }
        out << '\n';
    }
}

inline void write_adjacency_csv(const std::string& path, const AdjacencyMatrix& g) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot write " + path);
    }
    write_adjacency_csv(out, g);
    if (!out) {
        throw Error(ErrorCode::IoError, "write failed for " + path);
    }
}

}  // namespace wgtest

#endif
