// wgtest: command-line front end for the weighted-graph two-sample tests.
//
// Exit codes: 0 success, 1 usage error, 2 runtime error.

#include "wgtest/wgtest.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using wgtest::Error;
using wgtest::ErrorCode;
using ojson = nlohmann::ordered_json;

struct GlobalOptions {
    std::uint64_t seed = 0;
    std::string output_format = "json";
    std::size_t threads = 1;
};

std::vector<wgtest::Method> parse_methods(const std::string& choice) {
    if (choice == "both") {
        return {wgtest::Method::Tn, wgtest::Method::Tfro};
    }
    return {wgtest::parse_method(choice)};
}

ojson optional_number(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

std::string fmt(double v) { return wgtest::detail::format_double(v); }

// ---------------------------------------------------------------------------

struct GenerateOptions {
    std::string model_path;
    std::size_t m = 0;
    std::string out_dir;
    bool shifted = false;
};

int run_generate(const GenerateOptions& opt, const GlobalOptions& global) {
    const auto spec = wgtest::parse_model_spec(wgtest::read_json_file(opt.model_path));
    const auto sample = wgtest::sample_population(spec.model, opt.shifted, opt.m, wgtest::StreamKey(global.seed));
    std::error_code ec;
    std::filesystem::create_directories(opt.out_dir, ec);
    if (ec) {
        throw Error(ErrorCode::IoError, "cannot create " + opt.out_dir + ": " + ec.message());
    }
    for (std::size_t k = 0; k < sample.m(); ++k) {
        char name[32];
        std::snprintf(name, sizeof(name), "graph_%04zu.csv", k);
        wgtest::write_adjacency_csv((std::filesystem::path(opt.out_dir) / name).string(), sample[k]);
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct TestOptions {
    std::string group_a;
    std::string group_b;
    std::string method = "tn";
    double alpha = 0.05;
    std::size_t splits = 1;
    bool drop_last = false;
    double symmetry_tol = 1e-8;
};

int run_test(const TestOptions& opt, const GlobalOptions& global) {
    const auto a = wgtest::load_group(opt.group_a, opt.symmetry_tol);
    const auto b = wgtest::load_group(opt.group_b, opt.symmetry_tol);
    if (a.sample.m() != b.sample.m()) {
        throw Error(ErrorCode::SampleSizeMismatch, "groups have " + std::to_string(a.sample.m()) + " and " +
                                                       std::to_string(b.sample.m()) +
                                                       " graphs; use realdata to resample");
    }
    wgtest::GraphSample g = a.sample;
    wgtest::GraphSample h = b.sample;
    if (opt.drop_last && g.m() % 2 == 1) {
        std::vector<std::size_t> head(g.m() - 1);
        for (std::size_t k = 0; k < head.size(); ++k) {
            head[k] = k;
        }
        g = g.select(head);
        h = h.select(head);
    }
    if (opt.splits < 1) {
        throw Error(ErrorCode::InvalidArgument, "--splits must be >= 1");
    }
    const auto methods = parse_methods(opt.method);
    const double critical = wgtest::critical_value(opt.alpha);

    std::ostringstream out;
    if (global.output_format == "csv") {
        out << "split,method,statistic,p_value,reject,na_reason\n";
    } else if (global.output_format == "table") {
        out << std::left << std::setw(6) << "split" << std::setw(7) << "method" << std::setw(14) << "statistic"
            << std::setw(14) << "p_value" << std::setw(8) << "reject" << "na_reason\n";
    }
    for (std::size_t s = 0; s < opt.splits; ++s) {
        wgtest::RandomStream rng(wgtest::StreamKey(global.seed).child(s));
        const auto part = wgtest::random_partition(g.m(), rng);
        const auto parts = wgtest::statistic_parts(g, h, part, true);
        for (auto method : methods) {
            const auto r = wgtest::decide_with_critical(wgtest::result_from_parts(method, parts), opt.alpha, critical);
            const std::string reason = wgtest::na_reason_name(r.na_reason);
            if (global.output_format == "json") {
                ojson obj;
                obj["split"] = s;
                obj["method"] = wgtest::method_name(method);
                obj["statistic"] = optional_number(r.statistic);
                obj["p_value"] = optional_number(r.p_value);
                obj["reject"] = r.reject ? ojson(*r.reject) : ojson(nullptr);
                obj["na_reason"] = r.is_na() ? ojson(reason) : ojson(nullptr);
                obj["numerator"] = r.numerator;
                obj["denominator_sq"] = r.denominator_sq;
                out << obj.dump() << '\n';
            } else if (global.output_format == "csv") {
                out << s << ',' << wgtest::method_name(method) << ',' << (r.statistic ? fmt(*r.statistic) : "NA")
                    << ',' << (r.p_value ? fmt(*r.p_value) : "NA") << ','
                    << (r.reject ? (*r.reject ? "true" : "false") : "NA") << ',' << reason << '\n';
            } else {
                char stat[32] = "NA", pval[32] = "NA";
                if (r.statistic) {
                    std::snprintf(stat, sizeof(stat), "%.4f", *r.statistic);
                    std::snprintf(pval, sizeof(pval), "%.4g", *r.p_value);
                }
                out << std::left << std::setw(6) << s << std::setw(7) << wgtest::method_name(method) << std::setw(14)
                    << stat << std::setw(14) << pval << std::setw(8)
                    << (r.reject ? (*r.reject ? "yes" : "no") : "NA") << reason << '\n';
            }
        }
    }
    std::cout << out.str();
    return 0;
}

// ---------------------------------------------------------------------------

struct TheoryOptions {
    std::string config;
    std::size_t m = 0;
    double delta = 0.05;
};

template <typename Fn>
ojson or_degenerate(Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::DegenerateModel) {
            return ojson(nullptr);
        }
        throw;
    }
}

int run_theory(const TheoryOptions& opt, const GlobalOptions& global) {
    const auto spec = wgtest::parse_model_spec(wgtest::read_json_file(opt.config));
    const std::size_t m = opt.m > 0 ? opt.m : spec.m.value_or(2);
    const auto mm = wgtest::moments_from_model(spec.model, m);

    ojson report;
    report["model"] = wgtest::model_spec_to_json(spec.model);
    report["m"] = m;
    report["sigma_n2"] = wgtest::null_variance(mm);
    report["tau_n2"] = [&] {
        double s = 0;
        for (double mu : mm.mu1) {
            s += static_cast<double>(m * m) * mu * mu;
        }
        return s;
    }();
    report["condition_ratios"] = or_degenerate([&] {
        const auto r = wgtest::condition_ratios(mm);
        ojson c;
        c["n_over_sum_sigma4"] = r.nodes_over_sigma4;
        c["sum_sigma8_over_sum_sigma4_sq"] = r.sigma8_over_sigma4sq;
        c["sum_sigma4_eta_over_m_sum_sigma4_sq"] = r.sigma4eta;
        c["sum_eta_sq_over_m2_sum_sigma4_sq"] = r.eta_sq;
        c["heuristic_all_below_0.1"] = r.all_below(0.1);
        c["heuristic_note"] = "advisory only: the conditions are asymptotic and have no finite-sample cutoff";
        return c;
    });
    report["tfro_consistency_ratio"] = or_degenerate([&] { return ojson(wgtest::tfro_consistency_ratio(mm)); });
    report["lambda_n"] = or_degenerate([&] { return ojson(wgtest::lambda_n(mm)); });
    report["alternative_conditions"] = or_degenerate([&] {
        const auto a = wgtest::alternative_conditions(mm);
        ojson c;
        c["n_over_m_sum_V2"] = a.statement_form;
        c["nm_over_m4_sum_V2"] = a.proof_form;
        return c;
    });
    if (spec.model.family() == wgtest::Family::Bernoulli) {
        const auto d = wgtest::bernoulli_condition(mm.mu1, mm.n, opt.delta);
        ojson c;
        c["n"] = d.n;
        c["frobenius_sq"] = d.frobenius_sq;
        c["ratio"] = d.degenerate ? ojson(nullptr) : ojson(d.ratio);
        c["degenerate"] = d.degenerate;
        c["delta"] = opt.delta;
        c["violating_pairs"] = d.violations.size();
        report["bernoulli_condition"] = c;
    }

    if (global.output_format == "json") {
        std::cout << report.dump(2) << '\n';
    } else {
        // Flat key/value listing for csv and table.
        const char sep = global.output_format == "csv" ? ',' : '\t';
        if (global.output_format == "csv") {
            std::cout << "key,value\n";
        }
        auto flatten = [&](auto&& self, const ojson& node, const std::string& prefix) -> void {
            if (node.is_object()) {
                for (const auto& item : node.items()) {
                    self(self, item.value(), prefix.empty() ? item.key() : prefix + "." + item.key());
                }
            } else {
                std::cout << prefix << sep << node.dump() << '\n';
            }
        };
        flatten(flatten, report, "");
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct SimulateOptions {
    std::string config;
    std::string out;
};

int run_simulate(const SimulateOptions& opt, const GlobalOptions& global) {
    const auto config = wgtest::parse_experiment_config(wgtest::read_json_file(opt.config));
    const auto report = wgtest::run_experiment(config, global.threads);
    wgtest::emit_report(report, opt.out);
    return 0;
}

// ---------------------------------------------------------------------------

struct RealDataOptions {
    std::string group_a;
    std::string group_b;
    std::string strategy = "oversample";
    std::size_t reps = 100;
    std::string taus;
    std::string method = "both";
    double alpha = 0.05;
    std::string out;
    bool drop_last = false;
    double symmetry_tol = 1e-8;
};

std::vector<double> parse_taus(const std::string& list) {
    std::vector<double> taus;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!wgtest::detail::trim(item).empty()) {
            taus.push_back(wgtest::detail::parse_double(item, "--taus"));
        }
    }
    return taus;
}

int run_realdata(const RealDataOptions& opt, const GlobalOptions& global) {
    const auto a = wgtest::load_group(opt.group_a, opt.symmetry_tol);
    const auto b = wgtest::load_group(opt.group_b, opt.symmetry_tol);
    wgtest::ResamplingPlan plan;
    plan.strategy = wgtest::parse_strategy(opt.strategy);
    plan.repetitions = opt.reps;
    plan.seed = global.seed;
    plan.drop_last = opt.drop_last;
    const auto methods = parse_methods(opt.method);
    const auto taus = parse_taus(opt.taus);

    std::ostringstream out;
    out << wgtest::summary_header << '\n';
    for (const auto& ms : wgtest::run_repetitions(a.sample, b.sample, plan, methods, opt.alpha, global.threads)) {
        wgtest::write_summary_row(out, plan.strategy, std::nullopt, ms);
    }
    if (!taus.empty()) {
        for (const auto& row :
             wgtest::threshold_sweep(a.sample, b.sample, taus, plan, methods, opt.alpha, global.threads)) {
            for (const auto& ms : row.methods) {
                wgtest::write_summary_row(out, plan.strategy, row.tau, ms);
            }
        }
    }
    if (opt.out.empty()) {
        std::cout << out.str();
    } else {
        std::ofstream file(opt.out, std::ios::binary);
        if (!(file << out.str())) {
            throw Error(ErrorCode::IoError, "cannot write " + opt.out);
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-sample tests for samples of weighted random graphs"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    app.add_option("--seed", global.seed, "Master seed; equal seeds give identical output")->default_val(0);
    app.add_option("--output-format", global.output_format, "Output format for stdout reports")
        ->check(CLI::IsMember({"json", "csv", "table"}))
        ->default_val("json");
    app.add_option("--threads", global.threads, "Worker threads (0 = one per hardware thread)")->default_val(1);

    GenerateOptions gen;
    auto* generate = app.add_subcommand("generate", "Sample graphs from a two-block model and write adjacency CSVs");
    generate->add_option("--model", gen.model_path, "Model spec JSON")->required();
    generate->add_option("--m", gen.m, "Number of graphs")->required()->check(CLI::PositiveNumber);
    generate->add_option("--out", gen.out_dir, "Output directory")->required();
    generate->add_flag("--shifted", gen.shifted, "Sample from the epsilon-shifted model");

    TestOptions test;
    auto* test_cmd = app.add_subcommand("test", "Test two equal-size groups of graphs");
    test_cmd->add_option("--group-a", test.group_a, "Directory of adjacency CSVs")->required();
    test_cmd->add_option("--group-b", test.group_b, "Directory of adjacency CSVs")->required();
    test_cmd->add_option("--method", test.method, "Statistic")
        ->check(CLI::IsMember({"tn", "tfro", "both"}))
        ->default_val("tn");
    test_cmd->add_option("--alpha", test.alpha, "Test level")->default_val(0.05);
    test_cmd->add_option("--splits", test.splits, "Number of random-split repetitions")->default_val(1);
    test_cmd->add_flag("--drop-last", test.drop_last, "Drop the last pair when the sample size is odd");
    test_cmd->add_option("--symmetry-tol", test.symmetry_tol, "Largest |A_ij - A_ji| repaired by averaging")
        ->default_val(1e-8);

    TheoryOptions theory;
    auto* theory_cmd = app.add_subcommand("theory", "Report null variance, condition ratios, lambda_n and the "
                                                    "baseline consistency ratio for a model spec");
    theory_cmd->add_option("--config", theory.config, "Model spec JSON")->required();
    theory_cmd->add_option("--m", theory.m, "Sample size per group (overrides the spec's \"m\"; default 2)");
    theory_cmd->add_option("--delta", theory.delta, "Bound delta in mu <= 1 - delta for Bernoulli models")
        ->default_val(0.05);

    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "Run a size/power experiment and write a CSV report");
    simulate->add_option("--config", sim.config, "Experiment config JSON")->required();
    simulate->add_option("--out", sim.out, "Output CSV path")->required();

    RealDataOptions real;
    auto* realdata = app.add_subcommand("realdata", "Resampled repeated tests of two unequal-size groups");
    realdata->add_option("--group-a", real.group_a, "Directory of adjacency CSVs")->required();
    realdata->add_option("--group-b", real.group_b, "Directory of adjacency CSVs")->required();
    realdata->add_option("--strategy", real.strategy, "Equalization strategy")
        ->check(CLI::IsMember({"oversample", "subsample", "split-only"}))
        ->default_val("oversample");
    realdata->add_option("--reps", real.reps, "Repetitions")->default_val(100);
    realdata->add_option("--taus", real.taus, "Comma-separated binarization thresholds");
    realdata->add_option("--method", real.method, "Statistic")
        ->check(CLI::IsMember({"tn", "tfro", "both"}))
        ->default_val("both");
    realdata->add_option("--alpha", real.alpha, "Test level")->default_val(0.05);
    realdata->add_option("--out", real.out, "Output CSV path (stdout when omitted)");
    realdata->add_flag("--drop-last", real.drop_last, "Drop the last pair when the equalized size is odd");
    realdata->add_option("--symmetry-tol", real.symmetry_tol, "Largest |A_ij - A_ji| repaired by averaging")
        ->default_val(1e-8);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (generate->parsed()) {
            return run_generate(gen, global);
        }
        if (test_cmd->parsed()) {
            return run_test(test, global);
        }
        if (theory_cmd->parsed()) {
            return run_theory(theory, global);
        }
        if (simulate->parsed()) {
            return run_simulate(sim, global);
        }
        if (realdata->parsed()) {
            return run_realdata(real, global);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: Internal: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
