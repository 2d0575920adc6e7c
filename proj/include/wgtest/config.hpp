#ifndef WGTEST_CONFIG_HPP
#define WGTEST_CONFIG_HPP

/**
 * @file config.hpp
 *
 * @brief JSON documents for model specs and experiment configs.
 *
 * Model spec (schema 1):
 *
 *     {"schema": 1, "family": "beta", "n": 100, "within": [2, 3], "between": [1, 3],
 *      "epsilon": 0.3, "m": 4}
 *
 * Bernoulli models give probabilities: "within": 0.5, "between": 0.4. "epsilon"
 * defaults to 0 and the optional "m" is the per-group sample size used by the
 * theory report.
 *
 * Experiment config (schema 1):
 *
 *     {"schema": 1, "design": {"family": "beta", "within": [2, 3], "between": [1, 3]},
 *      "n_grid": [30, 100], "m_grid": [2, 4], "epsilon_grid": [0, 0.3],
 *      "replications": 1000, "alpha": 0.05, "master_seed": 1, "methods": ["tn", "tfro"]}
 *
 * Unknown keys are rejected.
 */

#include "wgtest/error.hpp"
#include "wgtest/model_gen.hpp"
#include "wgtest/sim_harness.hpp"
#include "wgtest/two_sample_test.hpp"

#include "json.hpp"

#include <fstream>
#include <initializer_list>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

namespace wgtest {

using nlohmann::json;

namespace detail {

inline void check_keys(const json& doc, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!doc.is_object()) {
        throw Error(ErrorCode::ConfigError, where + " must be a JSON object");
    }
    for (const auto& item : doc.items()) {
        bool known = false;
        for (const char* key : allowed) {
            known = known || item.key() == key;
        }
        if (!known) {
            throw Error(ErrorCode::ConfigError, where + ": unknown key '" + item.key() + "'");
        }
    }
}

inline const json& require(const json& doc, const char* key, const std::string& where) {
    if (!doc.contains(key)) {
        throw Error(ErrorCode::ConfigError, where + ": missing key '" + key + "'");
    }
    return doc.at(key);
}

inline void check_schema(const json& doc, const std::string& where) {
    const json& schema = require(doc, "schema", where);
    if (!schema.is_number_integer() || schema.get<int>() != 1) {
        throw Error(ErrorCode::ConfigError, where + ": unsupported schema (expected 1)");
    }
}

template <typename T>
T get_as(const json& value, const std::string& what) {
    // nlohmann converts -5 or 2.5 to size_t silently; counts and seeds must be non-negative integers.
    if constexpr (std::is_integral_v<T> && std::is_unsigned_v<T>) {
        if (!value.is_number_unsigned()) {
            throw Error(ErrorCode::ConfigError, what + ": expected a non-negative integer");
        }
    } else if constexpr (std::is_same_v<T, std::vector<std::size_t>>) {
        if (!value.is_array()) {
            throw Error(ErrorCode::ConfigError, what + ": expected an array");
        }
        T out;
        for (const auto& item : value) {
            out.push_back(get_as<std::size_t>(item, what));
        }
        return out;
    }
    try {
        return value.get<T>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ConfigError, what + ": " + e.what());
    }
}

inline EdgeLaw parse_law(const json& value, Family family, const std::string& what) {
    if (family == Family::Beta) {
        if (!value.is_array() || value.size() != 2) {
            throw Error(ErrorCode::ConfigError, what + ": Beta parameters must be a pair [a, b]");
        }
        return EdgeLaw::beta(get_as<double>(value[0], what), get_as<double>(value[1], what));
    }
    if (!value.is_number()) {
        throw Error(ErrorCode::ConfigError, what + ": Bernoulli parameter must be a number");
    }
    return EdgeLaw::bernoulli(value.get<double>());
}

inline Family parse_family(const json& value, const std::string& where) {
    const auto name = get_as<std::string>(value, where + ".family");
    if (name == "beta") {
        return Family::Beta;
    }
    if (name == "bernoulli") {
        return Family::Bernoulli;
    }
    throw Error(ErrorCode::ConfigError, where + ": family must be \"beta\" or \"bernoulli\"");
}

inline nlohmann::ordered_json law_to_json(const EdgeLaw& law) {
    using oj = nlohmann::ordered_json;
    return law.family == Family::Beta ? oj::array({law.a, law.b}) : oj(law.a);
}

}  // namespace detail

struct ModelSpec {
    TwoBlockModel model;
    std::optional<std::size_t> m;
};

inline ModelSpec parse_model_spec(const json& doc) {
    const std::string where = "model spec";
    detail::check_keys(doc, {"schema", "family", "n", "within", "between", "epsilon", "m"}, where);
    detail::check_schema(doc, where);
    ModelSpec spec;
    const Family family = detail::parse_family(detail::require(doc, "family", where), where);
    spec.model.n = detail::get_as<std::size_t>(detail::require(doc, "n", where), where + ".n");
    spec.model.within = detail::parse_law(detail::require(doc, "within", where), family, where + ".within");
    spec.model.between = detail::parse_law(detail::require(doc, "between", where), family, where + ".between");
    if (doc.contains("epsilon")) {
        spec.model.epsilon = detail::get_as<double>(doc.at("epsilon"), where + ".epsilon");
    }
    if (doc.contains("m")) {
        spec.m = detail::get_as<std::size_t>(doc.at("m"), where + ".m");
    }
    spec.model.validate();
    return spec;
}

inline nlohmann::ordered_json model_spec_to_json(const TwoBlockModel& model) {
    return nlohmann::ordered_json{{"schema", 1},
                {"family", family_name(model.family())},
                {"n", model.n},
                {"within", detail::law_to_json(model.within)},
                {"between", detail::law_to_json(model.between)},
                {"epsilon", model.epsilon}};
}

inline ExperimentConfig parse_experiment_config(const json& doc) {
    const std::string where = "experiment config";
    detail::check_keys(doc,
                       {"schema", "design", "n_grid", "m_grid", "epsilon_grid", "replications", "alpha",
                        "master_seed", "methods"},
                       where);
    detail::check_schema(doc, where);
    ExperimentConfig config;

    const json& design = detail::require(doc, "design", where);
    detail::check_keys(design, {"family", "within", "between"}, where + ".design");
    const Family family = detail::parse_family(detail::require(design, "family", where + ".design"), where);
    config.design.within = detail::parse_law(detail::require(design, "within", where), family, where + ".design.within");
    config.design.between =
        detail::parse_law(detail::require(design, "between", where), family, where + ".design.between");

    config.n_grid = detail::get_as<std::vector<std::size_t>>(detail::require(doc, "n_grid", where), where + ".n_grid");
    config.m_grid = detail::get_as<std::vector<std::size_t>>(detail::require(doc, "m_grid", where), where + ".m_grid");
    config.epsilon_grid =
        detail::get_as<std::vector<double>>(detail::require(doc, "epsilon_grid", where), where + ".epsilon_grid");
    if (doc.contains("replications")) {
        config.replications = detail::get_as<std::size_t>(doc.at("replications"), where + ".replications");
    }
    if (doc.contains("alpha")) {
        config.alpha = detail::get_as<double>(doc.at("alpha"), where + ".alpha");
    }
    if (doc.contains("master_seed")) {
        config.master_seed = detail::get_as<std::uint64_t>(doc.at("master_seed"), where + ".master_seed");
    }
    if (doc.contains("methods")) {
        config.methods.clear();
        for (const auto& name : detail::get_as<std::vector<std::string>>(doc.at("methods"), where + ".methods")) {
            try {
                config.methods.push_back(parse_method(name));
            } catch (const Error& e) {
                throw Error(ErrorCode::ConfigError, where + ".methods: " + e.what());
            }
        }
    }
    try {
        config.validate();
    } catch (const Error& e) {
        throw Error(ErrorCode::ConfigError, where + ": " + e.what());
    }
    return config;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ConfigError, path + ": " + e.what());
    }
}

}  // namespace wgtest

#endif
