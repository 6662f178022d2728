#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dwell/errors.hpp"
#include "dwell/experiment.hpp"

namespace dwell::io {

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& obj, const char* scope,
                                std::initializer_list<const char*> known) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* k : known)
            if (key == k) {
                ok = true;
                break;
            }
        if (!ok)
            throw ConfigError(std::string("unknown key \"") + (scope ? scope : "") +
                              (scope ? "." : "") + key + "\" in config");
    }
}

inline double require_number(const nlohmann::json& obj, const char* key) {
    if (!obj.contains(key))
        throw ConfigError(std::string("missing required key \"") + key + "\"");
    const auto& v = obj.at(key);
    if (!v.is_number())
        throw ConfigError(std::string("key \"") + key + "\" must be a number");
    return v.get<double>();
}

inline double number_or(const nlohmann::json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number())
        throw ConfigError(std::string("key \"") + key + "\" must be a number");
    return v.get<double>();
}

}  // namespace detail

/// Parse and validate a run configuration. Unknown keys are rejected so that
/// a typo never silently falls back to a default.
inline RunConfig parse_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    detail::reject_unknown_keys(j, nullptr,
                                {"alpha", "beta", "epsilon", "tau_max", "dtau", "grid", "scheme",
                                 "record_stride_tau", "snapshot_taus", "initial"});

    RunConfig cfg;
    cfg.alpha = detail::require_number(j, "alpha");
    cfg.beta = detail::require_number(j, "beta");
    cfg.epsilon = detail::require_number(j, "epsilon");
    cfg.tau_max = detail::require_number(j, "tau_max");
    cfg.dtau = detail::number_or(j, "dtau", cfg.dtau);
    cfg.record_stride_tau = detail::number_or(j, "record_stride_tau", cfg.record_stride_tau);

    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        if (!g.is_object()) throw ConfigError("key \"grid\" must be an object");
        detail::reject_unknown_keys(g, "grid", {"x_max", "n_points"});
        cfg.grid.x_max = detail::number_or(g, "x_max", cfg.grid.x_max);
        if (g.contains("n_points")) {
            const auto& n = g.at("n_points");
            if (!n.is_number_integer() || n.get<long long>() <= 0)
                throw ConfigError("key \"grid.n_points\" must be a positive integer");
            cfg.grid.n_points = n.get<std::size_t>();
        }
    }

    if (j.contains("scheme")) {
        const auto& s = j.at("scheme");
        if (!s.is_string())
            throw ConfigError("key \"scheme\" must be \"split-step\" or \"crank-nicolson\"");
        const std::string name = s.get<std::string>();
        if (name == "split-step")
            cfg.scheme = StepScheme::SplitStepFourier;
        else if (name == "crank-nicolson")
            cfg.scheme = StepScheme::CrankNicolson;
        else
            throw ConfigError("key \"scheme\": unknown scheme \"" + name + "\"");
    }

    if (j.contains("snapshot_taus")) {
        const auto& arr = j.at("snapshot_taus");
        if (!arr.is_array()) throw ConfigError("key \"snapshot_taus\" must be an array of numbers");
        std::vector<double> taus;
        for (const auto& v : arr) {
            if (!v.is_number())
                throw ConfigError("key \"snapshot_taus\" must be an array of numbers");
            taus.push_back(v.get<double>());
        }
        cfg.snapshot_taus = std::move(taus);
    }

    if (j.contains("initial")) {
        const auto& ini = j.at("initial");
        if (!ini.is_object()) throw ConfigError("key \"initial\" must be an object");
        detail::reject_unknown_keys(ini, "initial", {"well", "width"});
        if (ini.contains("well")) {
            const auto& w = ini.at("well");
            if (!w.is_string())
                throw ConfigError("key \"initial.well\" must be \"left\" or \"right\"");
            const std::string well = w.get<std::string>();
            if (well == "left")
                cfg.initial.well = InitialWell::Left;
            else if (well == "right")
                cfg.initial.well = InitialWell::Right;
            else
                throw ConfigError("key \"initial.well\": unknown well \"" + well + "\"");
        }
        cfg.initial.width = detail::number_or(ini, "width", cfg.initial.width);
    }

    cfg.validate();
    return cfg;
}

inline RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace dwell::io
