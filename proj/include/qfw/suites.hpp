#pragma once

// Named check suites shared by `qfw run` and the acceptance binary. Each
// suite reads its parameters from a JSON object and reports measured
// quantities plus failure witnesses; nothing time-dependent goes in a report.

#include "qfw/io.hpp"

#include <functional>

namespace qfw::suites {

using json = nlohmann::json;

struct SuiteContext {
    std::uint64_t seed = 20240601;
    Caps caps{};
    json params = json::object();

    template <class T>
    T param(const char* key, T fallback) const {
        return params.contains(key) ? params.at(key).get<T>() : fallback;
    }
};

struct SuiteResult {
    std::string name;
    std::string anchor;  // the statement being checked
    bool ok = true;
    bool expected_failure = false;
    json measured = json::object();
    std::vector<std::string> failures;

    void fail(std::string what) {
        ok = false;
        if (failures.size() < 20) failures.push_back(std::move(what));
    }
};

struct SuiteInfo {
    std::string name;
    std::string anchor;
    std::function<SuiteResult(const SuiteContext&)> run;
    bool in_default = true;
};

const std::vector<SuiteInfo>& registry();
// Throws ConfigError for an unknown name. Errors thrown inside a suite are
// caught and reported as failures with their code.
SuiteResult run_suite(const std::string& name, const SuiteContext& ctx);

struct SuiteConfig {
    std::uint64_t seed = 20240601;
    Caps caps{};
    std::vector<std::pair<std::string, json>> suites;  // name, params
    std::optional<std::string> output;

    // Every default suite with default parameters.
    static SuiteConfig defaults();
    // {"seed", "caps": {...}, "suites": ["name" | {"name", "params"}], "output",
    // "fault_injection": bool}. Throws ConfigError.
    static SuiteConfig from_json(const json& j);
};

struct Report {
    std::uint64_t seed = 0;
    std::vector<SuiteResult> results;
    bool ok() const;
};

Report run(const SuiteConfig& config, const std::function<void(const SuiteResult&)>& progress = {});

json to_json(const SuiteResult& r);
json to_json(const Report& r);

// Number of prime factors of n with multiplicity.
std::size_t big_omega(std::uint64_t n);

}  // namespace qfw::suites
