#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fitch/model_config.hpp"
#include "fitch/syntax.hpp"

namespace fitch {

// Property suites over generated terms. Sample i uses generator seed
// `seed + i`, so any failure can be replayed from its seed alone.

struct SuiteConfig {
    std::string name;
    std::optional<Mode> mode;   // appendix-goals runs every mode when absent
    std::size_t samples = 1000;
    std::uint64_t seed = 1;
    std::size_t max_size = 30;
    std::size_t bound = 64;     // derivation enumeration
    std::size_t eq_bound = 32;  // def_eq search
    unsigned workers = 0;       // 0 picks the hardware concurrency
    std::optional<ModelConfig> model;  // overrides the default models
};

struct SuiteFailure {
    std::uint64_t seed = 0;  // 0 for fixed instances
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::string mode;
    std::size_t samples = 0;
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::size_t skipped = 0;
    std::map<std::string, std::size_t> counts;
    std::vector<SuiteFailure> failures;

    bool ok() const { return failed == 0; }
};

std::vector<std::string> suite_names();

/// Models used when SuiteConfig::model is empty: identity, chain(1), chain(2)
/// and constant(1), each interpreting A and B with carriers of size <= 3.
std::vector<std::pair<std::string, ModelConfig>> default_models();

/// Throws PreconditionViolated for an unknown suite name, ModeUnsupported
/// when the suite does not apply to the mode.
SuiteReport run_suite(const SuiteConfig& cfg);

std::string report_json(const SuiteReport& r);
std::string report_text(const SuiteReport& r);

}  // namespace fitch
