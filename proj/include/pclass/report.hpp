#pragma once

// Case specifications, the end-to-end check runner (with precision retry for
// the local backend), corpus and fuzzing drivers, and JSON report assembly.
// The CLI in tools/ is a thin wrapper over this layer so tests can drive it
// directly.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "pclass/gmodule.hpp"
#include "pclass/invariants.hpp"

namespace pclass::cli {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kSchema = 1;

struct CaseSpec {
    unsigned p = 2;
    std::string backend;    // "local" | "quadratic"
    unsigned ell = 0;       // local only
    int precision = 0;      // 0 = default (PCLASS_PRECISION env or 40)
    std::string a;
    std::uint64_t seed = 0;
    std::string fault;      // "" or "corrupt_sigma" (negative-control injection)

    nlohmann::json to_json() const;
    static CaseSpec from_json(const nlohmann::json& j);
    std::string content_hash() const; // fnv-1a over the canonical spec JSON
};

struct Report {
    CaseSpec spec;
    structure::InvariantProfile invariants;
    bool has_invariants = false;

    gmodule::MultiplicityVector mult_oracle;
    gmodule::MultiplicityVector mult_theorem3;
    gmodule::MultiplicityVector mult_arithmetic;
    bool has_multiplicities = false;

    std::string certificate_summary;
    std::map<std::string, std::string> checks; // pass | fail | undecided
    std::map<std::string, std::string> notes;
    std::uint64_t timing_ms = 0;
    int precision_used = 0;

    bool any_failure() const;
    // timing is excluded by default so reports are byte-identical across runs
    nlohmann::json to_json(bool include_timing = false) const;
};

// runs every check for one case; throws pclass::error for config problems
// (exit 2) and for backend failures that survive the precision-retry loop
// (exit 3); check failures are recorded in the report (exit 1)
Report run_case(const CaseSpec& spec);

int default_precision(); // PCLASS_PRECISION env override or 40

struct CorpusSummary {
    std::size_t total = 0;
    std::size_t failed = 0;
    std::size_t errored = 0;
    std::vector<Report> reports;             // in corpus order
    std::vector<std::string> errors;         // per-case error strings ("" if ok)
};

std::vector<CaseSpec> load_corpus(const std::string& path);
CorpusSummary run_corpus(const std::vector<CaseSpec>& specs);
void append_jsonl_log(const std::string& path, const CorpusSummary& summary);

struct RandomSummary {
    unsigned p = 2;
    std::size_t dim = 0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::size_t failures = 0;
    nlohmann::json to_json() const;
};

// seeded module fuzzing: profile -> random_module -> decompose -> verify
RandomSummary run_random(unsigned p, std::size_t dim, std::size_t trials, std::uint64_t seed);

int exit_code_for(const error& e);

} // namespace pclass::cli
