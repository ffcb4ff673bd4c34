#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tailwalk/report.hpp"

namespace tailwalk {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    /// One-line summary of the decisive measurement.
    std::string summary;
    /// Deterministic measurements (no timings).
    nlohmann::ordered_json details = nlohmann::ordered_json::object();
    /// Wall-clock limit in seconds (0 = none) and the time taken.
    double runtime_limit = 0.0;
    double runtime = 0.0;
};

struct AcceptanceOptions {
    /// Seeds the Monte-Carlo criteria (5 and 8).
    std::uint64_t seed = 20240611;
};

using CriterionCallback = std::function<void(const CriterionResult&)>;

/// Criteria 1 to 8, in order. Tolerances are fixed here, not configurable.
std::vector<CriterionResult> run_criteria(const AcceptanceOptions& options, const CriterionCallback& on_result = {});

/// Report body for a list of results; excludes timings so reruns match.
nlohmann::ordered_json acceptance_body(const std::vector<CriterionResult>& results);

struct AcceptanceRun {
    /// Criteria 1 to 9.
    std::vector<CriterionResult> results;
    /// Rendered report of the first pass, including criterion 9.
    std::string report;
    bool all_pass() const;
};

/// Runs criteria 1 to 8 twice and adds criterion 9: the two rendered
/// reports must be byte-identical.
AcceptanceRun run_acceptance(const AcceptanceOptions& options, const ReportHeader& header,
                             const CriterionCallback& on_result = {});

/// "PASS  3  name: summary (12.3 s)".
std::string format_result(const CriterionResult& r);

}  // namespace tailwalk
