#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mdpvol/config.hpp"
#include "mdpvol/report.hpp"

namespace mdpvol {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    JsonSummary metrics = JsonSummary::object();
    double runtime_s = 0.0;
    /// Wall-clock limit in seconds; 0 means none.
    double runtime_limit_s = 0.0;
};

struct AcceptanceOptions {
    std::uint64_t seed = kDefaultSeed;
    /// Multiplies the quadrature q before the log-price curvature check (sensitivity hook).
    double q_multiplier = 1.0;
    /// Criterion ids to run; empty runs all twelve.
    std::vector<int> criteria;
    unsigned threads = 1;
};

struct AcceptanceReport {
    std::vector<CriterionResult> results;

    bool all_passed() const;
};

/// Runs the selected acceptance criteria. Each result includes the pinned
/// tolerance in its detail line and fails when its runtime limit is exceeded.
AcceptanceReport run_acceptance(const AcceptanceOptions& options = {});

CriterionResult run_criterion(int id, const AcceptanceOptions& options);

JsonSummary acceptance_json(const AcceptanceReport& report);

/// One line per criterion: "criterion N: PASS|FAIL  name  detail".
std::string acceptance_text(const AcceptanceReport& report);

}  // namespace mdpvol
