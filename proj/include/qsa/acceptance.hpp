#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qsa {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    /// Case-sensitive substring filter on criterion names; empty runs all.
    std::string filter;
};

/// Runs the bundled acceptance criteria. Every tolerance is pinned in the
/// implementation; the results are deterministic (fixed seeds).
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

/// One "PASS criterion N: ..." / "FAIL criterion N: ..." line per result.
void print_acceptance(const std::vector<CriterionResult>& results, std::ostream& out);

bool all_passed(const std::vector<CriterionResult>& results);

} // namespace qsa
