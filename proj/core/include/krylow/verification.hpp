#pragma once

#include <string>
#include <vector>

namespace krylow {

/// One module invariant, executed with its measured slack (bound minus
/// measured value; nonnegative means the invariant held with that margin).
struct CheckResult {
    std::string name;
    bool pass = false;
    double slack = 0.0;
    std::string detail;
};

/// Executes the library's invariant checks. suite = "fast" runs the
/// desk-scale checks; "full" adds the Monte Carlo bound-validity checks.
std::vector<CheckResult> run_verification(const std::string& suite);

}  // namespace krylow
