#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace toepspec {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Fast cross-checks of every kernel against an independent construction:
/// closed-form spectra, companion-matrix roots, dense minors, the LU
/// determinant, and the anti-concentration bound.
[[nodiscard]] std::vector<CheckResult> run_validation(std::uint64_t seed);

}  // namespace toepspec
