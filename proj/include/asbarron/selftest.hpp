#pragma once

#include <string>
#include <vector>

namespace asb {

struct SelfTestResult {
    std::string name;
    bool pass = false;
    std::string detail; // worst deviation or failure reason
};

/// Fast cross-module invariant checks (the `selftest` subcommand).
/// Deterministic; every check runs even after earlier failures.
std::vector<SelfTestResult> run_selftest();

} // namespace asb
