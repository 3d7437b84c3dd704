// identity_suite.hpp — executable form of the library's cross-checks: every
// closed-form identity is evaluated against its independent numerical route
// and reported with a residual and tolerance. The CLI exposes these as
// `bhvar verify`.

#pragma once

#include <string>
#include <vector>

namespace bhvar {

struct CheckResult {
    std::string name;    // human-readable description
    std::string anchor;  // stable id, "<scope>/<check>"
    double residual{0.0};
    double tolerance{0.0};
    bool pass{false};
};

// scope: "all", "algebra", "dynamics", "duality" or "cats".
std::vector<CheckResult> run_identity_suite(const std::string& scope);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace bhvar
