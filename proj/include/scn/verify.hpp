#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace scn {

struct VerifyCheck {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t seed = 12345;
    long mc_samples = 200000;  // geometry sampling scale
    long deployments = 300000; // moment cross-check scale
    // Test hook: shifts the analytic lens value so the lens check must fail.
    double lens_perturbation = 0.0;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    bool all_pass() const;
};

// Monte Carlo cross-checks of the analytic geometry and moment machinery,
// plus the sleep-state table and the determinism contract.
VerifyReport run_verification(const VerifyOptions& opts = {});

std::string verify_json(const VerifyReport& report);

} // namespace scn
