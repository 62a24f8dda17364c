#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sweep/config.hpp"
#include "sweep/filippov.hpp"

namespace sweep {

struct VerifyOptions {
    std::size_t geometry_samples = 10000;
    std::size_t field_samples = 1000;
    std::uint64_t seed = 0xC0FFEEULL;
    SamplingPlan hypothesis_plan;
};

/// Everything run_verify produces for one scenario: hypothesis validation,
/// the bound certificate, the iteration log, and the invariant-suite
/// outcomes. `pass` is true iff no check failed.
struct VerificationReport {
    std::string scenario;
    bool pass = true;
    ValidationReport hypotheses;
    IterationReport iterations;
    BoundCertificate certificate;
    std::vector<CheckResult> checks;
};

struct VerificationOutcome {
    VerificationReport report;
    Trajectory trajectory;  // final iterate trajectory (CSV export)
};

/// Full pipeline: validate, solve, iterate, certify, run invariant suites.
VerificationOutcome run_verification(const RunConfig& cfg, const VerifyOptions& opt = {});

ordered_json certificate_to_json(const BoundCertificate& cert);
ordered_json iteration_report_to_json(const IterationReport& report,
                                      const BoundCertificate& cert);
ordered_json verification_report_to_json(const VerificationReport& report);

}  // namespace sweep
