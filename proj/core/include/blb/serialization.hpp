#pragma once

#include <string>
#include <vector>

#include "blb/certify.hpp"
#include "blb/counterexample.hpp"
#include "blb/defect.hpp"
#include "blb/oscillate.hpp"
#include "blb/step_function.hpp"

namespace blb::io {

// JSON serializers.  Key order is fixed, no timestamps or machine-specific
// fields are emitted, and doubles use shortest-round-trip formatting, so two
// identical runs produce byte-identical artifacts.
std::string to_json(const StepFunction& f);
std::string to_json(const SampledProfile& f);
std::string to_json(const Profile& f);  // tagged: {"kind": "step"|"sampled"}
std::string to_json(const InequalityCertificate& cert);
std::string to_json(const std::vector<ScanRow>& rows);
std::string to_json(const WeakLimitEstimate& est);
std::string to_json(const DefectSeries& series);
std::string to_json(const DensityDesign& design);
std::string to_json(const CounterexampleReport& report);
std::string to_json(const VerifyReport& report);
std::string to_json(const P4IdentityReport& report);
std::string to_json(const Theorem41Report& report);

// Parsers for the input/witness types (malformed input throws
// ValidationError; parsed objects are validated before return).
StepFunction step_from_json(const std::string& text);
SampledProfile sampled_from_json(const std::string& text);
Profile profile_from_json(const std::string& text);
DensityDesign design_from_json(const std::string& text);
CounterexampleReport counterexample_from_json(const std::string& text);

// CSV writers (17-significant-digit columns; header row included).
std::string to_csv(const WeakLimitEstimate& est);
std::string to_csv(const DefectSeries& series);
std::string to_csv(const std::vector<ScanRow>& rows);

}  // namespace blb::io
