#pragma once

#include <string>

#include "carleman/monotonicity.hpp"
#include "carleman/operators.hpp"
#include "carleman/positivity.hpp"
#include "carleman/report.hpp"
#include "carleman/waveguide.hpp"
#include "carleman/weights.hpp"

namespace carleman {

// JSON fragments for the machine-readable artifacts. All doubles carry 17
// significant digits; documents end without a trailing newline so they can be
// embedded as values in a run report.
std::string certificate_json(const Weight& w, const WeightCertificate& cert);
std::string convergence_json(const ConvergenceReport& rep);
std::string ledger_json(const CarlemanLedger& led);
std::string localized_ledger_json(const LocalizedLedger& loc);
std::string threshold_json(const ThresholdReport& rep);
std::string decay_json(const DecayReport& rep);
std::string weighted_scan_json(const WeightedNormScan& scan);

// CSV artifacts.
std::string htrace_csv(const HTrace& tr, const SequenceReport& seq);
std::string threshold_csv(const ThresholdReport& rep);
std::string profile_csv(const ScalarField& Q);

}  // namespace carleman
