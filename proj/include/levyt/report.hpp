#pragma once

#include "levyt/montecarlo.hpp"

#include "json.hpp"

#include <string>

// Structured, machine-readable experiment reports. Every numeric field is
// serialized losslessly (shortest round-trip doubles), so a report produced
// from a fixed (seed, config) pair is byte-stable. Timing never enters a
// report; it travels in a sidecar file.

namespace levyt {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;

// Exact echo of the configuration; config_from_json rejects unknown keys,
// fills absent ones with defaults, and inverts config_to_json field for
// field. The worker count never enters the echo, so reports are identical
// across worker counts.
Json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const Json& j);

// Matrices as {"rows", "cols", "data"} with data a row-major list of
// [re, im] pairs.
Json matrix_to_json(const CMat& m);
CMat matrix_from_json(const Json& j);

Json estimate_to_json(const ScalarEstimate& e);
Json sweep_to_json(const SweepSummary& s);

// "n,rms,stderr" header plus one row per point.
std::string sweep_csv(const std::vector<int>& n, const std::vector<double>& rms,
                      const std::vector<double>& stderr_);

// Compiler, flags and source revision baked in at build time.
std::string build_fingerprint();

// Report skeleton: schema version, experiment id, config echo, fingerprint.
// Callers attach "results" and "gates".
Json make_report(const std::string& experiment, const ExperimentConfig& cfg);

}  // namespace levyt
