#pragma once

#include <string>

#include "lucheck/pipeline.hpp"

namespace lucheck {

// State files are JSON objects:
//   {"dims": [2,2,2], "amplitudes": [[re,im], ...], "label": "optional"}
// with amplitudes in row-major order (first party slowest).  Doubles are
// written with shortest round-trip precision, so save/load is lossless.
PureState load_state(const std::string& path);
PureState parse_state(const std::string& json_text);
void save_state(const PureState& v, const std::string& path);
std::string state_to_json(const PureState& v);

// Witness files carry one matrix per party, row-major [[re,im], ...] entries:
//   {"matrices": [ [[[re,im],...], ...], ... ]}
// parse_witness also accepts a full report and extracts verdict.witness.
std::string witness_to_json(const LocalUnitaryTuple& u);
LocalUnitaryTuple parse_witness(const std::string& json_text, double eps_unitary);

// Config as a flat JSON object; unknown keys are rejected.  Missing keys keep
// their defaults; null/empty text yields the default config.
Config parse_config(const std::string& json_text);
std::string config_to_json(const Config& cfg);

// Machine-readable reports.  Every report carries tool name, version, the
// command it answers, the seed, and the active tolerances.
std::string verdict_report(const Verdict& v, const std::string& command);
std::string spectra_report(const PureState& v, const Config& cfg);
std::string canonical_report(const CanonicalForm& form, const Config& cfg);
std::string dimensions_report_json(const DimensionsReport& rep, const Config& cfg);
std::string distinguishability_report(const DistinguishabilityReport& rep);
std::string verify_report(bool ok, double overlap, const Config& cfg);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace lucheck
