// Machine-readable (JSON) and human-readable report documents for the CLI.
#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "petrocheck/parabolicity.hpp"
#include "petrocheck/regularity.hpp"
#include "petrocheck/specfile.hpp"

namespace petrocheck {

inline constexpr const char* kToolName = "petrocheck";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

using Json = nlohmann::ordered_json;

// FNV-1a 64-bit digest of the raw input text, as fixed-width hex.
std::string input_digest(const std::string& text);

Json report_skeleton(const std::string& command, const std::string& digest);

// Defaults and overrides actually used by a run; printed into every report.
Json options_json(const SamplingConfig& sampling, const GeometryConfig& geometry,
                  const std::string& geometry_name);

Json witness_json(const Witness& w);

Json parabolicity_json(const ProblemSpec& spec, const ParabolicityReport& report);

Json regularity_json(const ProblemSpec& spec, const HypothesisReport& hypotheses,
                     const ClassicalityVerdict& verdict);

// Plain-text rendering of a report document.
std::string render_human(const Json& doc);

}  // namespace petrocheck
