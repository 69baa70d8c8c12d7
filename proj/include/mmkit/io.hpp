#pragma once

#include <string>

#include "json.hpp"

#include "mmkit/bundle.hpp"
#include "mmkit/distances.hpp"
#include "mmkit/experiments.hpp"
#include "mmkit/pyramids.hpp"
#include "mmkit/space.hpp"
#include "mmkit/step_function.hpp"

namespace mmkit {

// Deterministic key order so that serialized documents are byte-stable.
using Json = nlohmann::ordered_json;

// Space document: {"labels": [...], "dist": [[...]], "weights": [...]},
// every number a rational string "p/q" or an exact decimal.  Reading
// validates; malformed documents raise validation_error.
Json space_to_json(const FiniteMmSpace& x);
FiniteMmSpace space_from_json(const Json& doc);

// {"domain": [a, b], "breaks": [...], "values": [...]}
Json step_function_to_json(const StepFunction& f);
StepFunction step_function_from_json(const Json& doc);

Json coupling_to_json(const Coupling& pi);
Coupling coupling_from_json(const Json& doc, const std::vector<Rat>& mu,
                            const std::vector<Rat>& nu);

Json box_bounds_to_json(const BoxBounds& b);

// {"finite": "p/q"} or {"infinite": true}
Json sep_value_to_json(const SepValue& v);
SepValue sep_value_from_json(const Json& doc);

Json report_to_json(const ExperimentReport& r);
// Re-checks every stored assertion; a tampered report fails to load.
ExperimentReport report_from_json(const Json& doc);

std::string report_to_csv(const ExperimentReport& r);
std::string step_function_to_csv(const StepFunction& f);

Json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace mmkit
