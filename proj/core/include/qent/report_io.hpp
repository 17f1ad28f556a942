#pragma once

// Serialization of experiment results. Floats carry 12 significant digits;
// non-finite values become null (JSON) or empty cells (CSV).

#include <string>

#include <nlohmann/json.hpp>

#include "qent/experiment.hpp"

namespace qent {

/// x rounded to 12 significant digits.
double round12(double x);
/// "%.12g", or "" for NaN/inf.
std::string format12(double x);
/// round12 as a JSON number, null when not finite.
nlohmann::json number12(double x);

nlohmann::json residual_json(const ResidualRecord& record);

/// report.json body. Everything except "timing" is a function of the config
/// and the library version.
nlohmann::json report_json(const ExperimentResult& result, double elapsed_seconds);

nlohmann::json replica_check_json(const ReplicaCheck& check);

/// Writes to a sibling temp file, then renames over `path`. Creates parent
/// directories. Throws Error on I/O failure.
void write_atomic(const std::string& path, const std::string& content);

/// Library version string.
const char* version();

}  // namespace qent
