#pragma once

// Experiment configuration: JSON schema, validation, and the canonical echo.
//
//   {
//     "model":    {"statistics": "fermi", "sites": 8, "species": 2, "hopping": 1,
//                  "mass": 4, "staggered": false, "regime": "empty",
//                  "n_max": 2, "boundary": "open"},
//     "packets":  [{"name": "A_up", "center": 1, "width": 1, "species": 0,
//                   "band": "upper", "envelope": "gaussian"}, ...],
//     "state":    {"terms": [{"coefficient": [0.7071, 0], "operators": ["A_up", "B_dn"]}, ...]},
//     "region":   {"sites": [0, 1, 2, 3]},
//     "analysis": {"orders": [1, 2, 3], "replica_check": false, "replica_orders": [2, 3],
//                  "dim_cap": 67108864, "replica_cap": 16777216},
//     "output":   {"directory": ".", "formats": ["json"]}
//   }
//
// Only model.statistics, model.sites, state.terms and region.sites are
// required. Unknown keys are rejected. Errors name the JSON path.

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qent/excitations.hpp"
#include "qent/model.hpp"

namespace qent {

struct TermSpec {
  cplx coefficient{1.0, 0.0};
  /// Packet names, leftmost operator first.
  std::vector<std::string> operators;

  bool operator==(const TermSpec&) const = default;
};

struct AnalysisSpec {
  std::vector<double> orders{1.0, 2.0, 3.0};
  bool replica_check = false;
  std::vector<int> replica_orders{2, 3};
  std::size_t dim_cap = default_dimension_cap();
  std::size_t replica_cap = std::size_t{1} << 24;

  bool operator==(const AnalysisSpec&) const = default;
};

struct OutputSpec {
  std::string directory = ".";
  /// Subset of {"json", "csv"}.
  std::vector<std::string> formats{"json"};

  bool operator==(const OutputSpec&) const = default;
};

struct ExperimentConfig {
  LatticeModel model;
  std::vector<PacketProfile> packets;
  std::vector<TermSpec> terms;
  std::vector<int> region;
  AnalysisSpec analysis;
  OutputSpec output;

  [[nodiscard]] const PacketProfile* find_packet(const std::string& name) const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Schema and physics checks (gap condition, caps, name resolution). Throws ConfigError.
ExperimentConfig parse_config(const nlohmann::json& doc);
/// Parses UTF-8 JSON text, then parse_config.
ExperimentConfig validate_config(const std::string& text);
/// Physics checks on an already structured config.
void check_config(const ExperimentConfig& config);

/// Canonical echo with every default materialized.
nlohmann::json to_json(const ExperimentConfig& config);

/// Reads the whole file; throws ConfigError if it cannot be opened.
std::string read_text_file(const std::string& path);

namespace detail {

/// Path-addressed accessors shared by the config and sweep parsers.
class JsonReader {
 public:
  JsonReader(const nlohmann::json& node, std::string path);

  [[nodiscard]] const std::string& path() const { return path_; }
  [[nodiscard]] bool has(const std::string& key) const;
  [[nodiscard]] JsonReader child(const std::string& key) const;
  [[nodiscard]] std::vector<JsonReader> elements() const;
  [[nodiscard]] const nlohmann::json& node() const { return node_; }

  void allow_keys(std::initializer_list<const char*> keys) const;

  [[nodiscard]] double number() const;
  [[nodiscard]] int integer() const;
  [[nodiscard]] bool boolean() const;
  [[nodiscard]] std::string string() const;
  [[nodiscard]] cplx complex() const;

  [[noreturn]] void fail(const std::string& message) const;

 private:
  const nlohmann::json& node_;
  std::string path_;
};

}  // namespace detail

}  // namespace qent
