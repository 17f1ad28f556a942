#pragma once

// Parameter sweeps over a base experiment.
//
//   {
//     "base": { ...experiment config... },
//     "parameter": "separation" | "region_size" | "coefficient_ratio" | "index_pattern",
//     "values": [1, 2, 3, 4, 5],          // strings for index_pattern
//     "anchor": 3.5                       // separation only, optional
//   }
//
// separation: packets with center <= anchor are moved to anchor - d/2, the
//   others to anchor + d/2. The anchor defaults to max(region) + 0.5.
// region_size: the region becomes sites {0, ..., k-1}.
// coefficient_ratio: the base must have two terms; they get a = r and b = 1.
// index_pattern: the base packets are split into a left and a right location
//   as for separation. Terms become a L_i R_j + b L_k R_l with species
//   (i,j),(k,l) given by the pattern:
//     distinct (0,1),(2,3)   i=l (0,1),(2,0)   j=k (0,1),(1,2)
//     i=j (0,0),(1,2)        k=l (0,1),(2,2)   singlet (0,1),(1,0)

#include <optional>
#include <string>
#include <vector>

#include "qent/config.hpp"
#include "qent/qmref.hpp"

namespace qent {

enum class SweepParameter { Separation, RegionSize, CoefficientRatio, IndexPattern };

const char* to_string(SweepParameter p);

struct SweepSpec {
  ExperimentConfig base;
  SweepParameter parameter = SweepParameter::Separation;
  std::vector<double> values;
  std::vector<std::string> patterns;
  std::optional<double> anchor;

  [[nodiscard]] std::size_t size() const;
};

SweepSpec parse_sweep(const nlohmann::json& doc);
SweepSpec validate_sweep(const std::string& text);

struct SweepPoint {
  std::string label;
  double value = 0.0;
  std::optional<ExperimentConfig> config;
  std::optional<ResidualRecord> record;
  std::string error;

  [[nodiscard]] bool ok() const { return record.has_value(); }
};

/// Concrete configs, one per sweep value. A value that cannot be applied
/// gives a point with `error` set and no config.
std::vector<SweepPoint> expand_sweep(const SweepSpec& spec);

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepPoint> points;

  [[nodiscard]] std::size_t succeeded() const;
  [[nodiscard]] std::size_t failed() const { return points.size() - succeeded(); }
};

/// Runs every point on up to `jobs` worker threads. Row order follows the
/// value list. Per-point errors are recorded, not thrown.
SweepResult run_sweep(const SweepSpec& spec, int jobs = 1);

/// Separation scan of a base config; failed points have no record.
std::vector<std::optional<ResidualRecord>> overlap_scan(const ExperimentConfig& base,
                                                        const std::vector<double>& separations, int jobs = 1,
                                                        std::optional<double> anchor = std::nullopt);

/// Header plus one row per point; the first eight columns are
/// separation, overlap_abs, delta_S1, delta_S2, delta_S3, norm_dev, vac_S1, vac_S2.
std::string sweep_csv(const SweepResult& result);

/// Same leading columns for a single experiment, without the sweep columns.
std::string residual_csv(const ResidualRecord& record);

/// Monotonicity verdict (first vs last successful point) and extreme points.
nlohmann::json sweep_summary(const SweepResult& result);

}  // namespace qent
