#pragma once

// End-to-end experiment: model -> vacuum -> packets -> state -> region
// entropies -> particle-level reference and residuals.

#include <optional>
#include <string>
#include <vector>

#include "qent/config.hpp"
#include "qent/entangle.hpp"
#include "qent/excitations.hpp"
#include "qent/model.hpp"
#include "qent/qmref.hpp"
#include "qent/replica.hpp"

namespace qent {

/// Particle-level reading of a recipe. Each packet belongs to the first
/// subsystem when at least half of its weight lies in the region, else to the
/// second. A term's label on each side is the sorted list of its packets on
/// that side; distinct labels are orthogonal basis states.
struct QMAssignment {
  QMState state;
  std::vector<std::string> first_labels;
  std::vector<std::string> second_labels;
};

QMAssignment derive_qm_state(const ExperimentConfig& config, const std::vector<PacketOperator>& packets,
                             const Region& region);

struct ReplicaCheckEntry {
  std::string target;  // "state" or "vacuum"
  int order = 2;
  double replica = 0.0;
  double spectral = 0.0;
  double deviation = 0.0;
  double imaginary = 0.0;
};

struct ReplicaCheck {
  std::vector<ReplicaCheckEntry> entries;
  std::vector<std::string> skipped;
  double max_deviation = 0.0;
  double max_imaginary = 0.0;
};

/// Replica traces of each matrix against sum lambda^n. Orders whose d^n
/// exceeds the cap are listed in `skipped`.
ReplicaCheck replica_check(const DensityMatrix& rho_state, const DensityMatrix& rho_vacuum,
                           const std::vector<int>& orders, std::size_t cap);

struct ExperimentResult {
  ExperimentConfig config;
  double gap = 0.0;
  std::size_t full_dimension = 0;
  VacuumDiagnostics vacuum;
  double raw_norm = 0.0;
  double leakage = 0.0;
  DensityMatrix rho_state;
  DensityMatrix rho_vacuum;
  EntropyReport entropy;
  QMAssignment qm;
  ResidualRecord residual;
  /// One entry per integer Renyi order >= 2 in the analysis block.
  std::vector<LeadingOrder> leading;
  std::optional<ReplicaCheck> replica;
};

/// Runs the configured experiment. Throws ConfigError for invalid input and
/// NumericalError for solver or normalization failures.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Packets of the config in declaration order.
std::vector<PacketOperator> build_packets(const ExperimentConfig& config, const SingleParticleModes& modes);

}  // namespace qent
