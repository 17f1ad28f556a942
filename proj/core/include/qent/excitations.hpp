#pragma once

// Localized wave-packet creation operators and the states built from them.
//
// A packet starts from an envelope phi(x) sampled on the sites, is projected
// onto the particle modes of the vacuum regime and normalized so that the
// one-particle state O|vac> has unit norm:
//   Empty        O = sum_x phi(x) c_{x,s}^dag
//   HalfFilled   phi projected on the upper band (or, for holes, the lower band,
//                O = sum_x phi(x)^* c_{x,s})
//   BosonGround  O = sum_k phi_k b_k^dag with Bogoliubov quasiparticles b_k^dag
//
// Recipe terms are operator products written left to right:
// {O_1, O_2} means O_1 O_2 |vac>, so O_2 acts first. For fermions the order
// fixes the sign of the term.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qent/fock.hpp"
#include "qent/model.hpp"

namespace qent {

enum class Envelope { Gaussian, Rectangular };

const char* to_string(Envelope e);
const char* to_string(Band b);

struct PacketProfile {
  std::string name;
  /// Site units; may be fractional.
  double center = 0.0;
  /// Gaussian: exp(-(x - x0)^2 / (2 w^2)); rectangular: 1 for |x - x0| <= w.
  double width = 1.0;
  int species = 0;
  Band band = Band::Upper;
  Envelope envelope = Envelope::Gaussian;

  bool operator==(const PacketProfile&) const = default;
};

struct PacketOperator {
  std::string name;
  int species = 0;
  /// Normalized one-particle wavefunction on the sites (after band projection).
  Eigen::VectorXcd wavefunction;
  /// Per-mode coefficients of c^dag and c over all N*s lattice modes.
  Eigen::VectorXcd creation;
  Eigen::VectorXcd annihilation;
  bool normalized = true;
};

/// Raw (unnormalized) envelope on the sites. Periodic chains use minimum-image distances.
Eigen::VectorXd sample_envelope(const PacketProfile& profile, const LatticeModel& model);

/// Throws ConfigError for invalid profiles and NumericalError when nothing survives projection.
PacketOperator make_packet(const PacketProfile& profile, const LatticeModel& model, const SingleParticleModes& modes);

/// <vac|O_p^dag O_q|vac> for normalized packets: zero across species, else the wavefunction overlap.
cplx packet_overlap(const PacketOperator& p, const PacketOperator& q);

/// Fraction of the packet's one-particle weight on the given sites.
double packet_weight(const PacketOperator& p, const std::vector<int>& sites);

LadderResult apply_packet(const PacketOperator& packet, const StateVector& state,
                          CutoffPolicy policy = CutoffPolicy::Truncate);

struct RecipeTerm {
  cplx coefficient{1.0, 0.0};
  std::vector<PacketOperator> operators;
};

struct StateRecipe {
  std::vector<RecipeTerm> terms;
};

struct BuiltState {
  StateVector state;
  /// Norm of sum_a c_a (prod O)|vac> before normalization; the prefactor N is 1 / raw_norm.
  double raw_norm = 0.0;
  /// Squared norm lost to the boson cutoff while applying packets.
  double leakage = 0.0;
};

BuiltState build_state(const StateRecipe& recipe, const StateVector& vacuum,
                       CutoffPolicy policy = CutoffPolicy::Truncate);

}  // namespace qent
