#pragma once

// Gapped free chains and their vacua.
//
// Every species sees the same N x N one-particle matrix
//   h = diag(onsite) - t * A,
// with onsite = m (uniform) or (-1)^x m (staggered) and A the chain adjacency.
// Species never mix, so the internal index is a pure label.
//
// Vacuum regimes:
//   Empty        the zero-occupation state; needs m > 2|t| so every mode costs energy.
//   HalfFilled   staggered fermion insulator with the lower band filled per species.
//   BosonGround  ground state of the harmonic chain
//                  H = sum_x m n_x - (t/2) sum_<xy> (a_x + a_x^dag)(a_y + a_y^dag),
//                whose pairing terms squeeze the vacuum; solved by Lanczos on the
//                truncated Fock space.

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qent/fock.hpp"
#include "qent/lanczos.hpp"

namespace qent {

enum class VacuumRegime { Empty, HalfFilled, BosonGround };
enum class Boundary { Open, Periodic };
enum class Band { Lower, Upper };

const char* to_string(VacuumRegime r);
const char* to_string(Boundary b);

struct LatticeModel {
  Statistics statistics = Statistics::Fermi;
  int sites = 2;
  int species = 2;
  double hopping = 1.0;
  double mass = 4.0;
  bool staggered = false;
  VacuumRegime regime = VacuumRegime::Empty;
  int n_max = 2;
  Boundary boundary = Boundary::Open;

  [[nodiscard]] int mode_count() const { return sites * species; }
  [[nodiscard]] int mode(int site, int sp) const { return site * species + sp; }

  bool operator==(const LatticeModel&) const = default;
};

/// Minimum admissible gap in energy units.
inline constexpr double kMinimumGap = 1e-9;

/// Structural and gap checks. Throws ConfigError naming the offending parameters.
void validate(const LatticeModel& model);

/// Chain adjacency (0/1 entries). Periodic chains add the (N-1, 0) bond when N > 2.
Eigen::MatrixXd adjacency(const LatticeModel& model);

/// The N x N one-particle matrix shared by all species. Validates the model first.
Eigen::MatrixXcd single_particle_hamiltonian(const LatticeModel& model);

struct SingleParticleModes {
  /// Column k is the orthonormal mode u_k(x).
  Eigen::MatrixXcd vectors;
  /// Ascending mode energies. For BosonGround these are the oscillator frequencies.
  Eigen::VectorXd energies;
  std::vector<Band> bands;
  /// Bogoliubov weights: b_k^dag = sum_x u_k(x) (cosh_k a_x^dag + sinh_k a_x).
  /// cosh = 1, sinh = 0 outside the BosonGround regime.
  Eigen::VectorXd cosh_weights;
  Eigen::VectorXd sinh_weights;

  [[nodiscard]] int size() const { return static_cast<int>(energies.size()); }
  [[nodiscard]] std::vector<int> band_indices(Band band) const;
};

/// Hermitian eigendecomposition with a canonical basis inside degenerate
/// eigenspaces: the projected site vectors P e_0, P e_1, ... are
/// Gram-Schmidt orthonormalized in order. Each vector's first significant
/// entry is made real and positive. Throws ShapeError for non-Hermitian input.
SingleParticleModes diagonalize_modes(const Eigen::MatrixXcd& h);

/// Modes of the model with band labels and Bogoliubov weights filled in.
SingleParticleModes model_modes(const LatticeModel& model);

/// Excitation gap of the finite chain. Throws ConfigError if below kMinimumGap.
double spectral_gap(const LatticeModel& model);

/// Full Fock basis over all N*s modes of the model.
BasisPtr model_basis(const LatticeModel& model, std::size_t cap = default_dimension_cap());

struct VacuumDiagnostics {
  double energy = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

StateVector build_vacuum(const LatticeModel& model, const SingleParticleModes& modes, const BasisPtr& basis,
                         const SolverOptions& options = {}, VacuumDiagnostics* diagnostics = nullptr);

/// Many-body Hamiltonian applied to a state (matrix-free). For fermions and the
/// Empty boson regime this is sum_{xy,s} h_xy c_{xs}^dag c_{ys}; for BosonGround
/// it is the harmonic chain above.
StateVector apply_hamiltonian(const LatticeModel& model, const StateVector& state);

}  // namespace qent
