#pragma once

// The cyclic replica permutation E^(n) and replica traces.
//
// E^(n) acts on n copies of a subsystem as
//   E_{j_1..j_n; i_1..i_n} = prod_k delta(j_k, i_{k+1}),  i_{n+1} = i_1,
// so that Tr[rho^{(x)n} E^(n)] = sum_i rho_{i1 i2} rho_{i2 i3} ... rho_{in i1} = Tr rho^n.
// On a full lattice it acts as the identity on the complement copies.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qent/entangle.hpp"
#include "qent/excitations.hpp"

namespace qent {

/// Default cap on d^n index tuples visited by replica_trace.
inline constexpr std::size_t kReplicaCap = std::size_t{1} << 24;

struct ReplicaValue {
  double value = 0.0;
  /// |Im Tr[rho^{(x)n} E^(n)]|; roundoff only for Hermitian rho.
  double imaginary = 0.0;
};

/// Tr[rho^{(x)n} E^(n)] by walking index cycles; never forms rho^{(x)n}.
/// Requires n >= 1 and d^n <= cap (CapacityError otherwise).
ReplicaValue replica_trace(const Eigen::MatrixXcd& rho, int n, std::size_t cap = kReplicaCap);
ReplicaValue replica_trace(const DensityMatrix& rho, int n, std::size_t cap = kReplicaCap);

/// E^(n) matrix element between bra tuple j and ket tuple i: 0 or 1.
int e_matrix_element(std::span<const std::size_t> bra, std::span<const std::size_t> ket);

/// Dense E^(n) on d^n states (tiny bases only; d^n <= 4096). Rows index bra
/// tuples and columns ket tuples, lexicographic with copy 1 most significant.
Eigen::MatrixXd dense_replica_permutation(std::size_t d, int n);

/// <psi_1..psi_n| E_A^(n) |chi_1..chi_n> for states pre-split into
/// amplitude matrices psi[a, b] (a: subsystem A, b: the rest).
cplx replica_amplitude(const std::vector<Eigen::MatrixXcd>& bras, const std::vector<Eigen::MatrixXcd>& kets);

struct PPropertyResult {
  cplx region_side;
  cplx complement_side;
  double residual = 0.0;
};

/// Evaluates <psi_1..psi_n|E_Omega|chi_1..chi_n> and
/// <chi_2..chi_n chi_1|E_{Omega_c}|psi_1..psi_n>^* by explicit contraction.
/// Both sides use the same (Omega, Omega_c) tensor split; the complement side
/// only swaps the roles of the factors. Needs full dimension <= 2^12 and n <= 4.
PPropertyResult check_pproperty(const std::vector<StateVector>& psi, const std::vector<StateVector>& chi,
                                const Region& region, int n);

struct LeadingOrder {
  int order = 2;
  /// R_n(rho_Omega(Psi)).
  double full = 0.0;
  /// R_n(rho_Omega(0)) * R_n(rho_QM) * (N * ||a||)^(2n).
  double leading = 0.0;
  double difference = 0.0;
};

/// Compares the full R_n of the region with the leading factorized prediction.
/// `qm_trace_power` is R_n of the particle-level density matrix and
/// `qm_norm_squared` is sum |a|^2 of the particle-level coefficients.
LeadingOrder leading_order(const Spectrum& state, const Spectrum& vacuum, int n, double raw_norm,
                           double qm_trace_power, double qm_norm_squared);

LeadingOrder leading_vs_full(const BuiltState& built, const StateVector& vacuum, const Region& region, int n,
                             double qm_trace_power, double qm_norm_squared);

}  // namespace qent
