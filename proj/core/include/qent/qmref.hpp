#pragma once

// Particle-level reference: two distinguishable particles (or subsystems)
//   |psi> = sum_a c_a |first_a>|second_a> / ||c||
// and the residuals between vacuum-subtracted region entropies and the
// entropies of the first particle's density matrix.

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qent/entangle.hpp"

namespace qent {

struct QMTerm {
  cplx coefficient{1.0, 0.0};
  int first = 0;
  int second = 0;
};

struct QMState {
  int first_dimension = 2;
  int second_dimension = 2;
  std::vector<QMTerm> terms;

  /// sum over terms of |c|^2, i.e. ||c||^2 when index pairs are distinct.
  [[nodiscard]] double coefficient_weight() const;
};

/// Throws ConfigError for an empty state or indices out of range.
void validate(const QMState& state);

/// rho_1 = Tr_2 |psi><psi| for the normalized state. Throws NumericalError for a zero state.
Eigen::MatrixXcd qm_density_matrix(const QMState& state);

/// True when the state has exactly two terms with different first and
/// different second indices, so the closed form applies.
bool has_two_term_form(const QMState& state);

/// Two-term closed form R_n = (|a|^2n + |b|^2n) / (|a|^2 + |b|^2)^n when it
/// applies, otherwise the spectrum of qm_density_matrix. n == 1 is von Neumann.
RenyiValue qm_renyi(const QMState& state, double n);

/// Always through the spectrum; used to cross-check the closed form.
RenyiValue qm_renyi_spectral(const QMState& state, double n);

struct OrderResidual {
  double order = 1.0;
  double subtracted = 0.0;
  double qm = 0.0;
  /// |S_n(Psi) - S_n(0) - S_n^QM|
  double delta = 0.0;
  /// |R_n(Psi) - R_n(0) R_n^QM|
  double delta_trace_power = 0.0;
};

struct ResidualRecord {
  double separation = 0.0;
  double overlap_abs = 0.0;
  /// Renyi orders from the report, with order 1 (von Neumann) always present.
  std::vector<OrderResidual> orders;
  /// |N * ||c|| - 1|; NaN when the raw norm is unknown.
  double norm_deviation = 0.0;
  double vacuum_s1 = 0.0;
  double vacuum_s2 = 0.0;

  [[nodiscard]] const OrderResidual* find(double order) const;
};

/// Residuals for every order in the report. Throws ConfigError when an order
/// listed in `required_orders` is absent from the report.
ResidualRecord compare(const EntropyReport& report, const QMState& state,
                       std::optional<double> raw_norm = std::nullopt,
                       const std::vector<double>& required_orders = {});

}  // namespace qent
