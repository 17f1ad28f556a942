#pragma once

// Reduced density matrices of spatial regions and their entropies.
//
// A region is a set of sites; it owns every species at those sites. Partial
// traces are taken in the occupation basis after reordering modes so that the
// region comes first (ascending), then the complement (ascending). For
// fermions the reordering of the creation string contributes the sign
// (-1)^{#(r in region, c in complement) occupied with c < r}.
//
// Entropies are in nats.

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qent/fock.hpp"

namespace qent {

/// Eigenvalues below this are treated as zero in logs and powers.
inline constexpr double kEigenFloor = 1e-12;
/// Eigenvalues more negative than this are rejected.
inline constexpr double kNegativityTolerance = 1e-10;

class Region {
 public:
  /// Sites must be a nonempty proper subset of [0, lattice_sites). Duplicates are removed.
  Region(std::vector<int> sites, int lattice_sites, int species);

  [[nodiscard]] const std::vector<int>& sites() const { return sites_; }
  [[nodiscard]] int lattice_sites() const { return lattice_sites_; }
  [[nodiscard]] int species() const { return species_; }
  /// Site-major linear mode indices of the region, ascending.
  [[nodiscard]] std::vector<int> modes() const;
  [[nodiscard]] Region complement() const;
  [[nodiscard]] bool contains(int site) const;

 private:
  std::vector<int> sites_;
  int lattice_sites_;
  int species_;
};

/// Amplitude matrix psi[a, b] of a state split into (modes, rest), a indexing
/// the listed modes and b the remaining modes, each lexicographic in ascending
/// mode order, including the fermionic reordering sign. `modes` must be
/// strictly ascending.
Eigen::MatrixXcd split_state(const StateVector& state, const std::vector<int>& modes,
                             std::size_t cap = default_dimension_cap());

struct DensityMatrix {
  Eigen::MatrixXcd matrix;
  Statistics statistics = Statistics::Fermi;
  int mode_count = 0;
  int n_max = 1;

  [[nodiscard]] Eigen::Index dimension() const { return matrix.rows(); }
};

/// Tr_{complement} |psi><psi|. Throws NumericalError if the state is not
/// normalized and CapacityError if the region matrix exceeds the cap.
DensityMatrix reduced_density_matrix(const StateVector& state, const Region& region,
                                     std::size_t cap = default_dimension_cap());

/// Same, for an explicit ascending mode list.
DensityMatrix reduced_density_matrix(const StateVector& state, const std::vector<int>& modes,
                                     std::size_t cap = default_dimension_cap());

struct Spectrum {
  /// Descending, clipped at zero.
  std::vector<double> eigenvalues;
  /// -log(lambda) for lambda above kEigenFloor, ascending.
  std::vector<double> entanglement;
};

Spectrum spectrum(const DensityMatrix& rho);
Spectrum spectrum(const Eigen::MatrixXcd& rho);

struct RenyiValue {
  double entropy = 0.0;
  /// R_n = Tr rho^n.
  double trace_power = 1.0;
};

/// n > 0; n == 1 gives the von Neumann entropy with R_1 = 1.
RenyiValue renyi_entropy(const std::vector<double>& eigenvalues, double n);
double von_neumann_entropy(const std::vector<double>& eigenvalues);

struct OrderEntropy {
  /// 1 denotes von Neumann.
  double order = 1.0;
  double state = 0.0;
  double vacuum = 0.0;
  double subtracted = 0.0;
  double trace_power_state = 1.0;
  double trace_power_vacuum = 1.0;
};

struct EntropyReport {
  std::vector<double> orders;
  /// One entry per requested order (order 1 dispatches to von Neumann).
  std::vector<OrderEntropy> renyi;
  OrderEntropy von_neumann;
  Spectrum spectrum_state;
  Spectrum spectrum_vacuum;
  std::vector<std::string> notes;

  [[nodiscard]] const OrderEntropy* find(double order) const;
};

EntropyReport vacuum_subtracted_report(const StateVector& state, const StateVector& vacuum, const Region& region,
                                       const std::vector<double>& orders,
                                       std::size_t cap = default_dimension_cap());

/// Same, reusing already computed reduced density matrices.
EntropyReport vacuum_subtracted_report(const DensityMatrix& rho_state, const DensityMatrix& rho_vacuum,
                                       const std::vector<double>& orders);

}  // namespace qent
