#pragma once

// Occupation-number (Fock) spaces for fermionic and truncated bosonic modes.
//
// Basis states are occupation tuples (n_0, ..., n_{M-1}) enumerated in
// lexicographic order with mode 0 as the most significant digit. A tuple is
// stored as its mixed-radix code sum_m n_m * r^(M-1-m), r = 2 (Fermi) or
// n_max + 1 (Bose), so the full basis index equals the code.
//
// Fermionic signs follow Jordan-Wigner with ascending-mode strings:
//   |b> = (c_0^dag)^{b_0} (c_1^dag)^{b_1} ... |0>,
//   c_m^dag |b> = (-1)^{sum_{k<m} b_k} |b + e_m>.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace qent {

using cplx = std::complex<double>;

enum class Statistics { Fermi, Bose };

const char* to_string(Statistics s);

/// Amplitude cap used when none is given: 2^26, or the QENT_DIM_CAP environment variable.
std::size_t default_dimension_cap();

/// Lattice mode label. Linear ordering is site-major, then species.
struct ModeLabel {
  int site = 0;
  int species = 0;
  std::optional<int> band;

  [[nodiscard]] std::size_t linear(int species_count) const {
    return static_cast<std::size_t>(site) * static_cast<std::size_t>(species_count) +
           static_cast<std::size_t>(species);
  }
};

class FockBasis {
 public:
  /// Enumerates the basis. n_max is ignored for fermions. Throws CapacityError
  /// above `cap` amplitudes and ConfigError on invalid arguments.
  static FockBasis enumerate(Statistics statistics, int modes, int n_max = 1,
                             std::optional<int> sector = std::nullopt,
                             std::size_t cap = default_dimension_cap());

  [[nodiscard]] Statistics statistics() const { return statistics_; }
  [[nodiscard]] bool fermionic() const { return statistics_ == Statistics::Fermi; }
  [[nodiscard]] int mode_count() const { return modes_; }
  [[nodiscard]] int n_max() const { return n_max_; }
  [[nodiscard]] int radix() const { return n_max_ + 1; }
  [[nodiscard]] std::optional<int> sector() const { return sector_; }
  [[nodiscard]] bool is_full() const { return !sector_.has_value(); }
  [[nodiscard]] std::size_t dimension() const { return dimension_; }

  [[nodiscard]] std::uint64_t code(std::size_t index) const {
    return sector_ ? codes_[index] : static_cast<std::uint64_t>(index);
  }
  [[nodiscard]] std::optional<std::size_t> index_of(std::uint64_t code) const;
  [[nodiscard]] std::uint64_t stride(int mode) const { return strides_[static_cast<std::size_t>(mode)]; }

  [[nodiscard]] int occupation_of_code(std::uint64_t code, int mode) const {
    return static_cast<int>((code / stride(mode)) % static_cast<std::uint64_t>(radix()));
  }
  [[nodiscard]] int occupation(std::size_t index, int mode) const {
    return occupation_of_code(code(index), mode);
  }
  [[nodiscard]] std::vector<int> occupations(std::size_t index) const;

  /// Number of occupied fermionic modes strictly before `mode` (Jordan-Wigner string length).
  [[nodiscard]] int occupied_before(std::uint64_t code, int mode) const;

  bool operator==(const FockBasis& other) const;

 private:
  FockBasis() = default;

  Statistics statistics_ = Statistics::Fermi;
  int modes_ = 0;
  int n_max_ = 1;
  std::optional<int> sector_;
  std::size_t dimension_ = 0;
  std::vector<std::uint64_t> strides_;
  std::vector<std::uint64_t> codes_;  // sector bases only, ascending
};

using BasisPtr = std::shared_ptr<const FockBasis>;

BasisPtr make_basis(Statistics statistics, int modes, int n_max = 1,
                    std::optional<int> sector = std::nullopt,
                    std::size_t cap = default_dimension_cap());

/// Complex amplitudes over a shared Fock basis. Immutable once built.
class StateVector {
 public:
  StateVector(BasisPtr basis, Eigen::VectorXcd amplitudes);

  static StateVector zero(BasisPtr basis);
  static StateVector basis_state(BasisPtr basis, std::size_t index);
  /// Basis state from an occupation tuple; throws if the tuple is not in the basis.
  static StateVector from_occupations(BasisPtr basis, const std::vector<int>& occupations);

  [[nodiscard]] const FockBasis& basis() const { return *basis_; }
  [[nodiscard]] const BasisPtr& basis_ptr() const { return basis_; }
  [[nodiscard]] const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  [[nodiscard]] cplx operator[](std::size_t i) const { return amplitudes_[static_cast<Eigen::Index>(i)]; }
  [[nodiscard]] double norm() const { return norm_; }

  /// Throws NumericalError for a zero vector.
  [[nodiscard]] StateVector normalized() const;

  friend StateVector operator+(const StateVector& a, const StateVector& b);
  friend StateVector operator-(const StateVector& a, const StateVector& b);
  friend StateVector operator*(cplx c, const StateVector& a);

 private:
  BasisPtr basis_;
  Eigen::VectorXcd amplitudes_;
  double norm_ = 0.0;
};

bool same_basis(const StateVector& u, const StateVector& v);

/// <u|v>. Throws ShapeError when the bases differ.
cplx inner(const StateVector& u, const StateVector& v);

enum class CutoffPolicy { Truncate, Strict };

struct LadderResult {
  StateVector state;
  /// Squared norm dropped because a boson occupation would exceed n_max.
  double leakage = 0.0;
};

/// Ladder operators require a full (non-sector) basis.
LadderResult apply_creation(const StateVector& state, int mode,
                            CutoffPolicy policy = CutoffPolicy::Truncate);
LadderResult apply_creation(const StateVector& state, const ModeLabel& mode, int species_count,
                            CutoffPolicy policy = CutoffPolicy::Truncate);
StateVector apply_annihilation(const StateVector& state, int mode);
StateVector apply_annihilation(const StateVector& state, const ModeLabel& mode, int species_count);

/// sum_m creation[m] c_m^dag |psi> + sum_m annihilation[m] c_m |psi> in one pass.
/// Either coefficient vector may be empty (treated as zero).
LadderResult apply_mode_combination(const StateVector& state, const Eigen::VectorXcd& creation,
                                    const Eigen::VectorXcd& annihilation,
                                    CutoffPolicy policy = CutoffPolicy::Truncate);

enum class Ladder { Create, Annihilate };

/// Dense matrix of c_m or c_m^dag on a full basis (truncated for bosons).
Eigen::MatrixXcd dense_ladder(const FockBasis& basis, int mode, Ladder kind);

struct IdentityReport {
  int trials = 0;
  /// max |[A,B] - ({A,B} - 2BA)| over all trials.
  double max_residual_pair = 0.0;
  /// max residual of the even-length commutator expansion.
  double max_residual_commutator = 0.0;
  /// max residual of the odd-length anticommutator expansion.
  double max_residual_anticommutator = 0.0;
  int even_strings = 0;
  int odd_strings = 0;

  [[nodiscard]] double max_residual() const;
};

/// Checks the graded Leibniz expansions
///   [A, B_1...B_n] = sum_p (-1)^(p-1) B_1..{A,B_p}..B_n   (n even)
///   {A, B_1...B_n} = sum_p (-1)^(p-1) B_1..{A,B_p}..B_n   (n odd)
/// on random strings of ladder operators realized densely. Requires M <= 6.
IdentityReport check_operator_identities(const FockBasis& basis, int trials, std::uint64_t seed = 7,
                                         int max_string_length = 4);

}  // namespace qent
