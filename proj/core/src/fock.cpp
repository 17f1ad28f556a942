#include "qent/fock.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <random>
#include <string>

#include "qent/error.hpp"

namespace qent {

const char* to_string(Statistics s) { return s == Statistics::Fermi ? "fermi" : "bose"; }

std::size_t default_dimension_cap() {
  constexpr std::size_t kDefault = std::size_t{1} << 26;
  if (const char* env = std::getenv("QENT_DIM_CAP"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != nullptr && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefault;
}

namespace {

// Appends all codes with exactly `remaining` particles over modes [mode, M) in
// lexicographic order.
void enumerate_sector(int mode, int modes, int radix, int remaining, std::uint64_t prefix,
                      const std::vector<std::uint64_t>& strides, std::vector<std::uint64_t>& out,
                      std::size_t cap) {
  if (mode == modes) {
    if (remaining == 0) {
      if (out.size() >= cap) throw CapacityError("basis too large: sector dimension exceeds cap " + std::to_string(cap));
      out.push_back(prefix);
    }
    return;
  }
  const int modes_left = modes - mode;
  if (remaining > modes_left * (radix - 1)) return;
  for (int n = 0; n < radix && n <= remaining; ++n) {
    enumerate_sector(mode + 1, modes, radix, remaining - n,
                     prefix + static_cast<std::uint64_t>(n) * strides[static_cast<std::size_t>(mode)], strides,
                     out, cap);
  }
}

}  // namespace

FockBasis FockBasis::enumerate(Statistics statistics, int modes, int n_max, std::optional<int> sector,
                               std::size_t cap) {
  if (modes < 1) throw ConfigError("mode count must be >= 1, got " + std::to_string(modes));
  if (statistics == Statistics::Fermi) {
    n_max = 1;
  } else if (n_max < 1) {
    throw ConfigError("boson cutoff n_max must be >= 1, got " + std::to_string(n_max));
  }
  if (sector && (*sector < 0 || *sector > modes * n_max)) {
    throw ConfigError("particle-number sector " + std::to_string(*sector) + " is not reachable");
  }

  FockBasis b;
  b.statistics_ = statistics;
  b.modes_ = modes;
  b.n_max_ = n_max;
  b.sector_ = sector;

  const auto radix = static_cast<std::uint64_t>(n_max + 1);
  // code space must fit in 63 bits
  const double log2_space = modes * std::log2(static_cast<double>(radix));
  if (log2_space > 62.0) throw CapacityError("basis too large: code space exceeds 2^62");

  b.strides_.assign(static_cast<std::size_t>(modes), 1);
  for (int m = modes - 2; m >= 0; --m) {
    b.strides_[static_cast<std::size_t>(m)] = b.strides_[static_cast<std::size_t>(m + 1)] * radix;
  }
  const std::uint64_t full = b.strides_[0] * radix;

  if (!sector) {
    if (full > cap) {
      throw CapacityError("basis too large: dimension " + std::to_string(full) + " exceeds cap " +
                          std::to_string(cap));
    }
    b.dimension_ = static_cast<std::size_t>(full);
  } else {
    enumerate_sector(0, modes, static_cast<int>(radix), *sector, 0, b.strides_, b.codes_, cap);
    b.dimension_ = b.codes_.size();
  }
  return b;
}

std::optional<std::size_t> FockBasis::index_of(std::uint64_t code) const {
  if (!sector_) {
    if (code >= dimension_) return std::nullopt;
    return static_cast<std::size_t>(code);
  }
  auto it = std::lower_bound(codes_.begin(), codes_.end(), code);
  if (it == codes_.end() || *it != code) return std::nullopt;
  return static_cast<std::size_t>(it - codes_.begin());
}

std::vector<int> FockBasis::occupations(std::size_t index) const {
  std::vector<int> occ(static_cast<std::size_t>(modes_));
  const std::uint64_t c = code(index);
  for (int m = 0; m < modes_; ++m) occ[static_cast<std::size_t>(m)] = occupation_of_code(c, m);
  return occ;
}

int FockBasis::occupied_before(std::uint64_t code, int mode) const {
  // mode 0 is the most significant bit, so modes < `mode` sit above bit (M-1-mode)
  const int shift = modes_ - mode;
  if (shift >= 64) return 0;
  return std::popcount(code >> shift);
}

bool FockBasis::operator==(const FockBasis& other) const {
  return statistics_ == other.statistics_ && modes_ == other.modes_ && n_max_ == other.n_max_ &&
         sector_ == other.sector_;
}

BasisPtr make_basis(Statistics statistics, int modes, int n_max, std::optional<int> sector, std::size_t cap) {
  return std::make_shared<const FockBasis>(FockBasis::enumerate(statistics, modes, n_max, sector, cap));
}

StateVector::StateVector(BasisPtr basis, Eigen::VectorXcd amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
  if (!basis_) throw ShapeError("state vector without basis");
  if (static_cast<std::size_t>(amplitudes_.size()) != basis_->dimension()) {
    throw ShapeError("amplitude count " + std::to_string(amplitudes_.size()) + " does not match basis dimension " +
                     std::to_string(basis_->dimension()));
  }
  norm_ = amplitudes_.norm();
}

StateVector StateVector::zero(BasisPtr basis) {
  const auto dim = static_cast<Eigen::Index>(basis->dimension());
  return {std::move(basis), Eigen::VectorXcd::Zero(dim)};
}

StateVector StateVector::basis_state(BasisPtr basis, std::size_t index) {
  if (index >= basis->dimension()) throw ShapeError("basis index out of range");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->dimension()));
  v[static_cast<Eigen::Index>(index)] = 1.0;
  return {std::move(basis), std::move(v)};
}

StateVector StateVector::from_occupations(BasisPtr basis, const std::vector<int>& occupations) {
  if (occupations.size() != static_cast<std::size_t>(basis->mode_count())) {
    throw ShapeError("occupation tuple length does not match mode count");
  }
  std::uint64_t code = 0;
  for (int m = 0; m < basis->mode_count(); ++m) {
    const int n = occupations[static_cast<std::size_t>(m)];
    if (n < 0 || n > basis->n_max()) throw ShapeError("occupation outside [0, n_max]");
    code += static_cast<std::uint64_t>(n) * basis->stride(m);
  }
  auto idx = basis->index_of(code);
  if (!idx) throw ShapeError("occupation tuple not in basis");
  return basis_state(std::move(basis), *idx);
}

StateVector StateVector::normalized() const {
  if (norm_ == 0.0) throw NumericalError("cannot normalize a zero vector");
  return {basis_, amplitudes_ / norm_};
}

bool same_basis(const StateVector& u, const StateVector& v) {
  return u.basis_ptr() == v.basis_ptr() || u.basis() == v.basis();
}

StateVector operator+(const StateVector& a, const StateVector& b) {
  if (!same_basis(a, b)) throw ShapeError("basis mismatch in state addition");
  return {a.basis_, a.amplitudes_ + b.amplitudes_};
}

StateVector operator-(const StateVector& a, const StateVector& b) {
  if (!same_basis(a, b)) throw ShapeError("basis mismatch in state subtraction");
  return {a.basis_, a.amplitudes_ - b.amplitudes_};
}

StateVector operator*(cplx c, const StateVector& a) { return {a.basis_, c * a.amplitudes_}; }

cplx inner(const StateVector& u, const StateVector& v) {
  if (!same_basis(u, v)) throw ShapeError("basis mismatch in inner product");
  return u.amplitudes().dot(v.amplitudes());  // Eigen's dot conjugates the left operand
}

namespace {

void require_full(const FockBasis& basis) {
  if (!basis.is_full()) throw ShapeError("ladder operators need a full (non-sector) basis");
}

void require_mode(const FockBasis& basis, int mode) {
  if (mode < 0 || mode >= basis.mode_count()) {
    throw ShapeError("mode " + std::to_string(mode) + " out of range [0, " + std::to_string(basis.mode_count()) +
                     ")");
  }
}

double jw_sign(const FockBasis& basis, std::uint64_t code, int mode) {
  if (!basis.fermionic()) return 1.0;
  return (basis.occupied_before(code, mode) & 1) ? -1.0 : 1.0;
}

}  // namespace

LadderResult apply_mode_combination(const StateVector& state, const Eigen::VectorXcd& creation,
                                    const Eigen::VectorXcd& annihilation, CutoffPolicy policy) {
  const FockBasis& basis = state.basis();
  require_full(basis);
  const int modes = basis.mode_count();
  if ((creation.size() != 0 && creation.size() != modes) ||
      (annihilation.size() != 0 && annihilation.size() != modes)) {
    throw ShapeError("mode coefficient vector length does not match mode count");
  }

  std::vector<int> create_modes;
  std::vector<int> destroy_modes;
  for (int m = 0; m < modes; ++m) {
    if (creation.size() != 0 && creation[m] != cplx{}) create_modes.push_back(m);
    if (annihilation.size() != 0 && annihilation[m] != cplx{}) destroy_modes.push_back(m);
  }

  const Eigen::VectorXcd& in = state.amplitudes();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(in.size());
  const int n_max = basis.n_max();
  double leakage = 0.0;

  for (Eigen::Index i = 0; i < in.size(); ++i) {
    const cplx amp = in[i];
    if (amp == cplx{}) continue;
    const auto code = static_cast<std::uint64_t>(i);
    for (int m : create_modes) {
      const int n = basis.occupation_of_code(code, m);
      if (n == n_max) {
        if (!basis.fermionic()) {
          const double dropped = std::norm(creation[m] * amp) * (n + 1);
          if (policy == CutoffPolicy::Strict && dropped > 0.0) {
            throw NumericalError("boson creation exceeds cutoff n_max=" + std::to_string(n_max) + " on mode " +
                                 std::to_string(m));
          }
          leakage += dropped;
        }
        continue;
      }
      const double factor = basis.fermionic() ? jw_sign(basis, code, m) : std::sqrt(static_cast<double>(n + 1));
      out[static_cast<Eigen::Index>(code + basis.stride(m))] += creation[m] * factor * amp;
    }
    for (int m : destroy_modes) {
      const int n = basis.occupation_of_code(code, m);
      if (n == 0) continue;
      const double factor = basis.fermionic() ? jw_sign(basis, code, m) : std::sqrt(static_cast<double>(n));
      out[static_cast<Eigen::Index>(code - basis.stride(m))] += annihilation[m] * factor * amp;
    }
  }
  return {StateVector(state.basis_ptr(), std::move(out)), leakage};
}

LadderResult apply_creation(const StateVector& state, int mode, CutoffPolicy policy) {
  require_mode(state.basis(), mode);
  Eigen::VectorXcd coeff = Eigen::VectorXcd::Zero(state.basis().mode_count());
  coeff[mode] = 1.0;
  return apply_mode_combination(state, coeff, Eigen::VectorXcd(), policy);
}

LadderResult apply_creation(const StateVector& state, const ModeLabel& mode, int species_count,
                            CutoffPolicy policy) {
  return apply_creation(state, static_cast<int>(mode.linear(species_count)), policy);
}

StateVector apply_annihilation(const StateVector& state, int mode) {
  require_mode(state.basis(), mode);
  Eigen::VectorXcd coeff = Eigen::VectorXcd::Zero(state.basis().mode_count());
  coeff[mode] = 1.0;
  return apply_mode_combination(state, Eigen::VectorXcd(), coeff).state;
}

StateVector apply_annihilation(const StateVector& state, const ModeLabel& mode, int species_count) {
  return apply_annihilation(state, static_cast<int>(mode.linear(species_count)));
}

Eigen::MatrixXcd dense_ladder(const FockBasis& basis, int mode, Ladder kind) {
  require_full(basis);
  require_mode(basis, mode);
  const auto dim = static_cast<Eigen::Index>(basis.dimension());
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto code = static_cast<std::uint64_t>(i);
    const int n = basis.occupation_of_code(code, mode);
    if (kind == Ladder::Create) {
      if (n == basis.n_max()) continue;
      const double f = basis.fermionic() ? jw_sign(basis, code, mode) : std::sqrt(static_cast<double>(n + 1));
      op(static_cast<Eigen::Index>(code + basis.stride(mode)), i) = f;
    } else {
      if (n == 0) continue;
      const double f = basis.fermionic() ? jw_sign(basis, code, mode) : std::sqrt(static_cast<double>(n));
      op(static_cast<Eigen::Index>(code - basis.stride(mode)), i) = f;
    }
  }
  return op;
}

double IdentityReport::max_residual() const {
  return std::max({max_residual_pair, max_residual_commutator, max_residual_anticommutator});
}

namespace {

Eigen::MatrixXcd product(const std::vector<Eigen::MatrixXcd>& ops, std::size_t from, std::size_t to,
                         Eigen::Index dim) {
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(dim, dim);
  for (std::size_t k = from; k < to; ++k) p = p * ops[k];
  return p;
}

// sum_p (-1)^(p-1) B_1..B_{p-1} {A,B_p} B_{p+1}..B_n
Eigen::MatrixXcd graded_expansion(const Eigen::MatrixXcd& a, const std::vector<Eigen::MatrixXcd>& bs) {
  const Eigen::Index dim = a.rows();
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t p = 0; p < bs.size(); ++p) {
    const Eigen::MatrixXcd anti = a * bs[p] + bs[p] * a;
    const double sign = (p % 2 == 0) ? 1.0 : -1.0;
    sum += sign * product(bs, 0, p, dim) * anti * product(bs, p + 1, bs.size(), dim);
  }
  return sum;
}

}  // namespace

IdentityReport check_operator_identities(const FockBasis& basis, int trials, std::uint64_t seed,
                                         int max_string_length) {
  if (basis.mode_count() > 6) throw CapacityError("operator identity check limited to M <= 6 modes");
  if (max_string_length < 1) throw ConfigError("max_string_length must be >= 1");
  require_full(basis);

  const int modes = basis.mode_count();
  std::vector<Eigen::MatrixXcd> creators;
  std::vector<Eigen::MatrixXcd> annihilators;
  for (int m = 0; m < modes; ++m) {
    creators.push_back(dense_ladder(basis, m, Ladder::Create));
    annihilators.push_back(dense_ladder(basis, m, Ladder::Annihilate));
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_mode(0, modes - 1);
  std::uniform_int_distribution<int> pick_kind(0, 1);
  std::uniform_int_distribution<int> pick_len(1, max_string_length);
  auto random_op = [&]() -> const Eigen::MatrixXcd& {
    const int m = pick_mode(rng);
    return pick_kind(rng) ? creators[static_cast<std::size_t>(m)] : annihilators[static_cast<std::size_t>(m)];
  };

  IdentityReport report;
  for (int t = 0; t < trials; ++t) {
    const Eigen::MatrixXcd a = random_op();
    const int n = pick_len(rng);
    std::vector<Eigen::MatrixXcd> bs;
    bs.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) bs.push_back(random_op());

    const Eigen::Index dim = a.rows();
    const Eigen::MatrixXcd string = product(bs, 0, bs.size(), dim);
    const Eigen::MatrixXcd rhs = graded_expansion(a, bs);
    if (n % 2 == 0) {
      const double r = (a * string - string * a - rhs).cwiseAbs().maxCoeff();
      report.max_residual_commutator = std::max(report.max_residual_commutator, r);
      ++report.even_strings;
    } else {
      const double r = (a * string + string * a - rhs).cwiseAbs().maxCoeff();
      report.max_residual_anticommutator = std::max(report.max_residual_anticommutator, r);
      ++report.odd_strings;
    }
    const Eigen::MatrixXcd& b0 = bs.front();
    const Eigen::MatrixXcd pair = (a * b0 - b0 * a) - ((a * b0 + b0 * a) - 2.0 * b0 * a);
    report.max_residual_pair = std::max(report.max_residual_pair, pair.cwiseAbs().maxCoeff());
    ++report.trials;
  }
  return report;
}

}  // namespace qent
