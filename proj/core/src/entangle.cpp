#include "qent/entangle.hpp"

#include <algorithm>
#include <cmath>
#include <bit>
#include <numeric>
#include <sstream>

#include "qent/error.hpp"

namespace qent {

Region::Region(std::vector<int> sites, int lattice_sites, int species)
    : sites_(std::move(sites)), lattice_sites_(lattice_sites), species_(species) {
  std::sort(sites_.begin(), sites_.end());
  sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
  if (species_ < 1) throw ConfigError("region: species must be >= 1");
  if (sites_.empty()) throw ConfigError("region: site set is empty");
  if (sites_.front() < 0 || sites_.back() >= lattice_sites_) throw ConfigError("region: site outside the lattice");
  if (static_cast<int>(sites_.size()) == lattice_sites_) throw ConfigError("region: must be a proper subset of sites");
}

std::vector<int> Region::modes() const {
  std::vector<int> out;
  for (int x : sites_) {
    for (int s = 0; s < species_; ++s) out.push_back(x * species_ + s);
  }
  return out;
}

Region Region::complement() const {
  std::vector<int> rest;
  for (int x = 0; x < lattice_sites_; ++x) {
    if (!contains(x)) rest.push_back(x);
  }
  return {rest, lattice_sites_, species_};
}

bool Region::contains(int site) const { return std::binary_search(sites_.begin(), sites_.end(), site); }

namespace {

std::size_t checked_power(std::size_t base, std::size_t exp, std::size_t cap) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (out > cap / base) return cap + 1;
    out *= base;
  }
  return out;
}

}  // namespace

Eigen::MatrixXcd split_state(const StateVector& state, const std::vector<int>& modes, std::size_t cap) {
  const FockBasis& basis = state.basis();
  const int total = basis.mode_count();
  std::vector<bool> in_region(static_cast<std::size_t>(total), false);
  for (std::size_t j = 0; j < modes.size(); ++j) {
    const int m = modes[j];
    if (m < 0 || m >= total) throw ShapeError("split_state: mode out of range");
    if (j > 0 && modes[j - 1] >= m) throw ShapeError("split_state: modes must be strictly ascending");
    in_region[static_cast<std::size_t>(m)] = true;
  }
  const auto radix = static_cast<std::size_t>(basis.radix());
  const std::size_t region_count = modes.size();
  const std::size_t rest_count = static_cast<std::size_t>(total) - region_count;
  const std::size_t dim_a = checked_power(radix, region_count, cap);
  const std::size_t dim_b = checked_power(radix, rest_count, cap);
  if (dim_a > cap || dim_b > cap || dim_a * dim_a > cap) {
    throw CapacityError("region too large: reduced density matrix exceeds cap " + std::to_string(cap));
  }

  Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim_a), static_cast<Eigen::Index>(dim_b));
  const bool fermi = basis.fermionic();
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    const cplx amp = state[i];
    if (amp == cplx{}) continue;
    const std::uint64_t code = basis.code(i);
    std::size_t a = 0;
    std::size_t b = 0;
    int rest_seen = 0;
    int inversions = 0;
    for (int m = 0; m < total; ++m) {
      const int n = basis.occupation_of_code(code, m);
      if (in_region[static_cast<std::size_t>(m)]) {
        a = a * radix + static_cast<std::size_t>(n);
        if (fermi && n) inversions += rest_seen;
      } else {
        b = b * radix + static_cast<std::size_t>(n);
        if (fermi && n) ++rest_seen;
      }
    }
    psi(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) += (inversions & 1) ? -amp : amp;
  }
  return psi;
}

DensityMatrix reduced_density_matrix(const StateVector& state, const std::vector<int>& modes, std::size_t cap) {
  if (std::abs(state.norm() - 1.0) > 1e-10) {
    throw NumericalError("reduced_density_matrix: state is not normalized (norm " + std::to_string(state.norm()) + ")");
  }
  const Eigen::MatrixXcd psi = split_state(state, modes, cap);
  Eigen::MatrixXcd rho = psi * psi.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const double trace = rho.trace().real();
  if (std::abs(trace - 1.0) > 1e-10) throw NumericalError("reduced_density_matrix: trace deviates from 1");
  DensityMatrix out;
  out.matrix = std::move(rho);
  out.statistics = state.basis().statistics();
  out.mode_count = static_cast<int>(modes.size());
  out.n_max = state.basis().n_max();
  return out;
}

DensityMatrix reduced_density_matrix(const StateVector& state, const Region& region, std::size_t cap) {
  if (region.lattice_sites() * region.species() != state.basis().mode_count()) {
    throw ShapeError("region does not match the state's lattice");
  }
  return reduced_density_matrix(state, region.modes(), cap);
}

Spectrum spectrum(const Eigen::MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("spectrum: eigensolver failed");
  Spectrum s;
  const Eigen::VectorXd& ev = es.eigenvalues();
  for (Eigen::Index i = ev.size() - 1; i >= 0; --i) {
    double v = ev[i];
    if (v < -kNegativityTolerance) {
      throw NumericalError("spectrum: eigenvalue " + std::to_string(v) + " below tolerance");
    }
    v = std::max(v, 0.0);
    s.eigenvalues.push_back(v);
    if (v > kEigenFloor) s.entanglement.push_back(-std::log(v));
  }
  return s;
}

Spectrum spectrum(const DensityMatrix& rho) { return spectrum(rho.matrix); }

double von_neumann_entropy(const std::vector<double>& eigenvalues) {
  double s = 0.0;
  for (double v : eigenvalues) {
    if (v > kEigenFloor) s -= v * std::log(v);
  }
  return std::max(s, 0.0) + 0.0;
}

RenyiValue renyi_entropy(const std::vector<double>& eigenvalues, double n) {
  if (!(n > 0.0)) throw ConfigError("renyi order must be > 0");
  if (std::none_of(eigenvalues.begin(), eigenvalues.end(), [](double v) { return v > kEigenFloor; })) {
    throw NumericalError("renyi_entropy: every eigenvalue is below the floor");
  }
  if (n == 1.0) return {von_neumann_entropy(eigenvalues), 1.0};
  double r = 0.0;
  for (double v : eigenvalues) {
    if (v > kEigenFloor) r += std::pow(v, n);
  }
  // entropy is >= 0 mathematically; clip roundoff from log(1 - eps)
  return {std::max(std::log(r) / (1.0 - n), 0.0) + 0.0, r};
}

const OrderEntropy* EntropyReport::find(double order) const {
  if (order == 1.0) return &von_neumann;
  for (const auto& r : renyi) {
    if (r.order == order) return &r;
  }
  return nullptr;
}

namespace {

OrderEntropy order_entropy(const Spectrum& state, const Spectrum& vacuum, double n) {
  const RenyiValue s = renyi_entropy(state.eigenvalues, n);
  const RenyiValue v = renyi_entropy(vacuum.eigenvalues, n);
  return {n, s.entropy, v.entropy, s.entropy - v.entropy, s.trace_power, v.trace_power};
}

std::pair<double, double> parity_weights(const DensityMatrix& rho) {
  double even = 0.0;
  double odd = 0.0;
  for (Eigen::Index a = 0; a < rho.dimension(); ++a) {
    const double w = rho.matrix(a, a).real();
    (std::popcount(static_cast<std::uint64_t>(a)) % 2 == 0 ? even : odd) += w;
  }
  return {even, odd};
}

}  // namespace

EntropyReport vacuum_subtracted_report(const DensityMatrix& rho_state, const DensityMatrix& rho_vacuum,
                                       const std::vector<double>& orders) {
  if (rho_state.dimension() != rho_vacuum.dimension()) {
    throw ShapeError("vacuum_subtracted_report: state and vacuum matrices differ in size");
  }
  EntropyReport report;
  report.orders = orders;
  report.spectrum_state = spectrum(rho_state);
  report.spectrum_vacuum = spectrum(rho_vacuum);
  for (double n : orders) report.renyi.push_back(order_entropy(report.spectrum_state, report.spectrum_vacuum, n));
  report.von_neumann = order_entropy(report.spectrum_state, report.spectrum_vacuum, 1.0);

  if (rho_state.statistics == Statistics::Fermi) {
    const auto [even, odd] = parity_weights(rho_state);
    if (even > 1e-12 && odd > 1e-12) {
      std::ostringstream os;
      os << "region fermion parity is mixed (even weight " << even << ", odd weight " << odd
         << "); entropies use the Jordan-Wigner partial trace";
      report.notes.push_back(os.str());
    }
  }
  return report;
}

EntropyReport vacuum_subtracted_report(const StateVector& state, const StateVector& vacuum, const Region& region,
                                       const std::vector<double>& orders, std::size_t cap) {
  if (!same_basis(state, vacuum)) throw ShapeError("state and vacuum live on different bases");
  return vacuum_subtracted_report(reduced_density_matrix(state, region, cap),
                                  reduced_density_matrix(vacuum, region, cap), orders);
}

}  // namespace qent
