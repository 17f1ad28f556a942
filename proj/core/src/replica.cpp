#include "qent/replica.hpp"

#include <cmath>
#include <string>

#include "qent/error.hpp"

namespace qent {

namespace {

std::size_t tuple_count(std::size_t d, int n, std::size_t cap) {
  std::size_t out = 1;
  for (int k = 0; k < n; ++k) {
    if (d != 0 && out > cap / d) {
      throw CapacityError("replica tensor too large: d^n exceeds cap " + std::to_string(cap));
    }
    out *= d;
  }
  return out;
}

void cycle_sum(const Eigen::MatrixXcd& rho, int remaining, Eigen::Index first, Eigen::Index current, cplx partial,
               cplx& total) {
  if (remaining == 0) {
    total += partial * rho(current, first);
    return;
  }
  for (Eigen::Index next = 0; next < rho.cols(); ++next) {
    const cplx v = rho(current, next);
    if (v == cplx{}) continue;
    cycle_sum(rho, remaining - 1, first, next, partial * v, total);
  }
}

}  // namespace

ReplicaValue replica_trace(const Eigen::MatrixXcd& rho, int n, std::size_t cap) {
  if (n < 1) throw ConfigError("replica number must be >= 1");
  if (rho.rows() != rho.cols()) throw ShapeError("replica_trace: matrix must be square");
  tuple_count(static_cast<std::size_t>(rho.rows()), n, cap);
  // sum over i_1..i_n of rho_{i1 i2} rho_{i2 i3} ... rho_{in i1}; zero entries prune the walk
  cplx total{};
  for (Eigen::Index first = 0; first < rho.rows(); ++first) cycle_sum(rho, n - 1, first, first, 1.0, total);
  return {total.real(), std::abs(total.imag())};
}

ReplicaValue replica_trace(const DensityMatrix& rho, int n, std::size_t cap) {
  return replica_trace(rho.matrix, n, cap);
}

int e_matrix_element(std::span<const std::size_t> bra, std::span<const std::size_t> ket) {
  if (bra.size() != ket.size() || bra.empty()) throw ShapeError("e_matrix_element: tuple lengths differ");
  const std::size_t n = bra.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (bra[k] != ket[(k + 1) % n]) return 0;
  }
  return 1;
}

Eigen::MatrixXd dense_replica_permutation(std::size_t d, int n) {
  if (n < 1) throw ConfigError("replica number must be >= 1");
  const std::size_t total = tuple_count(d, n, 4096);
  auto decode = [&](std::size_t index) {
    std::vector<std::size_t> t(static_cast<std::size_t>(n));
    for (int k = n - 1; k >= 0; --k) {
      t[static_cast<std::size_t>(k)] = index % d;
      index /= d;
    }
    return t;
  };
  const auto dim = static_cast<Eigen::Index>(total);
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t j = 0; j < total; ++j) {
    const auto bra = decode(j);
    for (std::size_t i = 0; i < total; ++i) {
      e(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = e_matrix_element(bra, decode(i));
    }
  }
  return e;
}

cplx replica_amplitude(const std::vector<Eigen::MatrixXcd>& bras, const std::vector<Eigen::MatrixXcd>& kets) {
  if (bras.size() != kets.size() || bras.empty()) throw ShapeError("replica_amplitude: need n bras and n kets");
  const Eigen::Index d = bras.front().rows();
  // M_k[i_{k+1}, i_k] = sum_b conj(psi_k[i_{k+1}, b]) chi_k[i_k, b]; amplitude = Tr(M_n ... M_1)
  Eigen::MatrixXcd chain = Eigen::MatrixXcd::Identity(d, d);
  for (std::size_t k = 0; k < bras.size(); ++k) {
    if (bras[k].rows() != d || kets[k].rows() != d || bras[k].cols() != kets[k].cols()) {
      throw ShapeError("replica_amplitude: inconsistent split shapes");
    }
    const Eigen::MatrixXcd m = bras[k].conjugate() * kets[k].transpose();
    chain = m * chain;
  }
  return chain.trace();
}

PPropertyResult check_pproperty(const std::vector<StateVector>& psi, const std::vector<StateVector>& chi,
                                const Region& region, int n) {
  if (n < 2 || n > 4) throw ConfigError("check_pproperty: n must be in [2, 4]");
  if (psi.size() != static_cast<std::size_t>(n) || chi.size() != static_cast<std::size_t>(n)) {
    throw ShapeError("check_pproperty: need n psi states and n chi states");
  }
  if (psi.front().basis().dimension() > (std::size_t{1} << 12)) {
    throw CapacityError("check_pproperty: full dimension exceeds 2^12");
  }
  const std::vector<int> modes = region.modes();
  std::vector<Eigen::MatrixXcd> psi_split;
  std::vector<Eigen::MatrixXcd> chi_split;
  for (int k = 0; k < n; ++k) {
    if (!same_basis(psi[static_cast<std::size_t>(k)], chi[static_cast<std::size_t>(k)]) ||
        !same_basis(psi[static_cast<std::size_t>(k)], psi.front())) {
      throw ShapeError("check_pproperty: states on different bases");
    }
    psi_split.push_back(split_state(psi[static_cast<std::size_t>(k)], modes));
    chi_split.push_back(split_state(chi[static_cast<std::size_t>(k)], modes));
  }

  PPropertyResult out;
  out.region_side = replica_amplitude(psi_split, chi_split);

  std::vector<Eigen::MatrixXcd> bras;
  std::vector<Eigen::MatrixXcd> kets;
  for (int k = 0; k < n; ++k) {
    bras.push_back(chi_split[static_cast<std::size_t>((k + 1) % n)].transpose());
    kets.push_back(psi_split[static_cast<std::size_t>(k)].transpose());
  }
  out.complement_side = std::conj(replica_amplitude(bras, kets));
  out.residual = std::abs(out.region_side - out.complement_side);
  return out;
}

LeadingOrder leading_order(const Spectrum& state, const Spectrum& vacuum, int n, double raw_norm,
                           double qm_trace_power, double qm_norm_squared) {
  if (n < 2) throw ConfigError("leading order comparison needs n >= 2");
  if (!(raw_norm > 0.0)) throw NumericalError("leading order comparison needs a positive raw norm");
  LeadingOrder out;
  out.order = n;
  out.full = renyi_entropy(state.eigenvalues, n).trace_power;
  const double r_vac = renyi_entropy(vacuum.eigenvalues, n).trace_power;
  const double scale = std::sqrt(qm_norm_squared) / raw_norm;
  out.leading = r_vac * qm_trace_power * std::pow(scale, 2.0 * n);
  out.difference = out.full - out.leading;
  return out;
}

LeadingOrder leading_vs_full(const BuiltState& built, const StateVector& vacuum, const Region& region, int n,
                             double qm_trace_power, double qm_norm_squared) {
  return leading_order(spectrum(reduced_density_matrix(built.state, region)),
                       spectrum(reduced_density_matrix(vacuum, region)), n, built.raw_norm, qm_trace_power,
                       qm_norm_squared);
}

}  // namespace qent
