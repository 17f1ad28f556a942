#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>

#include "qent/entangle.hpp"
#include "qent/error.hpp"
#include "qent/excitations.hpp"
#include "qent/model.hpp"
#include "test_util.hpp"

using namespace qent;

namespace {

std::vector<double> nonzero(std::vector<double> v) {
  v.erase(std::remove_if(v.begin(), v.end(), [](double x) { return x < 1e-12; }), v.end());
  return v;
}

}  // namespace

TEST(Entangle, RegionValidation) {
  EXPECT_THROW(Region({}, 4, 1), ConfigError);
  EXPECT_THROW(Region({0, 1, 2, 3}, 4, 1), ConfigError);
  EXPECT_THROW(Region({4}, 4, 1), ConfigError);
  const Region r({2, 0, 2}, 4, 2);
  EXPECT_EQ(r.sites(), (std::vector<int>{0, 2}));
  EXPECT_EQ(r.modes(), (std::vector<int>{0, 1, 4, 5}));
  EXPECT_EQ(r.complement().sites(), (std::vector<int>{1, 3}));
}

TEST(Entangle, ProductState) {
  const auto b = make_basis(Statistics::Fermi, 2);
  const auto rho = reduced_density_matrix(StateVector::from_occupations(b, {1, 0}), Region({0}, 2, 1));
  Eigen::Matrix2cd expected;
  expected << 0, 0, 0, 1;
  EXPECT_LT((rho.matrix - expected).norm(), 1e-15);
}

TEST(Entangle, BellAcrossCut) {
  const auto b = make_basis(Statistics::Fermi, 2);
  const auto psi = (1.0 / std::sqrt(2.0)) * (StateVector::from_occupations(b, {1, 0}) +
                                             StateVector::from_occupations(b, {0, 1}));
  const auto rho = reduced_density_matrix(psi, Region({0}, 2, 1));
  EXPECT_LT((rho.matrix - 0.5 * Eigen::Matrix2cd::Identity()).norm(), 1e-15);
  const auto s = spectrum(rho);
  ASSERT_EQ(s.entanglement.size(), 2u);
  EXPECT_NEAR(s.entanglement[0], std::log(2.0), 1e-14);
}

namespace {

// keeps the amplitudes of one total fermion parity
StateVector parity_projected(const StateVector& psi, int parity) {
  const auto& b = psi.basis();
  Eigen::VectorXcd v = psi.amplitudes();
  for (std::size_t i = 0; i < b.dimension(); ++i) {
    int count = 0;
    for (int n : b.occupations(i)) count += n;
    if (count % 2 != parity) v[static_cast<Eigen::Index>(i)] = 0.0;
  }
  return {psi.basis_ptr(), v.normalized()};
}

void expect_same_nonzero_spectrum(const StateVector& psi, const Region& omega, double tol) {
  const auto a = nonzero(spectrum(reduced_density_matrix(psi, omega)).eigenvalues);
  const auto c = nonzero(spectrum(reduced_density_matrix(psi, omega.complement())).eigenvalues);
  ASSERT_EQ(a.size(), c.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], c[i], tol);
}

}  // namespace

TEST(Entangle, RandomTwelveModeComplementarity) {
  std::mt19937_64 rng(12);
  const auto b = make_basis(Statistics::Fermi, 12);
  const Region omega({0, 2, 4, 6, 8, 10}, 12, 1);
  for (int parity : {0, 1}) {
    const auto psi = parity_projected(test::random_state(rng, b), parity);
    const auto ra = reduced_density_matrix(psi, omega);
    const auto rb = reduced_density_matrix(psi, omega.complement());
    EXPECT_NEAR(ra.matrix.trace().real(), 1.0, 1e-12);
    EXPECT_GE(spectrum(ra).eigenvalues.back(), 0.0);
    EXPECT_NEAR((ra.matrix * ra.matrix).trace().real(), (rb.matrix * rb.matrix).trace().real(), 1e-10);
  }
}

TEST(Entangle, PureComplementarity) {
  std::mt19937_64 rng(13);
  const auto bosons = make_basis(Statistics::Bose, 5, 2);
  const auto fermions = make_basis(Statistics::Fermi, 6);
  for (int t = 0; t < 10; ++t) {
    const Region omega5({0, 3}, 5, 1);
    expect_same_nonzero_spectrum(test::random_state(rng, bosons), omega5, 1e-9);
    const Region omega6(t % 2 ? std::vector<int>{1, 2, 4} : std::vector<int>{0, 5}, 6, 1);
    expect_same_nonzero_spectrum(parity_projected(test::random_state(rng, fermions), t % 2), omega6, 1e-9);
  }
}

TEST(Entangle, ComplementOfSameSplitForAnyFermionState) {
  // Psi^T of the region-first split is always a valid complement factorization,
  // including superpositions of both fermion parities
  std::mt19937_64 rng(14);
  const auto b = make_basis(Statistics::Fermi, 6);
  const Region omega({0, 3, 4}, 6, 1);
  for (int t = 0; t < 10; ++t) {
    const auto psi = test::random_state(rng, b);
    const Eigen::MatrixXcd split = split_state(psi, omega.modes());
    const Eigen::MatrixXcd rho_c = split.transpose() * split.conjugate();
    const auto a = nonzero(spectrum(reduced_density_matrix(psi, omega)).eigenvalues);
    const auto c = nonzero(spectrum(rho_c).eigenvalues);
    ASSERT_EQ(a.size(), c.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], c[i], 1e-9);
  }
}

TEST(Entangle, ComplementOrderingSignForMixedParity) {
  // region-first and complement-first Jordan-Wigner splits differ by (-1)^(N_A N_B)
  std::mt19937_64 rng(15);
  const auto b = make_basis(Statistics::Fermi, 4);
  const Region omega({0, 2}, 4, 1);
  const auto psi = test::random_state(rng, b);
  const Eigen::MatrixXcd ab = split_state(psi, omega.modes());
  const Eigen::MatrixXcd ba = split_state(psi, omega.complement().modes());
  for (Eigen::Index a = 0; a < ab.rows(); ++a) {
    for (Eigen::Index c = 0; c < ab.cols(); ++c) {
      const int na = std::popcount(static_cast<unsigned>(a));
      const int nb = std::popcount(static_cast<unsigned>(c));
      const double sign = (na * nb) % 2 ? -1.0 : 1.0;
      EXPECT_LT(std::abs(ba(c, a) - sign * ab(a, c)), 1e-15);
    }
  }
}

TEST(Entangle, Spectra) {
  const auto half = spectrum(Eigen::MatrixXcd(0.5 * Eigen::Matrix2cd::Identity()));
  EXPECT_NEAR(half.eigenvalues[0], 0.5, 1e-15);
  EXPECT_NEAR(half.eigenvalues[1], 0.5, 1e-15);
  Eigen::MatrixXcd pure = Eigen::MatrixXcd::Zero(3, 3);
  pure(1, 1) = 1.0;
  const auto p = spectrum(pure);
  EXPECT_EQ(p.eigenvalues, (std::vector<double>{1.0, 0.0, 0.0}));
  std::mt19937_64 rng(16);
  const auto r = spectrum(test::random_density(rng, 16));
  double sum = 0.0;
  for (double v : r.eigenvalues) sum += v;
  EXPECT_NEAR(sum, 1.0, 1e-10);
  EXPECT_TRUE(std::is_sorted(r.eigenvalues.rbegin(), r.eigenvalues.rend()));
}

TEST(Entangle, NegativeEigenvalueRejected) {
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(2, 2);
  bad(0, 0) = 1.1;
  bad(1, 1) = -0.1;
  EXPECT_THROW(spectrum(bad), NumericalError);
  bad(0, 0) = 1.0 + 1e-11;
  bad(1, 1) = -1e-11;
  EXPECT_EQ(spectrum(bad).eigenvalues[1], 0.0);
}

TEST(Entangle, RenyiExamples) {
  for (double n : {0.5, 1.0, 2.0, 3.0, 7.0}) {
    EXPECT_EQ(renyi_entropy({1.0}, n).entropy, 0.0);
    EXPECT_NEAR(renyi_entropy({0.5, 0.5}, n).entropy, std::log(2.0), 1e-14);
  }
  EXPECT_NEAR(renyi_entropy({0.9, 0.1}, 2).entropy, 0.198450938723838, 1e-12);
  EXPECT_NEAR(renyi_entropy({0.9, 0.1}, 2).trace_power, 0.82, 1e-15);
  EXPECT_EQ(von_neumann_entropy({1.0}), 0.0);
  EXPECT_NEAR(von_neumann_entropy({0.5, 0.5}), 0.693147180559945, 1e-14);
  EXPECT_THROW(renyi_entropy({0.5, 0.5}, 0.0), ConfigError);
}

TEST(Entangle, RenyiBracketsVonNeumann) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 20; ++t) {
    const auto ev = spectrum(test::random_density(rng, 6)).eigenvalues;
    const double s1 = von_neumann_entropy(ev);
    const double lo = renyi_entropy(ev, 1.0 + 1e-4).entropy;
    const double hi = renyi_entropy(ev, 1.0 - 1e-4).entropy;
    EXPECT_LE(lo, s1 + 1e-12);
    EXPECT_GE(hi, s1 - 1e-12);
    EXPECT_LT(hi - lo, 1e-3);
  }
}

TEST(Entangle, RenyiMonotoneInOrder) {
  std::mt19937_64 rng(18);
  for (int t = 0; t < 20; ++t) {
    const auto ev = spectrum(test::random_density(rng, 8)).eigenvalues;
    double previous = 1e9;
    for (double n : {0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 10.0}) {
      const double s = renyi_entropy(ev, n).entropy;
      EXPECT_LE(s, previous + 1e-12);
      previous = s;
    }
  }
}

TEST(Entangle, RelabelingInvariance) {
  std::mt19937_64 rng(19);
  const auto b = make_basis(Statistics::Fermi, 6);
  const auto psi = test::random_state(rng, b);
  const auto a = spectrum(reduced_density_matrix(psi, Region({4, 1, 2}, 6, 1))).eigenvalues;
  const auto c = spectrum(reduced_density_matrix(psi, Region({1, 2, 4}, 6, 1))).eigenvalues;
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], c[i], 1e-12);

  // reflecting the chain and the region together leaves the spectrum unchanged
  Eigen::VectorXcd mirrored(static_cast<Eigen::Index>(b->dimension()));
  for (std::size_t i = 0; i < b->dimension(); ++i) {
    auto n = b->occupations(i);
    std::reverse(n.begin(), n.end());
    int count = 0;
    for (int v : n) count += v;
    // reversing k fermions permutes the creation string by k(k-1)/2 transpositions
    const double sign = ((count * (count - 1) / 2) % 2) ? -1.0 : 1.0;
    std::uint64_t code = 0;
    for (int v : n) code = 2 * code + static_cast<std::uint64_t>(v);
    mirrored[static_cast<Eigen::Index>(*b->index_of(code))] = sign * psi[i];
  }
  const StateVector m(b, mirrored);
  for (const std::vector<int>& sites : {std::vector<int>{0, 1}, std::vector<int>{0, 2, 3}}) {
    std::vector<int> reflected;
    for (int x : sites) reflected.push_back(5 - x);
    const auto s1 = spectrum(reduced_density_matrix(psi, Region(sites, 6, 1))).eigenvalues;
    const auto s2 = spectrum(reduced_density_matrix(m, Region(reflected, 6, 1))).eigenvalues;
    for (std::size_t i = 0; i < s1.size(); ++i) EXPECT_NEAR(s1[i], s2[i], 1e-10);
  }
}

TEST(Entangle, VacuumSubtraction) {
  LatticeModel model;
  model.sites = 6;
  model.species = 2;
  const auto modes = model_modes(model);
  const auto vac = build_vacuum(model, modes, model_basis(model));
  const Region omega({0, 1, 2}, 6, 2);

  const auto same = vacuum_subtracted_report(vac, vac, omega, {1, 2, 3});
  for (const auto& o : same.renyi) EXPECT_EQ(o.subtracted, 0.0);
  EXPECT_EQ(same.von_neumann.vacuum, 0.0);

  auto packet = [&](const char* name, double c, int s) {
    PacketProfile p;
    p.name = name;
    p.center = c;
    p.species = s;
    return make_packet(p, model, modes);
  };
  const StateRecipe singlet{{{1.0, {packet("a", 0, 0), packet("b", 5, 1)}},
                             {1.0, {packet("c", 0, 1), packet("d", 5, 0)}}}};
  const auto built = build_state(singlet, vac);
  const auto report = vacuum_subtracted_report(built.state, vac, omega, {1, 2, 3});
  for (const auto& o : report.renyi) EXPECT_NEAR(o.subtracted, std::log(2.0), 0.05) << o.order;
  EXPECT_NEAR(report.von_neumann.subtracted, std::log(2.0), 0.05);
}

TEST(Entangle, SingleDelocalizedParticle) {
  LatticeModel model;
  model.sites = 8;
  model.species = 1;
  const auto modes = model_modes(model);
  const auto vac = build_vacuum(model, modes, model_basis(model));
  auto packet = [&](double c) {
    PacketProfile p;
    p.name = "p";
    p.center = c;
    return make_packet(p, model, modes);
  };
  const Region omega({0, 1, 2, 3}, 8, 1);
  const auto split = build_state(StateRecipe{{{1.0, {packet(0)}}, {1.0, {packet(7)}}}}, vac);
  EXPECT_NEAR(vacuum_subtracted_report(split.state, vac, omega, {1}).von_neumann.subtracted, std::log(2.0), 0.05);

  // a single packet straddling the cut: recorded in [0, log 2 + margin]
  const auto straddle = build_state(StateRecipe{{{1.0, {packet(3.5)}}}}, vac);
  const double s = vacuum_subtracted_report(straddle.state, vac, omega, {1}).von_neumann.subtracted;
  EXPECT_GE(s, 0.0);
  EXPECT_LE(s, std::log(2.0) + 0.1);
  RecordProperty("straddling_packet_S1", std::to_string(s));
}

TEST(Entangle, UnnormalizedStateRejected) {
  const auto b = make_basis(Statistics::Fermi, 2);
  const auto psi = 2.0 * StateVector::from_occupations(b, {1, 0});
  EXPECT_THROW(reduced_density_matrix(psi, Region({0}, 2, 1)), NumericalError);
}

TEST(Entangle, CapacityCheck) {
  const auto b = make_basis(Statistics::Fermi, 10);
  const auto psi = StateVector::basis_state(b, 0);
  EXPECT_THROW(reduced_density_matrix(psi, Region({0, 1, 2, 3, 4, 5}, 10, 1), 1000), CapacityError);
}

TEST(Entangle, ParityNote) {
  const auto b = make_basis(Statistics::Fermi, 2);
  const auto vac = StateVector::basis_state(b, 0);
  const auto mixed = (1.0 / std::sqrt(2.0)) * (vac + StateVector::from_occupations(b, {1, 0}));
  const auto report = vacuum_subtracted_report(mixed, vac, Region({0}, 2, 1), {2});
  ASSERT_EQ(report.notes.size(), 1u);
  EXPECT_NE(report.notes[0].find("parity"), std::string::npos);
}
