#include <gtest/gtest.h>

#include <cmath>

#include "qent/error.hpp"
#include "qent/lanczos.hpp"
#include "qent/model.hpp"
#include "test_util.hpp"

using namespace qent;

namespace {

LatticeModel chain(int sites, double mass, double hopping, int species = 1) {
  LatticeModel m;
  m.sites = sites;
  m.species = species;
  m.mass = mass;
  m.hopping = hopping;
  return m;
}

LatticeModel insulator(int sites, double mass, int species = 1) {
  LatticeModel m = chain(sites, mass, 1.0, species);
  m.staggered = true;
  m.regime = VacuumRegime::HalfFilled;
  return m;
}

Eigen::MatrixXcd dense_hamiltonian(const LatticeModel& model, const BasisPtr& basis) {
  const auto d = static_cast<Eigen::Index>(basis->dimension());
  Eigen::MatrixXcd h(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    h.col(i) = apply_hamiltonian(model, StateVector::basis_state(basis, static_cast<std::size_t>(i))).amplitudes();
  }
  return h;
}

StateVector vacuum_of(const LatticeModel& m) {
  return build_vacuum(m, model_modes(m), model_basis(m));
}

}  // namespace

TEST(Model, TwoSiteHamiltonian) {
  const auto h = single_particle_hamiltonian(chain(2, 4, 1));
  Eigen::Matrix2cd expected;
  expected << 4.0, -1.0, -1.0, 4.0;
  EXPECT_LT((h - expected).norm(), 1e-15);
  const auto modes = diagonalize_modes(h);
  EXPECT_NEAR(modes.energies[0], 3.0, 1e-14);
  EXPECT_NEAR(modes.energies[1], 5.0, 1e-14);
  const double s = 1.0 / std::sqrt(2.0);
  EXPECT_LT((modes.vectors.col(0) - Eigen::Vector2cd(s, s)).norm(), 1e-14);
  EXPECT_LT((modes.vectors.col(1) - Eigen::Vector2cd(s, -s)).norm(), 1e-14);
}

TEST(Model, StaggeredTwoSite) {
  LatticeModel m = insulator(2, 1);
  const auto modes = diagonalize_modes(single_particle_hamiltonian(m));
  EXPECT_NEAR(modes.energies[0], -std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(modes.energies[1], std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(spectral_gap(m), 2.0 * std::sqrt(2.0), 1e-14);
}

TEST(Model, AtomicLimitIsIdentity) {
  const auto h = single_particle_hamiltonian(chain(4, 1, 0));
  EXPECT_LT((h - Eigen::MatrixXcd::Identity(4, 4)).norm(), 1e-15);
  const auto modes = diagonalize_modes(h);
  EXPECT_LT((modes.vectors - Eigen::MatrixXcd::Identity(4, 4)).norm(), 1e-15);
  for (int k = 0; k < 4; ++k) EXPECT_DOUBLE_EQ(modes.energies[k], 1.0);
}

TEST(Model, RandomHermitianDiagonalized) {
  std::mt19937_64 rng(21);
  const Eigen::MatrixXcd h = test::random_hermitian(rng, 6);
  const auto modes = diagonalize_modes(h);
  const Eigen::MatrixXcd d = modes.vectors.adjoint() * h * modes.vectors;
  Eigen::MatrixXcd off = d;
  off.diagonal().setZero();
  EXPECT_LT(off.norm(), 1e-12);
  EXPECT_LT((modes.vectors.adjoint() * modes.vectors - Eigen::MatrixXcd::Identity(6, 6)).norm(), 1e-12);
  for (int k = 1; k < 6; ++k) EXPECT_LE(modes.energies[k - 1], modes.energies[k]);
}

TEST(Model, PeriodicBonds) {
  LatticeModel m = chain(4, 4, 1);
  m.boundary = Boundary::Periodic;
  EXPECT_EQ(adjacency(m)(0, 3), 1.0);
  LatticeModel two = chain(2, 4, 1);
  two.boundary = Boundary::Periodic;
  EXPECT_EQ(adjacency(two)(0, 1), 1.0);  // no doubled bond
}

TEST(Model, Gaps) {
  LatticeModel m = chain(64, 4, 1);
  m.boundary = Boundary::Periodic;
  EXPECT_NEAR(spectral_gap(m), 2.0, 1e-9);
  LatticeModel ins = insulator(8, 1);
  ins.boundary = Boundary::Periodic;
  EXPECT_NEAR(spectral_gap(ins), 2.0, 1e-9);
  EXPECT_NEAR(spectral_gap(chain(5, 1, 0)), 1.0, 1e-15);
}

TEST(Model, GapConditionEnforced) {
  EXPECT_THROW(validate(chain(4, 1, 1)), ConfigError);
  EXPECT_THROW(validate(chain(4, 2, 1)), ConfigError);
  LatticeModel odd = insulator(3, 1);
  EXPECT_THROW(validate(odd), ConfigError);
  LatticeModel unstaggered = insulator(4, 1);
  unstaggered.staggered = false;
  EXPECT_THROW(validate(unstaggered), ConfigError);
}

TEST(Model, EmptyVacuum) {
  const auto vac = vacuum_of(chain(3, 4, 1, 2));
  EXPECT_EQ(vac[0], cplx(1.0, 0.0));
  EXPECT_DOUBLE_EQ(vac.norm(), 1.0);
}

TEST(Model, HalfFilledTwoSiteVacuum) {
  const auto vac = vacuum_of(insulator(2, 0));
  // basis order: 00, 01, 10, 11
  const double s = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(vac[1] - cplx(s, 0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(vac[2] - cplx(s, 0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(vac[0]) + std::abs(vac[3]), 0.0, 1e-12);
}

TEST(Model, BosonGroundNearFockVacuum) {
  LatticeModel m = chain(2, 4, 0.1);
  m.statistics = Statistics::Bose;
  m.regime = VacuumRegime::BosonGround;
  m.n_max = 4;
  const auto basis = model_basis(m);
  VacuumDiagnostics diag;
  const auto vac = build_vacuum(m, model_modes(m), basis, {}, &diag);
  EXPECT_GE(std::norm(vac[0]), 0.99);
  EXPECT_LT(diag.residual, 1e-10);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense_hamiltonian(m, basis));
  EXPECT_NEAR(es.eigenvalues()[0], diag.energy, 1e-9);
  EXPECT_GT(std::abs(es.eigenvectors().col(0).dot(vac.amplitudes())), 1.0 - 1e-9);
}

TEST(Model, VacuumAnnihilatedByParticleSector) {
  const LatticeModel empty = chain(3, 4, 1, 2);
  const auto vac = vacuum_of(empty);
  for (int mode = 0; mode < empty.mode_count(); ++mode) EXPECT_EQ(apply_annihilation(vac, mode).norm(), 0.0);

  const LatticeModel ins = insulator(4, 1);
  const auto modes = model_modes(ins);
  const auto hvac = build_vacuum(ins, modes, model_basis(ins));
  for (int k = 0; k < modes.size(); ++k) {
    const Eigen::VectorXcd u = modes.vectors.col(k);
    if (modes.bands[static_cast<std::size_t>(k)] == Band::Upper) {
      // b_k = sum_x conj(u_k(x)) c_x
      EXPECT_LT(apply_mode_combination(hvac, {}, u.conjugate()).state.norm(), 1e-10) << k;
    } else {
      EXPECT_LT(apply_mode_combination(hvac, u, {}).state.norm(), 1e-10) << k;
    }
  }
}

TEST(Model, VacuumEnergyIsMinimal) {
  std::mt19937_64 rng(8);
  for (const LatticeModel& m : {insulator(4, 1), chain(3, 4, 1, 2)}) {
    const auto basis = model_basis(m);
    const auto vac = build_vacuum(m, model_modes(m), basis);
    const double e0 = inner(vac, apply_hamiltonian(m, vac)).real();
    for (int t = 0; t < 20; ++t) {
      const auto psi = test::random_state(rng, basis);
      EXPECT_LE(e0, inner(psi, apply_hamiltonian(m, psi)).real() + 1e-12);
    }
  }
}

TEST(Model, HalfFilledMatchesDenseGround) {
  const LatticeModel m = insulator(4, 1);
  const auto basis = model_basis(m);
  VacuumDiagnostics diag;
  const auto vac = build_vacuum(m, model_modes(m), basis, {}, &diag);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense_hamiltonian(m, basis));
  EXPECT_NEAR(es.eigenvalues()[0], diag.energy, 1e-10);
  EXPECT_GT(es.eigenvalues()[1] - es.eigenvalues()[0], 1e-3);  // unique ground state
  EXPECT_GT(std::abs(es.eigenvectors().col(0).dot(vac.amplitudes())), 1.0 - 1e-10);
}

TEST(Model, SpeciesFactorization) {
  const auto full = vacuum_of(insulator(4, 1, 2));
  const auto single = vacuum_of(insulator(4, 1, 1));
  const auto& b = full.basis();
  auto code_of = [](const std::vector<int>& n) {
    std::size_t c = 0;
    for (int v : n) c = 2 * c + static_cast<std::size_t>(v);
    return static_cast<Eigen::Index>(c);
  };
  Eigen::VectorXcd expected(static_cast<Eigen::Index>(b.dimension()));
  for (std::size_t i = 0; i < b.dimension(); ++i) {
    const auto n = b.occupations(i);
    std::vector<int> up(4), dn(4);
    int inversions = 0;
    for (std::size_t x = 0; x < 4; ++x) {
      up[x] = n[2 * x];
      dn[x] = n[2 * x + 1];
    }
    // (up string)(down string)|0> reordered into the interleaved mode order
    for (std::size_t x = 0; x < 4; ++x) {
      for (std::size_t y = 0; y < x && up[x]; ++y) inversions += dn[y];
    }
    const cplx amp = single.amplitudes()[code_of(up)] * single.amplitudes()[code_of(dn)];
    expected[static_cast<Eigen::Index>(i)] = (inversions % 2) ? -amp : amp;
  }
  const cplx phase = expected.dot(full.amplitudes());
  EXPECT_NEAR(std::abs(phase), 1.0, 1e-12);
  EXPECT_LT((full.amplitudes() - (phase / std::abs(phase)) * expected).norm(), 1e-12);
}

TEST(Model, LanczosMatchesDense) {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXcd h = test::random_hermitian(rng, 40);
  const GroundState g = lanczos_ground_state([&](const Eigen::VectorXcd& v) { return Eigen::VectorXcd(h * v); },
                                             test::random_vector(rng, 40));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  EXPECT_NEAR(g.energy, es.eigenvalues()[0], 1e-9);
  EXPECT_LT(g.residual, 1e-10);
}
