#include "qent/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qent/error.hpp"

namespace qent {

const char* to_string(VacuumRegime r) {
  switch (r) {
    case VacuumRegime::Empty:
      return "empty";
    case VacuumRegime::HalfFilled:
      return "half_filled";
    case VacuumRegime::BosonGround:
      return "boson_ground";
  }
  return "?";
}

const char* to_string(Boundary b) { return b == Boundary::Open ? "open" : "periodic"; }

Eigen::MatrixXd adjacency(const LatticeModel& model) {
  const int n = model.sites;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int x = 0; x + 1 < n; ++x) a(x, x + 1) = a(x + 1, x) = 1.0;
  if (model.boundary == Boundary::Periodic && n > 2) a(0, n - 1) = a(n - 1, 0) = 1.0;
  return a;
}

namespace {

Eigen::MatrixXcd raw_hamiltonian(const LatticeModel& model) {
  const int n = model.sites;
  Eigen::MatrixXcd h = (-model.hopping * adjacency(model)).cast<cplx>();
  for (int x = 0; x < n; ++x) {
    const double onsite = (model.staggered && (x % 2 == 1)) ? -model.mass : model.mass;
    h(x, x) += onsite;
  }
  return h;
}

double raw_gap(const LatticeModel& model, const Eigen::VectorXd& energies) {
  switch (model.regime) {
    case VacuumRegime::Empty:
      return energies[0];
    case VacuumRegime::HalfFilled: {
      const auto half = static_cast<Eigen::Index>(model.sites / 2);
      return energies[half] - energies[half - 1];
    }
    case VacuumRegime::BosonGround:
      return energies[0] > 0.0 ? std::sqrt(model.mass * energies[0]) : energies[0];
  }
  return 0.0;
}

[[noreturn]] void config_error(const std::string& msg) { throw ConfigError("model: " + msg); }

std::string params(const LatticeModel& m) {
  std::ostringstream os;
  os << "(mass=" << m.mass << ", hopping=" << m.hopping << ", sites=" << m.sites << ", regime=" << to_string(m.regime)
     << ")";
  return os.str();
}

}  // namespace

void validate(const LatticeModel& model) {
  if (model.sites < 1) config_error("sites must be >= 1");
  if (model.species < 1) config_error("species must be >= 1");
  if (!std::isfinite(model.mass) || !std::isfinite(model.hopping)) config_error("mass and hopping must be finite");
  if (model.statistics == Statistics::Bose && model.n_max < 1) config_error("boson n_max must be >= 1");

  switch (model.regime) {
    case VacuumRegime::Empty:
      if (model.staggered) config_error("staggered chains have negative-energy modes; use regime half_filled");
      if (!(model.mass > 2.0 * std::abs(model.hopping))) {
        config_error("gap condition violated: regime empty needs mass > 2|hopping| " + params(model));
      }
      break;
    case VacuumRegime::HalfFilled:
      if (model.statistics != Statistics::Fermi) config_error("regime half_filled requires fermi statistics");
      if (!model.staggered) config_error("regime half_filled requires staggered = true");
      if (model.sites % 2 != 0) config_error("regime half_filled requires an even number of sites");
      break;
    case VacuumRegime::BosonGround:
      if (model.statistics != Statistics::Bose) config_error("regime boson_ground requires bose statistics");
      if (model.staggered) config_error("regime boson_ground does not support staggered mass");
      if (!(model.mass > 2.0 * std::abs(model.hopping))) {
        config_error("gap condition violated: regime boson_ground needs mass > 2|hopping| " + params(model));
      }
      break;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(raw_hamiltonian(model), Eigen::EigenvaluesOnly);
  const double gap = raw_gap(model, es.eigenvalues());
  if (!(gap > kMinimumGap)) {
    std::ostringstream os;
    os << "gap condition violated: gap " << gap << " <= " << kMinimumGap << " " << params(model);
    config_error(os.str());
  }
}

Eigen::MatrixXcd single_particle_hamiltonian(const LatticeModel& model) {
  validate(model);
  return raw_hamiltonian(model);
}

std::vector<int> SingleParticleModes::band_indices(Band band) const {
  std::vector<int> out;
  for (std::size_t k = 0; k < bands.size(); ++k) {
    if (bands[k] == band) out.push_back(static_cast<int>(k));
  }
  return out;
}

SingleParticleModes diagonalize_modes(const Eigen::MatrixXcd& h) {
  if (h.rows() != h.cols() || h.rows() == 0) throw ShapeError("diagonalize_modes: matrix must be square and nonempty");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ShapeError("diagonalize_modes: matrix is not Hermitian");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("diagonalize_modes: eigensolver failed");
  const Eigen::Index n = h.rows();
  Eigen::VectorXd energies = es.eigenvalues();
  Eigen::MatrixXcd vectors = es.eigenvectors();

  const double degeneracy_tol = 1e-10 * scale;
  Eigen::Index begin = 0;
  while (begin < n) {
    Eigen::Index end = begin + 1;
    while (end < n && energies[end] - energies[end - 1] < degeneracy_tol) ++end;
    const Eigen::Index k = end - begin;
    if (k > 1) {
      const Eigen::MatrixXcd block = vectors.middleCols(begin, k);
      const Eigen::MatrixXcd projector = block * block.adjoint();
      Eigen::MatrixXcd canonical(n, k);
      Eigen::Index found = 0;
      for (Eigen::Index r = 0; r < n && found < k; ++r) {
        Eigen::VectorXcd v = projector.col(r);
        for (Eigen::Index j = 0; j < found; ++j) v -= canonical.col(j) * canonical.col(j).dot(v);
        const double norm = v.norm();
        if (norm > 1e-8) canonical.col(found++) = v / norm;
      }
      if (found != k) throw NumericalError("diagonalize_modes: degenerate subspace canonicalization failed");
      vectors.middleCols(begin, k) = canonical;
      const double mean = energies.segment(begin, k).mean();
      energies.segment(begin, k).setConstant(mean);
    }
    begin = end;
  }

  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) {
      const cplx z = vectors(r, c);
      if (std::abs(z) > 1e-8) {
        vectors.col(c) *= std::conj(z) / std::abs(z);
        break;
      }
    }
  }

  SingleParticleModes modes;
  modes.vectors = std::move(vectors);
  modes.energies = std::move(energies);
  modes.bands.assign(static_cast<std::size_t>(n), Band::Upper);
  modes.cosh_weights = Eigen::VectorXd::Ones(n);
  modes.sinh_weights = Eigen::VectorXd::Zero(n);
  return modes;
}

SingleParticleModes model_modes(const LatticeModel& model) {
  SingleParticleModes modes = diagonalize_modes(single_particle_hamiltonian(model));
  if (model.regime == VacuumRegime::HalfFilled) {
    for (int k = 0; k < model.sites / 2; ++k) modes.bands[static_cast<std::size_t>(k)] = Band::Lower;
  } else if (model.regime == VacuumRegime::BosonGround) {
    // spring constants kappa_k -> frequencies sqrt(m kappa_k); b_k mixes a and a^dag
    for (Eigen::Index k = 0; k < modes.energies.size(); ++k) {
      const double omega = std::sqrt(model.mass * modes.energies[k]);
      const double r = std::sqrt(omega / model.mass);
      modes.energies[k] = omega;
      modes.cosh_weights[k] = 0.5 * (r + 1.0 / r);
      modes.sinh_weights[k] = 0.5 * (r - 1.0 / r);
    }
  }
  return modes;
}

double spectral_gap(const LatticeModel& model) {
  validate(model);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(raw_hamiltonian(model), Eigen::EigenvaluesOnly);
  return raw_gap(model, es.eigenvalues());
}

BasisPtr model_basis(const LatticeModel& model, std::size_t cap) {
  validate(model);
  return make_basis(model.statistics, model.mode_count(), model.n_max, std::nullopt, cap);
}

namespace {

Eigen::VectorXcd species_vector(const LatticeModel& model, const Eigen::VectorXcd& site_coeffs, int species) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(model.mode_count());
  for (int x = 0; x < model.sites; ++x) out[model.mode(x, species)] = site_coeffs[x];
  return out;
}

void check_basis(const LatticeModel& model, const FockBasis& basis) {
  if (!basis.is_full() || basis.statistics() != model.statistics || basis.mode_count() != model.mode_count() ||
      (model.statistics == Statistics::Bose && basis.n_max() != model.n_max)) {
    throw ShapeError("basis is not compatible with the model");
  }
}

}  // namespace

StateVector apply_hamiltonian(const LatticeModel& model, const StateVector& state) {
  check_basis(model, state.basis());
  const Eigen::MatrixXcd h = raw_hamiltonian(model);
  StateVector out = StateVector::zero(state.basis_ptr());

  if (model.regime != VacuumRegime::BosonGround) {
    for (int sp = 0; sp < model.species; ++sp) {
      for (int y = 0; y < model.sites; ++y) {
        const StateVector lowered = apply_annihilation(state, model.mode(y, sp));
        if (lowered.norm() == 0.0) continue;
        out = out + apply_mode_combination(lowered, species_vector(model, h.col(y), sp), Eigen::VectorXcd()).state;
      }
    }
    return out;
  }

  const FockBasis& basis = state.basis();
  Eigen::VectorXcd diag(static_cast<Eigen::Index>(basis.dimension()));
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    int total = 0;
    for (int m = 0; m < basis.mode_count(); ++m) total += basis.occupation(i, m);
    diag[static_cast<Eigen::Index>(i)] = model.mass * total;
  }
  out = StateVector(state.basis_ptr(), diag.cwiseProduct(state.amplitudes()));

  const Eigen::MatrixXd adj = adjacency(model);
  for (int sp = 0; sp < model.species; ++sp) {
    for (int x = 0; x < model.sites; ++x) {
      for (int y = x + 1; y < model.sites; ++y) {
        if (adj(x, y) == 0.0) continue;
        Eigen::VectorXcd ex = Eigen::VectorXcd::Zero(model.mode_count());
        Eigen::VectorXcd ey = Eigen::VectorXcd::Zero(model.mode_count());
        ex[model.mode(x, sp)] = 1.0;
        ey[model.mode(y, sp)] = 1.0;
        const StateVector qy = apply_mode_combination(state, ey, ey).state;
        const StateVector qxy = apply_mode_combination(qy, ex, ex).state;
        out = out + cplx(-0.5 * model.hopping) * qxy;
      }
    }
  }
  return out;
}

StateVector build_vacuum(const LatticeModel& model, const SingleParticleModes& modes, const BasisPtr& basis,
                         const SolverOptions& options, VacuumDiagnostics* diagnostics) {
  validate(model);
  check_basis(model, *basis);
  if (modes.size() != model.sites) throw ShapeError("mode set does not match model size");

  StateVector vacuum = StateVector::basis_state(basis, 0);
  VacuumDiagnostics diag;

  switch (model.regime) {
    case VacuumRegime::Empty:
      break;
    case VacuumRegime::HalfFilled:
      for (int sp = 0; sp < model.species; ++sp) {
        for (int k : modes.band_indices(Band::Lower)) {
          vacuum = apply_mode_combination(vacuum, species_vector(model, modes.vectors.col(k), sp), Eigen::VectorXcd())
                       .state;
        }
      }
      vacuum = vacuum.normalized();
      break;
    case VacuumRegime::BosonGround: {
      auto apply = [&](const Eigen::VectorXcd& v) {
        return apply_hamiltonian(model, StateVector(basis, v)).amplitudes();
      };
      GroundState gs = lanczos_ground_state(apply, vacuum.amplitudes(), options);
      Eigen::VectorXcd v = gs.vector;
      const cplx ref = v[0];
      if (std::abs(ref) > 0.0) v *= std::conj(ref) / std::abs(ref);
      vacuum = StateVector(basis, v).normalized();
      diag.energy = gs.energy;
      diag.residual = gs.residual;
      diag.iterations = gs.matvecs;
      break;
    }
  }

  if (model.regime != VacuumRegime::BosonGround) {
    diag.energy = inner(vacuum, apply_hamiltonian(model, vacuum)).real();
  }
  if (diagnostics != nullptr) *diagnostics = diag;
  return vacuum;
}

}  // namespace qent
