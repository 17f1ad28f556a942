#include "qent/excitations.hpp"

#include <cmath>

#include "qent/error.hpp"

namespace qent {

const char* to_string(Envelope e) { return e == Envelope::Gaussian ? "gaussian" : "rectangular"; }
const char* to_string(Band b) { return b == Band::Upper ? "upper" : "lower"; }

Eigen::VectorXd sample_envelope(const PacketProfile& profile, const LatticeModel& model) {
  if (!(profile.width > 0.0)) throw ConfigError("packet '" + profile.name + "': width must be > 0");
  if (!(profile.center >= 0.0 && profile.center <= model.sites - 1)) {
    throw ConfigError("packet '" + profile.name + "': center outside the lattice");
  }
  if (profile.species < 0 || profile.species >= model.species) {
    throw ConfigError("packet '" + profile.name + "': species out of range");
  }

  Eigen::VectorXd env(model.sites);
  for (int x = 0; x < model.sites; ++x) {
    double d = std::abs(x - profile.center);
    if (model.boundary == Boundary::Periodic) d = std::min(d, model.sites - d);
    if (profile.envelope == Envelope::Gaussian) {
      env[x] = std::exp(-d * d / (2.0 * profile.width * profile.width));
    } else {
      env[x] = d <= profile.width + 1e-12 ? 1.0 : 0.0;
    }
  }
  return env;
}

PacketOperator make_packet(const PacketProfile& profile, const LatticeModel& model, const SingleParticleModes& modes) {
  const Eigen::VectorXd env = sample_envelope(profile, model);
  if (env.norm() < 1e-300) {
    throw NumericalError("packet '" + profile.name + "': envelope vanishes on every site");
  }
  const Eigen::VectorXcd phi = env.cast<cplx>() / env.norm();

  PacketOperator op;
  op.name = profile.name;
  op.species = profile.species;
  op.creation = Eigen::VectorXcd::Zero(model.mode_count());
  op.annihilation = Eigen::VectorXcd::Zero(model.mode_count());

  auto project = [&](Band band) {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(model.sites);
    for (int k : modes.band_indices(band)) out += modes.vectors.col(k) * modes.vectors.col(k).dot(phi);
    return out;
  };

  Eigen::VectorXcd wf;
  switch (model.regime) {
    case VacuumRegime::Empty:
    case VacuumRegime::BosonGround:
      if (profile.band != Band::Upper) {
        throw ConfigError("packet '" + profile.name + "': band lower needs regime half_filled");
      }
      wf = phi;
      break;
    case VacuumRegime::HalfFilled:
      wf = project(profile.band);
      break;
  }
  const double weight = wf.norm();
  if (weight < 1e-8) {
    throw NumericalError("packet '" + profile.name + "' has no content in the " + to_string(profile.band) + " band");
  }
  wf /= weight;
  op.wavefunction = wf;

  if (model.regime == VacuumRegime::BosonGround) {
    // mode amplitudes phi_k = u_k^dag wf; modes are real for a real chain
    const Eigen::VectorXcd amps = modes.vectors.adjoint() * wf;
    const Eigen::VectorXcd cre = modes.vectors * modes.cosh_weights.cast<cplx>().cwiseProduct(amps);
    const Eigen::VectorXcd ann = modes.vectors * modes.sinh_weights.cast<cplx>().cwiseProduct(amps);
    for (int x = 0; x < model.sites; ++x) {
      op.creation[model.mode(x, profile.species)] = cre[x];
      op.annihilation[model.mode(x, profile.species)] = ann[x];
    }
  } else if (profile.band == Band::Upper) {
    for (int x = 0; x < model.sites; ++x) op.creation[model.mode(x, profile.species)] = wf[x];
  } else {
    for (int x = 0; x < model.sites; ++x) op.annihilation[model.mode(x, profile.species)] = std::conj(wf[x]);
  }
  return op;
}

cplx packet_overlap(const PacketOperator& p, const PacketOperator& q) {
  if (p.species != q.species) return {0.0, 0.0};
  if (p.wavefunction.size() != q.wavefunction.size()) throw ShapeError("packet_overlap: lattice size mismatch");
  return p.wavefunction.dot(q.wavefunction);
}

double packet_weight(const PacketOperator& p, const std::vector<int>& sites) {
  double w = 0.0;
  for (int x : sites) {
    if (x < 0 || x >= p.wavefunction.size()) throw ShapeError("packet_weight: site out of range");
    w += std::norm(p.wavefunction[x]);
  }
  return w;
}

LadderResult apply_packet(const PacketOperator& packet, const StateVector& state, CutoffPolicy policy) {
  return apply_mode_combination(state, packet.creation, packet.annihilation, policy);
}

BuiltState build_state(const StateRecipe& recipe, const StateVector& vacuum, CutoffPolicy policy) {
  if (recipe.terms.empty()) throw ConfigError("state recipe needs at least one term");
  StateVector sum = StateVector::zero(vacuum.basis_ptr());
  double leakage = 0.0;
  for (const RecipeTerm& term : recipe.terms) {
    if (term.coefficient == cplx{}) continue;
    StateVector current = vacuum;
    for (auto it = term.operators.rbegin(); it != term.operators.rend(); ++it) {
      LadderResult r = apply_packet(*it, current, policy);
      leakage += std::norm(term.coefficient) * r.leakage;
      current = std::move(r.state);
    }
    sum = sum + term.coefficient * current;
  }
  const double raw = sum.norm();
  if (raw < 1e-12) throw NumericalError("state recipe produced a zero-norm state");
  return {sum.normalized(), raw, leakage};
}

}  // namespace qent
