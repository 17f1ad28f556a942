#include "qent/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "qent/error.hpp"

namespace qent {

std::vector<PacketOperator> build_packets(const ExperimentConfig& config, const SingleParticleModes& modes) {
  std::vector<PacketOperator> out;
  out.reserve(config.packets.size());
  for (const auto& p : config.packets) out.push_back(make_packet(p, config.model, modes));
  return out;
}

namespace {

const PacketOperator& lookup(const std::vector<PacketOperator>& packets, const std::string& name) {
  for (const auto& p : packets) {
    if (p.name == name) return p;
  }
  throw ConfigError("unknown packet '" + name + "'");
}

bool in_first_subsystem(const PacketOperator& p, const Region& region) {
  return packet_weight(p, region.sites()) >= 0.5;
}

int label_index(std::vector<std::string>& labels, const std::string& label) {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it != labels.end()) return static_cast<int>(it - labels.begin());
  labels.push_back(label);
  return static_cast<int>(labels.size()) - 1;
}

std::string join(std::vector<std::string> names) {
  if (names.empty()) return "vac";
  std::sort(names.begin(), names.end());
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : "+") + n;
  return out;
}

}  // namespace

QMAssignment derive_qm_state(const ExperimentConfig& config, const std::vector<PacketOperator>& packets,
                             const Region& region) {
  QMAssignment a;
  for (const auto& term : config.terms) {
    std::vector<std::string> first;
    std::vector<std::string> second;
    for (const auto& name : term.operators) {
      (in_first_subsystem(lookup(packets, name), region) ? first : second).push_back(name);
    }
    QMTerm t;
    t.coefficient = term.coefficient;
    t.first = label_index(a.first_labels, join(first));
    t.second = label_index(a.second_labels, join(second));
    a.state.terms.push_back(t);
  }
  a.state.first_dimension = static_cast<int>(a.first_labels.size());
  a.state.second_dimension = static_cast<int>(a.second_labels.size());
  return a;
}

ReplicaCheck replica_check(const DensityMatrix& rho_state, const DensityMatrix& rho_vacuum,
                           const std::vector<int>& orders, std::size_t cap) {
  ReplicaCheck check;
  const std::pair<const char*, const DensityMatrix*> targets[] = {{"state", &rho_state}, {"vacuum", &rho_vacuum}};
  for (const auto& [name, rho] : targets) {
    const Spectrum spec = spectrum(*rho);
    for (int n : orders) {
      ReplicaValue value;
      try {
        value = replica_trace(*rho, n, cap);
      } catch (const CapacityError&) {
        std::ostringstream os;
        os << name << " n=" << n << ": d^n exceeds replica_cap";
        check.skipped.push_back(os.str());
        continue;
      }
      double spectral = 0.0;
      for (double v : spec.eigenvalues) spectral += std::pow(v, n);
      ReplicaCheckEntry e{name, n, value.value, spectral, std::abs(value.value - spectral), value.imaginary};
      check.max_deviation = std::max(check.max_deviation, e.deviation);
      check.max_imaginary = std::max(check.max_imaginary, e.imaginary);
      check.entries.push_back(e);
    }
  }
  return check;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  check_config(config);
  ExperimentResult r;
  r.config = config;

  const LatticeModel& model = config.model;
  r.gap = spectral_gap(model);
  const SingleParticleModes modes = model_modes(model);
  const BasisPtr basis = model_basis(model, config.analysis.dim_cap);
  r.full_dimension = basis->dimension();
  const StateVector vacuum = build_vacuum(model, modes, basis, SolverOptions{}, &r.vacuum);

  const std::vector<PacketOperator> packets = build_packets(config, modes);
  StateRecipe recipe;
  for (const auto& t : config.terms) {
    RecipeTerm term;
    term.coefficient = t.coefficient;
    for (const auto& name : t.operators) term.operators.push_back(lookup(packets, name));
    recipe.terms.push_back(std::move(term));
  }
  const BuiltState built = build_state(recipe, vacuum);
  r.raw_norm = built.raw_norm;
  r.leakage = built.leakage;

  const Region region(config.region, model.sites, model.species);
  r.rho_state = reduced_density_matrix(built.state, region, config.analysis.dim_cap);
  r.rho_vacuum = reduced_density_matrix(vacuum, region, config.analysis.dim_cap);
  r.entropy = vacuum_subtracted_report(r.rho_state, r.rho_vacuum, config.analysis.orders);
  if (r.leakage > 0.0) {
    std::ostringstream os;
    os << "boson cutoff dropped squared norm " << r.leakage << " while applying packets";
    r.entropy.notes.push_back(os.str());
  }

  r.qm = derive_qm_state(config, packets, region);
  r.residual = compare(r.entropy, r.qm.state, r.raw_norm);

  // geometry of the cross-subsystem packet pairs actually used by the recipe
  std::vector<const PacketOperator*> used;
  for (const auto& t : recipe.terms) {
    for (const auto& op : t.operators) {
      const PacketOperator* p = &lookup(packets, op.name);
      if (std::find(used.begin(), used.end(), p) == used.end()) used.push_back(p);
    }
  }
  bool have_pair = false;
  double separation = 0.0;
  double overlap = 0.0;
  for (const auto* p : used) {
    for (const auto* q : used) {
      if (!in_first_subsystem(*p, region) || in_first_subsystem(*q, region)) continue;
      const double d = std::abs(config.find_packet(p->name)->center - config.find_packet(q->name)->center);
      separation = have_pair ? std::min(separation, d) : d;
      overlap = std::max(overlap, std::abs(p->wavefunction.dot(q->wavefunction)));
      have_pair = true;
    }
  }
  r.residual.separation = separation;
  r.residual.overlap_abs = overlap;

  for (double n : config.analysis.orders) {
    if (n >= 2.0 && std::floor(n) == n) {
      const int order = static_cast<int>(n);
      const double qm_r = qm_renyi(r.qm.state, n).trace_power;
      const LeadingOrder lo = leading_order(r.entropy.spectrum_state, r.entropy.spectrum_vacuum, order, r.raw_norm,
                                            qm_r, r.qm.state.coefficient_weight());
      r.leading.push_back(lo);
    }
  }

  if (config.analysis.replica_check) {
    r.replica = replica_check(r.rho_state, r.rho_vacuum, config.analysis.replica_orders, config.analysis.replica_cap);
  }
  return r;
}

}  // namespace qent
