#include "qent/qmref.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qent/error.hpp"

namespace qent {

double QMState::coefficient_weight() const {
  double w = 0.0;
  for (const auto& t : terms) w += std::norm(t.coefficient);
  return w;
}

void validate(const QMState& state) {
  if (state.terms.empty()) throw ConfigError("particle-level state needs at least one term");
  if (state.first_dimension < 1 || state.second_dimension < 1) {
    throw ConfigError("particle-level state dimensions must be >= 1");
  }
  for (const auto& t : state.terms) {
    if (t.first < 0 || t.first >= state.first_dimension || t.second < 0 || t.second >= state.second_dimension) {
      throw ConfigError("particle-level index out of range");
    }
  }
}

Eigen::MatrixXcd qm_density_matrix(const QMState& state) {
  validate(state);
  Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(state.first_dimension, state.second_dimension);
  for (const auto& t : state.terms) psi(t.first, t.second) += t.coefficient;
  const double norm = psi.norm();
  if (norm == 0.0) throw NumericalError("particle-level state has zero norm");
  psi /= norm;
  Eigen::MatrixXcd rho = psi * psi.adjoint();
  return 0.5 * (rho + rho.adjoint());
}

bool has_two_term_form(const QMState& state) {
  return state.terms.size() == 2 && state.terms[0].first != state.terms[1].first &&
         state.terms[0].second != state.terms[1].second;
}

RenyiValue qm_renyi_spectral(const QMState& state, double n) {
  return renyi_entropy(spectrum(qm_density_matrix(state)).eigenvalues, n);
}

RenyiValue qm_renyi(const QMState& state, double n) {
  validate(state);
  if (!(n > 0.0)) throw ConfigError("renyi order must be > 0");
  if (!has_two_term_form(state)) return qm_renyi_spectral(state, n);

  const double pa = std::norm(state.terms[0].coefficient);
  const double pb = std::norm(state.terms[1].coefficient);
  const double total = pa + pb;
  if (total == 0.0) throw NumericalError("particle-level state has zero norm");
  const double qa = pa / total;
  const double qb = pb / total;
  if (n == 1.0) {
    double s = 0.0;
    if (qa > 0.0) s -= qa * std::log(qa);
    if (qb > 0.0) s -= qb * std::log(qb);
    return {s, 1.0};
  }
  // (|a|^2n + |b|^2n) / (|a|^2 + |b|^2)^n
  const double r = std::pow(qa, n) + std::pow(qb, n);
  return {std::max(std::log(r) / (1.0 - n), 0.0), r};
}

const OrderResidual* ResidualRecord::find(double order) const {
  for (const auto& o : orders) {
    if (o.order == order) return &o;
  }
  return nullptr;
}

ResidualRecord compare(const EntropyReport& report, const QMState& state, std::optional<double> raw_norm,
                       const std::vector<double>& required_orders) {
  for (double n : required_orders) {
    if (report.find(n) == nullptr) throw ConfigError("report has no entropy for order " + std::to_string(n));
  }

  ResidualRecord rec;
  auto add = [&](const OrderEntropy& e) {
    const RenyiValue q = qm_renyi(state, e.order);
    OrderResidual r;
    r.order = e.order;
    r.subtracted = e.subtracted;
    r.qm = q.entropy;
    r.delta = std::abs(e.subtracted - q.entropy);
    r.delta_trace_power = std::abs(e.trace_power_state - e.trace_power_vacuum * q.trace_power);
    rec.orders.push_back(r);
  };
  add(report.von_neumann);
  for (const auto& e : report.renyi) {
    if (e.order != 1.0) add(e);
  }
  std::sort(rec.orders.begin(), rec.orders.end(),
            [](const OrderResidual& a, const OrderResidual& b) { return a.order < b.order; });

  rec.norm_deviation = raw_norm ? std::abs(std::sqrt(state.coefficient_weight()) / *raw_norm - 1.0)
                                : std::numeric_limits<double>::quiet_NaN();
  rec.vacuum_s1 = report.von_neumann.vacuum;
  rec.vacuum_s2 = renyi_entropy(report.spectrum_vacuum.eigenvalues, 2.0).entropy;
  return rec;
}

}  // namespace qent
