#include "qent/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "qent/error.hpp"

#ifndef QENT_VERSION
#define QENT_VERSION "unknown"
#endif

namespace qent {

const char* version() { return QENT_VERSION; }

std::string format12(double x) {
  if (!std::isfinite(x)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double round12(double x) {
  if (!std::isfinite(x)) return x;
  return std::stod(format12(x));
}

nlohmann::json number12(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round12(x);
}

namespace {

nlohmann::json order_json(const OrderEntropy& e) {
  return {{"order", number12(e.order)},
          {"state", number12(e.state)},
          {"vacuum", number12(e.vacuum)},
          {"subtracted", number12(e.subtracted)},
          {"trace_power_state", number12(e.trace_power_state)},
          {"trace_power_vacuum", number12(e.trace_power_vacuum)}};
}

nlohmann::json numbers(const std::vector<double>& xs) {
  nlohmann::json out = nlohmann::json::array();
  for (double x : xs) out.push_back(number12(x));
  return out;
}

}  // namespace

nlohmann::json residual_json(const ResidualRecord& r) {
  nlohmann::json orders = nlohmann::json::array();
  for (const auto& o : r.orders) {
    orders.push_back({{"order", number12(o.order)},
                      {"subtracted", number12(o.subtracted)},
                      {"qm", number12(o.qm)},
                      {"delta", number12(o.delta)},
                      {"delta_trace_power", number12(o.delta_trace_power)}});
  }
  return {{"separation", number12(r.separation)},
          {"overlap_abs", number12(r.overlap_abs)},
          {"norm_deviation", number12(r.norm_deviation)},
          {"vacuum_S1", number12(r.vacuum_s1)},
          {"vacuum_S2", number12(r.vacuum_s2)},
          {"orders", orders}};
}

nlohmann::json report_json(const ExperimentResult& r, double elapsed_seconds) {
  nlohmann::json entropy = {{"orders", nlohmann::json::array()},
                            {"von_neumann", order_json(r.entropy.von_neumann)},
                            {"spectrum_state", numbers(r.entropy.spectrum_state.eigenvalues)},
                            {"spectrum_vacuum", numbers(r.entropy.spectrum_vacuum.eigenvalues)},
                            {"entanglement_spectrum_state", numbers(r.entropy.spectrum_state.entanglement)},
                            {"entanglement_spectrum_vacuum", numbers(r.entropy.spectrum_vacuum.entanglement)}};
  for (const auto& o : r.entropy.renyi) entropy["orders"].push_back(order_json(o));

  nlohmann::json qm_terms = nlohmann::json::array();
  for (const auto& t : r.qm.state.terms) {
    qm_terms.push_back({{"coefficient", {number12(t.coefficient.real()), number12(t.coefficient.imag())}},
                        {"first", r.qm.first_labels[static_cast<std::size_t>(t.first)]},
                        {"second", r.qm.second_labels[static_cast<std::size_t>(t.second)]}});
  }
  nlohmann::json qm_renyis = nlohmann::json::array();
  for (const auto& o : r.residual.orders) qm_renyis.push_back({{"order", number12(o.order)}, {"entropy", number12(o.qm)}});

  nlohmann::json leading = nlohmann::json::array();
  for (const auto& l : r.leading) {
    leading.push_back({{"order", l.order},
                       {"full", number12(l.full)},
                       {"leading", number12(l.leading)},
                       {"difference", number12(l.difference)}});
  }

  return {
      {"version", version()},
      {"config", to_json(r.config)},
      {"model",
       {{"gap", number12(r.gap)},
        {"full_dimension", r.full_dimension},
        {"vacuum_energy", number12(r.vacuum.energy)},
        {"vacuum_residual", number12(r.vacuum.residual)},
        {"vacuum_iterations", r.vacuum.iterations}}},
      {"state",
       {{"raw_norm", number12(r.raw_norm)}, {"prefactor", number12(1.0 / r.raw_norm)}, {"leakage", number12(r.leakage)}}},
      {"entropy", entropy},
      {"qm", {{"terms", qm_terms}, {"renyi", qm_renyis}}},
      {"residual", residual_json(r.residual)},
      {"leading_order", leading},
      {"notes", r.entropy.notes},
      {"timing", {{"elapsed_seconds", number12(elapsed_seconds)}}},
  };
}

nlohmann::json replica_check_json(const ReplicaCheck& c) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : c.entries) {
    entries.push_back({{"target", e.target},
                       {"order", e.order},
                       {"replica", number12(e.replica)},
                       {"spectral", number12(e.spectral)},
                       {"deviation", number12(e.deviation)},
                       {"imaginary", number12(e.imaginary)}});
  }
  return {{"entries", entries},
          {"skipped", c.skipped},
          {"max_deviation", number12(c.max_deviation)},
          {"max_imaginary", number12(c.max_imaginary)}};
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path(), ec);
    if (ec) throw Error("cannot create directory '" + target.parent_path().string() + "': " + ec.message());
  }
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw Error("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot rename onto '" + path + "': " + ec.message());
  }
}

}  // namespace qent
