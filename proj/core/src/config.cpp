#include "qent/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "qent/entangle.hpp"
#include "qent/error.hpp"

namespace qent {

namespace detail {

JsonReader::JsonReader(const nlohmann::json& node, std::string path) : node_(node), path_(std::move(path)) {}

void JsonReader::fail(const std::string& message) const {
  throw ConfigError((path_.empty() ? std::string("/") : path_) + ": " + message);
}

bool JsonReader::has(const std::string& key) const { return node_.is_object() && node_.contains(key); }

JsonReader JsonReader::child(const std::string& key) const {
  if (!node_.is_object()) fail("expected object");
  if (!node_.contains(key)) JsonReader(node_, path_ + "/" + key).fail("required field missing");
  return {node_.at(key), path_ + "/" + key};
}

std::vector<JsonReader> JsonReader::elements() const {
  if (!node_.is_array()) fail("expected array");
  std::vector<JsonReader> out;
  for (std::size_t i = 0; i < node_.size(); ++i) out.emplace_back(node_[i], path_ + "/" + std::to_string(i));
  return out;
}

void JsonReader::allow_keys(std::initializer_list<const char*> keys) const {
  if (!node_.is_object()) fail("expected object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& item : node_.items()) {
    if (!allowed.count(item.key())) JsonReader(item.value(), path_ + "/" + item.key()).fail("unknown field");
  }
}

double JsonReader::number() const {
  if (!node_.is_number()) fail("expected number");
  const double v = node_.get<double>();
  if (!std::isfinite(v)) fail("expected finite number");
  return v;
}

int JsonReader::integer() const {
  if (node_.is_number_integer()) return node_.get<int>();
  if (node_.is_number_float()) {
    const double v = node_.get<double>();
    if (std::floor(v) == v && std::abs(v) < 2e9) return static_cast<int>(v);
  }
  fail("expected integer");
}

bool JsonReader::boolean() const {
  if (!node_.is_boolean()) fail("expected boolean");
  return node_.get<bool>();
}

std::string JsonReader::string() const {
  if (!node_.is_string()) fail("expected string");
  return node_.get<std::string>();
}

cplx JsonReader::complex() const {
  if (node_.is_number()) return {number(), 0.0};
  if (node_.is_array()) {
    const auto parts = elements();
    if (parts.size() != 2) fail("expected [re, im]");
    return {parts[0].number(), parts[1].number()};
  }
  if (node_.is_object()) {
    allow_keys({"re", "im"});
    return {has("re") ? child("re").number() : 0.0, has("im") ? child("im").number() : 0.0};
  }
  fail("expected number, [re, im] or {\"re\", \"im\"}");
}

}  // namespace detail

using detail::JsonReader;

namespace {

Statistics parse_statistics(const JsonReader& r) {
  const std::string s = r.string();
  if (s == "fermi") return Statistics::Fermi;
  if (s == "bose") return Statistics::Bose;
  r.fail("expected \"fermi\" or \"bose\"");
}

VacuumRegime parse_regime(const JsonReader& r) {
  const std::string s = r.string();
  if (s == "empty") return VacuumRegime::Empty;
  if (s == "half_filled") return VacuumRegime::HalfFilled;
  if (s == "boson_ground") return VacuumRegime::BosonGround;
  r.fail("expected \"empty\", \"half_filled\" or \"boson_ground\"");
}

Boundary parse_boundary(const JsonReader& r) {
  const std::string s = r.string();
  if (s == "open") return Boundary::Open;
  if (s == "periodic") return Boundary::Periodic;
  r.fail("expected \"open\" or \"periodic\"");
}

Band parse_band(const JsonReader& r) {
  const std::string s = r.string();
  if (s == "upper") return Band::Upper;
  if (s == "lower") return Band::Lower;
  r.fail("expected \"upper\" or \"lower\"");
}

Envelope parse_envelope(const JsonReader& r) {
  const std::string s = r.string();
  if (s == "gaussian") return Envelope::Gaussian;
  if (s == "rectangular") return Envelope::Rectangular;
  r.fail("expected \"gaussian\" or \"rectangular\"");
}

std::size_t parse_cap(const JsonReader& r) {
  const double v = r.number();
  if (!(v >= 1.0) || std::floor(v) != v || v > 1e18) r.fail("expected positive integer");
  return static_cast<std::size_t>(v);
}

LatticeModel parse_model(const JsonReader& r) {
  r.allow_keys({"statistics", "sites", "species", "hopping", "mass", "staggered", "regime", "n_max", "boundary"});
  LatticeModel m;
  m.statistics = parse_statistics(r.child("statistics"));
  m.sites = r.child("sites").integer();
  if (r.has("species")) m.species = r.child("species").integer();
  if (r.has("hopping")) m.hopping = r.child("hopping").number();
  if (r.has("mass")) m.mass = r.child("mass").number();
  if (r.has("staggered")) m.staggered = r.child("staggered").boolean();
  if (r.has("regime")) m.regime = parse_regime(r.child("regime"));
  if (r.has("n_max")) m.n_max = r.child("n_max").integer();
  if (r.has("boundary")) m.boundary = parse_boundary(r.child("boundary"));
  if (m.sites < 2) r.child("sites").fail("need at least 2 sites");
  if (m.species < 1) r.child("species").fail("must be >= 1");
  if (m.statistics == Statistics::Fermi) m.n_max = 1;
  return m;
}

PacketProfile parse_packet(const JsonReader& r) {
  r.allow_keys({"name", "center", "width", "species", "band", "envelope"});
  PacketProfile p;
  p.name = r.child("name").string();
  if (p.name.empty()) r.child("name").fail("must be nonempty");
  p.center = r.child("center").number();
  if (r.has("width")) p.width = r.child("width").number();
  if (r.has("species")) p.species = r.child("species").integer();
  if (r.has("band")) p.band = parse_band(r.child("band"));
  if (r.has("envelope")) p.envelope = parse_envelope(r.child("envelope"));
  return p;
}

TermSpec parse_term(const JsonReader& r) {
  r.allow_keys({"coefficient", "operators"});
  TermSpec t;
  if (r.has("coefficient")) t.coefficient = r.child("coefficient").complex();
  for (const auto& op : r.child("operators").elements()) t.operators.push_back(op.string());
  return t;
}

}  // namespace

const PacketProfile* ExperimentConfig::find_packet(const std::string& name) const {
  for (const auto& p : packets) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

void check_config(const ExperimentConfig& c) {
  validate(c.model);

  const std::size_t radix = static_cast<std::size_t>(c.model.statistics == Statistics::Fermi ? 2 : c.model.n_max + 1);
  const double log_dim = c.model.mode_count() * std::log2(static_cast<double>(radix));
  if (log_dim > std::log2(static_cast<double>(c.analysis.dim_cap)) + 1e-9) {
    std::ostringstream os;
    os << "/model: basis too large: " << radix << "^" << c.model.mode_count() << " amplitudes exceed dim_cap "
       << c.analysis.dim_cap;
    throw CapacityError(os.str());
  }

  std::set<std::string> names;
  for (std::size_t i = 0; i < c.packets.size(); ++i) {
    const auto& p = c.packets[i];
    const std::string path = "/packets/" + std::to_string(i);
    if (!names.insert(p.name).second) throw ConfigError(path + "/name: duplicate packet name '" + p.name + "'");
    try {
      sample_envelope(p, c.model);
    } catch (const ConfigError& e) {
      throw ConfigError(path + ": " + e.what());
    }
    if (p.band == Band::Lower && c.model.regime != VacuumRegime::HalfFilled) {
      throw ConfigError(path + "/band: band lower needs regime half_filled");
    }
  }

  if (c.terms.empty()) throw ConfigError("/state/terms: at least one term required");
  for (std::size_t i = 0; i < c.terms.size(); ++i) {
    for (std::size_t j = 0; j < c.terms[i].operators.size(); ++j) {
      const std::string& name = c.terms[i].operators[j];
      if (c.find_packet(name) == nullptr) {
        throw ConfigError("/state/terms/" + std::to_string(i) + "/operators/" + std::to_string(j) +
                          ": unknown packet '" + name + "'");
      }
    }
  }

  try {
    const Region region(c.region, c.model.sites, c.model.species);
    const double log_region = static_cast<double>(region.modes().size()) * std::log2(static_cast<double>(radix));
    if (2.0 * log_region > std::log2(static_cast<double>(c.analysis.dim_cap)) + 1e-9) {
      throw CapacityError("region too large for dim_cap");
    }
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("/region/sites: ") + e.what());
  }

  if (c.analysis.orders.empty()) throw ConfigError("/analysis/orders: at least one order required");
  for (double n : c.analysis.orders) {
    if (!(n > 0.0)) throw ConfigError("/analysis/orders: orders must be > 0");
  }
  for (int n : c.analysis.replica_orders) {
    if (n < 1) throw ConfigError("/analysis/replica_orders: orders must be >= 1");
  }
  for (const auto& f : c.output.formats) {
    if (f != "json" && f != "csv") throw ConfigError("/output/formats: unknown format '" + f + "'");
  }
}

ExperimentConfig parse_config(const nlohmann::json& doc) {
  const JsonReader root(doc, "");
  root.allow_keys({"model", "packets", "state", "region", "analysis", "output"});

  ExperimentConfig c;
  c.model = parse_model(root.child("model"));
  if (root.has("packets")) {
    for (const auto& p : root.child("packets").elements()) c.packets.push_back(parse_packet(p));
  }
  const JsonReader state = root.child("state");
  state.allow_keys({"terms"});
  for (const auto& t : state.child("terms").elements()) c.terms.push_back(parse_term(t));

  const JsonReader region = root.child("region");
  region.allow_keys({"sites"});
  for (const auto& s : region.child("sites").elements()) c.region.push_back(s.integer());

  if (root.has("analysis")) {
    const JsonReader a = root.child("analysis");
    a.allow_keys({"orders", "replica_check", "replica_orders", "dim_cap", "replica_cap"});
    if (a.has("orders")) {
      c.analysis.orders.clear();
      for (const auto& n : a.child("orders").elements()) c.analysis.orders.push_back(n.number());
    }
    if (a.has("replica_check")) c.analysis.replica_check = a.child("replica_check").boolean();
    if (a.has("replica_orders")) {
      c.analysis.replica_orders.clear();
      for (const auto& n : a.child("replica_orders").elements()) c.analysis.replica_orders.push_back(n.integer());
    }
    if (a.has("dim_cap")) c.analysis.dim_cap = parse_cap(a.child("dim_cap"));
    if (a.has("replica_cap")) c.analysis.replica_cap = parse_cap(a.child("replica_cap"));
  }
  if (root.has("output")) {
    const JsonReader o = root.child("output");
    o.allow_keys({"directory", "formats"});
    if (o.has("directory")) c.output.directory = o.child("directory").string();
    if (o.has("formats")) {
      c.output.formats.clear();
      for (const auto& f : o.child("formats").elements()) c.output.formats.push_back(f.string());
    }
  }

  // the environment wins over the file so a run can be capped from outside
  if (const char* env = std::getenv("QENT_DIM_CAP"); env != nullptr && *env != '\0') {
    c.analysis.dim_cap = default_dimension_cap();
  }

  check_config(c);
  return c;
}

ExperimentConfig validate_config(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("/: invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json model = {
      {"statistics", to_string(c.model.statistics)},
      {"sites", c.model.sites},
      {"species", c.model.species},
      {"hopping", c.model.hopping},
      {"mass", c.model.mass},
      {"staggered", c.model.staggered},
      {"regime", to_string(c.model.regime)},
      {"n_max", c.model.n_max},
      {"boundary", to_string(c.model.boundary)},
  };
  nlohmann::json packets = nlohmann::json::array();
  for (const auto& p : c.packets) {
    packets.push_back({{"name", p.name},
                       {"center", p.center},
                       {"width", p.width},
                       {"species", p.species},
                       {"band", to_string(p.band)},
                       {"envelope", to_string(p.envelope)}});
  }
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : c.terms) {
    terms.push_back({{"coefficient", {t.coefficient.real(), t.coefficient.imag()}}, {"operators", t.operators}});
  }
  return {
      {"model", model},
      {"packets", packets},
      {"state", {{"terms", terms}}},
      {"region", {{"sites", c.region}}},
      {"analysis",
       {{"orders", c.analysis.orders},
        {"replica_check", c.analysis.replica_check},
        {"replica_orders", c.analysis.replica_orders},
        {"dim_cap", c.analysis.dim_cap},
        {"replica_cap", c.analysis.replica_cap}}},
      {"output", {{"directory", c.output.directory}, {"formats", c.output.formats}}},
  };
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace qent
