#include "qent/sweep.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <atomic>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

#include "qent/error.hpp"
#include "qent/experiment.hpp"
#include "qent/report_io.hpp"

namespace qent {

using detail::JsonReader;

const char* to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::Separation: return "separation";
    case SweepParameter::RegionSize: return "region_size";
    case SweepParameter::CoefficientRatio: return "coefficient_ratio";
    case SweepParameter::IndexPattern: return "index_pattern";
  }
  return "?";
}

std::size_t SweepSpec::size() const {
  return parameter == SweepParameter::IndexPattern ? patterns.size() : values.size();
}

namespace {

using SpeciesPairs = std::array<std::pair<int, int>, 2>;

const std::map<std::string, SpeciesPairs>& pattern_table() {
  static const std::map<std::string, SpeciesPairs> table = {
      {"distinct", {{{0, 1}, {2, 3}}}}, {"i=l", {{{0, 1}, {2, 0}}}}, {"j=k", {{{0, 1}, {1, 2}}}},
      {"i=j", {{{0, 0}, {1, 2}}}},      {"k=l", {{{0, 1}, {2, 2}}}}, {"singlet", {{{0, 1}, {1, 0}}}},
  };
  return table;
}

double default_anchor(const ExperimentConfig& c) {
  return *std::max_element(c.region.begin(), c.region.end()) + 0.5;
}

// first packet on each side of the anchor; used as the template for a location
std::pair<const PacketProfile*, const PacketProfile*> sides(const ExperimentConfig& c, double anchor) {
  const PacketProfile* left = nullptr;
  const PacketProfile* right = nullptr;
  for (const auto& p : c.packets) {
    if (p.center <= anchor) {
      if (!left) left = &p;
    } else if (!right) {
      right = &p;
    }
  }
  return {left, right};
}

ExperimentConfig with_separation(ExperimentConfig c, double d, double anchor) {
  if (!(d >= 0.0)) throw ConfigError("separation must be >= 0");
  for (auto& p : c.packets) p.center = p.center <= anchor ? anchor - d / 2 : anchor + d / 2;
  return c;
}

ExperimentConfig with_region_size(ExperimentConfig c, double k) {
  if (std::floor(k) != k || k < 1 || k >= c.model.sites) {
    throw ConfigError("region size must be an integer in [1, sites)");
  }
  c.region.clear();
  for (int x = 0; x < static_cast<int>(k); ++x) c.region.push_back(x);
  return c;
}

ExperimentConfig with_ratio(ExperimentConfig c, double r) {
  if (c.terms.size() != 2) throw ConfigError("coefficient_ratio sweep needs a base with exactly two terms");
  if (!(r >= 0.0)) throw ConfigError("coefficient ratio must be >= 0");
  c.terms[0].coefficient = r;
  c.terms[1].coefficient = 1.0;
  return c;
}

ExperimentConfig with_pattern(ExperimentConfig c, const std::string& pattern, double anchor) {
  const auto it = pattern_table().find(pattern);
  if (it == pattern_table().end()) throw ConfigError("unknown index pattern '" + pattern + "'");
  const auto [left, right] = sides(c, anchor);
  if (!left || !right) throw ConfigError("index_pattern sweep needs packets on both sides of the anchor");
  const SpeciesPairs pairs = it->second;
  int needed = 0;
  for (const auto& [i, j] : pairs) needed = std::max({needed, i + 1, j + 1});
  if (needed > c.model.species) {
    throw ConfigError("index pattern '" + pattern + "' needs " + std::to_string(needed) + " species");
  }
  const PacketProfile l = *left;
  const PacketProfile r = *right;
  const cplx a = c.terms.size() > 0 ? c.terms[0].coefficient : cplx{1.0, 0.0};
  const cplx b = c.terms.size() > 1 ? c.terms[1].coefficient : cplx{1.0, 0.0};

  c.packets.clear();
  auto packet = [&](const PacketProfile& tmpl, const char* side, int species) {
    const std::string name = std::string(side) + std::to_string(species);
    if (!c.find_packet(name)) {
      PacketProfile p = tmpl;
      p.name = name;
      p.species = species;
      c.packets.push_back(p);
    }
    return name;
  };
  c.terms.clear();
  const cplx coefficients[2] = {a, b};
  for (std::size_t t = 0; t < 2; ++t) {
    TermSpec term;
    term.coefficient = coefficients[t];
    term.operators = {packet(l, "L", pairs[t].first), packet(r, "R", pairs[t].second)};
    c.terms.push_back(term);
  }
  return c;
}

SweepParameter parse_parameter(const JsonReader& r) {
  const std::string s = r.string();
  if (s == "separation") return SweepParameter::Separation;
  if (s == "region_size") return SweepParameter::RegionSize;
  if (s == "coefficient_ratio") return SweepParameter::CoefficientRatio;
  if (s == "index_pattern") return SweepParameter::IndexPattern;
  r.fail("expected \"separation\", \"region_size\", \"coefficient_ratio\" or \"index_pattern\"");
}

}  // namespace

SweepSpec parse_sweep(const nlohmann::json& doc) {
  const JsonReader root(doc, "");
  root.allow_keys({"base", "parameter", "values", "anchor"});
  SweepSpec s;
  try {
    s.base = parse_config(root.child("base").node());
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    throw ConfigError("/base" + (what.rfind('/', 0) == 0 ? what : ": " + what));
  }
  s.parameter = parse_parameter(root.child("parameter"));
  const auto values = root.child("values").elements();
  if (values.empty()) root.child("values").fail("at least one value required");
  for (const auto& v : values) {
    if (s.parameter == SweepParameter::IndexPattern) {
      s.patterns.push_back(v.string());
      if (!pattern_table().count(s.patterns.back())) v.fail("unknown index pattern '" + s.patterns.back() + "'");
    } else {
      s.values.push_back(v.number());
    }
  }
  if (root.has("anchor")) s.anchor = root.child("anchor").number();
  return s;
}

SweepSpec validate_sweep(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("/: invalid JSON: ") + e.what());
  }
  return parse_sweep(doc);
}

std::vector<SweepPoint> expand_sweep(const SweepSpec& spec) {
  const double anchor = spec.anchor.value_or(default_anchor(spec.base));
  std::vector<SweepPoint> points;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    SweepPoint p;
    try {
      switch (spec.parameter) {
        case SweepParameter::Separation:
          p.value = spec.values[i];
          p.label = format12(p.value);
          p.config = with_separation(spec.base, p.value, anchor);
          break;
        case SweepParameter::RegionSize:
          p.value = spec.values[i];
          p.label = format12(p.value);
          p.config = with_region_size(spec.base, p.value);
          break;
        case SweepParameter::CoefficientRatio:
          p.value = spec.values[i];
          p.label = format12(p.value);
          p.config = with_ratio(spec.base, p.value);
          break;
        case SweepParameter::IndexPattern:
          p.value = static_cast<double>(i);
          p.label = spec.patterns[i];
          p.config = with_pattern(spec.base, p.label, anchor);
          break;
      }
      check_config(*p.config);
    } catch (const Error& e) {
      p.config.reset();
      p.error = e.what();
    }
    points.push_back(std::move(p));
  }
  if (spec.parameter != SweepParameter::IndexPattern) {
    std::stable_sort(points.begin(), points.end(),
                     [](const SweepPoint& a, const SweepPoint& b) { return a.value < b.value; });
  }
  return points;
}

std::size_t SweepResult::succeeded() const {
  return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](const auto& p) { return p.ok(); }));
}

namespace {

void run_points(std::vector<SweepPoint>& points, int jobs) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      SweepPoint& p = points[i];
      if (!p.config) continue;
      try {
        p.record = run_experiment(*p.config).residual;
      } catch (const Error& e) {
        p.error = e.what();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::clamp<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), 1,
                                                                          std::max<std::size_t>(points.size(), 1)));
  if (threads == 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, int jobs) {
  SweepResult result;
  result.spec = spec;
  result.points = expand_sweep(spec);
  run_points(result.points, jobs);
  return result;
}

std::vector<std::optional<ResidualRecord>> overlap_scan(const ExperimentConfig& base,
                                                        const std::vector<double>& separations, int jobs,
                                                        std::optional<double> anchor) {
  SweepSpec spec;
  spec.base = base;
  spec.parameter = SweepParameter::Separation;
  spec.values = separations;
  spec.anchor = anchor;
  const SweepResult r = run_sweep(spec, jobs);
  std::vector<std::optional<ResidualRecord>> out;
  for (const auto& p : r.points) out.push_back(p.record);
  return out;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

double order_value(const ResidualRecord& r, double order, double OrderResidual::*field) {
  const OrderResidual* o = r.find(order);
  return o ? o->*field : std::numeric_limits<double>::quiet_NaN();
}

double delta2(const SweepPoint& p) { return order_value(*p.record, 2.0, &OrderResidual::delta); }

nlohmann::json point_json(const SweepPoint& p) {
  const ResidualRecord& r = *p.record;
  return {{"value", p.label},
          {"separation", number12(r.separation)},
          {"overlap_abs", number12(r.overlap_abs)},
          {"delta_S1", number12(order_value(r, 1.0, &OrderResidual::delta))},
          {"delta_S2", number12(order_value(r, 2.0, &OrderResidual::delta))},
          {"delta_S3", number12(order_value(r, 3.0, &OrderResidual::delta))},
          {"norm_dev", number12(r.norm_deviation)}};
}

}  // namespace

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream os;
  os << "separation,overlap_abs,delta_S1,delta_S2,delta_S3,norm_dev,vac_S1,vac_S2,"
        "sweep_param,sweep_value,sub_S1,sub_S2,sub_S3,qm_S1,qm_S2,qm_S3,error\n";
  const char* param = to_string(result.spec.parameter);
  for (const auto& p : result.points) {
    if (p.ok()) {
      const ResidualRecord& r = *p.record;
      os << format12(r.separation) << ',' << format12(r.overlap_abs);
      for (double n : {1.0, 2.0, 3.0}) os << ',' << format12(order_value(r, n, &OrderResidual::delta));
      os << ',' << format12(r.norm_deviation) << ',' << format12(r.vacuum_s1) << ',' << format12(r.vacuum_s2);
      os << ',' << param << ',' << csv_field(p.label);
      for (double n : {1.0, 2.0, 3.0}) os << ',' << format12(order_value(r, n, &OrderResidual::subtracted));
      for (double n : {1.0, 2.0, 3.0}) os << ',' << format12(order_value(r, n, &OrderResidual::qm));
      os << ",\n";
    } else {
      os << ",,,,,,,," << param << ',' << csv_field(p.label) << ",,,,,,," << csv_field(p.error) << '\n';
    }
  }
  return os.str();
}

std::string residual_csv(const ResidualRecord& r) {
  std::ostringstream os;
  os << "separation,overlap_abs,delta_S1,delta_S2,delta_S3,norm_dev,vac_S1,vac_S2,sub_S1,sub_S2,sub_S3,qm_S1,qm_S2,qm_S3\n";
  os << format12(r.separation) << ',' << format12(r.overlap_abs);
  for (double n : {1.0, 2.0, 3.0}) os << ',' << format12(order_value(r, n, &OrderResidual::delta));
  os << ',' << format12(r.norm_deviation) << ',' << format12(r.vacuum_s1) << ',' << format12(r.vacuum_s2);
  for (double n : {1.0, 2.0, 3.0}) os << ',' << format12(order_value(r, n, &OrderResidual::subtracted));
  for (double n : {1.0, 2.0, 3.0}) os << ',' << format12(order_value(r, n, &OrderResidual::qm));
  os << '\n';
  return os.str();
}

nlohmann::json sweep_summary(const SweepResult& result) {
  nlohmann::json s = {{"parameter", to_string(result.spec.parameter)},
                      {"points", result.points.size()},
                      {"succeeded", result.succeeded()},
                      {"failed", result.failed()},
                      {"metric", "delta_S2"}};
  nlohmann::json errors = nlohmann::json::array();
  for (const auto& p : result.points) {
    if (!p.ok()) errors.push_back({{"value", p.label}, {"error", p.error}});
  }
  s["errors"] = errors;
  std::vector<const SweepPoint*> ok;
  for (const auto& p : result.points) {
    if (p.ok() && std::isfinite(delta2(p))) ok.push_back(&p);
  }
  if (ok.empty()) {
    s["decreasing"] = nullptr;
    s["first"] = nullptr;
    s["last"] = nullptr;
    return s;
  }
  const SweepPoint& first = *ok.front();
  const SweepPoint& last = *ok.back();
  s["decreasing"] = ok.size() >= 2 && delta2(last) < delta2(first);
  s["first"] = point_json(first);
  s["last"] = point_json(last);
  auto [lo, hi] = std::minmax_element(ok.begin(), ok.end(),
                                      [](const SweepPoint* a, const SweepPoint* b) { return delta2(*a) < delta2(*b); });
  s["min_delta_S2"] = point_json(**lo);
  s["max_delta_S2"] = point_json(**hi);
  s["all_delta_S2_positive"] =
      std::all_of(ok.begin(), ok.end(), [](const SweepPoint* p) { return delta2(*p) > 0.0; });
  return s;
}

}  // namespace qent
