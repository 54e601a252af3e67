#include "natmodes/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "natmodes/quarterwave.hpp"

namespace natmodes {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::Config, (path.empty() ? std::string("<root>") : path) + ": " + what);
}

// Object view that remembers which keys were read, so leftovers can be
// reported as unknown.
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  const std::string& path() const noexcept { return path_; }
  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* get(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  const json& need(const std::string& key) {
    const json* v = get(key);
    if (!v) fail(at(key), "missing required key");
    return *v;
  }

  double number(const std::string& key, double fallback) {
    const json* v = get(key);
    return v ? as_number(*v, at(key)) : fallback;
  }

  template <class Int>
  Int integer(const std::string& key, Int fallback) {
    const json* v = get(key);
    return v ? as_integer<Int>(*v, at(key)) : fallback;
  }

  std::string string(const std::string& key, const std::string& fallback) {
    const json* v = get(key);
    if (!v) return fallback;
    if (!v->is_string()) fail(at(key), "expected a string");
    return v->get<std::string>();
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!seen_.count(item.key())) fail(at(item.key()), "unknown key");
    }
  }

  static double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
  }

  template <class Int>
  static Int as_integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    if constexpr (std::is_unsigned_v<Int>) {
      if (v.get<long long>() < 0) fail(path, "expected a non-negative integer");
    }
    return v.get<Int>();
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::pair<double, double> range(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) fail(path, "expected [lo, hi]");
  const double lo = Obj::as_number(v[0], path + "[0]");
  const double hi = Obj::as_number(v[1], path + "[1]");
  if (!(lo < hi)) fail(path, "lo must be below hi");
  return {lo, hi};
}

Material material(const json& v, const std::string& path) {
  Obj o(v, path);
  const std::string type = o.string("type", "");
  Material m;
  try {
    if (type == "constant") {
      const double re = o.number("n", 1.0);
      const double im = o.number("n_imag", 0.0);
      m = Material::constant({re, im});
    } else if (type == "lorentz") {
      const double f = Obj::as_number(o.need("f"), o.at("f"));
      const double w0 = Obj::as_number(o.need("omega0"), o.at("omega0"));
      const double g = o.number("gamma", 0.0);
      m = Material::lorentz(f, w0, g);
    } else {
      fail(o.at("type"), "expected \"constant\" or \"lorentz\"");
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) throw;
    fail(path, e.what());
  }
  o.finish();
  return m;
}

Polarization polarization(const std::string& s, const std::string& path) {
  if (s == "TE") return Polarization::TE;
  if (s == "TM") return Polarization::TM;
  fail(path, "expected \"TE\" or \"TM\"");
}

void parse_stack(const json& v, RunConfig& cfg) {
  Obj o(v, "stack");
  if (const json* qw = o.get("quarterwave")) {
    Obj q(*qw, "stack.quarterwave");
    QuarterWaveSpec spec;
    spec.ratio = Obj::as_number(q.need("ratio"), q.at("ratio"));
    spec.layers = Obj::as_integer<int>(q.need("layers"), q.at("layers"));
    spec.polarization = polarization(q.string("polarization", "TE"), q.at("polarization"));
    q.finish();
    if (!(spec.ratio > 0.0)) fail(q.at("ratio"), "must be positive");
    if (spec.layers <= 0 || spec.layers % 2) fail(q.at("layers"), "must be a positive even number");
    cfg.quarterwave = spec;
    cfg.stack = quarterwave_stack(spec.ratio, spec.layers, spec.polarization);
    o.finish();
    return;
  }
  Stack s;
  if (const json* a = o.get("ambient_in")) s.ambient_in = material(*a, o.at("ambient_in"));
  if (const json* a = o.get("ambient_out")) s.ambient_out = material(*a, o.at("ambient_out"));
  const json& layers = o.need("layers");
  if (!layers.is_array()) fail(o.at("layers"), "expected an array");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const std::string p = o.at("layers") + "[" + std::to_string(i) + "]";
    Obj l(layers[i], p);
    Layer layer;
    layer.material = material(l.need("material"), l.at("material"));
    layer.thickness = Obj::as_number(l.need("thickness"), l.at("thickness"));
    l.finish();
    s.layers.push_back(layer);
  }
  s.polarization = polarization(o.string("polarization", "TE"), o.at("polarization"));
  s.theta0 = o.number("theta0", 0.0);
  s.c = o.number("c", 1.0);
  o.finish();
  try {
    s.validate();
  } catch (const Error& e) {
    fail("stack", e.what());
  }
  cfg.stack = s;
}

SearchRegion region(const json& v, const std::string& path) {
  Obj o(v, path);
  SearchRegion r;
  const auto re = range(o.need("re"), o.at("re"));
  const auto im = range(o.need("im"), o.at("im"));
  r.rect = {re.first, re.second, im.first, im.second};
  r.max_depth = o.integer<int>("max_depth", r.max_depth);
  r.newton_tol = o.number("newton_tol", r.newton_tol);
  if (const json* e = o.get("exclusion_radius")) r.exclusion_radius = Obj::as_number(*e, o.at("exclusion_radius"));
  o.finish();
  try {
    r.validate();
  } catch (const Error& e) {
    fail(path, e.what());
  }
  return r;
}

std::size_t layer_index(Obj& o, const RunConfig& cfg, bool dispersive) {
  const auto layer = o.integer<std::size_t>("layer", 1);
  if (layer < 1 || layer > cfg.stack.layers.size()) fail(o.at("layer"), "no such layer (1-based)");
  if (dispersive && !cfg.stack.layers[layer - 1].material.is_dispersive()) {
    fail(o.at("layer"), "layer must be Lorentz");
  }
  return layer;
}

ModesConfig parse_modes(const json& v, const RunConfig& cfg) {
  Obj o(v, "modes");
  ModesConfig m;
  const std::string method = o.string("method", "contour");
  if (method == "contour") {
    m.region = region(o.need("region"), o.at("region"));
  } else if (method == "polynomial") {
    if (!cfg.quarterwave) fail(o.at("method"), "polynomial method needs a quarterwave stack");
    m.method = ModesConfig::Method::Polynomial;
    if (const json* p = o.get("periods")) {
      if (!p->is_array() || p->size() != 2) fail(o.at("periods"), "expected [first, last]");
      m.periods = {Obj::as_integer<int>((*p)[0], o.at("periods[0]")), Obj::as_integer<int>((*p)[1], o.at("periods[1]"))};
      if (m.periods.first > m.periods.second) fail(o.at("periods"), "first must not exceed last");
    }
  } else {
    fail(o.at("method"), "expected \"contour\" or \"polynomial\"");
  }
  o.finish();
  return m;
}

SpectrumConfig parse_spectrum(const json& v) {
  Obj o(v, "spectrum");
  SpectrumConfig s;
  const auto r = range(o.need("omega"), o.at("omega"));
  s.omega_min = r.first;
  s.omega_max = r.second;
  s.points = o.integer<int>("points", s.points);
  if (s.points < 2) fail(o.at("points"), "need at least 2 points");
  o.finish();
  return s;
}

CensusConfig parse_census(const json& v, const RunConfig& cfg) {
  Obj o(v, "census");
  CensusConfig c;
  c.region = region(o.need("region"), o.at("region"));
  c.layer = layer_index(o, cfg, true);
  const std::string pole = o.string("pole", "+");
  if (pole != "+" && pole != "-") fail(o.at("pole"), "expected \"+\" or \"-\"");
  c.positive_pole = pole == "+";
  if (const json* r = o.get("radii")) {
    if (!r->is_array() || r->empty()) fail(o.at("radii"), "expected a non-empty array");
    c.radii.clear();
    for (std::size_t i = 0; i < r->size(); ++i) c.radii.push_back(Obj::as_number((*r)[i], o.at("radii")));
    for (std::size_t i = 0; i < c.radii.size(); ++i) {
      if (!(c.radii[i] > 0.0) || (i && !(c.radii[i] < c.radii[i - 1]))) {
        fail(o.at("radii"), "radii must be positive and strictly decreasing");
      }
    }
  }
  o.finish();
  return c;
}

CompletenessConfig parse_completeness(const json& v, const RunConfig& cfg) {
  Obj o(v, "completeness");
  CompletenessConfig c;
  const std::string source = o.string("source", "synthetic");
  const auto classify_block = [&] {
    if (const json* k = o.get("classify")) {
      Obj q(*k, o.at("classify"));
      c.classify.x_min = q.number("x_min", c.classify.x_min);
      c.classify.x_max = q.number("x_max", c.classify.x_max);
      c.classify.per_decade = q.integer<int>("per_decade", c.classify.per_decade);
      c.classify.margin = q.number("margin", c.classify.margin);
      c.classify.max_fit_residual = q.number("max_fit_residual", c.classify.max_fit_residual);
      q.finish();
    }
    const std::string tail = o.string("tail", "asymptotic-pairing");
    if (tail == "none") c.tail = TailModel::None;
    else if (tail != "asymptotic-pairing") fail(o.at("tail"), "expected \"asymptotic-pairing\" or \"none\"");
    c.pairs = o.integer<std::size_t>("pairs", c.pairs);
  };
  if (source == "synthetic") {
    const std::string set = o.string("set", "sine");
    if (set == "sine") c.set = SyntheticSet::Sine;
    else if (set == "cosine") c.set = SyntheticSet::Cosine;
    else if (set == "cosine-minus-one") c.set = SyntheticSet::CosineMinusOne;
    else fail(o.at("set"), "expected \"sine\", \"cosine\" or \"cosine-minus-one\"");
    classify_block();
  } else if (source == "modes") {
    c.source = CompletenessConfig::Source::Modes;
    const std::string map = o.string("z_map", "large-frequency");
    if (map == "large-frequency") c.z_map = ZMap::LargeFrequency;
    else if (map == "near-resonance") c.z_map = ZMap::NearResonance;
    else fail(o.at("z_map"), "expected \"large-frequency\" or \"near-resonance\"");
    c.layer = layer_index(o, cfg, true);
    c.region = region(o.need("region"), o.at("region"));
    classify_block();
  } else if (source == "constancy") {
    c.source = CompletenessConfig::Source::Constancy;
    c.A = o.number("A", c.A);
    c.d = o.number("d", c.d);
    c.M = o.integer<std::size_t>("M", c.M);
    const auto z = range(o.need("z"), o.at("z"));
    c.z_min = z.first;
    c.z_max = z.second;
    c.samples = o.integer<int>("samples", c.samples);
    if (!(c.A > 0.0) || !(c.d > 0.0)) fail(o.path(), "A and d must be positive");
    if (c.samples < 2) fail(o.at("samples"), "need at least 2 samples");
    if (!(c.z_min > 0.0)) fail(o.at("z"), "must be positive");
  } else {
    fail(o.at("source"), "expected \"synthetic\", \"modes\" or \"constancy\"");
  }
  o.finish();
  return c;
}

AsymptoticsConfig parse_asymptotics(const json& v, const RunConfig& cfg) {
  Obj o(v, "asymptotics");
  AsymptoticsConfig a;
  a.layer = layer_index(o, cfg, true);
  if (const json* m = o.get("m")) {
    if (!m->is_array() || m->empty()) fail(o.at("m"), "expected a non-empty array");
    a.m.clear();
    for (const auto& x : *m) {
      const int k = Obj::as_integer<int>(x, o.at("m"));
      if (k == 0) fail(o.at("m"), "m = 0 has no asymptotic mode");
      a.m.push_back(k);
    }
  }
  if (const json* nr = o.get("near_resonance")) {
    const auto r = range(*nr, o.at("near_resonance"));
    const int lo = static_cast<int>(r.first), hi = static_cast<int>(r.second);
    if (lo != r.first || hi != r.second || lo < 1) fail(o.at("near_resonance"), "expected positive integers");
    a.near_resonance = std::pair{lo, hi};
  }
  o.finish();
  return a;
}

}  // namespace

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Config, std::string("malformed JSON: ") + e.what());
  }
  RunConfig cfg;
  Obj root(doc, "");
  parse_stack(root.need("stack"), cfg);
  cfg.seed = root.integer<std::uint64_t>("seed", 0);
  if (const json* v = root.get("modes")) cfg.modes = parse_modes(*v, cfg);
  if (const json* v = root.get("spectrum")) cfg.spectrum = parse_spectrum(*v);
  if (const json* v = root.get("census")) cfg.census = parse_census(*v, cfg);
  if (const json* v = root.get("completeness")) cfg.completeness = parse_completeness(*v, cfg);
  if (const json* v = root.get("asymptotics")) cfg.asymptotics = parse_asymptotics(*v, cfg);
  root.finish();
  cfg.fingerprint = fnv1a(doc.dump());
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Config, "cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace natmodes
