#include "natmodes/commands.hpp"

#include <cmath>
#include <numbers>

#include <json.hpp>

#include "natmodes/analysis.hpp"
#include "natmodes/csv.hpp"
#include "natmodes/quarterwave.hpp"

namespace natmodes {

namespace {

using ojson = nlohmann::ordered_json;

struct Context {
  const RunConfig& cfg;
  std::filesystem::path dir;
  OutputMeta meta;
  CommandOutcome outcome;

  // Files are prefixed with the command so several commands can share one
  // output directory.
  void csv(const std::string& stem, const CsvTable& table) {
    const std::string name = prefixed(stem);
    write_atomic(dir / name, table.render(meta));
    outcome.written.push_back(dir / name);
  }

  std::string prefixed(const std::string& stem) const {
    return stem.rfind(meta.command, 0) == 0 ? stem : meta.command + "_" + stem;
  }

  void report(const std::string& stem, ojson body) {
    const std::string name = prefixed(stem);
    ojson doc;
    doc["tool"] = "natmodes " + meta.tool_version;
    doc["command"] = meta.command;
    doc["config_fingerprint"] = hex64(meta.config_fingerprint);
    doc["seed"] = meta.seed;
    for (auto& [k, v] : body.items()) doc[k] = v;
    write_atomic(dir / name, doc.dump(2) + "\n");
    outcome.written.push_back(dir / name);
  }
};

template <class T>
const T& need(const std::optional<T>& block, const char* name) {
  if (!block) throw Error(ErrorKind::Config, std::string("config has no \"") + name + "\" block");
  return *block;
}

ojson complex_json(cplx z) { return ojson::array({z.real(), z.imag()}); }

ojson rect_json(const Rect& r) { return ojson::array({r.re_min, r.re_max, r.im_min, r.im_max}); }

CsvTable mode_table(const std::vector<Mode>& modes) {
  CsvTable t({"omega_re", "omega_im", "multiplicity", "method", "residual"});
  for (const auto& m : modes) {
    t.add_row({format_number(m.omega.real()), format_number(m.omega.imag()), std::to_string(m.multiplicity),
               to_string(m.method), format_number(m.residual)});
  }
  return t;
}

// find_modes, turning the depth-limit error into a partial result.
ModeSet search(const Stack& stack, const SearchRegion& region, std::uint64_t seed, bool& complete) {
  try {
    complete = true;
    return find_modes(stack, region, seed);
  } catch (const MaxDepthExceeded& e) {
    complete = false;
    return e.partial();
  }
}

ojson modeset_json(const ModeSet& set) {
  ojson j;
  j["count"] = set.modes.size();
  j["total_multiplicity"] = set.total_multiplicity();
  j["winding_total"] = set.winding_total;
  j["cells_visited"] = set.cells_visited;
  j["cells_excluded"] = set.cells_excluded;
  j["stack_fingerprint"] = hex64(set.stack_fingerprint);
  ojson un = ojson::array();
  for (const auto& u : set.unresolved) un.push_back({{"rect", rect_json(u.rect)}, {"count", u.count}});
  j["unresolved"] = un;
  return j;
}

ojson poles_json(const Stack& stack) {
  ojson poles = ojson::array();
  for (std::size_t i = 0; i < stack.layers.size(); ++i) {
    if (!stack.layers[i].material.is_dispersive()) continue;
    for (cplx p : pole_frequencies(stack.layers[i].material)) poles.push_back({{"layer", i + 1}, {"omega", complex_json(p)}});
  }
  return poles;
}

void cmd_modes(Context& ctx) {
  const ModesConfig& mc = need(ctx.cfg.modes, "modes");
  if (mc.method == ModesConfig::Method::Polynomial) {
    const QuarterWaveSpec& qw = *ctx.cfg.quarterwave;
    const QuarterWaveModes res = quarterwave_modes(qw.ratio, qw.layers, mc.periods, qw.polarization);
    ctx.csv("modes.csv", mode_table(res.modes.modes));
    ojson body;
    body["method"] = "polynomial";
    body["variable"] = "delta";
    body["degree"] = res.degree();
    body["periods"] = ojson::array({mc.periods.first, mc.periods.second});
    body["count"] = res.modes.modes.size();
    double max_im = 0.0;
    for (const auto& m : res.modes.modes) max_im = std::max(max_im, std::abs(m.omega.imag()));
    body["max_abs_im"] = max_im;
    if (const auto gap = root_gap(res.modes.modes, std::numbers::pi / 2)) {
      body["gap"] = ojson::array({gap->first, gap->second});
    } else {
      body["gap"] = nullptr;
    }
    ctx.report("summary.json", body);
    return;
  }
  bool complete = true;
  const ModeSet set = search(ctx.cfg.stack, mc.region, ctx.meta.seed, complete);
  ctx.csv("modes.csv", mode_table(set.modes));
  ojson body = modeset_json(set);
  body["method"] = "contour";
  body["variable"] = "omega";
  body["region"] = rect_json(mc.region.rect);
  body["poles"] = poles_json(ctx.cfg.stack);
  ctx.report("summary.json", body);
  if (!complete) {
    ctx.outcome.exit_code = kExitUnresolved;
    ctx.outcome.message = std::to_string(set.unresolved.size()) + " cell(s) unresolved";
  }
}

bool lossless(const Stack& s) {
  const auto real_index = [](const Material& m) { return !m.is_dispersive() && m.as_constant().n.imag() == 0.0; };
  if (!real_index(s.ambient_in) || !real_index(s.ambient_out)) return false;
  for (const auto& l : s.layers) {
    if (!real_index(l.material)) return false;
  }
  return true;
}

void cmd_spectrum(Context& ctx) {
  const SpectrumConfig& sc = need(ctx.cfg.spectrum, "spectrum");
  std::vector<double> grid(static_cast<std::size_t>(sc.points));
  for (int i = 0; i < sc.points; ++i) {
    grid[static_cast<std::size_t>(i)] = sc.omega_min + (sc.omega_max - sc.omega_min) * i / (sc.points - 1);
  }
  const auto rows = spectrum(ctx.cfg.stack, grid);
  CsvTable t({"omega", "R", "T", "is_peak", "fwhm"});
  ojson peaks = ojson::array();
  double defect = 0.0;
  for (const auto& r : rows) {
    t.add_row({format_number(r.omega), format_number(r.R), format_number(r.T), r.is_peak ? "1" : "0",
               format_number(r.fwhm)});
    defect = std::max(defect, std::abs(r.R + r.T - 1.0));
    if (r.is_peak) peaks.push_back({{"omega", r.omega}, {"T", r.T}, {"fwhm", r.fwhm ? ojson(*r.fwhm) : ojson()}});
  }
  ctx.csv("spectrum.csv", t);
  ojson body;
  body["points"] = rows.size();
  body["lossless"] = lossless(ctx.cfg.stack);
  body["max_energy_defect"] = defect;
  body["peaks"] = peaks;
  ctx.report("summary.json", body);
}

void cmd_census(Context& ctx) {
  const CensusConfig& cc = need(ctx.cfg.census, "census");
  bool complete = true;
  const ModeSet set = search(ctx.cfg.stack, cc.region, ctx.meta.seed, complete);
  const auto poles = pole_frequencies(ctx.cfg.stack.layers[cc.layer - 1].material);
  const cplx pole = cc.positive_pole ? poles[0] : poles[1];
  const auto rows = cluster_census(set.modes, pole, cc.radii);
  CsvTable t({"radius", "count", "density"});
  for (const auto& r : rows) t.add_row({format_number(r.radius), std::to_string(r.count), format_number(r.density)});
  ctx.csv("census.csv", t);
  ctx.csv("modes.csv", mode_table(set.modes));
  ojson body = modeset_json(set);
  body["pole"] = complex_json(pole);
  body["counts_monotone"] = census_counts_monotone(rows);
  body["density_increasing"] = census_density_increasing(rows);
  ctx.report("summary.json", body);
  if (!complete) {
    ctx.outcome.exit_code = kExitUnresolved;
    ctx.outcome.message = std::to_string(set.unresolved.size()) + " cell(s) unresolved";
  }
}

ojson report_json(const CompletenessReport& r) {
  ojson j;
  j["decay_exponent"] = r.decay_exponent;
  j["classification"] = to_string(r.classification);
  j["fit_range"] = ojson::array({r.fit_lo, r.fit_hi});
  j["fit_residual"] = r.fit_residual;
  j["truncation"] = r.truncation;
  j["tail_model"] = to_string(r.tail_model);
  j["z_map"] = to_string(r.z_map);
  j["paley_wiener_ratio_check"] = r.paley_wiener_ratio_check;
  j["tail_source"] = r.tail_source;
  j["note"] = r.note;
  return j;
}

void cmd_completeness(Context& ctx) {
  const CompletenessConfig& cc = need(ctx.cfg.completeness, "completeness");
  using Source = CompletenessConfig::Source;
  if (cc.source == Source::Constancy) {
    std::vector<double> z(static_cast<std::size_t>(cc.samples));
    const double ratio = std::log(cc.z_max / cc.z_min);
    for (int i = 0; i < cc.samples; ++i) z[static_cast<std::size_t>(i)] = cc.z_min * std::exp(ratio * i / (cc.samples - 1));
    const LConstancyReport rep = verify_L_constancy(cc.A, cc.d, cc.M, z);
    CsvTable t({"abs_z", "abs_L"});
    for (const auto& r : rep.rows) t.add_row({format_number(r.abs_z), format_number(r.abs_L)});
    ctx.csv("L.csv", t);
    ojson body;
    body["A"] = cc.A;
    body["d"] = cc.d;
    body["truncation"] = rep.truncation;
    body["relative_variation"] = rep.relative_variation;
    body["bound"] = rep.bound;
    body["within_bound"] = rep.within_bound;
    body["max_tail_remainder"] = rep.max_tail_remainder;
    ctx.report("completeness.json", body);
    return;
  }
  CanonicalProduct cp;
  std::string tail_source = "none";
  ojson extra;
  if (cc.source == Source::Synthetic) {
    cp = synthetic_product(cc.set, cc.pairs, cc.tail);
    extra["set"] = cc.set == SyntheticSet::Sine ? "sine" : cc.set == SyntheticSet::Cosine ? "cosine" : "cosine-minus-one";
  } else {
    bool complete = true;
    const ModeSet set = search(ctx.cfg.stack, cc.region, ctx.meta.seed, complete);
    if (!complete) {
      ctx.outcome.exit_code = kExitUnresolved;
      ctx.outcome.message = std::to_string(set.unresolved.size()) + " cell(s) unresolved";
    }
    const Layer& layer = ctx.cfg.stack.layers[cc.layer - 1];
    const ZMapParams params{cc.z_map, layer.thickness, ctx.cfg.stack.c, layer.material};
    cp = canonical_product_from_modes(set.modes, params, cc.pairs, &tail_source);
    cp.tail_model = cc.tail;
    extra["modes_found"] = set.modes.size();
  }
  CompletenessReport rep = classify(cp, cc.classify);
  rep.tail_source = tail_source;
  ojson body = report_json(rep);
  for (auto& [k, v] : extra.items()) body[k] = v;
  ctx.report("completeness.json", body);
}

void cmd_asymptotics(Context& ctx) {
  const AsymptoticsConfig& ac = need(ctx.cfg.asymptotics, "asymptotics");
  const Layer& layer = ctx.cfg.stack.layers[ac.layer - 1];
  const double A = high_freq_coefficient(layer.material);
  CsvTable t({"family", "m", "omega_re", "omega_im", "abs_omega", "residual"});
  for (const auto& f : asymptotic_modes(A, layer.thickness, ac.m, ctx.cfg.stack.c)) {
    t.add_row({"asymptotic", std::to_string(f.m), format_number(f.omega.real()), format_number(f.omega.imag()),
               format_number(std::abs(f.omega)), format_number(f.rarified_residual)});
  }
  if (ac.near_resonance) {
    const auto fam = near_resonance_modes_slab(layer.material, layer.thickness, ac.near_resonance->first,
                                               ac.near_resonance->second, ctx.cfg.stack.c);
    for (const auto& f : fam) {
      t.add_row({"near-resonance", std::to_string(f.m), format_number(f.omega_approx.real()),
                 format_number(f.omega_approx.imag()), format_number(std::abs(f.omega_approx)),
                 format_number(newton_correction(ctx.cfg.stack, f.omega_approx))});
    }
  }
  ctx.csv("asymptotics.csv", t);
  ojson body;
  body["layer"] = ac.layer;
  body["A"] = A;
  body["d"] = layer.thickness;
  body["rows"] = t.rows();
  ctx.report("summary.json", body);
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"modes", "spectrum", "completeness", "census", "asymptotics"};
  return names;
}

CommandOutcome run_command(const std::string& command, const RunConfig& config, const std::filesystem::path& out_dir) {
  Context ctx{config, out_dir, {tool_version(), config.fingerprint, config.seed, command}, {}};
  if (command == "modes") cmd_modes(ctx);
  else if (command == "spectrum") cmd_spectrum(ctx);
  else if (command == "completeness") cmd_completeness(ctx);
  else if (command == "census") cmd_census(ctx);
  else if (command == "asymptotics") cmd_asymptotics(ctx);
  else throw Error(ErrorKind::InvalidArgument, "unknown command " + command);
  return ctx.outcome;
}

}  // namespace natmodes
