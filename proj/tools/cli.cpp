#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "causalshift/errors.hpp"
#include "causalshift/observables.hpp"
#include "causalshift/parallel.hpp"
#include "causalshift/splitting.hpp"
#include "causalshift/wavepacket.hpp"
#include "causalshift/wworacle.hpp"

namespace causalshift::cli {

using ojson = nlohmann::ordered_json;

namespace {

constexpr double kPi = std::numbers::pi;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_json(std::ostream& os, const ojson& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case ojson::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& item : j.items()) {
        if (!first) os << ",\n";
        first = false;
        os << inner << ojson(item.key()).dump() << ": ";
        write_json(os, item.value(), indent + 1);
      }
      os << "\n" << pad << "}";
      return;
    }
    case ojson::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << ",\n";
        first = false;
        os << inner;
        write_json(os, v, indent + 1);
      }
      os << "\n" << pad << "]";
      return;
    }
    case ojson::value_t::number_float:
      os << format_number(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

std::string notes_text(const char* key) {
  const std::string k = key;
  if (k == "normalization_ordering") {
    return "solved (C0, C1, C2) = (-7/2, 8, -29/6); the stated assignment lists C1 = -29/6 and "
           "C2 = 8, which does not zero the linear coefficient";
  }
  if (k == "denominator_power") {
    return "gamma_exact uses (1+delta_u)^5 as stated; substituting u = 1+delta_u into Im(Z/t_g) "
           "gives (1+delta_u)^4; both are O(delta_u) below gamma_leading";
  }
  if (k == "ratio_sign") {
    return "delta_final > 0 and lamb_reference < 0 as computed, so the signed ratio is negative; "
           "only the magnitude is compared with 0.055";
  }
  if (k == "retarded_form") {
    return "the stated closed form of the retarded part has imaginary part equal to D2, twice the "
           "pole term of the central splitting; the central closed form (prefactor 1/12, "
           "1/u^2 - 5/2 + 11u^2/6) is what the dispersion integral produces";
  }
  if (k == "series_coefficients") {
    return "stated c1..c3 are the expansion of Re(bracket)/u; the direct expansion of "
           "Re[2(2pi)^2 c T2s(1+x)] has c1 = 10+6C1+12C2, c2 = 29+6C2, c3 = -24";
  }
  return "";
}

ojson metadata(const std::string& command, const PhysicalConstants& k, const std::string& preset) {
  ojson m;
  m["command"] = command;
  m["constants_version"] = k.version;
  m["preset"] = preset;
  ojson notes;
  for (const char* key : {"normalization_ordering", "denominator_power", "ratio_sign",
                          "retarded_form", "series_coefficients"}) {
    notes[key] = notes_text(key);
  }
  m["notes"] = notes;
  return m;
}

ojson series_json(const LineShiftSeries& s) {
  ojson j;
  j["c0"] = s.c0;
  j["c1"] = s.c1;
  j["c2"] = s.c2;
  j["c3"] = s.c3;
  j["c_log3"] = s.c_log3;
  j["prefactor_s"] = s.prefactor;
  return j;
}

ojson constants_json(const PhysicalConstants& k) {
  ojson j;
  j["version"] = k.version;
  j["hbar_Js"] = k.hbar;
  j["c_m_s"] = k.c;
  j["eps0_F_m"] = k.eps0;
  j["e_C"] = k.e_charge;
  j["a0_m"] = k.a0;
  j["alpha"] = k.alpha;
  j["m_electron_kg"] = k.m_electron;
  j["m_proton_kg"] = k.m_proton;
  return j;
}

AtomParams load_preset_stream(std::istream& in, const std::string& preset,
                              const PhysicalConstants& k);

AtomParams load_preset(const std::string& preset, const PhysicalConstants& k) {
  if (preset == "hydrogen-1s2p") return hydrogen_1s2p_preset(k);
  std::ifstream in(preset);
  try {
    return load_preset_stream(in, preset, k);
  } catch (const DomainError& e) {
    throw UsageError(std::string("invalid preset: ") + e.what());
  }
}

AtomParams load_preset_stream(std::istream& in, const std::string& preset,
                              const PhysicalConstants& k) {
  if (!in) throw UsageError("unknown preset '" + preset + "' (not built in, not a readable file)");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("preset file '" + preset + "' is not valid JSON: " + e.what());
  }
  // A report produced by this tool carries its atom under "atom".
  if (j.is_object() && j.contains("atom") && j.contains("metadata")) return atom_from_json(j["atom"], k);
  return atom_from_json(j, k);
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

void write_csv(std::ostream& os, const ojson& meta, const Table& t) {
  os << "# command: " << meta["command"].get<std::string>() << "\n";
  os << "# constants_version: " << meta["constants_version"].get<std::string>() << "\n";
  os << "# preset: " << meta["preset"].get<std::string>() << "\n";
  for (const auto& item : meta["notes"].items()) {
    os << "# note " << item.key() << ": " << item.value().get<std::string>() << "\n";
  }
  if (meta.contains("choices")) {
    for (const auto& item : meta["choices"].items()) {
      os << "# choice " << item.key() << ": "
         << (item.value().is_string() ? item.value().get<std::string>() : item.value().dump())
         << "\n";
    }
  }
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << "\n";
  }
}

Table scalar_table(const ojson& results) {
  Table t;
  t.columns = {"quantity", "value"};
  std::function<void(const std::string&, const ojson&)> walk = [&](const std::string& prefix,
                                                                   const ojson& v) {
    if (v.is_object()) {
      for (const auto& item : v.items()) {
        walk(prefix.empty() ? item.key() : prefix + "." + item.key(), item.value());
      }
    } else if (v.is_number_float()) {
      t.rows.push_back({prefix, format_number(v.get<double>())});
    } else if (!v.is_array()) {
      t.rows.push_back({prefix, v.is_string() ? v.get<std::string>() : v.dump()});
    }
  };
  walk("", results);
  return t;
}

struct Output {
  ojson doc;
  Table table;
  bool has_table = false;
};

NormalizationConstants config_C(const RunConfig& c) { return {c.C0, c.C1, c.C2}; }

ResonanceWeight parse_weight(const std::string& w) {
  if (w == "direct") return ResonanceWeight::direct;
  if (w == "over_u") return ResonanceWeight::over_u;
  throw UsageError("unknown weight '" + w + "' (direct, over_u)");
}

ojson ww_choices(const RunConfig& c) {
  ojson j;
  j["grid"] = "uniform mode grid, flat couplings calibrated to gamma_leading; own discretization "
              "choices, not prescribed elsewhere";
  j["n_modes"] = c.n_modes;
  if (c.detuning_lo_gamma && c.detuning_hi_gamma) {
    j["detuning_lo_gamma"] = *c.detuning_lo_gamma;
    j["detuning_hi_gamma"] = *c.detuning_hi_gamma;
  } else {
    j["bandwidth_gamma"] = c.bandwidth_gamma;
  }
  j["t_end_gamma"] = c.t_end_gamma;
  j["dt_gamma"] = c.dt_gamma;
  j["integrator"] = "Cayley (Crank-Nicolson), frame rotating at omega_eg";
  j["fit_window_gamma"] = ojson::array({1.0, 5.0});
  return j;
}

struct WwRun {
  std::vector<AmplitudeState> trace;
  DecayFit fit;
  double gamma = 0.0;
};

WwRun run_ww(const RunConfig& c, const AtomParams& atom) {
  WwRun r;
  r.gamma = gamma_leading(atom);
  const ModeGrid grid = (c.detuning_lo_gamma && c.detuning_hi_gamma)
                            ? build_grid_range(atom, *c.detuning_lo_gamma * r.gamma,
                                               *c.detuning_hi_gamma * r.gamma, c.n_modes)
                            : build_grid(atom, c.bandwidth_gamma * r.gamma, c.n_modes);
  EvolveOptions opt;
  opt.stride = c.stride;
  r.trace = evolve(grid, atom, c.t_end_gamma / r.gamma, c.dt_gamma / r.gamma, opt);
  r.fit = fit_decay(r.trace, 1.0 / r.gamma, 5.0 / r.gamma);
  return r;
}

Output cmd_gamma(const RunConfig& c, const AtomParams& atom) {
  if (c.denominator_power != 5 && c.denominator_power != 4) {
    throw UsageError("--denominator-power must be 5 or 4");
  }
  Output o;
  ojson r;
  const double gl = gamma_leading(atom);
  const double ge = gamma_exact(atom, static_cast<DenominatorPower>(c.denominator_power));
  r["delta_u"] = atom.delta_u();
  r["gamma_leading_s"] = gl;
  r["gamma_exact_s"] = ge;
  r["denominator_power"] = c.denominator_power;
  r["gamma_exact_power5_s"] = gamma_exact(atom, DenominatorPower::five);
  r["gamma_exact_power4_s"] = gamma_exact(atom, DenominatorPower::four);
  r["exact_over_leading_minus_1"] = ge / gl - 1.0;
  if (c.ww_check) {
    const WwRun w = run_ww(c, atom);
    ojson ww;
    ww["rate_s"] = w.fit.rate;
    ww["rate_rel_diff"] = w.fit.rate / gl - 1.0;
    ww["fit_residual"] = w.fit.fit_residual;
    r["ww_oracle"] = ww;
    o.doc["metadata_choices"] = ww_choices(c);
  }
  o.doc["results"] = r;
  return o;
}

Output cmd_shift(const RunConfig& c, const AtomParams& atom) {
  Output o;
  ojson r;
  const NormalizationSolution sol = solve_normalization(atom, parse_weight(c.weight));
  r["delta_u"] = atom.delta_u();
  r["delta_final_s"] = delta_final(atom);
  r["gamma_leading_s"] = gamma_leading(atom);
  ojson cj;
  cj["C0"] = sol.C.C0;
  cj["C1"] = sol.C.C1;
  cj["C2"] = sol.C.C2;
  r["normalization"] = cj;
  ojson prose;
  prose["C0"] = sol.prose_ordering.C0;
  prose["C1"] = sol.prose_ordering.C1;
  prose["C2"] = sol.prose_ordering.C2;
  r["normalization_stated_ordering"] = prose;
  r["series_fitted"] = series_json(sol.series);
  r["series_stated"] = series_json(lineshift_series(atom, sol.C));
  r["series_direct"] = series_json(lineshift_series_direct(atom, sol.C));
  r["cubic_expected"] = sol.cubic_expected;
  // Evaluated with the normalization substituted exactly; see z_factor_normalized.
  const Complex z = z_factor_normalized(atom);
  r["re_z_over_t_g_s"] = z.real() / atom.t_g();
  r["im_z_over_t_g_s"] = z.imag() / atom.t_g();
  o.doc["results"] = r;
  return o;
}

Output cmd_ratio(const RunConfig&, const AtomParams& atom, const PhysicalConstants& k) {
  Output o;
  const ShiftRatio s = shift_ratio(atom, k);
  ojson r;
  r["delta_final_s"] = s.delta;
  r["lamb_reference_s"] = s.lamb;
  r["ratio"] = s.signed_value;
  r["ratio_magnitude"] = s.magnitude;
  o.doc["results"] = r;
  return o;
}

Output cmd_constants(const RunConfig&, const PhysicalConstants& k) {
  Output o;
  validate(k);
  ojson r = constants_json(k);
  r["alpha_from_e_eps0_hbar_c"] = k.e_charge * k.e_charge / (4.0 * kPi * k.eps0 * k.hbar * k.c);
  o.doc["results"] = r;
  return o;
}

Output cmd_split_check(const RunConfig& c, const AtomParams& atom) {
  if (c.points < 1) throw UsageError("--points must be positive");
  if (!(c.u_max >= c.u_min)) throw UsageError("--u-max must not be below --u-min");
  if (c.closed_form != "central" && c.closed_form != "displayed") {
    throw UsageError("--closed-form must be central or displayed");
  }
  const bool displayed = c.closed_form == "displayed";
  std::vector<double> grid(static_cast<std::size_t>(c.points));
  for (int i = 0; i < c.points; ++i) {
    grid[static_cast<std::size_t>(i)] =
        c.points == 1 ? c.u_min : c.u_min + (c.u_max - c.u_min) * i / (c.points - 1);
  }
  SplitTolerance tol;
  if (c.rel_tol) tol.rel = *c.rel_tol;
  const CausalDistribution1D d = as_causal_distribution(atom);

  struct Row {
    Complex closed, numeric, shifted;
  };
  const auto rows = parallel_map(grid.size(), c.threads, [&](std::size_t i) {
    const double u = grid[i];
    Row r;
    r.closed = displayed ? r2_tilde_closed(u, atom).total : r2_tilde_central_closed(u, atom).total;
    r.numeric = retarded_part_central(d, u, tol);
    r.shifted = retarded_part_shifted(d, u, c.shift_q, tol);
    return r;
  });

  Output o;
  o.has_table = true;
  o.table.columns = {"u", "re_closed", "im_closed", "re_numeric", "im_numeric", "im_rel_err"};
  ojson arr = ojson::array();
  double max_im = 0.0;
  std::vector<Complex> re_diff;
  std::vector<Complex> shift_diff;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Row& r = rows[i];
    const double denom = std::abs(r.closed.imag());
    const double err = denom > 0.0 ? std::abs(r.numeric.imag() - r.closed.imag()) / denom
                                   : std::abs(r.numeric.imag() - r.closed.imag());
    max_im = std::max(max_im, err);
    re_diff.emplace_back(r.numeric.real() - r.closed.real(), 0.0);
    shift_diff.push_back(r.shifted - r.numeric);
    o.table.rows.push_back({format_number(grid[i]), format_number(r.closed.real()),
                            format_number(r.closed.imag()), format_number(r.numeric.real()),
                            format_number(r.numeric.imag()), format_number(err)});
    ojson row;
    row["u"] = grid[i];
    row["re_closed"] = r.closed.real();
    row["im_closed"] = r.closed.imag();
    row["re_numeric"] = r.numeric.real();
    row["im_numeric"] = r.numeric.imag();
    row["im_rel_err"] = err;
    arr.push_back(row);
  }
  ojson res;
  res["closed_form"] = c.closed_form;
  res["points"] = c.points;
  res["max_im_rel_err"] = max_im;
  if (grid.size() >= 4) {
    const PolynomialResidual pr = fit_polynomial(grid, re_diff, 2);
    ojson f;
    f["coefficients"] = pr.coefficients;
    f["max_abs_deviation"] = pr.max_abs_deviation;
    res["real_difference_quadratic_fit"] = f;
    const PolynomialResidual ps = fit_polynomial(grid, shift_diff, 2);
    ojson s;
    s["q"] = c.shift_q;
    s["coefficients"] = ps.coefficients;
    s["imag_coefficients"] = ps.imag_coefficients;
    s["max_abs_deviation"] = ps.max_abs_deviation;
    res["shifted_minus_central_fit"] = s;
  }
  res["rows"] = arr;
  o.doc["results"] = res;
  return o;
}

Output cmd_series_check(const RunConfig& c, const AtomParams& atom) {
  const ResonanceWeight weight = parse_weight(c.weight);
  std::vector<NormalizationConstants> triples{config_C(c)};
  std::mt19937 rng(c.seed);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  for (int i = 0; i < c.random_triples; ++i) {
    const double a = dist(rng);
    const double b = dist(rng);
    const double e = dist(rng);
    triples.push_back({a, b, e});
  }
  const auto fits = parallel_map(triples.size(), c.threads, [&](std::size_t i) {
    return extract_series_numerically(atom, triples[i], weight);
  });

  Output o;
  o.has_table = true;
  o.table.columns = {"C0", "C1", "C2", "term", "stated", "direct", "fitted"};
  ojson arr = ojson::array();
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const auto& C = triples[i];
    const LineShiftSeries stated = lineshift_series(atom, C);
    const LineShiftSeries direct = lineshift_series_direct(atom, C);
    const LineShiftSeries& fit = fits[i];
    const std::pair<const char*, double LineShiftSeries::*> terms[] = {
        {"c0", &LineShiftSeries::c0}, {"c1", &LineShiftSeries::c1}, {"c2", &LineShiftSeries::c2},
        {"c3", &LineShiftSeries::c3}, {"c_log3", &LineShiftSeries::c_log3}};
    for (const auto& [name, mem] : terms) {
      o.table.rows.push_back({format_number(C.C0), format_number(C.C1), format_number(C.C2), name,
                              format_number(stated.*mem), format_number(direct.*mem),
                              format_number(fit.*mem)});
    }
    ojson row;
    row["C"] = ojson::array({C.C0, C.C1, C.C2});
    row["stated"] = series_json(stated);
    row["direct"] = series_json(direct);
    row["fitted"] = series_json(fit);
    row["fit_residual_norm"] = fit.residual_norm;
    arr.push_back(row);
  }
  ojson res;
  res["weight"] = c.weight;
  res["grid"] = {{"x_min", 1e-5}, {"x_max", 1e-2}, {"points", 40}};
  res["triples"] = arr;
  o.doc["results"] = res;
  return o;
}

Output cmd_wavepacket(const RunConfig& c, const PhysicalConstants& k) {
  if (c.plateau_periods.empty()) throw UsageError("--plateau-periods must not be empty");
  const AtomParams atom = synthetic_atom(c.wp_delta_u, 1.0, k);
  const double period = 2.0 * kPi / atom.omega_eg();
  const NormalizationConstants C = solve_normalization(atom).C;
  ZOptions zo;
  if (c.rel_tol) zo.rel_tol = *c.rel_tol;
  const auto cmp = parallel_map(c.plateau_periods.size(), c.threads, [&](std::size_t i) {
    const double t_g = c.plateau_periods[i] * period;
    const double ramp = c.ramp_fraction ? *c.ramp_fraction * t_g : c.ramp_periods * period;
    return z_numerical(atom, C, bump_g(t_g, ramp, k.c), zo);
  });

  Output o;
  o.has_table = true;
  o.table.columns = {"t_g", "rel_error", "regime_flag"};
  ojson arr = ojson::array();
  for (std::size_t i = 0; i < cmp.size(); ++i) {
    const double t_g = c.plateau_periods[i] * period;
    const ZComparison& z = cmp[i];
    const int flag = z.regime_ok ? 0 : 1;
    o.table.rows.push_back({format_number(t_g), format_number(z.rel_error), std::to_string(flag)});
    ojson row;
    row["t_g"] = t_g;
    row["plateau_periods"] = c.plateau_periods[i];
    row["rel_error"] = z.rel_error;
    row["regime_flag"] = flag;
    row["regime_metric"] = z.regime_metric;
    row["rel_error_effective"] = z.rel_error_effective;
    row["rel_error_wp"] = z.rel_error_wp;
    row["z_numerical"] = ojson::array({z.z_numerical.real(), z.z_numerical.imag()});
    row["z_closed"] = ojson::array({z.z_closed.real(), z.z_closed.imag()});
    arr.push_back(row);
  }
  ojson res;
  res["delta_u"] = c.wp_delta_u;
  res["optical_period_s"] = period;
  if (c.ramp_fraction) {
    res["ramp_fraction"] = *c.ramp_fraction;
  } else {
    res["ramp_periods"] = c.ramp_periods;
  }
  res["normalization"] = ojson::array({C.C0, C.C1, C.C2});
  res["rows"] = arr;
  o.doc["results"] = res;
  o.doc["atom_override"] = atom_to_json(atom);
  return o;
}

Output cmd_ww(const RunConfig& c, const AtomParams& atom) {
  const WwRun w = run_ww(c, atom);
  Output o;
  o.has_table = true;
  o.table.columns = {"t", "pop_e", "re_c_e", "im_c_e"};
  ojson trace = ojson::array();
  for (const auto& s : w.trace) {
    o.table.rows.push_back({format_number(s.t), format_number(std::norm(s.c_e)),
                            format_number(s.c_e.real()), format_number(s.c_e.imag())});
    trace.push_back(ojson::array({s.t, std::norm(s.c_e), s.c_e.real(), s.c_e.imag()}));
  }
  ojson summary;
  summary["rate"] = w.fit.rate;
  summary["shift"] = w.fit.shift;
  summary["residual"] = w.fit.fit_residual;
  summary["gamma_leading"] = w.gamma;
  summary["rate_over_gamma"] = w.fit.rate / w.gamma;
  ojson res;
  res["summary"] = summary;
  res["trace_columns"] = ojson::array({"t", "pop_e", "re_c_e", "im_c_e"});
  res["trace"] = trace;
  o.doc["results"] = res;
  o.doc["metadata_choices"] = ww_choices(c);
  return o;
}

void emit(const RunConfig& c, const Output& o, std::ostream& os) {
  if (c.format == Format::json) {
    os << dump_json(o.doc) << "\n";
  } else {
    write_csv(os, o.doc["metadata"], o.has_table ? o.table : scalar_table(o.doc["results"]));
  }
}

ojson finalize(const RunConfig& c, Output& o, const PhysicalConstants& k, const AtomParams& atom) {
  ojson doc;
  ojson meta = metadata(c.command, k, c.preset);
  if (o.doc.contains("metadata_choices")) meta["choices"] = o.doc["metadata_choices"];
  doc["metadata"] = meta;
  doc["atom"] = o.doc.contains("atom_override") ? o.doc["atom_override"] : atom_to_json(atom);
  doc["results"] = o.doc["results"];
  return doc;
}

void diagnostic(std::ostream& err, const std::string& kind, const std::string& message) {
  ojson d;
  d["error"] = kind;
  d["message"] = message;
  err << dump_json(d) << "\n";
}

}  // namespace

std::string format_number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump_json(const ojson& j) {
  std::ostringstream os;
  write_json(os, j, 0);
  return os.str();
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    const PhysicalConstants k = codata2018();
    validate(k);
    const AtomParams atom = load_preset(c.preset, k);
    Output o;
    if (c.command == "gamma") {
      o = cmd_gamma(c, atom);
    } else if (c.command == "shift") {
      o = cmd_shift(c, atom);
    } else if (c.command == "ratio") {
      o = cmd_ratio(c, atom, k);
    } else if (c.command == "constants") {
      o = cmd_constants(c, k);
    } else if (c.command == "split-check") {
      o = cmd_split_check(c, atom);
    } else if (c.command == "series-check") {
      o = cmd_series_check(c, atom);
    } else if (c.command == "wavepacket-check") {
      o = cmd_wavepacket(c, k);
    } else if (c.command == "ww-sim") {
      o = cmd_ww(c, atom);
    } else {
      throw UsageError("unknown command '" + c.command + "'");
    }
    Output final_out;
    final_out.doc = finalize(c, o, k, atom);
    final_out.table = o.table;
    final_out.has_table = o.has_table;

    if (!c.summary_path.empty() && c.command == "ww-sim") {
      ojson s;
      s["metadata"] = final_out.doc["metadata"];
      s["atom"] = final_out.doc["atom"];
      s["summary"] = final_out.doc["results"]["summary"];
      std::ofstream f(c.summary_path);
      if (!f) {
        diagnostic(err, "io", "cannot write summary to '" + c.summary_path + "'");
        return 1;
      }
      f << dump_json(s) << "\n";
    }
    if (c.out.empty()) {
      emit(c, final_out, out);
    } else {
      std::ofstream f(c.out);
      if (!f) {
        diagnostic(err, "io", "cannot write output to '" + c.out + "'");
        return 1;
      }
      emit(c, final_out, f);
      if (!f) {
        diagnostic(err, "io", "write to '" + c.out + "' failed");
        return 1;
      }
    }
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ComputationError& e) {
    diagnostic(err, e.kind(), e.what());
    return 1;
  } catch (const std::exception& e) {
    diagnostic(err, "internal", e.what());
    return 1;
  }
}

std::optional<int> parse(int argc, const char* const* argv, RunConfig& c, std::ostream& out,
                         std::ostream& err) {
  CLI::App app{"Causal splitting of the two-level-atom self-energy: tables and checks"};
  app.require_subcommand(1, 1);

  std::string format = "json";
  auto common = [&](CLI::App* sub) {
    sub->add_option("--preset", c.preset, "hydrogen-1s2p or path to a preset/report JSON");
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", c.out, "output path (default: standard output)");
    sub->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--rel-tol", c.rel_tol, "relative quadrature tolerance override");
  };

  auto* gamma = app.add_subcommand("gamma", "decay rate");
  common(gamma);
  gamma->add_option("--denominator-power", c.denominator_power, "5 (stated) or 4");
  gamma->add_flag("--ww-check", c.ww_check, "cross-check with the Weisskopf-Wigner oracle");

  auto* shift = app.add_subcommand("shift", "normalization constants and line shift");
  common(shift);
  shift->add_option("--weight", c.weight, "direct or over_u");

  auto* ratio = app.add_subcommand("ratio", "line shift over Lamb-shift reference");
  common(ratio);

  auto* split = app.add_subcommand("split-check", "numerical splitting vs closed form");
  common(split);
  split->add_option("--u-min", c.u_min);
  split->add_option("--u-max", c.u_max);
  split->add_option("--points", c.points);
  split->add_option("--closed-form", c.closed_form, "central or displayed");
  split->add_option("--shift-q", c.shift_q, "subtraction point of the shifted splitting");

  auto* series = app.add_subcommand("series-check", "fitted vs analytic series coefficients");
  common(series);
  series->add_option("--C0", c.C0);
  series->add_option("--C1", c.C1);
  series->add_option("--C2", c.C2);
  series->add_option("--weight", c.weight, "direct or over_u");
  series->add_option("--random", c.random_triples, "additional random C triples in [-10,10]^3");
  series->add_option("--seed", c.seed);

  auto* wave = app.add_subcommand("wavepacket-check", "wavepacket integral vs Z factor");
  common(wave);
  wave->add_option("--delta-u", c.wp_delta_u, "synthetic atom delta_u");
  wave->add_option("--ramp-periods", c.ramp_periods, "ramp width in optical periods");
  wave->add_option("--ramp-fraction", c.ramp_fraction, "ramp width as a fraction of t_g");
  wave->add_option("--plateau-periods", c.plateau_periods, "plateau lengths in optical periods")
      ->delimiter(',');

  auto* ww = app.add_subcommand("ww-sim", "Weisskopf-Wigner mode simulation");
  common(ww);
  ww->add_option("--n-modes", c.n_modes);
  ww->add_option("--bandwidth-gamma", c.bandwidth_gamma);
  ww->add_option("--detuning-lo-gamma", c.detuning_lo_gamma);
  ww->add_option("--detuning-hi-gamma", c.detuning_hi_gamma);
  ww->add_option("--t-end-gamma", c.t_end_gamma);
  ww->add_option("--dt-gamma", c.dt_gamma);
  ww->add_option("--stride", c.stride);
  ww->add_option("--summary", c.summary_path, "also write the JSON summary to this path");

  auto* consts = app.add_subcommand("constants", "constants registry");
  common(consts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  }
  c.command = app.get_subcommands().front()->get_name();
  c.format = format == "csv" ? Format::csv : Format::json;
  if (c.detuning_lo_gamma.has_value() != c.detuning_hi_gamma.has_value()) {
    err << "usage error: --detuning-lo-gamma and --detuning-hi-gamma go together\n";
    return 2;
  }
  return std::nullopt;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  if (auto code = parse(argc, argv, c, out, err)) return *code;
  return run(c, out, err);
}

}  // namespace causalshift::cli
