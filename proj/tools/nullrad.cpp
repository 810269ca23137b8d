#include "nullrad/io.hpp"
#include "nullrad/linrad.hpp"
#include "nullrad/radfield.hpp"
#include "nullrad/scatter.hpp"
#include "nullrad/slwave.hpp"
#include "nullrad/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <variant>

using namespace nullrad;
namespace fs = std::filesystem;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Value = std::variant<double, long long, bool, std::string>;

// Every accepted key with its default; the default fixes the type.
std::map<std::string, Value> defaults() {
  return {
      {"nonlinearity", std::string("quintic")},
      {"coupling", 1.0},
      {"datum", std::string("poly")}, // poly | gauss | file
      {"datum_field", std::string("psi")}, // psi | phi | both
      {"datum_k", 3LL},
      {"datum_R", 1.0},
      {"datum_amp", 1.0},
      {"datum_sigma", 0.5},
      {"datum_file", std::string()},
      {"input", std::string()}, // radiation profile for invert / scatter
      {"dr", 1.0 / 256.0},
      {"T", 8.0},
      {"T_c", 8.0},
      {"route", std::string("tr")}, // tr | goursat | duhamel | all
      {"buffer", 3.0},
      {"save_field", false},
      {"delta", 0.0},
      {"T0_max", 4.0},
      {"fp_tol", 0.0},
      {"max_outer", 40LL},
      {"inner_duhamel_iters", 2LL},
      {"T_inv", 0.0},
      {"T_A", 8.0},
      {"mean_tol", 1e-5},
      {"seed_evolution", true},
      {"harness", std::string("support_forward")},
      {"resolutions", std::string("128,256,512")},
      {"amplitudes", std::string("0.05,0.2,1.0")},
      {"rel_tol", 1e-8},
  };
}

class RunConfig {
public:
  RunConfig() : v_(defaults()) {}

  void set(const std::string &key, const std::string &text) {
    auto it = v_.find(key);
    if (it == v_.end())
      throw ConfigError("unknown key: " + key);
    std::visit(
        [&](auto &slot) {
          using T = std::decay_t<decltype(slot)>;
          try {
            if constexpr (std::is_same_v<T, double>) {
              std::size_t n = 0;
              slot = std::stod(text, &n);
              if (n != text.size())
                throw std::invalid_argument(text);
            } else if constexpr (std::is_same_v<T, long long>) {
              std::size_t n = 0;
              slot = std::stoll(text, &n);
              if (n != text.size())
                throw std::invalid_argument(text);
            } else if constexpr (std::is_same_v<T, bool>) {
              if (text == "true" || text == "1")
                slot = true;
              else if (text == "false" || text == "0")
                slot = false;
              else
                throw std::invalid_argument(text);
            } else {
              slot = text;
            }
          } catch (const std::logic_error &) {
            throw ConfigError("bad value for " + key + ": " + text);
          }
        },
        it->second);
  }

  void load(const std::string &path) {
    const io::Json j = io::read_json(path);
    if (!j.is_object())
      throw ConfigError("config file must hold an object");
    for (const auto &[k, v] : j.items())
      set(k, v.is_string() ? v.get<std::string>() : v.dump());
  }

  double num(const std::string &k) const {
    const Value &v = v_.at(k);
    return std::holds_alternative<double>(v) ? std::get<double>(v)
                                             : static_cast<double>(std::get<long long>(v));
  }
  long long integer(const std::string &k) const { return std::get<long long>(v_.at(k)); }
  bool flag(const std::string &k) const { return std::get<bool>(v_.at(k)); }
  const std::string &str(const std::string &k) const {
    return std::get<std::string>(v_.at(k));
  }

  io::Json echo() const {
    io::Json j;
    for (const auto &[k, v] : v_)
      std::visit([&](const auto &x) { j[k] = x; }, v);
    return j;
  }

  void validate() const {
    for (const char *k : {"dr", "T", "T_c", "buffer", "datum_R", "T_A", "rel_tol"})
      if (!(num(k) > 0.0))
        throw ConfigError(std::string(k) + " must be positive");
    for (const char *k : {"delta", "fp_tol", "T_inv", "T0_max", "coupling"})
      if (num(k) < 0.0)
        throw ConfigError(std::string(k) + " must be >= 0");
    if (integer("max_outer") < 1 || integer("inner_duhamel_iters") < 0)
      throw ConfigError("iteration counts out of range");
  }

private:
  std::map<std::string, Value> v_;
};

std::vector<double> parse_list(const std::string &s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(std::stod(item));
  return out;
}

Nonlinearity make_nl(const RunConfig &c) {
  const std::string &n = c.str("nonlinearity");
  if (n == "quintic")
    return Nonlinearity::quintic(c.num("coupling"));
  if (n == "linear")
    return Nonlinearity::linear();
  throw ConfigError("unknown nonlinearity: " + n);
}

BumpSpec make_spec(const RunConfig &c) {
  BumpSpec s;
  const std::string &d = c.str("datum");
  if (d == "poly")
    s.kind = BumpSpec::Kind::poly;
  else if (d == "gauss")
    s.kind = BumpSpec::Kind::gauss;
  else
    throw ConfigError("unknown datum: " + d);
  s.k = static_cast<int>(c.integer("datum_k"));
  s.R = c.num("datum_R");
  s.amp = c.num("datum_amp");
  s.sigma = c.num("datum_sigma");
  return s;
}

CauchyData make_datum(const RunConfig &c) {
  if (c.str("datum") == "file") {
    if (c.str("datum_file").empty())
      throw ConfigError("datum = file needs datum_file");
    return io::load_data(c.str("datum_file"));
  }
  const BumpSpec s = make_spec(c);
  const double h = c.num("dr");
  const RadialProfile p = RadialProfile::sample(s, h, s.R + 2.0 * h);
  const RadialProfile z = RadialProfile::zeros(h, p.size());
  const std::string &f = c.str("datum_field");
  if (f == "psi")
    return CauchyData(z, p, s.R);
  if (f == "phi")
    return CauchyData(p, z, s.R);
  if (f == "both")
    return CauchyData(p, p, s.R);
  throw ConfigError("unknown datum_field: " + f);
}

ScatterConfig make_scatter(const RunConfig &c) {
  ScatterConfig s;
  s.delta = c.num("delta");
  s.T0_max = c.num("T0_max");
  s.fp_tol = c.num("fp_tol");
  s.max_outer = static_cast<int>(c.integer("max_outer"));
  s.inner_duhamel_iters = static_cast<int>(c.integer("inner_duhamel_iters"));
  s.buffer = c.num("buffer");
  s.T = c.num("T_inv");
  s.T_A = c.num("T_A");
  s.mean_tol = c.num("mean_tol");
  s.seed = c.flag("seed_evolution");
  return s;
}

ExtractionOptions make_extraction(const RunConfig &c) {
  ExtractionOptions o;
  o.buffer = c.num("buffer");
  return o;
}

std::string out_path(const std::string &dir, const std::string &name) {
  return (fs::path(dir) / name).string();
}

io::Json energy_json(const EnergyReport &e) {
  return {{"kinetic", e.kinetic}, {"gradient", e.gradient},
          {"potential", e.potential}, {"total", e.total}};
}

int cmd_energy(const RunConfig &c, const std::string &out) {
  const Nonlinearity nl = make_nl(c);
  const CauchyData d = make_datum(c);
  const EnergyReport e = energy(d, nl);
  std::printf("%-12s %.17g\n%-12s %.17g\n%-12s %.17g\n%-12s %.17g\n", "kinetic",
              e.kinetic, "gradient", e.gradient, "potential", e.potential,
              "total", e.total);
  io::Json j{{"config", c.echo()}, {"energy", energy_json(e)},
             {"linear_energy_norm", linear_energy_norm(d)}};
  io::write_json(out_path(out, "energy.json"), j);
  return 0;
}

int cmd_solve(const RunConfig &c, const std::string &out) {
  const Nonlinearity nl = make_nl(c);
  const CauchyData d = make_datum(c);
  const double T = c.num("T");
  io::Json j{{"config", c.echo()}};
  const std::string &route = c.str("route");
  if (route == "tr" || route == "all") {
    const SolutionField sol = solve_tr(prepare_domain(d, T), nl, T);
    const DiagnosticSeries ds = diagnostics(sol, nl);
    io::Series s;
    s.names = {"t", "total", "kinetic", "gradient", "potential", "l6",
               "l5l10_partial", "decay_constant"};
    s.columns.assign(s.names.size(), {});
    for (std::size_t n = 0; n < ds.t.size(); ++n) {
      const EnergyReport &e = ds.slices[n];
      const double row[] = {ds.t[n], e.total, e.kinetic, e.gradient,
                            e.potential, e.l6_norm, e.l5l10_partial,
                            e.decay_constant};
      for (std::size_t k = 0; k < s.names.size(); ++k)
        s.columns[k].push_back(row[k]);
    }
    io::write_series(out_path(out, "diagnostics.csv"), s, "solve");
    double drift = 0.0;
    const double E0 = ds.slices.front().total;
    for (const auto &e : ds.slices)
      drift = std::max(drift, std::abs(e.total - E0));
    j["tr"] = {{"N", sol.N}, {"J", sol.J},
               {"energy_drift_rel", E0 > 0.0 ? drift / E0 : drift}};
    std::printf("t = %g: energy %.12g, relative drift %.3e\n", sol.T(),
                ds.slices.back().total, E0 > 0.0 ? drift / E0 : drift);
    if (c.flag("save_field"))
      io::save_field(out_path(out, "field"), sol);
  }
  if (route == "goursat" || route == "all") {
    const CharGrid g = solve_goursat(d, nl, c.num("T_c"), c.num("dr"));
    const FluxCheck f = char_energy_flux_check(g, nl);
    j["goursat"] = {{"M", g.M}, {"iterations_max", g.iterations_max},
                    {"flux_residual", f.residual}, {"flux_diagonal", f.diagonal}};
    std::printf("Goursat M = %zu, flux residual %.3e\n", g.M, f.residual);
  }
  if (!j.contains("tr") && !j.contains("goursat"))
    throw ConfigError("route must be tr, goursat or all for solve");
  io::write_json(out_path(out, "solve.json"), j);
  return 0;
}

int cmd_radiate(const RunConfig &c, const std::string &out) {
  const Nonlinearity nl = make_nl(c);
  const CauchyData d = make_datum(c);
  const double T = c.num("T"), h = c.num("dr");
  const std::string &route = c.str("route");
  const bool all = route == "all";
  if (!all && route != "tr" && route != "goursat" && route != "duhamel")
    throw ConfigError("unknown route: " + route);
  io::Json j{{"config", c.echo()}};
  std::vector<std::pair<std::string, RadiationProfile>> fields;
  if (all || route == "tr" || route == "duhamel") {
    const SolutionField sol = solve_tr(prepare_domain(d, T), nl, T);
    if (all || route == "tr") {
      const ExtractedRadiation ex = forward_radiation_tr(sol, make_extraction(c));
      j["tr"] = {{"flagged", ex.flagged}, {"max_correction", ex.max_correction},
                 {"max_crosscheck", ex.max_crosscheck}};
      fields.emplace_back("F_tr", ex.F);
    }
    if (all || route == "duhamel") {
      const DuhamelRadiation du =
          forward_radiation_duhamel(d, sol, nl, make_extraction(c));
      j["duhamel"] = {{"tail_bound", du.tail_bound},
                      {"truncation_warning", du.truncation_warning}};
      fields.emplace_back("F_duhamel", du.F);
    }
  }
  if (all || route == "goursat") {
    const CharGrid g = solve_goursat(d, nl, c.num("T_c"), h);
    fields.emplace_back("F_goursat", forward_radiation_goursat(g, h));
  }
  // common window
  double lo = -1e300, hi = 1e300;
  for (const auto &[n, F] : fields) {
    lo = std::max(lo, F.s_min());
    hi = std::min(hi, F.s_max());
  }
  io::Series s;
  s.names = {"s"};
  std::vector<RadiationProfile> cut;
  for (const auto &[n, F] : fields) {
    s.names.push_back(n);
    cut.push_back(restrict_window(F, lo, hi));
  }
  s.meta = {{"s_min", io::exact(cut.front().s_min())}, {"ds", io::exact(h)}};
  std::vector<double> sv(cut.front().size());
  for (std::size_t k = 0; k < sv.size(); ++k)
    sv[k] = cut.front().s(k);
  s.columns.push_back(sv);
  for (const auto &F : cut)
    s.columns.emplace_back(F.values().begin(), F.values().end());
  io::write_series(out_path(out, "radiation.csv"), s, "radiate");
  const double E = energy(d, nl).total;
  for (const auto &[n, F] : fields) {
    const double nF = l2_norm_cylinder(F);
    j["norms"][n] = nF;
    if (n != "F_goursat")
      j["energy_identity_rel"][n] = E > 0.0 ? (nF * nF - E) / E : nF * nF;
  }
  j["energy"] = E;
  for (std::size_t a = 0; a < fields.size(); ++a)
    for (std::size_t b = a + 1; b < fields.size(); ++b)
      j["gaps"][fields[a].first + "_vs_" + fields[b].first] =
          l2_distance(fields[a].second, fields[b].second);
  io::write_json(out_path(out, "radiate.json"), j);
  std::printf("wrote %zu samples on s in [%g, %g]\n", sv.size(), lo, hi);
  return 0;
}

RadiationProfile input_or_datum_field(const RunConfig &c, const Nonlinearity &nl,
                                      CauchyData *datum) {
  if (!c.str("input").empty())
    return io::load_profile(c.str("input"));
  const CauchyData d = make_datum(c);
  if (datum)
    *datum = d;
  const ScatterConfig sc = make_scatter(c);
  const double h = d.dr();
  const double T = sc.T > 0.0 ? sc.T : 8.0;
  const auto S = static_cast<long long>(std::floor((T - sc.buffer) / h + 1e-9));
  return plus_map(d, nl, T, sc.buffer, -S, S);
}

int cmd_invert(const RunConfig &c, const std::string &out) {
  const Nonlinearity nl = make_nl(c);
  CauchyData datum;
  const RadiationProfile F = input_or_datum_field(c, nl, &datum);
  const InverseResult r = inverse_radiation(F, nl, make_scatter(c));
  io::save_data(out_path(out, "data.csv"), r.data);
  io::Json j{{"config", c.echo()},
             {"residual", r.residual},
             {"mean_defect", r.mean_defect},
             {"history", r.history},
             {"outer_iterations", r.outer_iterations},
             {"T0", r.T0},
             {"T0_capped", r.T0_capped},
             {"seed_used", r.seed_used},
             {"norm_F", l2_norm_cylinder(F)},
             {"support_radius_1e-8", r.data.measured_support(1e-8)}};
  if (c.str("input").empty() && datum.size() > 0)
    j["energy_error_vs_datum"] =
        linear_energy_distance(r.data, datum) /
        std::max(linear_energy_norm(datum), 1e-300);
  io::write_json(out_path(out, "invert.json"), j);
  std::printf("residual %.3e after %d outer iterations\n", r.residual,
              r.outer_iterations);
  return 0;
}

int cmd_scatter(const RunConfig &c, const std::string &out) {
  const Nonlinearity nl = make_nl(c);
  const ScatterConfig sc = make_scatter(c);
  RadiationProfile F;
  CauchyData d;
  if (!c.str("input").empty()) {
    F = io::load_profile(c.str("input"));
  } else {
    d = make_datum(c);
    F = linear_radiation_minus(d);
  }
  const ScatteringResult A = scattering_A(F, nl, sc);
  const ScatteringResult B = scattering_A_formula(F, nl, sc);
  io::Series s;
  s.names = {"s", "AF", "AF_formula"};
  s.meta = {{"s_min", io::exact(A.AF.s_min())}, {"ds", io::exact(F.ds())}};
  const RadiationProfile b = restrict_window(B.AF, A.AF.s_min(), A.AF.s_max());
  std::vector<double> sv(A.AF.size());
  for (std::size_t k = 0; k < sv.size(); ++k)
    sv[k] = A.AF.s(k);
  s.columns = {sv, {A.AF.values().begin(), A.AF.values().end()},
               {b.values().begin(), b.values().end()}};
  io::write_series(out_path(out, "scatter.csv"), s, "scatter");
  const double nA = l2_norm_cylinder(A.AF);
  io::Json j{{"config", c.echo()},
             {"norm_F", l2_norm_cylinder(F)},
             {"norm_AF", nA},
             {"unitarity_defect", A.unitarity_defect},
             {"formula_difference_rel", nA > 0.0 ? l2_distance(A.AF, B.AF) / nA : 0.0},
             {"formula_tail_bound", B.tail_bound},
             {"formula_truncation_warning", B.truncation_warning}};
  if (d.size() > 0) {
    const ScatteringSResult S = scattering_S(d, nl, sc);
    io::save_data(out_path(out, "S_data.csv"), S.data);
    j["S_energy_norm_defect"] = S.energy_norm_defect;
  }
  io::write_json(out_path(out, "scatter.json"), j);
  std::printf("unitarity defect %.3e\n", A.unitarity_defect);
  return 0;
}

int cmd_verify(const RunConfig &c, const std::string &out) {
  const Nonlinearity nl = make_nl(c);
  const std::string &h = c.str("harness");
  const std::vector<BumpSpec> family =
      test_family(harness_seed(), parse_list(c.str("amplitudes")));
  Report rep;
  if (h == "support_forward") {
    ForwardSupportOptions o;
    o.dr = c.num("dr");
    o.T = c.num("T");
    o.T_c = c.num("T_c");
    rep = support_forward_check(family, nl, o);
  } else if (h == "support_inverse") {
    InverseSupportOptions o;
    o.dr = c.num("dr");
    o.rel_tol = c.num("rel_tol");
    o.cfg = make_scatter(c);
    rep = support_inverse_check(family, nl, o);
  } else if (h == "roundtrip") {
    rep = support_roundtrip_check(make_datum(c), nl, make_scatter(c), c.num("rel_tol"));
  } else if (h == "continuity") {
    const CauchyData d = make_datum(c);
    BumpSpec p{BumpSpec::Kind::gauss, 3, 1.0, 1.0, 0.4};
    const RadialProfile pp = RadialProfile::sample(p, d.dr(), 1.0 + 2.0 * d.dr());
    const CauchyData pert(RadialProfile::zeros(d.dr(), pp.size()), pp, 1.0);
    ContinuityOptions o;
    o.T = c.num("T");
    rep = continuity_probe(d, pert, nl, o);
  } else if (h == "convergence") {
    const RunConfig base = c;
    auto gen = [&](double dr) {
      RunConfig cc = base;
      cc.set("dr", io::exact(dr));
      return make_datum(cc);
    };
    std::vector<double> res;
    for (double n : parse_list(c.str("resolutions")))
      res.push_back(1.0 / n);
    ConvergenceOptions o;
    o.T = c.num("T");
    o.T_c = c.num("T_c");
    rep = convergence_study(gen, nl, res, o);
  } else {
    throw ConfigError("unknown harness: " + h);
  }
  io::Json j = rep.to_json();
  j["config"] = c.echo();
  j["seed"] = harness_seed();
  io::write_json(out_path(out, rep.name + ".json"), j);
  std::printf("%s: %s\n", rep.name.c_str(), rep.passed ? "passed" : "FAILED");
  return rep.passed ? 0 : 1;
}

int cmd_selftest(const RunConfig &c, const std::string &out) {
  const Report rep = selftest();
  io::Json j = rep.to_json();
  j["config"] = c.echo();
  io::write_json(out_path(out, "selftest.json"), j);
  for (const auto &it : rep.body["items"])
    std::printf("%-32s %s\n", it["name"].get<std::string>().c_str(),
                it["passed"].get<bool>() ? "ok" : "FAILED");
  return rep.passed ? 0 : 1;
}

int exit_code(ErrorKind k) {
  switch (k) {
  case ErrorKind::divergence:
  case ErrorKind::stiffness:
  case ErrorKind::blowup_detected:
    return 3;
  default:
    return 2;
  }
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"nullrad: radiation fields and scattering for the radial "
               "semilinear wave equation"};
  app.require_subcommand(1);
  std::string config_path, out_dir = ".";
  std::vector<std::string> sets;
  using Handler = int (*)(const RunConfig &, const std::string &);
  const std::pair<const char *, Handler> commands[] = {
      {"energy", cmd_energy},   {"solve", cmd_solve},   {"radiate", cmd_radiate},
      {"invert", cmd_invert},   {"scatter", cmd_scatter}, {"verify", cmd_verify},
      {"selftest", cmd_selftest}};
  std::map<CLI::App *, Handler> handlers;
  for (const auto &[name, fn] : commands) {
    CLI::App *sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--set", sets, "key=value override")->take_all();
    sub->add_option("--out", out_dir, "output directory");
    handlers[sub] = fn;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    RunConfig cfg;
    if (!config_path.empty())
      cfg.load(config_path);
    for (const std::string &kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw ConfigError("--set expects key=value, got " + kv);
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.validate();
    fs::create_directories(out_dir);
    for (const auto &[sub, fn] : handlers)
      if (sub->parsed())
        return fn(cfg, out_dir);
  } catch (const ConfigError &e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const Error &e) {
    std::cerr << to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
