// Command-line front end: classification of relation files, surface
// inspection, impedance boundary conditions, the 1-D evolution testbed, and
// the bundled verification suites.  Structured output is JSON (complex
// scalars as [re, im]); time series are CSV.  Reports are byte-identical for
// identical configurations; wall-clock timing is only added on request.
//
// Exit codes: 0 success, 2 a checked invariant failed, 3 configuration error.

#include <CLI11.hpp>
#include <json.hpp>

#include "mdisp/impedance.hpp"
#include "mdisp/linrel.hpp"
#include "mdisp/maxwell1d.hpp"
#include "mdisp/suites.hpp"
#include "mdisp/tracespace.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

extern "C" void openblas_set_num_threads(int);

namespace {

using json = nlohmann::ordered_json;
using namespace mdisp;

constexpr int kSchemaVersion = 1;
constexpr int kExitInvariant = 2;
constexpr int kExitConfig = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const MatrixXcd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Complex parse_complex(const std::string& tok) {
  // accepts "1.5", "1.5+0.5i", "1.5-2i", "2i"
  std::string s = tok;
  if (s.empty()) throw ConfigError("empty complex literal");
  if (s.back() == 'i' || s.back() == 'j') {
    s.pop_back();
    // split at the last +/- that is not an exponent sign or leading sign
    for (int p = static_cast<int>(s.size()) - 1; p > 0; --p) {
      char c = s[p];
      if ((c == '+' || c == '-') && s[p - 1] != 'e' && s[p - 1] != 'E') {
        double re = std::stod(s.substr(0, p));
        std::string im = s.substr(p);
        if (im == "+") im = "1";
        if (im == "-") im = "-1";
        return {re, std::stod(im)};
      }
    }
    if (s.empty() || s == "+") return {0.0, 1.0};
    if (s == "-") return {0.0, -1.0};
    return {0.0, std::stod(s)};
  }
  return {std::stod(s), 0.0};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double keyed_value(const std::string& part, const std::string& key) {
  auto kv = split(part, '=');
  if (kv.size() != 2 || kv[0] != key)
    throw ConfigError("expected '" + key + "=<value>', got '" + part + "'");
  return std::stod(kv[1]);
}

impedance::ImpedanceSpec parse_impedance(const std::string& spec,
                                         const tracespace::SpectralSurface& surf) {
  auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw ConfigError("impedance spec needs the form kind:args");
  std::string kind = spec.substr(0, colon), args = spec.substr(colon + 1);
  try {
    if (kind == "const") return impedance::ImpedanceSpec::constant(parse_complex(args));
    if (kind == "f-dev") {
      std::vector<Complex> coeffs;
      for (const std::string& tok : split(args, ','))
        coeffs.push_back(parse_complex(tok));
      if (coeffs.empty()) throw ConfigError("f-dev needs coefficients");
      return impedance::ImpedanceSpec::diagonal(coeffs);
    }
    if (kind == "cap")
      return impedance::ImpedanceSpec::spherical_cap(keyed_value(args, "theta0"));
    if (kind == "random") {
      auto parts = split(args, ',');
      if (parts.size() != 2) throw ConfigError("random needs s=<v>,seed=<v>");
      double s = keyed_value(parts[0], "s");
      auto seed = static_cast<std::uint64_t>(keyed_value(parts[1], "seed"));
      return impedance::sample_random_impedance(surf, s, surf.n_scalar(), seed);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("bad impedance spec: ") + e.what());
  }
  throw ConfigError("unknown impedance kind '" + kind + "'");
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError("cannot parse " + path + ": " + e.what());
  }
}

VectorXcd json_to_cvector(const json& arr) {
  VectorXcd v(arr.size());
  for (size_t i = 0; i < arr.size(); ++i)
    v(i) = Complex(arr[i].at(0).get<double>(), arr[i].at(1).get<double>());
  return v;
}

MatrixXcd json_to_cmatrix(const json& rows) {
  if (rows.empty()) throw ConfigError("empty matrix");
  MatrixXcd m(rows.size(), rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != static_cast<size_t>(m.cols()))
      throw ConfigError("ragged matrix");
    for (size_t j = 0; j < rows[i].size(); ++j)
      m(i, j) = Complex(rows[i][j].at(0).get<double>(),
                        rows[i][j].at(1).get<double>());
  }
  return m;
}

// shared report plumbing ---------------------------------------------------

struct Emitter {
  std::string output_path;
  bool with_timing = false;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  void write(json& report) const {
    if (with_timing) {
      double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
      report["timing"] = {{"seconds", secs}};
    }
    emit(report.dump(2) + "\n");
  }

  void emit(const std::string& text) const {
    if (output_path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(output_path, std::ios::binary);
    if (!out) throw ConfigError("cannot write to " + output_path);
    out << text;
  }
};

json report_skeleton(const std::string& command, json config) {
  json r;
  r["schema_version"] = kSchemaVersion;
  r["command"] = command;
  r["config"] = std::move(config);
  return r;
}

// subcommand payloads ------------------------------------------------------

int run_relation_check(const std::string& file, int samples,
                       std::uint64_t seed, const Emitter& em) {
  json data = load_json_file(file);
  int dim = data.at("dim").get<int>();
  VectorXd weights = VectorXd::Ones(dim);
  if (data.contains("weights")) {
    if (data["weights"].size() != static_cast<size_t>(dim))
      throw ConfigError("weights length does not match dim");
    for (int i = 0; i < dim; ++i) weights(i) = data["weights"][i].get<double>();
  }
  const json& basis = data.at("basis");
  MatrixXcd raw(2 * dim, basis.size());
  for (size_t c = 0; c < basis.size(); ++c) {
    VectorXcd f = json_to_cvector(basis[c].at("f"));
    VectorXcd fp = json_to_cvector(basis[c].at("fp"));
    if (f.size() != dim || fp.size() != dim)
      throw ConfigError("basis vector length does not match dim");
    raw.col(c).head(dim) = f;
    raw.col(c).tail(dim) = fp;
  }

  linrel::PivotSpace sp(dim, weights);
  linrel::LinearRelation rel(sp, raw);
  linrel::RelationVerdict v = linrel::classify_relation(rel, samples, seed);

  json report = report_skeleton(
      "relation check",
      {{"file", file}, {"samples", samples}, {"seed", seed}});
  report["verdicts"] = {
      {"dim", v.dim},
      {"rank", v.rank},
      {"symmetric", v.is_symmetric},
      {"nonnegative", v.is_nonnegative},
      {"dissipative", v.is_dissipative},
      {"accretive", v.is_accretive},
      {"maximal_dissipative", v.is_maximal_dissipative},
      {"selfadjoint", v.is_selfadjoint},
      {"margin", v.margin},
      {"accretivity_margin", v.accretivity_margin},
      {"symmetry_defect", v.symmetry_defect},
      {"sampled_margin", v.sampled_margin},
  };
  report["tolerances"] = {{"dissipativity", 1e-10}};
  em.write(report);
  return v.is_dissipative ? 0 : kExitInvariant;
}

int run_surface_info(const std::string& model, int lmax, int quad_factor,
                     const Emitter& em) {
  auto kind = tracespace::surface_kind_from_string(model);
  auto surf = tracespace::build_surface(kind, lmax, quad_factor);
  json report = report_skeleton("surface info", {{"model", model},
                                                 {"lmax", lmax},
                                                 {"quad_factor", quad_factor}});
  json modes = json::array();
  for (const auto& hm : surf.hodge) {
    const char* family = hm.family == tracespace::Family::grad      ? "grad"
                         : hm.family == tracespace::Family::harmonic ? "harmonic"
                                                                     : "curl";
    modes.push_back({{"family", family},
                     {"label", hm.label},
                     {"lambda", hm.lambda},
                     {"component", hm.component}});
  }
  double gram = surf.gram_residual();
  report["verdicts"] = {
      {"n_scalar", surf.n_scalar()},
      {"n_hodge", surf.n_hodge()},
      {"betti_0", surf.b0},
      {"betti_1", surf.b1},
      {"quadrature_nodes", surf.quad.n_nodes()},
      {"gram_residual", gram},
      {"gram_ok", gram <= 1e-10},
  };
  report["modes"] = modes;
  report["tolerances"] = {{"gram_residual", 1e-10}};
  em.write(report);
  return gram <= 1e-10 ? 0 : kExitInvariant;
}

int run_impedance_classify(const std::string& model, int lmax, int quad_factor,
                           const std::string& zspec, bool with_matrices,
                           const Emitter& em) {
  auto kind = tracespace::surface_kind_from_string(model);
  auto surf = tracespace::build_surface(kind, lmax, quad_factor);
  impedance::ImpedanceSpec z = parse_impedance(zspec, surf);
  impedance::BoundaryOperator bop = impedance::boundary_operator(surf, z);
  MatrixXcd kz = impedance::cayley_kz(bop);
  impedance::BoundaryCondition cond = impedance::assemble_condition(surf, kz);
  impedance::ConditionVerdict v = impedance::classify_condition(cond);

  json report = report_skeleton("impedance classify",
                                {{"surface", model},
                                 {"lmax", lmax},
                                 {"quad_factor", quad_factor},
                                 {"z", zspec}});
  report["verdicts"] = {
      {"n_hodge", surf.n_hodge()},
      {"impedance_kind", z.description},
      {"accretivity_margin", bop.accretivity_margin},
      {"hermiticity_defect", bop.hermiticity_defect},
      {"contraction_norm", operator_norm(kz)},
      {"m_dissipative", v.m_dissipative},
      {"selfadjoint", v.selfadjoint},
      {"margin", v.margin},
      {"recovery_error", v.recovery_error},
  };
  if (with_matrices) report["matrices"] = {{"K", matrix_to_json(kz)}};
  report["tolerances"] = {{"dissipativity", 1e-10},
                          {"contraction_norm", 1e-10},
                          {"recovery", 1e-12}};
  em.write(report);
  return v.m_dissipative ? 0 : kExitInvariant;
}

int run_impedance_extend(const std::string& model, int lmax, int quad_factor,
                         const std::string& zspec, const std::string& method,
                         bool with_matrices, const Emitter& em) {
  if (method != "friedrichs" && method != "krein")
    throw ConfigError("method must be friedrichs or krein");
  auto kind = tracespace::surface_kind_from_string(model);
  auto surf = tracespace::build_surface(kind, lmax, quad_factor);
  impedance::ImpedanceSpec z = parse_impedance(zspec, surf);
  MatrixXcd g = impedance::mulz_matrix(surf, z);
  MatrixXcd dom = impedance::resolved_domain(g);
  impedance::FkPair pair = impedance::fk_extensions(surf, z, dom);
  const impedance::BoundaryCondition& chosen =
      method == "friedrichs" ? pair.f : pair.k;
  impedance::ConditionVerdict v = impedance::classify_condition(chosen);

  json report = report_skeleton("impedance extend",
                                {{"surface", model},
                                 {"lmax", lmax},
                                 {"quad_factor", quad_factor},
                                 {"z", zspec},
                                 {"method", method}});
  report["verdicts"] = {
      {"n_hodge", surf.n_hodge()},
      {"domain_dim", pair.domain_dim},
      {"extension_gap", pair.gap},
      {"ordering_margin", pair.ordering_margin},
      {"m_dissipative", v.m_dissipative},
      {"selfadjoint", v.selfadjoint},
      {"margin", v.margin},
  };
  if (with_matrices)
    report["matrices"] = {
        {"K", matrix_to_json(method == "friedrichs" ? pair.k_f : pair.k_k)}};
  report["tolerances"] = {{"ordering", 1e-10}, {"dissipativity", 1e-10}};
  em.write(report);
  bool ok = v.m_dissipative && pair.ordering_margin >= -1e-10;
  return ok ? 0 : kExitInvariant;
}

maxwell1d::DiscreteGenerator generator_from_flags(
    const std::string& kfile, Complex z0, Complex z1, int n) {
  maxwell1d::Maxwell1DModel model;
  try {
    if (!kfile.empty()) {
      json data = load_json_file(kfile);
      MatrixXcd k = json_to_cmatrix(data.at("k"));
      if (k.rows() != 2 || k.cols() != 2)
        throw ConfigError("contraction file must hold a 2x2 matrix");
      return maxwell1d::build_generator(model, k, n);
    }
    return maxwell1d::build_generator_impedance(model, z0, z1, n);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

int run_maxwell_evolve(Complex z0, Complex z1, const std::string& kfile, int n,
                       double dt, int steps, const std::string& pulse,
                       const Emitter& em) {
  auto colon = pulse.find(':');
  if (pulse.substr(0, colon) != "gaussian")
    throw ConfigError("only gaussian:x0=<v>,w=<v> pulses are supported");
  auto parts = split(pulse.substr(colon + 1), ',');
  if (parts.size() != 2) throw ConfigError("pulse needs x0=<v>,w=<v>");
  double x0 = keyed_value(parts[0], "x0");
  double w = keyed_value(parts[1], "w");

  maxwell1d::DiscreteGenerator gen = generator_from_flags(kfile, z0, z1, n);
  VectorXcd psi0 = maxwell1d::gaussian_pulse(gen, x0, w);
  std::vector<maxwell1d::EvolutionStep> trace;
  try {
    trace = maxwell1d::evolve_cn(gen, psi0, dt, steps);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  std::ostringstream csv;
  csv << "step,t,energy,boundary_flux\n";
  char line[128];
  for (const auto& s : trace) {
    std::snprintf(line, sizeof line, "%d,%.12g,%.16g,%.16g\n", s.step, s.t,
                  s.energy, s.boundary_flux);
    csv << line;
  }
  em.emit(csv.str());

  // the semigroup contract: energy never increases
  double e0 = trace.front().energy;
  for (size_t s = 1; s < trace.size(); ++s)
    if (trace[s].energy > trace[s - 1].energy + 1e-12 * e0) return kExitInvariant;
  return 0;
}

int run_maxwell_range(const std::string& kfile, Complex z0, Complex z1, int n,
                      int samples, std::uint64_t seed, const Emitter& em) {
  maxwell1d::DiscreteGenerator gen = generator_from_flags(kfile, z0, z1, n);
  auto grid = maxwell1d::default_lambda_grid(gen, samples, seed);
  maxwell1d::RangeReport rep = maxwell1d::numerical_range_and_resolvent(gen, grid);
  bool spectrum_ok = rep.max_im_eig <= 1e-10 * rep.norm_scale;
  bool resolvent_ok = rep.max_bound <= 1.0 + 1e-8;

  json report = report_skeleton("maxwell1d range",
                                {{"K", kfile},
                                 {"z0", complex_to_json(z0)},
                                 {"z1", complex_to_json(z1)},
                                 {"n", n},
                                 {"samples", samples},
                                 {"seed", seed}});
  report["verdicts"] = {
      {"operator_norm", rep.norm_scale},
      {"max_im_eigenvalue", rep.max_im_eig},
      {"max_im_lambda_resolvent", rep.max_bound},
      {"spectrum_ok", spectrum_ok},
      {"resolvent_ok", resolvent_ok},
  };
  report["tolerances"] = {{"spectrum", 1e-10}, {"resolvent", 1e-8}};
  em.write(report);
  return spectrum_ok && resolvent_ok ? 0 : kExitInvariant;
}

int run_maxwell_green(const std::string& name, const Emitter& em) {
  using namespace maxwell1d;
  Maxwell1DModel model;
  Field trig{
      [](double x) { return Complex(std::sin(2 * x), std::cos(x)); },
      [](double x) { return Complex(std::exp(x), 0.5 * x * x); },
      [](double x) { return Complex(2 * std::cos(2 * x), -std::sin(x)); },
      [](double x) { return Complex(std::exp(x), x); },
  };
  Field poly{
      [](double x) { return Complex(x * x * x - x, 2 * x); },
      [](double x) { return Complex(1 - x * x, x * x * x); },
      [](double x) { return Complex(3 * x * x - 1, 2); },
      [](double x) { return Complex(-2 * x, 3 * x * x); },
  };
  double residual;
  if (name == "trig1")
    residual = green_identity_residual(model, trig, trig);
  else if (name == "poly1")
    residual = green_identity_residual(model, poly, poly);
  else if (name == "mixed")
    residual = green_identity_residual(model, trig, poly);
  else
    throw ConfigError("unknown case '" + name + "' (trig1, poly1, mixed)");

  json report = report_skeleton("maxwell1d green", {{"case", name}});
  report["verdicts"] = {{"residual", residual}, {"ok", residual <= 1e-10}};
  report["tolerances"] = {{"residual", 1e-10}};
  em.write(report);
  return residual <= 1e-10 ? 0 : kExitInvariant;
}

int run_suite_cmd(const std::string& name, const Emitter& em) {
  std::vector<suites::CriterionResult> results;
  try {
    results = suites::run_suite(name);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  json report = report_skeleton("suite", {{"name", name}});
  json list = json::array();
  bool all_pass = true;
  for (const auto& r : results) {
    bool ok = r.pass || r.informational;
    all_pass = all_pass && ok;
    list.push_back({{"id", r.id},
                    {"name", r.name},
                    {"pass", r.pass},
                    {"informational", r.informational},
                    {"measured", r.measured},
                    {"tolerance", r.tolerance},
                    {"detail", r.detail}});
  }
  report["verdicts"] = {{"all_pass", all_pass}};
  report["criteria"] = list;
  em.write(report);
  return all_pass ? 0 : kExitInvariant;
}

// --config run.json mirrors the flags of one subcommand 1:1:
//   {"command": "impedance classify", "options": {"surface": "sphere", ...}}
std::vector<std::string> argv_from_config(const std::string& path) {
  json data = load_json_file(path);
  std::vector<std::string> args;
  std::istringstream cmd(data.at("command").get<std::string>());
  std::string word;
  while (cmd >> word) args.push_back(word);
  if (args.empty()) throw ConfigError("config: empty command");
  if (data.contains("options")) {
    for (auto& [key, value] : data["options"].items()) {
      args.push_back("--" + key);
      if (value.is_boolean()) {
        if (!value.get<bool>()) args.pop_back();
      } else if (value.is_string()) {
        args.push_back(value.get<std::string>());
      } else {
        args.push_back(value.dump());
      }
    }
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("MDISP_THREADS")) {
    int t = std::atoi(threads);
    if (t > 0) openblas_set_num_threads(t);
  } else {
    openblas_set_num_threads(1);  // deterministic reductions by default
  }

  CLI::App app{"boundary-condition classification toolkit"};
  app.require_subcommand(0, 1);

  std::string config_path, output_path;
  bool with_timing = false;
  app.add_option("--config", config_path,
                 "JSON file holding {command, options} in place of flags");
  app.add_option("--output", output_path, "write the report here instead of stdout");
  app.add_flag("--timing", with_timing, "append wall-clock timing to the report");

  // relation ---------------------------------------------------------------
  auto* relation = app.add_subcommand("relation", "linear relation utilities");
  auto* rel_check = relation->add_subcommand("check", "classify a relation file");
  std::string rel_file;
  int rel_samples = 0;
  std::uint64_t rel_seed = 12345;
  rel_check->add_option("--file", rel_file, "relation JSON file")->required();
  rel_check->add_option("--samples", rel_samples, "random cone samples");
  rel_check->add_option("--seed", rel_seed, "sampling seed");

  // surface ----------------------------------------------------------------
  auto* surface = app.add_subcommand("surface", "model surface utilities");
  auto* surf_info = surface->add_subcommand("info", "build a surface and report it");
  std::string surf_model = "sphere";
  int surf_lmax = 4, surf_qf = 3;
  surf_info->add_option("--model", surf_model,
                        "sphere | flat_torus | two_spheres | two_tori");
  surf_info->add_option("--lmax", surf_lmax, "spectral truncation");
  surf_info->add_option("--quad-factor", surf_qf, "quadrature oversampling");

  // impedance --------------------------------------------------------------
  auto* imp = app.add_subcommand("impedance", "impedance boundary conditions");
  std::string imp_model = "sphere", imp_z = "const:1.0", imp_method = "friedrichs";
  int imp_lmax = 4, imp_qf = 3;
  bool imp_matrices = false;
  auto* imp_classify = imp->add_subcommand("classify", "assemble and classify");
  auto* imp_extend = imp->add_subcommand("extend", "extreme selfadjoint extension");
  for (auto* cmd : {imp_classify, imp_extend}) {
    cmd->add_option("--surface", imp_model,
                    "sphere | flat_torus | two_spheres | two_tori");
    cmd->add_option("--lmax", imp_lmax, "spectral truncation");
    cmd->add_option("--quad-factor", imp_qf, "quadrature oversampling");
    cmd->add_option("--z", imp_z,
                    "const:<a> | f-dev:<c0,c1,...> | cap:theta0=<t> | "
                    "random:s=<s>,seed=<n>");
    cmd->add_flag("--matrices", imp_matrices, "embed the contraction matrix");
  }
  imp_extend->add_option("--method", imp_method, "friedrichs | krein");

  // maxwell1d --------------------------------------------------------------
  auto* mx = app.add_subcommand("maxwell1d", "1-D evolution testbed");
  std::string mx_kfile, mx_pulse = "gaussian:x0=0.5,w=0.05", mx_case = "trig1";
  std::string mx_z0 = "1.0", mx_z1 = "1.0";
  int mx_n = 400, mx_steps = 2000, mx_samples = 200;
  double mx_dt = 1e-3;
  std::uint64_t mx_seed = 2718;
  auto* mx_evolve = mx->add_subcommand("evolve", "Crank-Nicolson time series (CSV)");
  mx_evolve->add_option("--z0", mx_z0, "impedance at x=0 (complex)");
  mx_evolve->add_option("--z1", mx_z1, "impedance at x=1 (complex)");
  mx_evolve->add_option("--K", mx_kfile, "JSON file with a 2x2 contraction");
  mx_evolve->add_option("--n", mx_n, "grid cells");
  mx_evolve->add_option("--dt", mx_dt, "time step");
  mx_evolve->add_option("--steps", mx_steps, "number of steps");
  mx_evolve->add_option("--pulse", mx_pulse, "gaussian:x0=<v>,w=<v>");
  auto* mx_range = mx->add_subcommand("range", "spectrum and resolvent check");
  mx_range->add_option("--K", mx_kfile, "JSON file with a 2x2 contraction");
  mx_range->add_option("--z0", mx_z0, "impedance at x=0 (complex)");
  mx_range->add_option("--z1", mx_z1, "impedance at x=1 (complex)");
  mx_range->add_option("--n", mx_n, "grid cells");
  mx_range->add_option("--samples", mx_samples, "upper-half-plane grid size");
  mx_range->add_option("--seed", mx_seed, "grid seed");
  auto* mx_green = mx->add_subcommand("green", "continuum pairing identity");
  mx_green->add_option("--case", mx_case, "trig1 | poly1 | mixed");

  // suite ------------------------------------------------------------------
  auto* suite = app.add_subcommand("suite", "run a verification suite");
  std::string suite_name = "all";
  suite->add_option("name", suite_name, "duality | cayley | fk | maxwell1d | all");

  std::vector<std::string> raw_args(argv + 1, argv + argc);
  try {
    app.parse(argc, argv);
    if (!config_path.empty()) {
      if (app.get_subcommands().size() > 0)
        throw ConfigError("--config replaces the subcommand; give one or the other");
      std::vector<std::string> args = argv_from_config(config_path);
      // CLI11 consumes arguments in reverse order
      std::vector<std::string> rev(args.rbegin(), args.rend());
      app.clear();
      app.parse(rev);
    }

    Emitter em{output_path, with_timing, std::chrono::steady_clock::now()};
    if (rel_check->parsed())
      return run_relation_check(rel_file, rel_samples, rel_seed, em);
    if (surf_info->parsed())
      return run_surface_info(surf_model, surf_lmax, surf_qf, em);
    if (imp_classify->parsed())
      return run_impedance_classify(imp_model, imp_lmax, imp_qf, imp_z,
                                    imp_matrices, em);
    if (imp_extend->parsed())
      return run_impedance_extend(imp_model, imp_lmax, imp_qf, imp_z,
                                  imp_method, imp_matrices, em);
    if (mx_evolve->parsed())
      return run_maxwell_evolve(parse_complex(mx_z0), parse_complex(mx_z1),
                                mx_kfile, mx_n, mx_dt, mx_steps, mx_pulse, em);
    if (mx_range->parsed())
      return run_maxwell_range(mx_kfile, parse_complex(mx_z0),
                               parse_complex(mx_z1), mx_n, mx_samples, mx_seed,
                               em);
    if (mx_green->parsed()) return run_maxwell_green(mx_case, em);
    if (suite->parsed()) return run_suite_cmd(suite_name, em);
    std::cerr << app.help() << std::flush;
    return kExitConfig;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "invariant failure: " << e.what() << "\n";
    return kExitInvariant;
  }
}
