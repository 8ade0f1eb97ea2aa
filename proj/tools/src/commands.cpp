#include "phasesim/commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include <phasespace/duality.hpp>
#include <phasespace/dynamics.hpp>
#include <phasespace/energy.hpp>
#include <phasespace/error.hpp>
#include <phasespace/states.hpp>

#include "phasesim/config.hpp"
#include "phasesim/eigen_dir.hpp"
#include "phasesim/psfield.hpp"

namespace phasesim {

using namespace phasespace;
namespace fs = std::filesystem;

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string num(double v) { return fmt("%.17g", v); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

// One complex amplitude per q sample: "re,im" or "re im" per line.
Wavefunction read_wavefunction(const fs::path& path, const PhaseGrid& grid, double hbar) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  Wavefunction psi;
  psi.axis = q_axis(grid);
  psi.hbar = hbar;
  std::string line;
  while (std::getline(in, line)) {
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream row(line);
    double re = 0.0;
    double im = 0.0;
    if (!(row >> re)) continue;
    if (!(row >> im)) throw IoError(path.string() + ": each line needs a real and an imaginary part");
    psi.values.emplace_back(re, im);
  }
  if (static_cast<int>(psi.values.size()) != grid.nq()) {
    throw ValidationError(path.string() + ": expected " + std::to_string(grid.nq()) + " amplitudes, found " +
                          std::to_string(psi.values.size()));
  }
  return psi;
}

struct CheckLine {
  std::string name;
  double value;
  std::optional<double> tolerance;  // nullopt: reported only
};

int cmd_transform(const fs::path& config, std::optional<int> ho_n, const std::string& psi_file, const fs::path& out_path,
                  std::ostream& out) {
  const SimulationConfig cfg = load_simulation_config(config);
  PhaseField w(cfg.grid);
  if (ho_n) {
    if (*ho_n < 0) throw ValidationError("--ho-n must be nonnegative");
    // The tail guard of the sampled eigenfunction only admits low n on typical grids; the
    // closed form is the same Wigner function.
    try {
      w = wigner_of_wavefunction(ho_wavefunction(*ho_n, q_axis(cfg.grid), cfg.oscillator), cfg.grid);
    } catch (const ValidationError&) {
      w = ho_wigner(*ho_n, cfg.grid, cfg.oscillator);
    }
  } else {
    w = wigner_of_wavefunction(read_wavefunction(psi_file, cfg.grid, cfg.oscillator.hbar), cfg.grid);
  }
  write_psfield(out_path, w);
  out << "integral=" << num(integrate(w)) << "\n";
  out << "V=" << num(state_volume(w)) << "\n";
  return kExitOk;
}

int cmd_evolve(const fs::path& config, std::ostream& out) {
  const SimulationConfig cfg = load_simulation_config(config);
  const Source source = build_source(cfg);
  const PhaseField f0 = build_initial(cfg);
  const EvolveSettings settings = build_evolve(cfg);
  const PhaseField energy_obs = build_energy_observable(cfg, source);

  const Generator generator(source, cfg.kernel);
  const Trajectory traj = evolve(f0, generator, settings.options);

  const bool existed = fs::exists(settings.output_dir);
  std::vector<fs::path> written;
  try {
    std::error_code ec;
    fs::create_directories(settings.output_dir, ec);
    if (ec) throw IoError("cannot create '" + settings.output_dir.string() + "': " + ec.message());
    std::ostringstream diag;
    diag << "t,norm,inner_self,energy\n";
    for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
      const Snapshot& snap = traj.snapshots[s];
      const fs::path path = settings.output_dir / snapshot_name(static_cast<int>(s), snap.t);
      written.push_back(path);
      write_psfield(path, snap.f);
      diag << fmt("%.9f", snap.t) << "," << num(integrate(snap.f)) << "," << num(inner_product(snap.f, snap.f)) << ","
           << num(energy_expectation(energy_obs, snap.f)) << "\n";
    }
    written.push_back(settings.output_dir / "diagnostics.csv");
    write_text(written.back(), diag.str());
  } catch (...) {
    std::error_code ec;
    if (existed) {
      for (const auto& p : written) fs::remove(p, ec);
    } else {
      fs::remove_all(settings.output_dir, ec);
    }
    throw;
  }
  out << "snapshots=" << traj.snapshots.size() << "\n";
  out << "dir=" << settings.output_dir.string() << "\n";
  return kExitOk;
}

int cmd_measure(const fs::path& state_path, const fs::path& eig_dir, const std::string& out_path, std::ostream& out) {
  const PhaseField f = read_psfield(state_path);
  const EigenstateSet set = read_eigenstate_dir(eig_dir);
  require_same_grid(f.grid(), set.grid());
  const std::vector<Effect> effects = set.effects();
  std::ostringstream csv;
  csv << "index,energy,volume,probability\n";
  double total = 0.0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double prob = born_probability(effects[i], f);
    total += prob;
    csv << i << "," << num(set[i].energy) << "," << num(set[i].volume) << "," << num(prob) << "\n";
  }
  csv << "TOTAL,,," << num(total) << "\n";
  if (out_path.empty()) {
    out << csv.str();
  } else {
    write_text(out_path, csv.str());
  }
  return kExitOk;
}

int cmd_volume(const fs::path& in_path, std::ostream& out) {
  const PhaseField f = read_psfield(in_path);
  out << "integral=" << num(integrate(f)) << "\n";
  out << "V=" << num(state_volume(f)) << "\n";
  return kExitOk;
}

EigenstateSet eigenstates_from_args(const std::string& eig_dir, const std::string& config, int ho_nmax) {
  if (!eig_dir.empty()) return read_eigenstate_dir(eig_dir);
  if (config.empty() || ho_nmax < 0) throw ValidationError("need --eigenstates DIR or --config CFG with --ho-nmax N");
  const SimulationConfig cfg = load_simulation_config(config);
  return harmonic_oscillator_set(cfg.grid, ho_nmax, cfg.oscillator);
}

int cmd_hamiltonian(const std::string& eig_dir, const std::string& config, int ho_nmax, const fs::path& out_path,
                    const std::string& state_path, std::ostream& out) {
  const EigenstateSet set = eigenstates_from_args(eig_dir, config, ho_nmax);
  const PhaseField H = assemble_hamiltonian(set);
  write_psfield(out_path, H);
  out << "states=" << set.size() << "\n";
  if (!state_path.empty()) {
    const PhaseField f = read_psfield(state_path);
    out << "energy=" << num(energy_expectation(H, f)) << "\n";
  }
  return kExitOk;
}

int cmd_eigenstates(const std::string& config, int ho_nmax, const fs::path& out_dir, std::ostream& out) {
  const EigenstateSet set = eigenstates_from_args("", config, ho_nmax);
  write_eigenstate_dir(out_dir, set);
  out << "states=" << set.size() << "\n";
  return kExitOk;
}

int cmd_mix(const std::vector<std::string>& inputs, const std::vector<double>& weights, const fs::path& out_path,
            std::ostream& out) {
  if (inputs.empty() || inputs.size() != weights.size()) {
    throw ValidationError("mix needs one --weight per --in");
  }
  std::vector<PhaseField> states;
  for (const auto& p : inputs) states.push_back(read_psfield(p));
  const PhaseField m = mixture(states, weights);
  write_psfield(out_path, m);
  out << "integral=" << num(integrate(m)) << "\n";
  out << "V=" << num(state_volume(m)) << "\n";
  return kExitOk;
}

int cmd_check(const fs::path& config, bool cosine_control, std::ostream& out) {
  const SimulationConfig cfg = load_simulation_config(config);
  const CheckTolerances tol = build_check(cfg);
  const Source source = build_source(cfg);
  if (cosine_control && cfg.kernel.is_classical()) {
    throw ValidationError("the cosine control needs a quantum or node kernel");
  }
  const Generator generator(source, cfg.kernel, cosine_control ? BracketKind::Cosine : BracketKind::Sine);
  const LiouvillianOperator L = assemble_liouvillian(generator);
  const JConditionReport j = j_condition_checks(L);
  const double scale = L.matrix.cwiseAbs().maxCoeff();

  std::vector<CheckLine> lines;
  lines.push_back({"antisymmetry", L.antisymmetry_defect(), tol.antisymmetry});
  lines.push_back({"j_skew", j.max_abs_j > 0 ? j.skew / j.max_abs_j : 0.0, tol.antisymmetry});
  lines.push_back({"j_oddness", j.max_abs_j > 0 ? j.oddness / j.max_abs_j : 0.0, std::nullopt});
  lines.push_back({"j_periodicity", j.max_abs_j > 0 ? j.periodicity / j.max_abs_j : 0.0, std::nullopt});
  // d/dt integral f = sum of each column of L.
  const double drift = scale > 0 ? L.matrix.colwise().sum().cwiseAbs().maxCoeff() / scale : 0.0;
  lines.push_back({"norm_conservation", drift, tol.conservation});

  if (const auto* set = std::get_if<EigenstateSet>(&source)) {
    double worst = 0.0;
    for (const auto& e : set->entries()) worst = std::max(worst, stationarity_residual(e.g, generator));
    lines.push_back({"stationarity", worst, tol.stationarity});
  }

  const PhaseGrid& g = cfg.grid;
  const double qc = 0.5 * (g.q_min() + g.q_max());
  const double pc = 0.5 * (g.p_min() + g.p_max());
  const PhaseField f1 = cfg.ini.has_section("initial") ? build_initial(cfg) : coherent_state(g, qc, pc, cfg.oscillator);
  const PhaseField f2 = coherent_state(g, qc + 2.5 * g.dq(), pc - 1.5 * g.dp(), cfg.oscillator);
  std::optional<double> C;
  const double c = g.q_extent() / g.p_extent();
  if (g.nq() == g.np() && std::abs(g.q_min() - c * g.p_min()) <= 1e-12 * std::max(1.0, std::abs(g.q_min()))) C = c;
  const SymmetryReport sym = symmetry_invariance_suite(f1, f2, 3 * g.dq(), -2 * g.dp(), C);
  lines.push_back({"translation", sym.translation, tol.symmetry});
  if (sym.switch_deviation) lines.push_back({"switch", *sym.switch_deviation, tol.symmetry});
  lines.push_back({"reflection", sym.reflection, tol.symmetry});

  bool ok = true;
  out << "kernel=" << cfg.kernel.describe() << "\n";
  out << "bracket=" << (cosine_control ? "cosine" : "sine") << "\n";
  for (const auto& line : lines) {
    out << line.name << "=" << fmt("%.3e", line.value);
    if (line.tolerance) {
      const bool pass = line.value <= *line.tolerance;
      ok = ok && pass;
      out << " tol=" << fmt("%.1e", *line.tolerance) << (pass ? " ok" : " VIOLATED");
    }
    out << "\n";
  }
  out << "result=" << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kExitOk : kExitInvariant;
}

}  // namespace

std::string snapshot_name(int index, double t) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "snap_%06d_t=%.9f.psf", index, t);
  return buf;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phase-space mechanics simulator", "phasesim"};
  app.require_subcommand(1);

  std::string config;
  std::string out_path;
  std::string in_path;
  std::string eig_dir;
  std::string state_path;
  std::string psi_file;
  std::optional<int> ho_n;
  int ho_nmax = -1;
  bool cosine = false;
  std::vector<std::string> inputs;
  std::vector<double> weights;

  auto* transform = app.add_subcommand("transform", "Wigner transform of an oscillator level or a wavefunction file");
  transform->add_option("--config", config, "config providing [grid] and [model]")->required();
  auto* n_opt = transform->add_option("--ho-n", ho_n, "oscillator level");
  transform->add_option("--psi", psi_file, "file of complex amplitudes, one 're,im' per q sample")->excludes(n_opt);
  transform->add_option("--out", out_path, "output PSFIELD file")->required();

  auto* evolve_cmd = app.add_subcommand("evolve", "integrate a configured run into a trajectory directory");
  evolve_cmd->add_option("--config", config)->required();

  auto* measure = app.add_subcommand("measure", "state-dual measurement probabilities");
  measure->add_option("--state", state_path)->required();
  measure->add_option("--eigenstates", eig_dir)->required();
  measure->add_option("--out", out_path, "CSV path (stdout when omitted)");

  auto* volume = app.add_subcommand("volume", "state volume of a field file");
  volume->add_option("--in", in_path)->required();

  auto* hamiltonian = app.add_subcommand("hamiltonian", "assemble H = sum E_i V_i g_i");
  hamiltonian->add_option("--eigenstates", eig_dir);
  hamiltonian->add_option("--config", config);
  hamiltonian->add_option("--ho-nmax", ho_nmax);
  hamiltonian->add_option("--out", out_path)->required();
  hamiltonian->add_option("--state", state_path, "also print the energy expectation of this state");

  auto* eigenstates = app.add_subcommand("eigenstates", "export the oscillator eigenstate set as a directory");
  eigenstates->add_option("--config", config)->required();
  eigenstates->add_option("--ho-nmax", ho_nmax)->required();
  eigenstates->add_option("--out", out_path)->required();

  auto* mix = app.add_subcommand("mix", "convex combination of field files");
  mix->add_option("--in", inputs)->required();
  mix->add_option("--weight", weights)->required();
  mix->add_option("--out", out_path)->required();

  auto* check = app.add_subcommand("check", "structural invariant report");
  check->add_option("--config", config)->required();
  check->add_flag("--cosine-control", cosine, "use the cosine bracket (must fail)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "phasesim: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (transform->parsed()) {
      if (!ho_n && psi_file.empty()) throw ValidationError("transform needs --ho-n or --psi");
      return cmd_transform(config, ho_n, psi_file, out_path, out);
    }
    if (evolve_cmd->parsed()) return cmd_evolve(config, out);
    if (measure->parsed()) return cmd_measure(state_path, eig_dir, out_path, out);
    if (volume->parsed()) return cmd_volume(in_path, out);
    if (hamiltonian->parsed()) return cmd_hamiltonian(eig_dir, config, ho_nmax, out_path, state_path, out);
    if (eigenstates->parsed()) return cmd_eigenstates(config, ho_nmax, out_path, out);
    if (mix->parsed()) return cmd_mix(inputs, weights, out_path, out);
    if (check->parsed()) return cmd_check(config, cosine, out);
  } catch (const ValidationError& e) {
    err << "phasesim: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    err << "phasesim: " << e.what() << "\n";
    return kExitIo;
  } catch (const NumericalInstability& e) {
    err << "phasesim: " << e.what() << "\n";
    return kExitInstability;
  } catch (const fs::filesystem_error& e) {
    err << "phasesim: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitValidation;
}

}  // namespace phasesim
