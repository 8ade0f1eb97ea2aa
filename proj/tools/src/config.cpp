#include "phasesim/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <phasespace/error.hpp>

#include "phasesim/eigen_dir.hpp"
#include "phasesim/psfield.hpp"

namespace phasesim {

using namespace phasespace;

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"grid", {"nq", "np", "q_min", "q_max", "p_min", "p_max"}},
      {"model", {"hbar", "mass", "omega"}},
      {"kernel", {"type", "nodes"}},
      {"hamiltonian", {"type", "lambda", "path", "nmax"}},
      {"initial", {"type", "q0", "p0", "sigma_q", "sigma_p", "n", "E0", "width", "path"}},
      {"evolve", {"t_final", "dt", "integrator", "snapshot_stride"}},
      {"output", {"dir"}},
      {"check", {"antisymmetry", "stationarity", "symmetry", "conservation"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& text, const std::string& where) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v)) {
    throw ValidationError(where + ": expected a number, got '" + text + "'");
  }
  return v;
}

}  // namespace

IniFile IniFile::parse(const std::string& text, const std::string& origin) {
  IniFile ini;
  ini.origin_ = origin;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string where = origin + ":" + std::to_string(lineno);
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ValidationError(where + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!known_keys().count(section)) throw ValidationError(where + ": unknown section [" + section + "]");
      ini.entries_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError(where + ": expected 'key = value'");
    if (section.empty()) throw ValidationError(where + ": entry outside of any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known_keys().at(section).count(key)) {
      throw ValidationError(where + ": unknown key '" + key + "' in [" + section + "]");
    }
    if (ini.entries_[section].count(key)) throw ValidationError(where + ": duplicate key '" + key + "'");
    ini.entries_[section][key] = value;
  }
  return ini;
}

IniFile IniFile::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  IniFile ini = parse(buf.str(), path.string());
  ini.base_dir_ = path.parent_path();
  return ini;
}

bool IniFile::has(const std::string& section, const std::string& key) const {
  const auto s = entries_.find(section);
  return s != entries_.end() && s->second.count(key) > 0;
}

bool IniFile::has_section(const std::string& section) const { return entries_.count(section) > 0; }

std::string IniFile::get(const std::string& section, const std::string& key) const {
  if (!has(section, key)) throw ValidationError(origin_ + ": missing [" + section + "] " + key);
  return entries_.at(section).at(key);
}

double IniFile::get_double(const std::string& section, const std::string& key) const {
  return to_double(get(section, key), origin_ + ": [" + section + "] " + key);
}

double IniFile::get_double(const std::string& section, const std::string& key, double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

int IniFile::get_int(const std::string& section, const std::string& key) const {
  const double v = get_double(section, key);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw ValidationError(origin_ + ": [" + section + "] " + key + " must be an integer");
  }
  return static_cast<int>(v);
}

int IniFile::get_int(const std::string& section, const std::string& key, int fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

std::string IniFile::get_string(const std::string& section, const std::string& key, const std::string& fallback) const {
  return has(section, key) ? get(section, key) : fallback;
}

bool IniFile::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = get(section, key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ValidationError(origin_ + ": [" + section + "] " + key + " must be true or false");
}

std::filesystem::path IniFile::path(const std::string& section, const std::string& key) const {
  std::filesystem::path p = get(section, key);
  if (p.is_relative()) p = base_dir_ / p;
  return p;
}

std::vector<KernelNode> parse_nodes(const std::string& text) {
  std::vector<KernelNode> nodes;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ValidationError("kernel node '" + item + "' is not of the form k:w");
    nodes.push_back({to_double(trim(item.substr(0, colon)), "kernel node k"),
                     to_double(trim(item.substr(colon + 1)), "kernel node weight")});
  }
  return nodes;
}

PhaseField ho_hamiltonian(const PhaseGrid& grid, const Oscillator& osc) {
  return windowed_separable(
      grid, [&](double q) { return 0.5 * osc.mass * osc.omega * osc.omega * q * q; },
      [&](double p) { return p * p / (2.0 * osc.mass); });
}

PhaseField quartic_hamiltonian(const PhaseGrid& grid, double lambda, double mass) {
  return windowed_separable(
      grid, [&](double q) { return lambda * q * q * q * q / 4.0; }, [&](double p) { return p * p / (2.0 * mass); });
}

SimulationConfig load_simulation_config(const std::filesystem::path& path) {
  IniFile ini = IniFile::load(path);
  const PhaseGrid grid = make_grid(ini.get_int("grid", "nq"), ini.get_int("grid", "np"), ini.get_double("grid", "q_min"),
                                   ini.get_double("grid", "q_max"), ini.get_double("grid", "p_min"),
                                   ini.get_double("grid", "p_max"));
  Oscillator osc{ini.get_double("model", "hbar", 1.0), ini.get_double("model", "mass", 1.0),
                 ini.get_double("model", "omega", 1.0)};
  if (!(osc.hbar > 0 && osc.mass > 0 && osc.omega > 0)) {
    throw ValidationError(ini.origin() + ": [model] hbar, mass and omega must be positive");
  }
  const std::string type = ini.get_string("kernel", "type", "quantum");
  std::optional<DynamicsKernel> kernel;
  if (type == "quantum") {
    kernel = DynamicsKernel::quantum(osc.hbar);
  } else if (type == "classical") {
    kernel = DynamicsKernel::classical();
  } else if (type == "nodes") {
    kernel = DynamicsKernel::quadrature(parse_nodes(ini.get("kernel", "nodes")));
  } else {
    throw ValidationError(ini.origin() + ": [kernel] type must be quantum, classical or nodes");
  }
  return SimulationConfig{std::move(ini), grid, osc, *kernel};
}

Source build_source(const SimulationConfig& cfg) {
  const IniFile& ini = cfg.ini;
  const std::string type = ini.get_string("hamiltonian", "type", "ho");
  if (type == "ho") return ho_hamiltonian(cfg.grid, cfg.oscillator);
  if (type == "quartic") return quartic_hamiltonian(cfg.grid, ini.get_double("hamiltonian", "lambda", 1.0), cfg.oscillator.mass);
  if (type == "zero") return PhaseField(cfg.grid, FieldRole::Observable);
  if (type == "file") {
    PhaseField h = read_psfield(ini.path("hamiltonian", "path"));
    require_same_grid(cfg.grid, h.grid());
    return h;
  }
  if (type == "eigenstates") {
    if (ini.has("hamiltonian", "path")) {
      EigenstateSet set = read_eigenstate_dir(ini.path("hamiltonian", "path"));
      require_same_grid(cfg.grid, set.grid());
      return set;
    }
    const int nmax = ini.get_int("hamiltonian", "nmax", 10);
    if (nmax < 0) throw ValidationError(ini.origin() + ": [hamiltonian] nmax must be nonnegative");
    return harmonic_oscillator_set(cfg.grid, nmax, cfg.oscillator);
  }
  throw ValidationError(ini.origin() + ": [hamiltonian] type must be ho, quartic, file, eigenstates or zero");
}

PhaseField build_energy_observable(const SimulationConfig&, const Source& source) { return source_field(source); }

PhaseField build_initial(const SimulationConfig& cfg) {
  const IniFile& ini = cfg.ini;
  const std::string type = ini.get("initial", "type");
  if (type == "gaussian") {
    return gaussian_state(cfg.grid, ini.get_double("initial", "q0"), ini.get_double("initial", "p0"),
                          ini.get_double("initial", "sigma_q"), ini.get_double("initial", "sigma_p"));
  }
  if (type == "coherent") {
    return coherent_state(cfg.grid, ini.get_double("initial", "q0"), ini.get_double("initial", "p0"), cfg.oscillator);
  }
  if (type == "eigenstate") {
    const int n = ini.get_int("initial", "n");
    return ho_wigner(n, cfg.grid, cfg.oscillator);
  }
  if (type == "ring") {
    const Oscillator& o = cfg.oscillator;
    const PhaseField h0 = PhaseField::from_function(cfg.grid, [&](double q, double p) { return o.energy(q, p); });
    return ring_state(cfg.grid, ini.get_double("initial", "E0"), ini.get_double("initial", "width"), h0);
  }
  if (type == "file") {
    PhaseField f = read_psfield(ini.path("initial", "path"));
    require_same_grid(cfg.grid, f.grid());
    return f.with_role(FieldRole::Density);
  }
  throw ValidationError(ini.origin() + ": [initial] type must be gaussian, coherent, eigenstate, ring or file");
}

EvolveSettings build_evolve(const SimulationConfig& cfg) {
  const IniFile& ini = cfg.ini;
  EvolveSettings s;
  s.options.t_final = ini.get_double("evolve", "t_final");
  s.options.dt = ini.get_double("evolve", "dt");
  s.options.snapshot_stride = ini.get_int("evolve", "snapshot_stride", 1);
  const std::string integrator = ini.get_string("evolve", "integrator", "rk4");
  if (integrator == "rk4") {
    s.options.integrator = Integrator::Rk4;
  } else if (integrator == "exact") {
    s.options.integrator = Integrator::Exact;
    if (cfg.grid.size() > s.options.exact_cap) {
      throw ValidationError(ini.origin() + ": exact integrator needs nq*np <= " + std::to_string(s.options.exact_cap));
    }
  } else {
    throw ValidationError(ini.origin() + ": [evolve] integrator must be rk4 or exact");
  }
  if (!(s.options.t_final >= 0)) throw ValidationError(ini.origin() + ": [evolve] t_final must be nonnegative");
  if (!(s.options.dt > 0)) throw ValidationError(ini.origin() + ": [evolve] dt must be positive");
  if (s.options.snapshot_stride < 1) throw ValidationError(ini.origin() + ": [evolve] snapshot_stride must be >= 1");
  s.output_dir = ini.path("output", "dir");
  return s;
}

CheckTolerances build_check(const SimulationConfig& cfg) {
  const IniFile& ini = cfg.ini;
  CheckTolerances t;
  t.antisymmetry = ini.get_double("check", "antisymmetry", t.antisymmetry);
  t.stationarity = ini.get_double("check", "stationarity", t.stationarity);
  t.symmetry = ini.get_double("check", "symmetry", t.symmetry);
  t.conservation = ini.get_double("check", "conservation", t.conservation);
  return t;
}

}  // namespace phasesim
