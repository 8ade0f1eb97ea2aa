#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <phasespace/dynamics.hpp>
#include <phasespace/states.hpp>

namespace phasesim {

/// INI-style `key = value` entries under `[section]` headers; `#` starts a comment.
class IniFile {
 public:
  static IniFile parse(const std::string& text, const std::string& origin = "<memory>");
  static IniFile load(const std::filesystem::path& path);

  bool has(const std::string& section, const std::string& key) const;
  bool has_section(const std::string& section) const;
  std::string get(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  int get_int(const std::string& section, const std::string& key) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;
  std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;

  /// Relative paths in a config resolve against the config's directory.
  std::filesystem::path path(const std::string& section, const std::string& key) const;

  const std::string& origin() const { return origin_; }

 private:
  std::string origin_;
  std::filesystem::path base_dir_;
  std::map<std::string, std::map<std::string, std::string>> entries_;
};

/// Parses "k:w,k:w,..." kernel node lists.
std::vector<phasespace::KernelNode> parse_nodes(const std::string& text);

struct EvolveSettings {
  phasespace::EvolveOptions options;
  std::filesystem::path output_dir;
};

struct CheckTolerances {
  double antisymmetry = 1e-10;
  double stationarity = 1e-6;
  double symmetry = 1e-10;
  double conservation = 1e-10;
};

/// Fully validated simulation inputs; built before any heavy computation starts.
struct SimulationConfig {
  IniFile ini;
  phasespace::PhaseGrid grid;
  phasespace::Oscillator oscillator;
  phasespace::DynamicsKernel kernel;
};

SimulationConfig load_simulation_config(const std::filesystem::path& path);

/// [hamiltonian] type = ho | quartic | file | eigenstates | zero
phasespace::Source build_source(const SimulationConfig& cfg);
/// Observable whose expectation is reported as energy (the assembled H of the source).
phasespace::PhaseField build_energy_observable(const SimulationConfig& cfg, const phasespace::Source& source);
/// [initial] type = gaussian | coherent | eigenstate | ring | file
phasespace::PhaseField build_initial(const SimulationConfig& cfg);
EvolveSettings build_evolve(const SimulationConfig& cfg);
CheckTolerances build_check(const SimulationConfig& cfg);

/// Windowed p^2/(2m) + m omega^2 q^2 / 2.
phasespace::PhaseField ho_hamiltonian(const phasespace::PhaseGrid& grid, const phasespace::Oscillator& osc);
/// Windowed p^2/(2m) + lambda q^4 / 4.
phasespace::PhaseField quartic_hamiltonian(const phasespace::PhaseGrid& grid, double lambda, double mass = 1.0);

}  // namespace phasesim
