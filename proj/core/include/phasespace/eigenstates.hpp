#pragma once

#include <string>
#include <vector>

#include "phasespace/duality.hpp"
#include "phasespace/phase_grid.hpp"
#include "phasespace/states.hpp"

namespace phasespace {

/// Generalized energy eigenstate g_i with energy E_i and volume V_i.
struct Eigenstate {
  PhaseField g;
  double energy;
  double volume;

  /// epsilon_i = E_i * V_i, the weight of g_i in the generator.
  double coefficient() const { return energy * volume; }
};

/// Ordered list of eigenstates on a common grid.
class EigenstateSet {
 public:
  /// Rejects states not normalized to 1e-8 or on a different grid. A declared volume that
  /// differs from state_volume(g) by more than 1e-3 relative is accepted but noted in warnings().
  void add(PhaseField g, double energy, double volume);

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const std::vector<Eigenstate>& entries() const { return entries_; }
  const Eigenstate& operator[](std::size_t i) const { return entries_[i]; }
  const PhaseGrid& grid() const;
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// State-dual effects with c_i = V_i.
  std::vector<Effect> effects() const;

 private:
  std::vector<Eigenstate> entries_;
  std::vector<std::string> warnings_;
};

/// Oscillator levels n = 0..nmax as closed-form Wigner functions, E_n = (n + 1/2) hbar omega,
/// V_n = 2 pi hbar.
EigenstateSet harmonic_oscillator_set(const PhaseGrid& grid, int nmax, const Oscillator& osc = {});

}  // namespace phasespace
