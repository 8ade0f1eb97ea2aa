#include "phasespace/eigenstates.hpp"

#include <cmath>
#include <numbers>

#include "phasespace/error.hpp"

namespace phasespace {

void EigenstateSet::add(PhaseField g, double energy, double volume) {
  if (!entries_.empty()) require_same_grid(entries_.front().g.grid(), g.grid());
  if (!std::isfinite(energy)) throw ValidationError("eigenstate energy must be finite");
  if (!(volume > 0)) throw ValidationError("eigenstate volume must be positive");
  const double total = integrate(g);
  if (std::abs(total - 1.0) > 1e-8) {
    throw ValidationError("eigenstate " + std::to_string(entries_.size()) + " is not normalized (integral " +
                          std::to_string(total) + ")");
  }
  const double measured = state_volume(g);
  if (std::abs(volume - measured) / volume > 1e-3) {
    warnings_.push_back("eigenstate " + std::to_string(entries_.size()) + ": declared volume " +
                        std::to_string(volume) + " differs from state volume " + std::to_string(measured));
  }
  entries_.push_back({g.with_role(FieldRole::Density), energy, volume});
}

const PhaseGrid& EigenstateSet::grid() const {
  if (entries_.empty()) throw ValidationError("eigenstate set is empty");
  return entries_.front().g.grid();
}

std::vector<Effect> EigenstateSet::effects() const {
  std::vector<Effect> out;
  out.reserve(entries_.size());
  for (const Eigenstate& e : entries_) out.push_back({e.g.with_role(FieldRole::Effect), e.volume});
  return out;
}

EigenstateSet harmonic_oscillator_set(const PhaseGrid& grid, int nmax, const Oscillator& osc) {
  if (nmax < 0) throw ValidationError("nmax must be nonnegative");
  EigenstateSet set;
  const double h = 2.0 * std::numbers::pi * osc.hbar;
  for (int n = 0; n <= nmax; ++n) set.add(ho_wigner(n, grid, osc), (n + 0.5) * osc.hbar * osc.omega, h);
  return set;
}

}  // namespace phasespace
