#include "phasespace/energy.hpp"

#include <cmath>
#include <numbers>

#include "phasespace/duality.hpp"
#include "phasespace/error.hpp"
#include "phasespace/states.hpp"

namespace phasespace {

std::vector<FamilyMember> ring_family(const PhaseField& H0, double omega, double i_lo, double i_hi, double dI,
                                      double width) {
  if (!(omega > 0)) throw ValidationError("omega must be positive");
  if (!(dI > 0) || !(i_hi >= i_lo) || !(i_lo > 0)) throw ValidationError("action mesh needs 0 < i_lo <= i_hi and dI > 0");
  std::vector<FamilyMember> family;
  const long long count = std::llround(std::floor((i_hi - i_lo) / dI + 1e-9)) + 1;
  for (long long m = 0; m < count; ++m) {
    const double I0 = i_lo + m * dI;
    family.push_back({ring_state(H0.grid(), I0 * omega, width, H0), I0 * omega, 2.0 * std::numbers::pi * dI});
  }
  return family;
}

PhaseField assemble_hamiltonian(const EigenstateSet& set, const std::vector<FamilyMember>& family) {
  if (set.empty() && family.empty()) throw ValidationError("cannot assemble a Hamiltonian from an empty set");
  PhaseField h(set.empty() ? family.front().g.grid() : set.grid(), FieldRole::Observable);
  for (const Eigenstate& e : set.entries()) h.add_scaled(e.g, e.energy * e.volume);
  for (const FamilyMember& m : family) {
    require_same_grid(h.grid(), m.g.grid());
    h.add_scaled(m.g, m.energy * m.dV);
  }
  return h;
}

PhaseField assemble_hamiltonian(const std::vector<FamilyMember>& family) {
  return assemble_hamiltonian(EigenstateSet{}, family);
}

double energy_expectation(const PhaseField& H, const PhaseField& f) { return inner_product(H, f); }

double eigenvalue_from_coefficient(double eps, double volume) {
  if (!(volume > 0)) throw ValidationError("volume must be positive");
  return eps / volume;
}

}  // namespace phasespace
