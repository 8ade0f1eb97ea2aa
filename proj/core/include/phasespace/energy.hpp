#pragma once

#include <vector>

#include "phasespace/eigenstates.hpp"
#include "phasespace/phase_grid.hpp"

namespace phasespace {

/// Member of a continuously labelled family, discretized with volume element dV.
struct FamilyMember {
  PhaseField g;
  double energy;
  double dV;
};

/// Ring states of a classical oscillator on an action mesh I0 = i_lo, i_lo + dI, ..., i_hi.
/// Each member has E = I0 * omega and dV = 2 pi dI. H0 must be the oscillator energy field.
std::vector<FamilyMember> ring_family(const PhaseField& H0, double omega, double i_lo, double i_hi, double dI,
                                      double width);

/// H = sum_i E_i V_i g_i + sum_mu E_mu dV_mu g_mu. At least one term is required.
PhaseField assemble_hamiltonian(const EigenstateSet& set, const std::vector<FamilyMember>& family = {});
PhaseField assemble_hamiltonian(const std::vector<FamilyMember>& family);

/// <E> = integral H f.
double energy_expectation(const PhaseField& H, const PhaseField& f);

/// E_i = eps_i / V_i.
double eigenvalue_from_coefficient(double eps, double volume);

}  // namespace phasespace
