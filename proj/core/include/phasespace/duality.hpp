#pragma once

#include <optional>
#include <vector>

#include "phasespace/phase_grid.hpp"

namespace phasespace {

/// Measurement effect g with coefficient c: outcome probability c * <g, f>.
struct Effect {
  PhaseField g;
  double c;
};

/// <f1, f2> = integral f1 f2 dq dp (unit multiplier).
double inner_product(const PhaseField& f1, const PhaseField& f2);

/// V_f = 1 / <f, f>.
double state_volume(const PhaseField& f);

/// Effect proportional to the state g, with c fixed by c * <g, g> = 1.
Effect state_dual_effect(const PhaseField& g);

/// P(e | f) = c * <g, f>.
double born_probability(const Effect& e, const PhaseField& f);

struct CompletenessReport {
  PhaseField residual;         // sum_i c_i g_i - 1_D
  double interior_max = 0.0;   // max |residual| over domain points at least 2 cells inside
  double coefficient_sum = 0.0;
  double domain_volume = 0.0;  // integral of 1_D
  double volume_defect = 0.0;  // |sum_i c_i - domain_volume|
};

/// Diagnoses sum_i c_i g_i = 1_D. Incomplete effect sets are reported, never rejected.
CompletenessReport completeness_defect(const std::vector<Effect>& effects, const PhaseField& domain_indicator);

/// Sharp 0/1 indicator of q^2 + p^2 <= radius^2.
PhaseField disk_indicator(const PhaseGrid& grid, double radius);

struct SymmetryReport {
  double translation = 0.0;
  std::optional<double> switch_deviation;  // empty when the switch check is disabled
  double reflection = 0.0;
};

/// |<T f1, T f2> - <f1, f2>| for translation by (a, b), the switch map with constant C, and
/// p-reflection. Pass C = nullopt to skip the switch check on grids that cannot host it.
SymmetryReport symmetry_invariance_suite(const PhaseField& f1, const PhaseField& f2, double a, double b,
                                         std::optional<double> C);

}  // namespace phasespace
