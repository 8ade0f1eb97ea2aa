#include "phasespace/duality.hpp"

#include <algorithm>
#include <cmath>

#include "phasespace/error.hpp"
#include "phasespace/exact_sum.hpp"

namespace phasespace {

double inner_product(const PhaseField& f1, const PhaseField& f2) {
  require_same_grid(f1.grid(), f2.grid());
  auto a = f1.values();
  auto b = f2.values();
  ExactAccumulator acc;
  for (std::size_t k = 0; k < a.size(); ++k) acc.add(a[k] * b[k]);
  return acc.value() * f1.grid().cell_area();
}

double state_volume(const PhaseField& f) {
  const double self = inner_product(f, f);
  if (!(self > 0)) throw ValidationError("state volume of a zero field is undefined");
  return 1.0 / self;
}

Effect state_dual_effect(const PhaseField& g) { return Effect{g.with_role(FieldRole::Effect), state_volume(g)}; }

double born_probability(const Effect& e, const PhaseField& f) { return e.c * inner_product(e.g, f); }

CompletenessReport completeness_defect(const std::vector<Effect>& effects, const PhaseField& domain_indicator) {
  const PhaseGrid& grid = domain_indicator.grid();
  CompletenessReport report{PhaseField(grid, FieldRole::Observable)};
  ExactAccumulator csum;
  for (const Effect& e : effects) {
    report.residual.add_scaled(e.g, e.c);
    csum.add(e.c);
  }
  report.coefficient_sum = csum.value();
  report.residual -= domain_indicator;
  report.domain_volume = integrate(domain_indicator);
  report.volume_defect = std::abs(report.coefficient_sum - report.domain_volume);

  constexpr int kMargin = 2;
  const auto inside = [&](int i, int j) { return domain_indicator(i, j) > 0.5; };
  for (int i = 0; i < grid.nq(); ++i) {
    for (int j = 0; j < grid.np(); ++j) {
      if (!inside(i, j)) continue;
      bool interior = true;
      for (int di = -kMargin; di <= kMargin && interior; ++di) {
        for (int dj = -kMargin; dj <= kMargin; ++dj) {
          const int ii = i + di;
          const int jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= grid.nq() || jj >= grid.np() || !inside(ii, jj)) {
            interior = false;
            break;
          }
        }
      }
      if (interior) report.interior_max = std::max(report.interior_max, std::abs(report.residual(i, j)));
    }
  }
  return report;
}

PhaseField disk_indicator(const PhaseGrid& grid, double radius) {
  const double r2 = radius * radius;
  return PhaseField::from_function(grid, [r2](double q, double p) { return q * q + p * p <= r2 ? 1.0 : 0.0; });
}

SymmetryReport symmetry_invariance_suite(const PhaseField& f1, const PhaseField& f2, double a, double b,
                                         std::optional<double> C) {
  const double base = inner_product(f1, f2);
  SymmetryReport report;
  report.translation = std::abs(inner_product(translate(f1, a, b), translate(f2, a, b)) - base);
  if (C) report.switch_deviation = std::abs(inner_product(switch_transform(f1, *C), switch_transform(f2, *C)) - base);
  report.reflection = std::abs(inner_product(p_reflect(f1), p_reflect(f2)) - base);
  return report;
}

}  // namespace phasespace
