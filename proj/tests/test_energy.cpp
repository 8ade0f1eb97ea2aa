#include <doctest.h>

#include <phasespace/energy.hpp>
#include <phasespace/error.hpp>
#include <phasespace/states.hpp>

#include "support.hpp"

using namespace phasespace;
using testing::kPi;

TEST_CASE("eigenvalue bookkeeping") {
  CHECK(eigenvalue_from_coefficient(kPi, 2 * kPi) == 0.5);
  CHECK(eigenvalue_from_coefficient(0.0, 2 * kPi) == 0.0);
  CHECK_THROWS_AS(eigenvalue_from_coefficient(1.0, 0.0), ValidationError);
  CHECK_THROWS_AS(assemble_hamiltonian(EigenstateSet{}), ValidationError);
}

TEST_CASE("single-entry Hamiltonian") {
  const PhaseGrid g = make_grid(64, 64, -6, 6, -6, 6);
  EigenstateSet set;
  const PhaseField w0 = ho_wigner(0, g);
  set.add(w0, 0.5, 2 * kPi);
  CHECK(max_abs_difference(assemble_hamiltonian(set), (0.5 * (2 * kPi)) * w0) == 0.0);
  CHECK(assemble_hamiltonian(set).role() == FieldRole::Observable);
}

TEST_CASE("energy expectations") {
  const PhaseGrid g = make_grid(128, 128, -8, 8, -8, 8);
  const PhaseField H = PhaseField::from_function(g, [](double q, double p) { return (q * q + p * p) / 2; });
  CHECK(std::abs(energy_expectation(H, ho_wigner(0, g)) - 0.5) <= 1e-8);
  for (int n = 0; n <= 3; ++n) {
    CAPTURE(n);
    CHECK(std::abs(energy_expectation(H, ho_wigner(n, g)) - (n + 0.5)) <= 1e-6);
  }
  CHECK(std::abs(energy_expectation(H, coherent_state(g, 2 * std::sqrt(2.0), 0)) - 4.5) <= 1e-4);
}

TEST_CASE("Hamiltonian from the oscillator levels") {
  const PhaseGrid g = make_grid(192, 192, -12, 12, -12, 12);
  const EigenstateSet set = harmonic_oscillator_set(g, 40);
  const PhaseField H = assemble_hamiltonian(set);
  const PhaseField w0 = ho_wigner(0, g);
  const PhaseField coh = coherent_state(g, 2 * std::sqrt(2.0), 0);
  CHECK(std::abs(energy_expectation(H, w0) - 0.5) <= 1e-4);
  CHECK(std::abs(energy_expectation(H, coh) - 4.5) <= 1e-3);

  // <E> = sum_i E_i P(i | f) by linearity.
  const auto effects = set.effects();
  double weighted = 0;
  for (std::size_t i = 0; i < set.size(); ++i) weighted += set[i].energy * born_probability(effects[i], coh);
  CHECK(std::abs(energy_expectation(H, coh) - weighted) <= 1e-10);

  for (int n : {0, 5, 20}) {
    CAPTURE(n);
    CHECK(std::abs(born_probability(effects[n], set[n].g) - 1) <= 1e-6);
    CHECK(std::abs(energy_expectation(H, set[n].g) - set[n].energy) <= 1e-5);
  }

  // Truncation error on the |alpha|^2 = 1 coherent state shrinks with N.
  const PhaseField c1 = coherent_state(g, std::sqrt(2.0), 0);
  double previous = 1e300;
  for (int nmax : {10, 20, 40}) {
    const double err = std::abs(energy_expectation(assemble_hamiltonian(harmonic_oscillator_set(g, nmax)), c1) - 1.5);
    CAPTURE(nmax);
    CAPTURE(err);
    CHECK((err < previous || err <= 1e-12));  // below 1e-12 both sums are at rounding level
    previous = err;
  }
}
