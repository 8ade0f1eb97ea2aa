#include <doctest.h>

#include <phasespace/dynamics.hpp>
#include <phasespace/error.hpp>
#include <phasespace/states.hpp>

#include "support.hpp"

using namespace phasespace;
using testing::kPi;

namespace {

PhaseField ho_field(const PhaseGrid& g) {
  return windowed_separable(g, [](double q) { return q * q / 2; }, [](double p) { return p * p / 2; });
}

}  // namespace

TEST_CASE("kernels") {
  const DynamicsKernel q = DynamicsKernel::quantum(0.5);
  REQUIRE(q.nodes().size() == 1);
  CHECK(q.nodes()[0].k == 0.5);
  CHECK(q.nodes()[0].weight == 4.0);
  CHECK(DynamicsKernel::classical().is_classical());
  CHECK_THROWS_AS(DynamicsKernel::quadrature({{1.0, 1.0}, {1.0, 2.0}}), ValidationError);
  CHECK_THROWS_AS(DynamicsKernel::quadrature({{0.0, 1.0}}), ValidationError);
  CHECK_THROWS_AS(DynamicsKernel::quadrature({}), ValidationError);
  CHECK_THROWS_AS(DynamicsKernel::quantum(-1.0), ValidationError);

  // 3-point Gauss-Legendre integrates k^4 exactly: int_{0.5}^2 k^4 dk = (32 - 1/32) / 5.
  const DynamicsKernel gl = DynamicsKernel::gauss_legendre([](double k) { return k * k * k * k; }, 0.5, 2.0, 3);
  double sum = 0;
  for (const auto& n : gl.nodes()) sum += n.weight;
  CHECK(sum == doctest::Approx((32.0 - 1.0 / 32) / 5).epsilon(1e-13));
  CHECK_THROWS_AS(DynamicsKernel::gauss_legendre([](double) { return 1.0; }, 0.0, 2.0, 3), ValidationError);
}

TEST_CASE("generator with a windowed quadratic Hamiltonian") {
  // The sine bracket couples f to H a distance d away through f's spectrum at ~2d/k, so the
  // taper must sit far from f as well as be resolved.
  const PhaseGrid g = make_grid(512, 512, -16, 16, -16, 16);
  const PhaseField H = ho_field(g);
  const PhaseField f = gaussian_state(g, 2, 0, 0.5, 0.5);

  const PhaseField quantum = generator_apply(f, H, DynamicsKernel::quantum(1.0));
  CHECK(interior_max_abs_difference(quantum, poisson_bracket(H, f)) <= 1e-8);
  CHECK(std::abs(integrate(quantum)) <= 1e-10);

  const PhaseField still = generator_apply(ho_wigner(0, g), H, DynamicsKernel::classical());
  CHECK(max_abs(still) <= 1e-10);
}

TEST_CASE("generator on the oscillator") {
  const PhaseGrid g = make_grid(128, 128, -8, 8, -8, 8);

  const EigenstateSet set = harmonic_oscillator_set(g, 10);
  const Generator gen(set, DynamicsKernel::quantum(1.0));
  for (int n = 0; n <= 10; ++n) {
    CAPTURE(n);
    CHECK(stationarity_residual(set[n].g, gen) <= 1e-6);
  }
  CHECK(stationarity_residual(coherent_state(g, 2, 0), gen) >= 1e-2);
  CHECK_THROWS_AS(Generator(EigenstateSet{}, DynamicsKernel::quantum(1.0)), ValidationError);
  CHECK_THROWS_AS(generator_apply(PhaseField(make_grid(64, 64, -8, 8, -8, 8)), set, DynamicsKernel::quantum(1.0)),
                  GridMismatch);
}

TEST_CASE("kernel linearity") {
  std::mt19937_64 rng(31);
  const PhaseGrid g = make_grid(32, 32, -5, 5, -5, 5);
  const PhaseField H = testing::random_band_limited(g, rng);
  const PhaseField f = testing::random_band_limited(g, rng);
  const PhaseField both = generator_apply(f, H, DynamicsKernel::quadrature({{1.0, 1.0}, {0.5, 2.0}}));
  const PhaseField a = generator_apply(f, H, DynamicsKernel::quadrature({{1.0, 1.0}}));
  const PhaseField b = generator_apply(f, H, DynamicsKernel::quadrature({{0.5, 2.0}}));
  CHECK(max_abs_difference(both, a + b) <= 1e-12 * max_abs(both));
}

TEST_CASE("Liouvillian assembly") {
  const PhaseGrid g = make_grid(32, 32, -6, 6, -6, 6);
  const LiouvillianOperator zero = assemble_liouvillian(PhaseField(g), DynamicsKernel::quantum(1.0));
  CHECK(zero.matrix.cwiseAbs().maxCoeff() == 0.0);
  const JConditionReport jz = j_condition_checks(zero);
  CHECK(jz.skew == 0.0);
  CHECK(jz.oddness == 0.0);
  CHECK(jz.periodicity == 0.0);

  const EigenstateSet set = harmonic_oscillator_set(g, 4);
  const LiouvillianOperator L = assemble_liouvillian(set, DynamicsKernel::quantum(1.0));
  CHECK(L.probe_defect <= 1e-10);
  CHECK(L.antisymmetry_defect() <= 1e-10);
  const JConditionReport j = j_condition_checks(L);
  CHECK(j.skew <= 1e-10 * j.max_abs_j);

  const LiouvillianOperator cosine = assemble_liouvillian(Generator(set, DynamicsKernel::quantum(1.0), BracketKind::Cosine));
  const JConditionReport jc = j_condition_checks(cosine);
  CHECK(jc.skew > 0.1 * jc.max_abs_j);

  CHECK_THROWS_AS(assemble_liouvillian(PhaseField(make_grid(72, 64, -6, 6, -6, 6)), DynamicsKernel::quantum(1.0)),
                  ValidationError);
}

TEST_CASE("evolution") {
  const PhaseGrid g = make_grid(32, 32, -6, 6, -6, 6);
  const PhaseField f0 = gaussian_state(g, 1, 0.5, 0.8, 0.8);

  SUBCASE("zero source leaves the state untouched") {
    const Trajectory t = evolve(f0, PhaseField(g), DynamicsKernel::quantum(1.0), {1.0, 0.1, Integrator::Rk4, 3});
    REQUIRE(t.snapshots.size() == 5);  // t = 0, 0.3, 0.6, 0.9, 1.0
    CHECK(t.snapshots[1].t == doctest::Approx(0.3));
    CHECK(t.final().t == 1.0);
    for (const auto& s : t.snapshots) CHECK(s.f == f0.with_role(FieldRole::Density));
  }

  SUBCASE("exact and rk4 agree") {
    const PhaseField H = ho_field(g);
    const DynamicsKernel k = DynamicsKernel::quantum(1.0);
    const Trajectory exact = evolve(f0, H, k, {1.0, 0.25, Integrator::Exact, 4});
    const Trajectory rk4 = evolve(f0, H, k, {1.0, 1e-4, Integrator::Rk4, 10000});
    CHECK(l2_distance(exact.final().f, rk4.final().f) <= 1e-6);
    CHECK(std::abs(integrate(exact.final().f) - 1) <= 1e-6);
  }

  SUBCASE("instability is detected") {
    CHECK_THROWS_AS(evolve(f0, ho_field(g), DynamicsKernel::classical(), {5.0, 2.0, Integrator::Rk4, 1}),
                    NumericalInstability);
  }
}

TEST_CASE("classical transport rotates clockwise") {
  const PhaseGrid g = make_grid(64, 64, -8, 8, -8, 8);
  const PhaseField f0 = gaussian_state(g, 2, 0, 0.5, 0.5);
  const Trajectory t = evolve(f0, ho_field(g), DynamicsKernel::classical(), {kPi / 2, 1e-3, Integrator::Rk4, 100000});
  const auto c = testing::centroid(t.final().f);
  CHECK(std::abs(c.q - 0) <= g.dq());
  CHECK(std::abs(c.p + 2) <= g.dp());
  CHECK(std::abs(integrate(t.final().f) - 1) <= 1e-6);
}
