#include <doctest.h>

#include <phasespace/duality.hpp>
#include <phasespace/error.hpp>
#include <phasespace/states.hpp>

#include "support.hpp"

using namespace phasespace;
using testing::kPi;

namespace {

const PhaseGrid kGrid = make_grid(128, 128, -8, 8, -8, 8);

// W(q,p) = (1/pi) integral psi(q-y) psi(q+y) e^{2ipy} dy for a real psi at hbar = 1,
// trapezoid rule on a fine y mesh.
double wigner_quadrature(double (*psi)(double), double q, double p) {
  const double h = 0.004;
  double acc = 0;
  for (int s = -2500; s <= 2500; ++s) {
    const double y = s * h;
    acc += psi(q - y) * psi(q + y) * std::cos(2 * p * y);
  }
  return acc * h / kPi;
}

double psi1(double x) { return std::sqrt(2.0) * std::pow(kPi, -0.25) * x * std::exp(-x * x / 2); }

}  // namespace

TEST_CASE("oscillator eigenfunctions") {
  const Wavefunction psi = ho_wavefunction(0, q_axis(kGrid));
  double worst = 0;
  for (int i = 0; i < kGrid.nq(); ++i) {
    const double x = kGrid.q(i);
    worst = std::max(worst, std::abs(psi.values[i] - cplx(std::pow(kPi, -0.25) * std::exp(-x * x / 2), 0)));
  }
  CHECK(worst <= 1e-15);
  CHECK(psi.norm_squared() == doctest::Approx(1.0).epsilon(1e-13));
  // The tail guard admits only n <= 1 on this axis (psi_2(8) ~ 2e-12).
  CHECK_NOTHROW(ho_wavefunction(1, q_axis(kGrid)));
  CHECK_THROWS_AS(ho_wavefunction(2, q_axis(kGrid)), ValidationError);
  CHECK_THROWS_AS(ho_wavefunction(60, q_axis(make_grid(256, 4, -12, 12, -1, 1))), ValidationError);
}

TEST_CASE("Wigner transform of oscillator levels") {
  const WignerTransform t0 = wigner_transform(ho_wavefunction(0, q_axis(kGrid)), kGrid);
  const PhaseField closed0 =
      PhaseField::from_function(kGrid, [](double q, double p) { return std::exp(-(q * q + p * p)) / kPi; });
  CHECK(max_abs_difference(t0.field, closed0) <= 1e-8);
  CHECK(t0.max_imaginary <= 1e-10);
  CHECK(std::abs(integrate(t0.field) - 1) <= 1e-8);

  const PhaseField w1 = wigner_of_wavefunction(ho_wavefunction(1, q_axis(kGrid)), kGrid);
  CHECK(std::abs(integrate(w1) - 1) <= 1e-8);
  double worst = 0;
  for (int i = 0; i < kGrid.nq(); i += 5)
    for (int j = 0; j < kGrid.np(); j += 7)
      worst = std::max(worst, std::abs(w1(i, j) - wigner_quadrature(psi1, kGrid.q(i), kGrid.p(j))));
  CHECK(worst <= 1e-7);
  CHECK(max_abs_difference(w1, ho_wigner(1, kGrid)) <= 1e-13);
}

TEST_CASE("oscillator Wigner functions are orthogonal") {
  std::vector<PhaseField> w;
  for (int n = 0; n <= 5; ++n) w.push_back(ho_wigner(n, kGrid));
  for (int m = 0; m <= 5; ++m)
    for (int n = 0; n <= 5; ++n) {
      CHECK(std::abs(2 * kPi * inner_product(w[m], w[n]) - (m == n ? 1.0 : 0.0)) <= 1e-6);
    }
}

TEST_CASE("Weyl position kernel") {
  const PhaseGrid g = make_grid(96, 96, -8, 8, -8, 8);
  const Wavefunction psi = ho_wavefunction(0, q_axis(g));
  const Eigen::MatrixXcd A = weyl_position_kernel(wigner_of_wavefunction(psi, g), 1.0);
  double worst = 0;
  for (int x = 0; x < g.nq(); ++x)
    for (int y = 0; y < g.nq(); ++y) worst = std::max(worst, std::abs(A(x, y) - psi.values[x] * std::conj(psi.values[y])));
  CHECK(worst <= 1e-8);
  CHECK((A - A.adjoint()).cwiseAbs().maxCoeff() <= 1e-14);

  const PhaseField mix = mixture({gaussian_state(g, 0.5, 0.3, 0.8, 0.9), gaussian_state(g, -1.0, -0.5, 0.7, 0.75)}, {0.4, 0.6});
  const WignerTransform back = wigner_of_kernel(weyl_position_kernel(mix, 1.0), g, 1.0);
  CHECK(max_abs_difference(back.field, mix) <= 1e-8);
}

TEST_CASE("Gaussian states") {
  const PhaseField g0 = gaussian_state(kGrid, 0, 0, 1 / std::sqrt(2.0), 1 / std::sqrt(2.0));
  CHECK(max_abs_difference(g0, ho_wigner(0, kGrid)) <= 1e-10);
  const PhaseField g1 = gaussian_state(kGrid, 1.5, -2, 0.6, 0.9);
  CHECK(std::abs(integrate(g1) - 1) <= 1e-10);
  CHECK(std::abs(state_volume(g1) / (4 * kPi * 0.6 * 0.9) - 1) <= 1e-6);
  CHECK(max_abs_difference(coherent_state(kGrid, 2, 0), gaussian_state(kGrid, 2, 0, 1 / std::sqrt(2.0), 1 / std::sqrt(2.0))) <=
        1e-15);
  CHECK_THROWS_AS(gaussian_state(kGrid, 7, 0, 0.5, 0.5), ValidationError);
}

TEST_CASE("ring states") {
  const PhaseField H0 = PhaseField::from_function(kGrid, [](double q, double p) { return (q * q + p * p) / 2; });
  const PhaseGrid fine = make_grid(256, 256, -8, 8, -8, 8);
  const PhaseField H0f = PhaseField::from_function(fine, [](double q, double p) { return (q * q + p * p) / 2; });
  const PhaseField r = ring_state(fine, 2.0, 0.05, H0f);
  CHECK(std::abs(integrate(r) - 1) <= 1e-10);
  // Peak on the q axis at radius 2 (sample q = 2 is index 192).
  int best = 0;
  for (int i = 128; i < 256; ++i)
    if (r(i, 128) > r(best, 128)) best = i;
  CHECK(fine.q(best) == 2.0);
  // Depends on q^2 + p^2 only: quarter-turn and mirror images agree.
  double spread = 0;
  for (int i = 1; i < 256; ++i)
    for (int j = 1; j < 256; ++j) spread = std::max({spread, std::abs(r(i, j) - r(j, i)), std::abs(r(i, j) - r(256 - i, j))});
  CHECK(spread <= 1e-10 * max_abs(r));

  const double v1 = state_volume(ring_state(fine, 2.0, 0.1, H0f));
  const double v2 = state_volume(ring_state(fine, 2.0, 0.05, H0f));
  const double v3 = state_volume(ring_state(fine, 2.0, 0.025, H0f));
  CHECK(v1 > v2);
  CHECK(v2 > v3);
  CHECK_THROWS(ring_state(kGrid, 40.0, 0.5, H0));
}

TEST_CASE("mixtures") {
  const PhaseField a = ho_wigner(0, kGrid);
  const PhaseField b = gaussian_state(kGrid, 1, 1, 0.5, 0.5);
  CHECK(mixture({a}, {1.0}) == a);
  CHECK(std::abs(integrate(mixture({a, b}, {0.3, 0.7})) - 1) <= 1e-10);
  CHECK_THROWS_AS(mixture({a, b}, {0.5, 0.6}), ValidationError);
  CHECK_THROWS_AS(mixture({a, b}, {1.5, -0.5}), ValidationError);
  CHECK_THROWS_AS(mixture({a, gaussian_state(make_grid(64, 64, -8, 8, -8, 8), 0, 0, 1, 1)}, {0.5, 0.5}), GridMismatch);
}
