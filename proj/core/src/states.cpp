#include "phasespace/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "phasespace/error.hpp"

namespace phasespace {

namespace {

constexpr double kPi = std::numbers::pi;

void require_density_normalized(const PhaseField& f, double tol, const char* what) {
  const double total = integrate(f);
  if (std::abs(total - 1.0) > tol) {
    throw ValidationError(std::string(what) + " is not normalized on this grid (integral " +
                          std::to_string(total) + ")");
  }
}

}  // namespace

double Wavefunction::norm_squared() const {
  double sum = 0.0;
  for (const cplx& c : values) sum += std::norm(c);
  return sum * axis.step();
}

Wavefunction ho_wavefunction(int n, const Axis& axis, const Oscillator& osc) {
  if (n < 0) throw ValidationError("oscillator level must be nonnegative");
  if (!(osc.hbar > 0 && osc.mass > 0 && osc.omega > 0)) throw ValidationError("oscillator parameters must be positive");
  const double scale = std::sqrt(osc.mass * osc.omega / osc.hbar);
  const double norm0 = std::pow(osc.mass * osc.omega / (kPi * osc.hbar), 0.25);

  Wavefunction psi{axis, std::vector<cplx>(axis.n), osc.hbar};
  for (int i = 0; i < axis.n; ++i) {
    const double xi = scale * axis.at(i);
    double prev = 0.0;
    double curr = norm0 * std::exp(-0.5 * xi * xi);
    for (int k = 1; k <= n; ++k) {
      const double next = std::sqrt(2.0 / k) * xi * curr - std::sqrt((k - 1.0) / k) * prev;
      prev = curr;
      curr = next;
    }
    psi.values[i] = curr;
  }
  // The sample at max is the periodic image of min, so the last stored sample is the other edge.
  const double tail = std::max(std::abs(psi.values.front()), std::abs(psi.values.back()));
  if (tail >= 1e-12) {
    throw ValidationError("oscillator level " + std::to_string(n) + " is not contained by the q axis");
  }
  return psi;
}

WignerTransform wigner_of_kernel(const Eigen::MatrixXcd& rho, const PhaseGrid& grid, double hbar, FieldRole role) {
  const int nq = grid.nq();
  const int np = grid.np();
  if (rho.rows() != nq || rho.cols() != nq) throw GridMismatch("kernel size does not match the q axis");
  if (!(hbar > 0)) throw ValidationError("hbar must be positive");

  const double dx = 2.0 * grid.dq();
  const double prefactor = dx / (2.0 * kPi * hbar);
  // phase[j][s] = e^{i p_j x_s / hbar} for s in [0, nq).
  std::vector<cplx> phase(static_cast<std::size_t>(np) * nq);
  for (int j = 0; j < np; ++j)
    for (int s = 0; s < nq; ++s) phase[static_cast<std::size_t>(j) * nq + s] = std::polar(1.0, grid.p(j) * s * dx / hbar);

  WignerTransform out{PhaseField(grid, role), 0.0};
  std::vector<cplx> plus(nq);
  std::vector<cplx> minus(nq);
  for (int i = 0; i < nq; ++i) {
    const int smax = std::min(i, nq - 1 - i);
    for (int s = 0; s <= smax; ++s) {
      plus[s] = rho(i - s, i + s);   // x = +s*dx
      minus[s] = rho(i + s, i - s);  // x = -s*dx
    }
    for (int j = 0; j < np; ++j) {
      const cplx* ph = &phase[static_cast<std::size_t>(j) * nq];
      cplx acc = plus[0];
      for (int s = 1; s <= smax; ++s) acc += ph[s] * plus[s] + std::conj(ph[s]) * minus[s];
      acc *= prefactor;
      out.field(i, j) = acc.real();
      out.max_imaginary = std::max(out.max_imaginary, std::abs(acc.imag()));
    }
  }
  return out;
}

WignerTransform wigner_transform(const Wavefunction& psi, const PhaseGrid& grid) {
  if (!(psi.axis == q_axis(grid))) throw GridMismatch("wavefunction axis does not match the grid q axis");
  if (std::abs(psi.norm_squared() - 1.0) > 1e-8) throw ValidationError("wavefunction is not normalized");
  const Eigen::Map<const Eigen::VectorXcd> v(psi.values.data(), static_cast<Eigen::Index>(psi.values.size()));
  const Eigen::MatrixXcd rho = v * v.adjoint();
  WignerTransform w = wigner_of_kernel(rho, grid, psi.hbar, FieldRole::Density);
  return w;
}

PhaseField wigner_of_wavefunction(const Wavefunction& psi, const PhaseGrid& grid) {
  return wigner_transform(psi, grid).field;
}

Eigen::MatrixXcd weyl_position_kernel(const PhaseField& f, double hbar) {
  if (!(hbar > 0)) throw ValidationError("hbar must be positive");
  const PhaseGrid& g = f.grid();
  const int nq = g.nq();
  const int np = g.np();
  // half[r] samples f at q_r + dq/2.
  const PhaseField half = translate(f, 0.5 * g.dq(), 0.0);

  // phase[l][d] = e^{i p_l d dq / hbar} for separations d in (-nq, nq).
  const int nd = 2 * nq - 1;
  std::vector<cplx> phase(static_cast<std::size_t>(np) * nd);
  for (int l = 0; l < np; ++l)
    for (int d = -(nq - 1); d <= nq - 1; ++d)
      phase[static_cast<std::size_t>(l) * nd + (d + nq - 1)] = std::polar(1.0, g.p(l) * d * g.dq() / hbar);

  Eigen::MatrixXcd kernel(nq, nq);
  for (int a = 0; a < nq; ++a) {
    for (int b = 0; b < nq; ++b) {
      const int sum = a + b;
      const PhaseField& src = (sum % 2 == 0) ? f : half;
      const int row = sum / 2;
      const int d = a - b;
      cplx acc = 0.0;
      for (int l = 0; l < np; ++l) acc += src(row, l) * phase[static_cast<std::size_t>(l) * nd + (d + nq - 1)];
      kernel(a, b) = acc * g.dp();
    }
  }
  return kernel;
}

PhaseField ho_wigner(int n, const PhaseGrid& grid, const Oscillator& osc) {
  if (n < 0) throw ValidationError("oscillator level must be nonnegative");
  const double hw = osc.hbar * osc.omega;
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  const double prefactor = sign / (kPi * osc.hbar);
  return PhaseField::from_function(
      grid,
      [&](double q, double p) {
        const double x = 4.0 * osc.energy(q, p) / hw;
        // Recurrence on e^{-x/2} L_k(x), which stays bounded by 1.
        const double damp = std::exp(-0.5 * x);
        double prev = 0.0;
        double curr = damp;
        for (int k = 0; k < n; ++k) {
          const double next = ((2.0 * k + 1.0 - x) * curr - k * prev) / (k + 1.0);
          prev = curr;
          curr = next;
        }
        return prefactor * curr;
      },
      FieldRole::Density);
}

PhaseField gaussian_state(const PhaseGrid& grid, double q0, double p0, double sigma_q, double sigma_p) {
  if (!(sigma_q > 0 && sigma_p > 0)) throw ValidationError("Gaussian widths must be positive");
  if (q0 - 3 * sigma_q < grid.q_min() || q0 + 3 * sigma_q > grid.q_max() || p0 - 3 * sigma_p < grid.p_min() ||
      p0 + 3 * sigma_p > grid.p_max()) {
    throw ValidationError("Gaussian state does not fit inside the grid");
  }
  const double prefactor = 1.0 / (2.0 * kPi * sigma_q * sigma_p);
  return PhaseField::from_function(
      grid,
      [&](double q, double p) {
        const double a = (q - q0) / sigma_q;
        const double b = (p - p0) / sigma_p;
        return prefactor * std::exp(-0.5 * (a * a + b * b));
      },
      FieldRole::Density);
}

PhaseField coherent_state(const PhaseGrid& grid, double q0, double p0, const Oscillator& osc) {
  const double sigma_q = std::sqrt(osc.hbar / (2.0 * osc.mass * osc.omega));
  const double sigma_p = std::sqrt(osc.hbar * osc.mass * osc.omega / 2.0);
  return gaussian_state(grid, q0, p0, sigma_q, sigma_p);
}

PhaseField ring_state(const PhaseGrid& grid, double E0, double width, const PhaseField& H0) {
  require_same_grid(grid, H0.grid());
  if (!(width > 0)) throw ValidationError("ring width must be positive");
  PhaseField ring(grid, FieldRole::Density);
  auto hv = H0.values();
  auto rv = ring.values();
  for (std::size_t k = 0; k < rv.size(); ++k) {
    const double d = (hv[k] - E0) / width;
    rv[k] = std::exp(-0.5 * d * d);
  }
  const double peak = max_abs(ring);
  if (!(peak > 0)) throw ValidationError("energy shell is empty on this grid");
  double edge = 0.0;
  for (int i = 0; i < grid.nq(); ++i) edge = std::max({edge, ring(i, 0), ring(i, grid.np() - 1)});
  for (int j = 0; j < grid.np(); ++j) edge = std::max({edge, ring(0, j), ring(grid.nq() - 1, j)});
  if (edge > 1e-10 * peak) throw ValidationError("ring orbit is clipped by the grid boundary");
  ring *= 1.0 / integrate(ring);
  return ring;
}

PhaseField mixture(const std::vector<PhaseField>& states, const std::vector<double>& weights) {
  if (states.empty() || states.size() != weights.size()) throw ValidationError("mixture needs one weight per state");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0)) throw ValidationError("mixture weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ValidationError("mixture weights must sum to 1");
  PhaseField out(states.front().grid(), FieldRole::Density);
  for (std::size_t k = 0; k < states.size(); ++k) out.add_scaled(states[k], weights[k]);
  return out;
}

PhaseField rectangle_state(const PhaseGrid& grid, double q_lo, double q_hi, double p_lo, double p_hi) {
  PhaseField out(grid, FieldRole::Density);
  int count = 0;
  for (int i = 0; i < grid.nq(); ++i) {
    for (int j = 0; j < grid.np(); ++j) {
      const bool inside = grid.q(i) >= q_lo && grid.q(i) < q_hi && grid.p(j) >= p_lo && grid.p(j) < p_hi;
      if (inside) {
        out(i, j) = 1.0;
        ++count;
      }
    }
  }
  if (count == 0) throw ValidationError("rectangle contains no grid samples");
  out *= 1.0 / (count * grid.cell_area());
  require_density_normalized(out, 1e-12, "rectangle state");
  return out;
}

}  // namespace phasespace
