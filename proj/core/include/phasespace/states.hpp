#pragma once

#include <Eigen/Dense>

#include <vector>

#include "phasespace/phase_grid.hpp"

namespace phasespace {

/// Uniform periodic axis with the same half-open convention as PhaseGrid.
struct Axis {
  int n;
  double min;
  double max;

  double step() const { return (max - min) / n; }
  double at(int i) const { return min + i * step(); }
  bool operator==(const Axis&) const = default;
};

inline Axis q_axis(const PhaseGrid& grid) { return {grid.nq(), grid.q_min(), grid.q_max()}; }

/// Position-space wavefunction, normalized so that sum |psi|^2 dq = 1.
struct Wavefunction {
  Axis axis;
  std::vector<cplx> values;
  double hbar;

  double norm_squared() const;
};

/// Oscillator parameters; mass and omega default to the unit system used throughout.
struct Oscillator {
  double hbar = 1.0;
  double mass = 1.0;
  double omega = 1.0;

  double energy(double q, double p) const { return p * p / (2.0 * mass) + 0.5 * mass * omega * omega * q * q; }
};

/// n-th oscillator eigenfunction via the normalized Hermite-function recurrence. Throws when
/// |psi| at either end of the axis exceeds 1e-12 (state not contained by the grid).
Wavefunction ho_wavefunction(int n, const Axis& axis, const Oscillator& osc = {});

struct WignerTransform {
  PhaseField field;
  double max_imaginary = 0.0;  // residue of the transform before taking the real part
};

/// Wigner function of a position kernel rho(x, x') sampled on the grid's q axis:
///   W(q,p) = (1/2 pi hbar) * integral dx e^{ipx/hbar} rho(q - x/2, q + x/2),
/// evaluated with on-grid offsets x = 2*s*dq so no interpolation of rho is needed. The
/// p samples are taken directly from the target grid.
WignerTransform wigner_of_kernel(const Eigen::MatrixXcd& rho, const PhaseGrid& grid, double hbar,
                                 FieldRole role = FieldRole::Density);

/// Wigner transform of |psi><psi|. Rejects mismatched axes and non-normalized input.
WignerTransform wigner_transform(const Wavefunction& psi, const PhaseGrid& grid);
PhaseField wigner_of_wavefunction(const Wavefunction& psi, const PhaseGrid& grid);

/// Position kernel A(x, x') = integral f((x+x')/2, p) e^{ip(x-x')/hbar} dp of the Weyl
/// operator of f. Midpoints between samples come from a half-cell spectral shift along q.
Eigen::MatrixXcd weyl_position_kernel(const PhaseField& f, double hbar);

/// Closed-form oscillator Wigner function (-1)^n/(pi hbar) e^{-2H/hbar w} L_n(4H/hbar w).
PhaseField ho_wigner(int n, const PhaseGrid& grid, const Oscillator& osc = {});

/// Normalized Gaussian density centred at (q0, p0). The 3-sigma box must lie inside the grid.
PhaseField gaussian_state(const PhaseGrid& grid, double q0, double p0, double sigma_q, double sigma_p);

/// Displaced oscillator ground state (minimum-uncertainty Gaussian) centred at (q0, p0).
PhaseField coherent_state(const PhaseGrid& grid, double q0, double p0, const Oscillator& osc = {});

/// Energy-regularized orbit state N*exp(-(H0 - E0)^2 / (2 w^2)). Throws when the ring touches
/// the grid boundary.
PhaseField ring_state(const PhaseGrid& grid, double E0, double width, const PhaseField& H0);

/// Convex combination; weights must be nonnegative and sum to 1.
PhaseField mixture(const std::vector<PhaseField>& states, const std::vector<double>& weights);

/// Normalized indicator of the cell-aligned rectangle [q_lo, q_hi) x [p_lo, p_hi).
PhaseField rectangle_state(const PhaseGrid& grid, double q_lo, double q_hi, double p_lo, double p_hi);

}  // namespace phasespace
