#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace phasespace {

using cplx = std::complex<double>;

/// Uniform periodic sampling of the (q, p) plane.
///
/// Samples follow the half-open cell convention: q_i = q_min + i*dq for i in [0, nq), so
/// q_max itself is the periodic image of q_min and is never stored. Row-major storage puts
/// q on the outer index and p on the inner one.
class PhaseGrid {
 public:
  PhaseGrid(int nq, int np, double q_min, double q_max, double p_min, double p_max);

  int nq() const { return nq_; }
  int np() const { return np_; }
  double q_min() const { return q_min_; }
  double q_max() const { return q_max_; }
  double p_min() const { return p_min_; }
  double p_max() const { return p_max_; }

  double q_extent() const { return q_max_ - q_min_; }
  double p_extent() const { return p_max_ - p_min_; }
  double dq() const { return q_extent() / nq_; }
  double dp() const { return p_extent() / np_; }
  double cell_area() const { return dq() * dp(); }

  double q(int i) const { return q_min_ + i * dq(); }
  double p(int j) const { return p_min_ + j * dp(); }

  std::size_t size() const { return static_cast<std::size_t>(nq_) * static_cast<std::size_t>(np_); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * np_ + j; }

  /// Signed alias of a mode index: m for m < n/2, m - n otherwise.
  static int signed_mode(int m, int n) { return 2 * m < n ? m : m - n; }
  /// Angular wavevector of q-mode index m (rad per unit of q).
  double u(int m) const;
  /// Angular wavevector of p-mode index m.
  double v(int m) const;

  bool operator==(const PhaseGrid&) const = default;

 private:
  int nq_;
  int np_;
  double q_min_;
  double q_max_;
  double p_min_;
  double p_max_;
};

PhaseGrid make_grid(int nq, int np, double q_min, double q_max, double p_min, double p_max);

/// Square grid centred on the origin: [-half_extent, half_extent) on both axes.
PhaseGrid make_symmetric_grid(int n, double half_extent);

enum class FieldRole { Density, Effect, Observable };

std::string_view to_string(FieldRole role);
FieldRole parse_role(std::string_view text);

/// Real function sampled on a PhaseGrid.
class PhaseField {
 public:
  explicit PhaseField(PhaseGrid grid, FieldRole role = FieldRole::Observable);
  PhaseField(PhaseGrid grid, std::vector<double> values, FieldRole role = FieldRole::Observable);

  static PhaseField from_function(const PhaseGrid& grid, const std::function<double(double, double)>& fn,
                                  FieldRole role = FieldRole::Observable);
  static PhaseField constant(const PhaseGrid& grid, double value, FieldRole role = FieldRole::Observable);

  const PhaseGrid& grid() const { return grid_; }
  FieldRole role() const { return role_; }
  PhaseField with_role(FieldRole role) const;

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double operator()(int i, int j) const { return values_[grid_.index(i, j)]; }
  double& operator()(int i, int j) { return values_[grid_.index(i, j)]; }

  PhaseField& operator+=(const PhaseField& other);
  PhaseField& operator-=(const PhaseField& other);
  PhaseField& operator*=(double scale);
  /// this += scale * other
  PhaseField& add_scaled(const PhaseField& other, double scale);

  bool operator==(const PhaseField&) const = default;

 private:
  PhaseGrid grid_;
  std::vector<double> values_;
  FieldRole role_;
};

PhaseField operator+(PhaseField lhs, const PhaseField& rhs);
PhaseField operator-(PhaseField lhs, const PhaseField& rhs);
PhaseField operator*(PhaseField lhs, double scale);
PhaseField operator*(double scale, PhaseField rhs);
/// Pointwise product.
PhaseField hadamard(const PhaseField& a, const PhaseField& b);

void require_same_grid(const PhaseGrid& a, const PhaseGrid& b);

/// Discrete Fourier coefficients of a field on its own grid.
///
/// f(q_i, p_j) = sum_{a,b} coeff(a,b) * exp(i*(u_a*(q_i - q_min) + v_b*(p_j - p_min))), where
/// (a, b) are stored in FFT order and u_a, v_b use the signed alias of the index.
struct ModeArray {
  PhaseGrid grid;
  std::vector<cplx> coeffs;

  cplx operator()(int a, int b) const { return coeffs[grid.index(a, b)]; }
  cplx& operator()(int a, int b) { return coeffs[grid.index(a, b)]; }
};

/// Riemann sum dq*dp*sum(values); the sum is correctly rounded (see exact_sum.hpp).
double integrate(const PhaseField& f);

ModeArray mode_transform(const PhaseField& f);
/// Real part of the synthesized field; use inverse_mode_transform_complex for complex data.
PhaseField inverse_mode_transform(const ModeArray& modes, FieldRole role = FieldRole::Observable);
std::vector<cplx> inverse_mode_transform_complex(const ModeArray& modes);

/// result(q, p) = f(q + a, p + b) with periodic wrap. Whole-cell shifts are exact index rolls;
/// other shifts multiply the modes by a phase, which is exact for band-limited fields.
PhaseField translate(const PhaseField& f, double a, double b);

/// result(q, p) = f(C*p, q/C) for C > 0. Requires nq == np, q_extent == C*p_extent and q_min == C*p_min,
/// in which case the map is a transpose of the sample array.
PhaseField switch_transform(const PhaseField& f, double C);

/// result(q, p) = f(q, -p).
PhaseField p_reflect(const PhaseField& f);

/// Spectral partial derivatives with the Nyquist mode dropped.
PhaseField derivative_q(const PhaseField& f);
PhaseField derivative_p(const PhaseField& f);

/// sqrt(integrate(f^2)).
double l2_norm(const PhaseField& f);
double l2_distance(const PhaseField& a, const PhaseField& b);
double max_abs(const PhaseField& f);
double max_abs_difference(const PhaseField& a, const PhaseField& b);

/// Taper profile along one axis: 1 on the central 80% of the axis, an erfc-shaped ramp through
/// the outer 10% on each side, 0 at the periodic seam. The ramp steepness adapts to the number
/// of samples in it so that its aliased spectral tail stays near the smallest achievable level.
std::vector<double> axis_taper(int n);

/// fn(q,p) multiplied by the taper on both axes.
PhaseField windowed(const PhaseGrid& grid, const std::function<double(double, double)>& fn,
                    FieldRole role = FieldRole::Observable);

/// fq(q)*taper(q) + fp(p)*taper(p): keeps a separable T(p) + V(q) observable separable.
PhaseField windowed_separable(const PhaseGrid& grid, const std::function<double(double)>& fq,
                              const std::function<double(double)>& fp, FieldRole role = FieldRole::Observable);

/// True when sample (i, j) lies in the central 80% of both axes, where tapers equal 1.
bool in_interior(const PhaseGrid& grid, int i, int j);

/// Max |a - b| over the interior region.
double interior_max_abs_difference(const PhaseField& a, const PhaseField& b);

}  // namespace phasespace
