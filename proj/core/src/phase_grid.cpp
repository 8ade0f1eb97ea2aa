#include "phasespace/phase_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "phasespace/error.hpp"
#include "phasespace/exact_sum.hpp"
#include "phasespace/fft.hpp"

namespace phasespace {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTaperFraction = 0.1;

// Shift expressed in cells; returns true when it is a whole number of cells.
bool whole_cells(double shift, double cell, long long& cells) {
  const double ratio = shift / cell;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) > 1e-9) return false;
  cells = static_cast<long long>(nearest);
  return true;
}

int wrap_index(long long i, int n) {
  const long long r = i % n;
  return static_cast<int>(r < 0 ? r + n : r);
}

// Ramp 0 -> 1 on s in [0, 1] shaped as erfc(X (1 - 2s)) / 2. The end jumps are erfc(X) / 2 and
// the aliased tail at Nyquist behaves like exp(-(pi W / (4 X))^2) for a ramp of W samples;
// X^2 = pi W / 4 balances the two. Capped where the jump drops below double rounding.
double erf_step(double s, double ramp_samples) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double x = std::min(std::sqrt(std::numbers::pi * ramp_samples / 4.0), 6.0);
  return 0.5 * std::erfc(x * (1.0 - 2.0 * s));
}

}  // namespace

PhaseGrid::PhaseGrid(int nq, int np, double q_min, double q_max, double p_min, double p_max)
    : nq_(nq), np_(np), q_min_(q_min), q_max_(q_max), p_min_(p_min), p_max_(p_max) {
  if (nq < 4 || np < 4) throw ValidationError("grid needs at least 4 samples per axis");
  if (!(std::isfinite(q_min) && std::isfinite(q_max) && std::isfinite(p_min) && std::isfinite(p_max))) {
    throw ValidationError("grid bounds must be finite");
  }
  if (!(q_max > q_min) || !(p_max > p_min)) throw ValidationError("grid extents must be positive");
}

double PhaseGrid::u(int m) const { return kTwoPi * signed_mode(m, nq_) / q_extent(); }
double PhaseGrid::v(int m) const { return kTwoPi * signed_mode(m, np_) / p_extent(); }

PhaseGrid make_grid(int nq, int np, double q_min, double q_max, double p_min, double p_max) {
  return PhaseGrid(nq, np, q_min, q_max, p_min, p_max);
}

PhaseGrid make_symmetric_grid(int n, double half_extent) {
  return PhaseGrid(n, n, -half_extent, half_extent, -half_extent, half_extent);
}

std::string_view to_string(FieldRole role) {
  switch (role) {
    case FieldRole::Density: return "density";
    case FieldRole::Effect: return "effect";
    case FieldRole::Observable: return "observable";
  }
  return "observable";
}

FieldRole parse_role(std::string_view text) {
  if (text == "density") return FieldRole::Density;
  if (text == "effect") return FieldRole::Effect;
  if (text == "observable") return FieldRole::Observable;
  throw ValidationError("unknown field role '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// PhaseField

PhaseField::PhaseField(PhaseGrid grid, FieldRole role)
    : grid_(grid), values_(grid.size(), 0.0), role_(role) {}

PhaseField::PhaseField(PhaseGrid grid, std::vector<double> values, FieldRole role)
    : grid_(grid), values_(std::move(values)), role_(role) {
  if (values_.size() != grid_.size()) throw ValidationError("field size does not match grid");
  if (!std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); })) {
    throw ValidationError("field contains non-finite values");
  }
}

PhaseField PhaseField::from_function(const PhaseGrid& grid, const std::function<double(double, double)>& fn,
                                     FieldRole role) {
  PhaseField out(grid, role);
  for (int i = 0; i < grid.nq(); ++i) {
    const double q = grid.q(i);
    for (int j = 0; j < grid.np(); ++j) out(i, j) = fn(q, grid.p(j));
  }
  return out;
}

PhaseField PhaseField::constant(const PhaseGrid& grid, double value, FieldRole role) {
  return PhaseField(grid, std::vector<double>(grid.size(), value), role);
}

PhaseField PhaseField::with_role(FieldRole role) const {
  PhaseField out = *this;
  out.role_ = role;
  return out;
}

void require_same_grid(const PhaseGrid& a, const PhaseGrid& b) {
  if (!(a == b)) throw GridMismatch();
}

PhaseField& PhaseField::operator+=(const PhaseField& other) { return add_scaled(other, 1.0); }
PhaseField& PhaseField::operator-=(const PhaseField& other) { return add_scaled(other, -1.0); }

PhaseField& PhaseField::operator*=(double scale) {
  for (double& x : values_) x *= scale;
  return *this;
}

PhaseField& PhaseField::add_scaled(const PhaseField& other, double scale) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += scale * other.values_[k];
  return *this;
}

PhaseField operator+(PhaseField lhs, const PhaseField& rhs) { return lhs += rhs; }
PhaseField operator-(PhaseField lhs, const PhaseField& rhs) { return lhs -= rhs; }
PhaseField operator*(PhaseField lhs, double scale) { return lhs *= scale; }
PhaseField operator*(double scale, PhaseField rhs) { return rhs *= scale; }

PhaseField hadamard(const PhaseField& a, const PhaseField& b) {
  require_same_grid(a.grid(), b.grid());
  PhaseField out(a.grid(), a.role());
  auto av = a.values();
  auto bv = b.values();
  auto ov = out.values();
  for (std::size_t k = 0; k < ov.size(); ++k) ov[k] = av[k] * bv[k];
  return out;
}

// ---------------------------------------------------------------------------
// Quadrature and modes

double integrate(const PhaseField& f) { return exact_sum(f.values()) * f.grid().cell_area(); }

ModeArray mode_transform(const PhaseField& f) {
  const PhaseGrid& g = f.grid();
  ModeArray modes{g, std::vector<cplx>(f.values().begin(), f.values().end())};
  fft::two_d(modes.coeffs, g.nq(), g.np(), fft::Direction::Forward);
  const double scale = 1.0 / static_cast<double>(g.size());
  for (cplx& c : modes.coeffs) c *= scale;
  return modes;
}

std::vector<cplx> inverse_mode_transform_complex(const ModeArray& modes) {
  std::vector<cplx> data = modes.coeffs;
  fft::two_d(data, modes.grid.nq(), modes.grid.np(), fft::Direction::Inverse);
  return data;
}

PhaseField inverse_mode_transform(const ModeArray& modes, FieldRole role) {
  const auto data = inverse_mode_transform_complex(modes);
  std::vector<double> values(data.size());
  std::transform(data.begin(), data.end(), values.begin(), [](cplx c) { return c.real(); });
  return PhaseField(modes.grid, std::move(values), role);
}

// ---------------------------------------------------------------------------
// Symmetry transforms

PhaseField translate(const PhaseField& f, double a, double b) {
  const PhaseGrid& g = f.grid();
  long long cq = 0;
  long long cp = 0;
  if (whole_cells(a, g.dq(), cq) && whole_cells(b, g.dp(), cp)) {
    PhaseField out(g, f.role());
    for (int i = 0; i < g.nq(); ++i) {
      const int si = wrap_index(i + cq, g.nq());
      for (int j = 0; j < g.np(); ++j) out(i, j) = f(si, wrap_index(j + cp, g.np()));
    }
    return out;
  }
  ModeArray modes = mode_transform(f);
  const bool q_nyquist = g.nq() % 2 == 0;
  const bool p_nyquist = g.np() % 2 == 0;
  for (int m = 0; m < g.nq(); ++m) {
    // A real field's Nyquist component is a cosine; shifting it scales by cos(u*a).
    const bool nyq_q = q_nyquist && 2 * m == g.nq();
    const cplx phase_q = nyq_q ? cplx(std::cos(g.u(m) * a), 0.0) : std::polar(1.0, g.u(m) * a);
    for (int n = 0; n < g.np(); ++n) {
      const bool nyq_p = p_nyquist && 2 * n == g.np();
      const cplx phase_p = nyq_p ? cplx(std::cos(g.v(n) * b), 0.0) : std::polar(1.0, g.v(n) * b);
      modes(m, n) *= phase_q * phase_p;
    }
  }
  return inverse_mode_transform(modes, f.role());
}

PhaseField switch_transform(const PhaseField& f, double C) {
  const PhaseGrid& g = f.grid();
  if (!(C > 0.0)) throw ValidationError("switch constant must be positive");
  const double tol = 1e-12 * std::max({std::abs(g.q_min()), std::abs(g.q_max()), 1.0});
  if (g.nq() != g.np() || std::abs(g.q_extent() - C * g.p_extent()) > tol ||
      std::abs(g.q_min() - C * g.p_min()) > tol) {
    throw ValidationError("switch transform needs a grid square in the rescaled sense");
  }
  // C*p_j == q_j and q_i/C == p_i, so the map is a transpose.
  PhaseField out(g, f.role());
  const int n = g.nq();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = f(j, i);
  return out;
}

PhaseField p_reflect(const PhaseField& f) {
  const PhaseGrid& g = f.grid();
  // -p_j = p_min + j'*dp  =>  j' = c - j with c = -2*p_min/dp.
  const double c = -2.0 * g.p_min() / g.dp();
  long long offset = 0;
  if (whole_cells(c, 1.0, offset)) {
    PhaseField out(g, f.role());
    for (int i = 0; i < g.nq(); ++i)
      for (int j = 0; j < g.np(); ++j) out(i, j) = f(i, wrap_index(offset - j, g.np()));
    return out;
  }
  // Off-lattice reflection: f(q, -p) = sum c_ab e^{iu(q-q0)} e^{-iv(p-p0)} e^{-2iv p0}.
  const ModeArray modes = mode_transform(f);
  ModeArray out_modes{g, std::vector<cplx>(g.size())};
  for (int a = 0; a < g.nq(); ++a) {
    for (int b = 0; b < g.np(); ++b) {
      const int nb = wrap_index(-b, g.np());
      out_modes(a, nb) += modes(a, b) * std::polar(1.0, -2.0 * g.v(b) * g.p_min());
    }
  }
  return inverse_mode_transform(out_modes, f.role());
}

// ---------------------------------------------------------------------------
// Derivatives and norms

namespace {

PhaseField spectral_derivative(const PhaseField& f, bool along_q) {
  const PhaseGrid& g = f.grid();
  ModeArray modes = mode_transform(f);
  for (int a = 0; a < g.nq(); ++a) {
    for (int b = 0; b < g.np(); ++b) {
      const bool nyquist = along_q ? (g.nq() % 2 == 0 && 2 * a == g.nq()) : (g.np() % 2 == 0 && 2 * b == g.np());
      const double k = along_q ? g.u(a) : g.v(b);
      modes(a, b) = nyquist ? cplx(0.0) : modes(a, b) * cplx(0.0, k);
    }
  }
  return inverse_mode_transform(modes, FieldRole::Observable);
}

}  // namespace

PhaseField derivative_q(const PhaseField& f) { return spectral_derivative(f, true); }
PhaseField derivative_p(const PhaseField& f) { return spectral_derivative(f, false); }

double l2_norm(const PhaseField& f) {
  ExactAccumulator acc;
  for (double x : f.values()) acc.add(x * x);
  return std::sqrt(acc.value() * f.grid().cell_area());
}

double l2_distance(const PhaseField& a, const PhaseField& b) {
  require_same_grid(a.grid(), b.grid());
  double sum = 0.0;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t k = 0; k < av.size(); ++k) {
    const double d = av[k] - bv[k];
    sum += d * d;
  }
  return std::sqrt(sum * a.grid().cell_area());
}

double max_abs(const PhaseField& f) {
  double m = 0.0;
  for (double x : f.values()) m = std::max(m, std::abs(x));
  return m;
}

double max_abs_difference(const PhaseField& a, const PhaseField& b) {
  require_same_grid(a.grid(), b.grid());
  double m = 0.0;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t k = 0; k < av.size(); ++k) m = std::max(m, std::abs(av[k] - bv[k]));
  return m;
}

// ---------------------------------------------------------------------------
// Windowing of non-periodic observables

std::vector<double> axis_taper(int n) {
  std::vector<double> w(static_cast<std::size_t>(n));
  const double ramp = kTaperFraction * n;
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / n;
    if (t < kTaperFraction) {
      w[i] = erf_step(t / kTaperFraction, ramp);
    } else if (t > 1.0 - kTaperFraction) {
      w[i] = erf_step((1.0 - t) / kTaperFraction, ramp);
    } else {
      w[i] = 1.0;
    }
  }
  return w;
}

PhaseField windowed(const PhaseGrid& grid, const std::function<double(double, double)>& fn, FieldRole role) {
  const auto wq = axis_taper(grid.nq());
  const auto wp = axis_taper(grid.np());
  PhaseField out(grid, role);
  for (int i = 0; i < grid.nq(); ++i)
    for (int j = 0; j < grid.np(); ++j) out(i, j) = fn(grid.q(i), grid.p(j)) * wq[i] * wp[j];
  return out;
}

PhaseField windowed_separable(const PhaseGrid& grid, const std::function<double(double)>& fq,
                              const std::function<double(double)>& fp, FieldRole role) {
  const auto wq = axis_taper(grid.nq());
  const auto wp = axis_taper(grid.np());
  std::vector<double> vq(grid.nq());
  std::vector<double> vp(grid.np());
  for (int i = 0; i < grid.nq(); ++i) vq[i] = fq(grid.q(i)) * wq[i];
  for (int j = 0; j < grid.np(); ++j) vp[j] = fp(grid.p(j)) * wp[j];
  PhaseField out(grid, role);
  for (int i = 0; i < grid.nq(); ++i)
    for (int j = 0; j < grid.np(); ++j) out(i, j) = vq[i] + vp[j];
  return out;
}

bool in_interior(const PhaseGrid& grid, int i, int j) {
  const double tq = static_cast<double>(i) / grid.nq();
  const double tp = static_cast<double>(j) / grid.np();
  return tq >= kTaperFraction && tq <= 1.0 - kTaperFraction && tp >= kTaperFraction &&
         tp <= 1.0 - kTaperFraction;
}

double interior_max_abs_difference(const PhaseField& a, const PhaseField& b) {
  require_same_grid(a.grid(), b.grid());
  double m = 0.0;
  for (int i = 0; i < a.grid().nq(); ++i)
    for (int j = 0; j < a.grid().np(); ++j)
      if (in_interior(a.grid(), i, j)) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

}  // namespace phasespace
