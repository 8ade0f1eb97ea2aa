#pragma once

#include <vector>

#include "phasespace/phase_grid.hpp"

namespace phasespace {

/// Complex samples on a PhaseGrid (output of the star product).
struct ComplexField {
  PhaseGrid grid;
  std::vector<cplx> values;

  cplx operator()(int i, int j) const { return values[grid.index(i, j)]; }
  PhaseField real() const;
  PhaseField imag() const;
};

/// Spectral Poisson bracket {f, g} = df/dq dg/dp - df/dp dg/dq.
///
/// Derivatives are spectral and the products are evaluated on a 2x zero-padded grid, then
/// truncated to the symmetric band (Nyquist excluded). This is the k -> 0 limit of the
/// truncated sine bracket below and inherits its exact skew-symmetry.
PhaseField poisson_bracket(const PhaseField& f, const PhaseField& g);

/// {f, g} for a fixed g; the padded derivatives of g are computed once.
class PoissonOperator {
 public:
  explicit PoissonOperator(const PhaseField& g);

  const PhaseGrid& grid() const { return grid_; }
  /// {f, g}
  PhaseField bracket(const PhaseField& f) const;
  PhaseField bracket_modes(const ModeArray& f_modes) const;

 private:
  PhaseGrid grid_;
  int hq_;
  int hp_;
  int pad_q_;
  int pad_p_;
  std::vector<double> gq_;  // padded samples of dg/dq
  std::vector<double> gp_;
};

/// Which trigonometric kernel multiplies a mode pair. Cosine exists only as a negative control
/// for the structural checks; it breaks skew-symmetry on purpose.
enum class BracketKind { Sine, Cosine };

/// Bidifferential products of a fixed right-hand field g at a fixed action k.
///
/// Semantics are the plane-wave rule: for modes f ~ e^{i(u1 q + v1 p)}, g ~ e^{i(u2 q + v2 p)}
/// with sigma = u1 v2 - v1 u2, the star product contributes e^{-i k sigma / 2} f g and the sine
/// bracket sin(k sigma / 2) f g. Products are Galerkin-truncated: contributions whose summed
/// mode index leaves the symmetric band |m| < n/2 are dropped instead of aliased, and the
/// Nyquist mode is excluded. For fields without content outside half the band this is the
/// exact product; in general it keeps the bracket exactly skew under the flat inner product.
///
/// The evaluation factorizes sigma into a q-mode/p-shift and a p-mode/q-shift: pure-q and pure-p
/// parts of g cost O(N^2 log N), and the mixed part costs O(N^3 log N). Tables depending on g
/// are built once here and reused across apply() calls.
class BracketOperator {
 public:
  BracketOperator(const PhaseField& g, double k);

  const PhaseGrid& grid() const { return grid_; }
  double k() const { return k_; }

  /// Band-truncated mode coefficients of f * g (star product at action k).
  ModeArray star_modes(const ModeArray& f_modes) const;

  std::vector<cplx> star(const PhaseField& f) const;
  /// f sin(k Lambda / 2) g.
  PhaseField sine(const PhaseField& f) const;
  PhaseField apply(const PhaseField& f, BracketKind kind) const;
  /// Same as apply() for precomputed modes of f.
  PhaseField apply_modes(const ModeArray& f_modes, BracketKind kind) const;

 private:
  PhaseGrid grid_;
  double k_;
  int hq_;  // band half-widths
  int hp_;
  int pad_q_;  // padded transform lengths (2*nq, 2*np)
  int pad_p_;

  // Pure-q part of g seen by each f p-mode b1: table_q_[bi * pad_q_ + x].
  std::vector<cplx> table_q_;
  bool has_q_ = false;
  // Pure-p part of g seen by each f q-mode a1: table_p_[ai * pad_p_ + y].
  std::vector<cplx> table_p_;
  bool has_p_ = false;
  // Mixed part: per active a2 row, shifted p-profiles for every a1: [row][ai][y].
  std::vector<int> mixed_rows_;
  std::vector<cplx> table_mixed_;
  // e^{i v(b1) k u(a2) / 2} for active rows: [row][bi].
  std::vector<cplx> mixed_phase_;
};

/// f sin(k Lambda / 2) g. k must be nonnegative.
PhaseField sine_bracket(const PhaseField& f, const PhaseField& g, double k);

/// Moyal product f * g with star = exp(-i k Lambda / 2).
ComplexField star_product(const PhaseField& f, const PhaseField& g, double k);

/// Literal O(N^4) evaluation of the plane-wave rule with naive DFTs; ground truth for the
/// factorized path. Limited to nq*np <= 4096.
PhaseField brute_force_sine_bracket(const PhaseField& f, const PhaseField& g, double k);

}  // namespace phasespace
